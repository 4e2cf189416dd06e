"""Command-line front end.

Exit status: 0 when a decision was reached (either way), 2 when a procedure
gave up within its limits, 1 on bad input.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import catalog
from .automata import WeightedAutomaton, equivalent, evaluate, is_commutative
from .classes import (
    ClassificationReport,
    format_valuation,
    has_nonneg_maximal_monomials,
    is_integer_valued,
    is_poly_str_nneg,
    is_strongly_natural,
    sampled_nonnegative,
)
from .decomp import (
    CommutativeDecomposition,
    NotCommutative,
    decompose,
    is_npoly,
    is_nsf,
    is_ultimately_polynomial,
    is_zsf,
    synthesize_automaton,
)
from .io import FormatError, RunRecord, load, save, to_dict
from .oracle import brute_equivalent, brute_eval_automaton, commutativity_brute
from .parse import ParseError, parse_polynomial
from .transducer import (
    HTransducer,
    build_residual_transducer,
    find_counter,
    transducer_to_automaton,
    verify_canonical,
)

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2


class InputError(Exception):
    pass


def _out(line: str) -> None:
    print(line)


def _jsonable(x: Any):
    if isinstance(x, ClassificationReport):
        return {"class": x.class_name, "verdict": x.verdict, "certificate": _jsonable(x.certificate)}
    if isinstance(x, dict):
        return {(k if isinstance(k, str) else ",".join(map(str, k)) if isinstance(k, tuple) else str(k)): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (WeightedAutomaton, CommutativeDecomposition, HTransducer)):
        return to_dict(x)
    if x is None or isinstance(x, (str, int, float, bool)):
        return x
    return str(x)


# -- loading helpers ----------------------------------------------------------------


def _load(path: str, *kinds: str):
    try:
        kind, obj = load(path)
    except FileNotFoundError as exc:
        raise InputError(f"{path}: no such file") from exc
    except (FormatError, ParseError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    if kinds and kind not in kinds:
        raise InputError(f"{path}: expected {' or '.join(kinds)}, found {kind}")
    return kind, obj


def _series(path: str) -> WeightedAutomaton:
    """Any file that denotes a series, turned into an automaton."""
    kind, obj = _load(path, "automaton", "decomposition", "transducer")
    if kind == "decomposition":
        return synthesize_automaton(obj)
    if kind == "transducer":
        return transducer_to_automaton(obj)
    return obj


def _polynomial(text: str):
    p = Path(text)
    if p.exists() and p.is_file():
        text = p.read_text().strip()
    try:
        return parse_polynomial(text)
    except ParseError as exc:
        raise InputError(f"parse error: {exc.message} at position {exc.position}") from exc


# -- poly ------------------------------------------------------------------------------


def cmd_poly_classify(args, rec: RunRecord) -> int:
    p = _polynomial(args.expr)
    rec.inputs.append(args.expr)
    _out(f"polynomial {p}")
    alpha = p.denominator_lcm()
    scaled = p * alpha
    suffix = f" scale={alpha}" if alpha != 1 else ""

    nneg_max = has_nonneg_maximal_monomials(scaled)
    bad = [str(m) for m in scaled.maximal_monomials() if m.coefficient < 0]
    line = f"class=PolyNNegMaximal verdict={'yes' if nneg_max else 'no'}"
    if bad:
        line += f" monomial={bad[-1]}"
    _out(line + suffix)
    rec.verdicts["PolyNNegMaximal"] = "yes" if nneg_max else "no"

    sample = sampled_nonnegative(p, args.sample_bound)
    if sample is None:
        _out(f"class=SampledNonNegative verdict=yes bound={args.sample_bound}")
        rec.verdicts["SampledNonNegative"] = "yes"
    else:
        nu, value = sample
        _out(f"class=SampledNonNegative verdict=no witness={format_valuation(nu)} value={value} bound={args.sample_bound}")
        rec.verdicts["SampledNonNegative"] = "no"
        rec.certificates["SampledNonNegative"] = {"witness": nu, "value": str(value)}

    iv = is_integer_valued(p)
    line = iv.record()
    if not iv.yes:
        line += f" offending={iv.certificate['offending']}"
    _out(line)
    rec.verdicts["IntegerValued"] = iv.verdict
    rec.certificates["IntegerValued"] = {
        "variables": iv.certificate["variables"],
        "coefficients": {",".join(map(str, k)): str(v) for k, v in iv.certificate["coefficients"].items()},
    }

    sn = is_poly_str_nneg(scaled)
    _out(sn.record() + suffix)
    for alt in sn.certificate.get("witnesses", []):
        _out(f"  failing witness={format_valuation(alt['valuation'])} monomial={alt['monomial']}")
    rec.verdicts["PolyStrNNeg"] = sn.verdict
    rec.certificates["PolyStrNNeg"] = _jsonable(sn.certificate)

    st = is_strongly_natural(p)
    _out(st.record())
    rec.verdicts["StronglyNatural"] = st.verdict
    rec.certificates["StronglyNatural"] = {
        k: _jsonable(st.certificate.get(k)) for k in ("alpha", "witness", "monomial", "bound", "offending") if k in st.certificate
    }
    return EXIT_OK


# -- series -----------------------------------------------------------------------------


def cmd_series_eval(args, rec: RunRecord) -> int:
    A = _series(args.path)
    rec.inputs.append(args.path)
    for w in args.words:
        word = "" if w in ("-", "ε", "''") else w
        try:
            v = evaluate(A, word)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        _out(f"word={word or 'ε'} value={v}")
        rec.verdicts[word] = str(v)
    return EXIT_OK


def cmd_series_equiv(args, rec: RunRecord) -> int:
    A, B = _series(args.left), _series(args.right)
    rec.inputs += [args.left, args.right]
    if A.alphabet != B.alphabet:
        raise InputError(f"alphabets differ: {A.alphabet} vs {B.alphabet}")
    w = equivalent(A, B)
    if w is None:
        _out("class=Equivalent verdict=yes")
        rec.verdicts["Equivalent"] = "yes"
    else:
        _out(f"class=Equivalent verdict=no witness={w or 'ε'} left={evaluate(A, w)} right={evaluate(B, w)}")
        rec.verdicts["Equivalent"] = "no"
        rec.certificates["Equivalent"] = {"witness": w}
    return EXIT_OK


def _commutative(A: WeightedAutomaton, rec: RunRecord) -> bool:
    pair = is_commutative(A)
    if pair is None:
        _out("class=Commutative verdict=yes")
        rec.verdicts["Commutative"] = "yes"
        return True
    w, s = pair
    _out(f"class=Commutative verdict=no witness={w}/{s} values={evaluate(A, w)}/{evaluate(A, s)}")
    rec.verdicts["Commutative"] = "no"
    rec.certificates["Commutative"] = {"word": w, "permuted": s}
    return False


def cmd_series_commutative(args, rec: RunRecord) -> int:
    A = _series(args.path)
    rec.inputs.append(args.path)
    _commutative(A, rec)
    return EXIT_OK


def _decompose(A: WeightedAutomaton, args, rec: RunRecord):
    try:
        res = decompose(A, max_omega=args.max_omega, max_degree=args.max_degree)
    except NotCommutative as exc:
        w, s = exc.pair
        _out(f"class=Decomposition verdict=inconclusive reason=not-commutative witness={w}/{s}")
        rec.verdicts["Decomposition"] = "not-commutative"
        rec.certificates["Decomposition"] = {"word": w, "permuted": s}
        return None
    if not res.ok:
        _out(f"class=Decomposition verdict=inconclusive candidates={res.candidates_tried} max_omega={args.max_omega}")
        rec.verdicts["Decomposition"] = "inconclusive"
        return None
    D = res.decomposition
    _out(f"class=Decomposition verdict=yes omega={res.omega} degree={res.degree} certificate=equivalent synthesized_dim={res.synthesized_dim}")
    for t in D.types():
        _out(f"  piece {t} poly={D.pieces[t]}")
    rec.verdicts["Decomposition"] = "yes"
    rec.certificates["Decomposition"] = to_dict(D)
    return D


def cmd_series_decompose(args, rec: RunRecord) -> int:
    A = _series(args.path)
    rec.inputs.append(args.path)
    D = _decompose(A, args, rec)
    if D is None:
        return EXIT_INCONCLUSIVE if rec.verdicts.get("Decomposition") == "inconclusive" else EXIT_INPUT
    if args.out:
        save(D, args.out)
        _out(f"wrote {args.out}")
    return EXIT_OK


def _report_line(rep: ClassificationReport, rec: RunRecord) -> None:
    line = f"class={rep.class_name} verdict={rep.verdict}"
    cert = rep.certificate
    if rep.class_name == "NPoly" and not rep.yes:
        line += f" type=({cert.get('type')}) piece={cert.get('piece')}"
        if cert.get("witness") is not None:
            line += f" witness={format_valuation(cert['witness'])} monomial={cert.get('monomial')}"
    if rep.class_name == "UltimatelyPolynomial":
        if rep.yes and cert.get("polynomial"):
            line += f" polynomial={cert['polynomial']}"
        elif not rep.yes:
            line += f" types={cert['types'][0]}|{cert['types'][1]} polynomials={cert['polynomials'][0]}|{cert['polynomials'][1]}"
    _out(line)
    rec.verdicts[rep.class_name] = rep.verdict
    rec.certificates[rep.class_name] = _jsonable({k: v for k, v in cert.items() if not isinstance(v, ClassificationReport)})


def cmd_series_classify(args, rec: RunRecord) -> int:
    A = _series(args.path)
    rec.inputs.append(args.path)
    if not _commutative(A, rec):
        return EXIT_OK
    D = _decompose(A, args, rec)
    if D is None:
        return EXIT_INCONCLUSIVE
    for rep in (is_npoly(D), is_ultimately_polynomial(D), is_nsf(D), is_zsf(D)):
        _report_line(rep, rec)
    return EXIT_OK


# -- transducers ---------------------------------------------------------------------------


def _print_transducer(T: HTransducer) -> None:
    _out(f"states={','.join(q or 'ε' for q in T.states)}")
    for q in T.states:
        for a in T.alphabet:
            lab = T.lam[(q, a)]
            desc = "; ".join(f"{t}:{lab.pieces[t]}" for t in lab.types())
            _out(f"  delta {q or 'ε'} --{a}--> {T.delta[(q, a)] or 'ε'} label[omega={lab.omega}]={desc}")
    for q in T.states:
        _out(f"  final {q or 'ε'} = {T.final[q]}")


def cmd_transducer_build(args, rec: RunRecord) -> int:
    _, f = _load(args.path, "decomposition")
    rec.inputs.append(args.path)
    T = build_residual_transducer(f, args.k, cap=args.cap)
    if T is None:
        _out(f"class=ResidualTransducer verdict=inconclusive cap={args.cap}")
        rec.verdicts["ResidualTransducer"] = "inconclusive"
        return EXIT_INCONCLUSIVE
    _out(f"class=ResidualTransducer verdict=yes k={args.k} states={len(T.states)}")
    _print_transducer(T)
    rec.verdicts["ResidualTransducer"] = "yes"
    rec.certificates["ResidualTransducer"] = to_dict(T)
    chk = verify_canonical(T, f, args.k, length=args.oracle_length)
    _out(f"class=Canonical verdict={'yes' if chk.ok else 'no'}")
    rec.verdicts["Canonical"] = "yes" if chk.ok else "no"
    counter = find_counter(T)
    _counter_line(counter, rec)
    nsf = is_nsf(f)
    _out(f"class=NSF verdict={nsf.verdict}")
    rec.verdicts["NSF"] = nsf.verdict
    if args.out:
        save(T, args.out)
        _out(f"wrote {args.out}")
    return EXIT_OK


def _counter_line(counter, rec: RunRecord) -> None:
    if counter is None:
        _out("class=CounterFree verdict=yes")
        rec.verdicts["CounterFree"] = "yes"
    else:
        q, u = counter
        _out(f"class=CounterFree verdict=no counter=({q or 'ε'},{u})")
        rec.verdicts["CounterFree"] = "no"
        rec.certificates["CounterFree"] = {"state": q, "word": u}


def cmd_transducer_verify(args, rec: RunRecord) -> int:
    _, T = _load(args.transducer, "transducer")
    _, f = _load(args.function, "decomposition")
    rec.inputs += [args.transducer, args.function]
    chk = verify_canonical(T, f, args.k, length=args.oracle_length)
    _out(f"class=Canonical verdict={'yes' if chk.ok else 'no'}")
    for msg in chk.failures:
        _out(f"  failure {msg}")
    rec.verdicts["Canonical"] = "yes" if chk.ok else "no"
    rec.certificates["Canonical"] = {"failures": chk.failures}
    return EXIT_OK


def cmd_transducer_counters(args, rec: RunRecord) -> int:
    _, T = _load(args.path, "transducer")
    rec.inputs.append(args.path)
    _counter_line(find_counter(T), rec)
    return EXIT_OK


# -- verify ---------------------------------------------------------------------------------


def cmd_verify(args, rec: RunRecord) -> int:
    kind, obj = _load(args.path)
    rec.inputs.append(args.path)
    if kind == "record":
        return _replay(obj, rec)
    if kind in ("automaton", "decomposition", "transducer"):
        A = _series(args.path)
        L = args.oracle_length
        mismatch = None
        from .oracle import WordEnumerator

        for w in WordEnumerator(A.alphabet, L):
            if brute_eval_automaton(A, w) != evaluate(A, w):
                mismatch = w
                break
        _out(f"oracle=run-enumeration verdict={'agree' if mismatch is None else 'disagree'} length={L}")
        rec.verdicts["RunEnumeration"] = "agree" if mismatch is None else "disagree"
        fast = is_commutative(A) is None
        slow = commutativity_brute(A, L) is None
        agree = (fast == slow) or (fast is False and slow is True)
        _out(f"oracle=permutations fast={'yes' if fast else 'no'} brute={'yes' if slow else 'no'} length={L} verdict={'agree' if agree else 'disagree'}")
        rec.verdicts["Permutations"] = "agree" if agree else "disagree"
        if args.other:
            B = _series(args.other)
            rec.inputs.append(args.other)
            if A.alphabet != B.alphabet:
                raise InputError(f"alphabets differ: {A.alphabet} vs {B.alphabet}")
            fast_eq = equivalent(A, B) is None
            slow_eq = brute_equivalent(A, B, A.dim + B.dim) is None
            _out(f"oracle=bounded-equivalence fast={'yes' if fast_eq else 'no'} brute={'yes' if slow_eq else 'no'} length={A.dim + B.dim}")
            rec.verdicts["BoundedEquivalence"] = "agree" if fast_eq == slow_eq else "disagree"
        bad = any(v == "disagree" for v in rec.verdicts.values())
        return EXIT_INPUT if bad else EXIT_OK
    raise InputError(f"{args.path}: cannot verify a {kind}")


def _replay(old: RunRecord, rec: RunRecord) -> int:
    argv = list(old.command)
    if "--record" in argv:
        i = argv.index("--record")
        del argv[i : i + 2]
    fresh = RunRecord(argv, [])
    import contextlib
    import io as _io

    buf = _io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = run(argv, fresh)
    same_v = fresh.verdicts == old.verdicts
    same_c = _jsonable(fresh.certificates) == old.certificates
    _out(f"replay command={' '.join(argv)} exit={code}")
    _out(f"replay verdicts={'match' if same_v else 'differ'} certificates={'match' if same_c else 'differ'}")
    rec.verdicts["Replay"] = "match" if same_v and same_c else "differ"
    return EXIT_OK if same_v and same_c else EXIT_INPUT


# -- examples ---------------------------------------------------------------------------------

EXAMPLES = {
    "alternating-length": catalog.alternating_length_automaton,
    "letter-product": catalog.letter_product_automaton,
    "constant-five": catalog.constant_series_automaton,
    "even-length": catalog.even_length_automaton,
    "first-letter": catalog.first_letter_automaton,
    "even-length-decomposition": catalog.even_length_decomposition,
    "letter-product-decomposition": catalog.letter_product_decomposition,
    "length-minus-one": catalog.length_minus_one_decomposition,
    "late-linear": catalog.late_linear_decomposition,
    "square-difference": catalog.square_difference_decomposition,
    "length-minus-one-transducer": catalog.length_minus_one_transducer,
    "length-minus-one-transducer-alt": catalog.length_minus_one_transducer_alt,
    "pairs-presentation": catalog.pairs_presentation,
}


def cmd_example(args, rec: RunRecord) -> int:
    if args.name not in EXAMPLES:
        raise InputError(f"unknown example {args.name!r}; choose from {', '.join(sorted(EXAMPLES))}")
    obj = EXAMPLES[args.name]()
    if args.out:
        save(obj, args.out)
        _out(f"wrote {args.out}")
    else:
        from .io import dumps

        sys.stdout.write(dumps(to_dict(obj)))
    return EXIT_OK


# -- parser -------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polyreg", description="Decision procedures with certificates for polynomials, weighted automata and residual transducers.")
    ap.add_argument("--record", help="write a JSON run record to this path")
    sub = ap.add_subparsers(dest="group", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--record", default=argparse.SUPPRESS, help="write a JSON run record to this path")
    limits = argparse.ArgumentParser(add_help=False, parents=[common])
    limits.add_argument("--max-omega", type=int, default=24)
    limits.add_argument("--max-degree", type=int, default=None, help="default: automaton dimension minus one")
    limits.add_argument("--cap", type=int, default=10_000)
    limits.add_argument("--oracle-length", type=int, default=6)

    poly = sub.add_parser("poly").add_subparsers(dest="cmd", required=True)
    pc = poly.add_parser("classify", parents=[common], help="classify a polynomial (expression or file)")
    pc.add_argument("expr")
    pc.add_argument("--sample-bound", type=int, default=10)
    pc.set_defaults(func=cmd_poly_classify)

    series = sub.add_parser("series").add_subparsers(dest="cmd", required=True)
    se = series.add_parser("eval", parents=[limits])
    se.add_argument("path")
    se.add_argument("words", nargs="+", help="words to evaluate; '-' is the empty word")
    se.set_defaults(func=cmd_series_eval)
    sq = series.add_parser("equiv", parents=[limits])
    sq.add_argument("left")
    sq.add_argument("right")
    sq.set_defaults(func=cmd_series_equiv)
    sc = series.add_parser("commutative", parents=[limits])
    sc.add_argument("path")
    sc.set_defaults(func=cmd_series_commutative)
    sd = series.add_parser("decompose", parents=[limits])
    sd.add_argument("path")
    sd.add_argument("--out")
    sd.set_defaults(func=cmd_series_decompose)
    sk = series.add_parser("classify", parents=[limits])
    sk.add_argument("path")
    sk.set_defaults(func=cmd_series_classify)

    tr = sub.add_parser("transducer").add_subparsers(dest="cmd", required=True)
    tb = tr.add_parser("build", parents=[limits])
    tb.add_argument("path", help="decomposition file")
    tb.add_argument("--k", type=int, default=1)
    tb.add_argument("--out")
    tb.set_defaults(func=cmd_transducer_build)
    tv = tr.add_parser("verify", parents=[limits])
    tv.add_argument("transducer")
    tv.add_argument("function", help="decomposition file")
    tv.add_argument("--k", type=int, default=1)
    tv.set_defaults(func=cmd_transducer_verify)
    tcn = tr.add_parser("counters", parents=[common])
    tcn.add_argument("path")
    tcn.set_defaults(func=cmd_transducer_counters)

    ver = sub.add_parser("verify", parents=[limits], help="replay a run record, or cross-check a series against the oracles")
    ver.add_argument("path")
    ver.add_argument("other", nargs="?")
    ver.set_defaults(func=cmd_verify, cmd="verify")

    ex = sub.add_parser("example", parents=[common], help="write a named example object as JSON")
    ex.add_argument("name")
    ex.add_argument("--out")
    ex.set_defaults(func=cmd_example, cmd="example")
    return ap


def run(argv: list[str], rec: RunRecord | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    rec = rec if rec is not None else RunRecord(list(argv), [])
    start = time.perf_counter()
    try:
        code = args.func(args, rec)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    rec.timing = time.perf_counter() - start
    rec.certificates = _jsonable(rec.certificates)
    if args.record:
        Path(args.record).write_text(rec.dumps())
    return code


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        return run(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
