"""JSON file formats for automata, presentations, decompositions, transducers and run records."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .automata import MonoidPresentation, WeightedAutomaton
from .decomp import CommutativeDecomposition, ModuloType
from .parse import parse_polynomial
from .transducer import HTransducer


class FormatError(ValueError):
    pass


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _need(data: dict, *keys: str) -> None:
    missing = [k for k in keys if k not in data]
    if missing:
        raise FormatError(f"missing field(s): {', '.join(missing)}")


# -- automata -----------------------------------------------------------------------


def automaton_to_dict(A: WeightedAutomaton) -> dict:
    return {
        "alphabet": list(A.alphabet),
        "dim": A.dim,
        "initial": list(A.initial),
        "final": list(A.final),
        "matrices": {a: [list(r) for r in A.matrices[a]] for a in A.alphabet},
    }


def automaton_from_dict(data: dict) -> WeightedAutomaton:
    _need(data, "alphabet", "dim", "initial", "final", "matrices")
    for a in data["alphabet"]:
        if not isinstance(a, str) or len(a) != 1:
            raise FormatError(f"letters must be single characters, got {a!r}")
    try:
        A = WeightedAutomaton(tuple(data["alphabet"]), data["initial"], data["matrices"], data["final"])
    except (ValueError, TypeError) as exc:
        raise FormatError(str(exc)) from exc
    if A.dim != data["dim"]:
        raise FormatError(f"dim is {data['dim']} but vectors have length {A.dim}")
    return A


# -- presentations ------------------------------------------------------------------


def presentation_to_dict(P: MonoidPresentation) -> dict:
    return {
        "elements": list(P.elements),
        "identity": P.identity,
        "table": [list(r) for r in P.table],
        "morphism": dict(sorted(P.morphism.items())),
        "degree": P.degree,
        "production": [{"tuple": list(k), "value": v} for k, v in sorted(P.production.items(), key=lambda kv: str(kv[0]))],
    }


def presentation_from_dict(data: dict) -> MonoidPresentation:
    _need(data, "elements", "identity", "table", "morphism", "degree", "production")
    try:
        return MonoidPresentation(
            tuple(data["elements"]),
            data["identity"],
            data["table"],
            data["morphism"],
            int(data["degree"]),
            {tuple(e["tuple"]): int(e["value"]) for e in data["production"]},
        )
    except (ValueError, TypeError, KeyError) as exc:
        raise FormatError(str(exc)) from exc


# -- decompositions -----------------------------------------------------------------


def decomposition_to_dict(D: CommutativeDecomposition) -> dict:
    return {
        "alphabet": list(D.alphabet),
        "omega": D.omega,
        "pieces": [
            {"S": sorted(t.S), "r": list(t.r), "poly": str(D.pieces[t])}
            for t in D.types()
        ],
    }


def decomposition_from_dict(data: dict) -> CommutativeDecomposition:
    _need(data, "alphabet", "omega", "pieces")
    pieces = {}
    for entry in data["pieces"]:
        _need(entry, "S", "r", "poly")
        t = ModuloType(frozenset(entry["S"]), tuple(entry["r"]))
        if t in pieces:
            raise FormatError(f"duplicate piece for type {t}")
        pieces[t] = parse_polynomial(entry["poly"])
    try:
        return CommutativeDecomposition(tuple(data["alphabet"]), int(data["omega"]), pieces)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


# -- transducers --------------------------------------------------------------------


def transducer_to_dict(T: HTransducer) -> dict:
    keys = sorted(T.delta, key=lambda k: (len(k[0]), k[0], k[1]))
    return {
        "alphabet": list(T.alphabet),
        "states": list(T.states),
        "delta": [{"state": q, "letter": a, "target": T.delta[(q, a)]} for q, a in keys],
        "lambda": [{"state": q, "letter": a, "decomposition": decomposition_to_dict(T.lam[(q, a)])} for q, a in keys],
        "final": {q: T.final[q] for q in T.states},
    }


def transducer_from_dict(data: dict) -> HTransducer:
    _need(data, "alphabet", "states", "delta", "lambda", "final")
    delta = {(e["state"], e["letter"]): e["target"] for e in data["delta"]}
    lam = {(e["state"], e["letter"]): decomposition_from_dict(e["decomposition"]) for e in data["lambda"]}
    try:
        return HTransducer(tuple(data["alphabet"]), tuple(data["states"]), delta, lam, data["final"])
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


# -- generic loading ------------------------------------------------------------------


def kind_of(data: dict) -> str:
    if not isinstance(data, dict):
        raise FormatError("top-level JSON value must be an object")
    if "command" in data and "verdicts" in data:
        return "record"
    if "matrices" in data:
        return "automaton"
    if "omega" in data:
        return "decomposition"
    if "delta" in data:
        return "transducer"
    if "table" in data:
        return "presentation"
    raise FormatError("unrecognised file contents")


_LOADERS = {
    "automaton": automaton_from_dict,
    "decomposition": decomposition_from_dict,
    "transducer": transducer_from_dict,
    "presentation": presentation_from_dict,
}


def load(path: str | Path):
    """Load any supported file; returns ``(kind, object)``."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    kind = kind_of(data)
    if kind == "record":
        return kind, RunRecord.from_dict(data)
    return kind, _LOADERS[kind](data)


def to_dict(obj) -> dict:
    if isinstance(obj, WeightedAutomaton):
        return automaton_to_dict(obj)
    if isinstance(obj, CommutativeDecomposition):
        return decomposition_to_dict(obj)
    if isinstance(obj, HTransducer):
        return transducer_to_dict(obj)
    if isinstance(obj, MonoidPresentation):
        return presentation_to_dict(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def save(obj, path: str | Path) -> None:
    Path(path).write_text(dumps(to_dict(obj)))


# -- run records ----------------------------------------------------------------------


@dataclass
class RunRecord:
    command: list[str]
    inputs: list[str]
    verdicts: dict[str, str] = field(default_factory=dict)
    certificates: dict[str, Any] = field(default_factory=dict)
    timing: float = 0.0

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "verdicts": self.verdicts,
            "certificates": self.certificates,
            "timing": round(self.timing, 6),
        }

    def dumps(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "RunRecord":
        _need(data, "command", "inputs", "verdicts", "certificates")
        return cls(list(data["command"]), list(data["inputs"]), dict(data["verdicts"]), dict(data["certificates"]), float(data.get("timing", 0.0)))
