"""JSON wire formats and deterministic artifact emission.

All reals are serialized as decimal strings with 17 significant digits, so
identical runs produce identical bytes and round-trips are lossless.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .bubbles import Profile
from .concentration import ConcentrationReport
from .decompose import DecompositionResult, SequenceFamily
from .gridfn import LogGrid, LogRadialFunction


def fmt_float(x: float) -> float:
    # round-trip through the 17-digit decimal the interface mandates
    return float(f"{float(x):.17g}")


def _num_list(a) -> list[float]:
    return [fmt_float(x) for x in np.asarray(a, dtype=float)]


# -- LogRadialFunction: {"meta": {...}, "grid_s": [...], "values": [...]} ----

def logradial_to_dict(f: LogRadialFunction) -> dict:
    return {
        "meta": {"name": f.name, "closed_form": f.closed_form},
        "grid_s": _num_list(f.grid.nodes),
        "values": _num_list(f.values),
    }


def logradial_from_dict(d: dict) -> LogRadialFunction:
    try:
        meta = d.get("meta", {})
        grid = LogGrid(np.asarray(d["grid_s"], dtype=float), policy="graded")
        return LogRadialFunction(grid, np.asarray(d["values"], dtype=float),
                                 name=str(meta.get("name", "")),
                                 closed_form=meta.get("closed_form"))
    except KeyError as exc:
        raise ValueError(f"malformed log-radial JSON: missing {exc}") from exc


# -- Profile: {"s": [...], "psi": [...]} with s >= 0 only --------------------

def profile_to_dict(p: Profile) -> dict:
    return {"s": _num_list(p.s), "psi": _num_list(p.values)}


def profile_from_dict(d: dict) -> Profile:
    try:
        s = np.asarray(d["s"], dtype=float)
        psi = np.asarray(d["psi"], dtype=float)
    except KeyError as exc:
        raise ValueError(f"malformed profile JSON: missing {exc}") from exc
    if s.size and s[0] < 0:
        raise ValueError("profile JSON must carry s >= 0 only")
    return Profile(s, psi, tag="loaded")


# -- SequenceFamily ----------------------------------------------------------

def family_to_dict(fam: SequenceFamily) -> dict:
    return {
        "indices": list(fam.indices),
        "members": [logradial_to_dict(m) for m in fam.members],
        "meta": fam.meta,
    }


def family_from_dict(d: dict) -> SequenceFamily:
    try:
        return SequenceFamily(indices=[int(i) for i in d["indices"]],
                              members=[logradial_from_dict(m) for m in d["members"]],
                              meta=d.get("meta", {}))
    except KeyError as exc:
        raise ValueError(f"malformed family JSON: missing {exc}") from exc


# -- DecompositionResult -----------------------------------------------------

def result_to_dict(res: DecompositionResult) -> dict:
    return {
        "components": [
            {"scales": _num_list(sc.alpha), "profile": profile_to_dict(psi)}
            for sc, psi in res.components
        ],
        "A_history": _num_list(res.A_history),
        "ledger": _num_list(res.ledger),
        "orthogonality_matrix": [_num_list(row) for row in res.orthogonality_matrix],
        "remainder": family_to_dict(res.remainder),
        "diagnostics": _jsonable(res.diagnostics),
    }


def concentration_to_dict(rep: ConcentrationReport) -> dict:
    d = rep.to_dict()
    d["pairing_lap"] = fmt_float(d["pairing_lap"])
    d["pairing_exp"] = fmt_float(d["pairing_exp"])
    d["phi_at_zero"] = fmt_float(d["phi_at_zero"])
    d["split"] = {k: {kk: fmt_float(vv) for kk, vv in v.items()}
                  for k, v in d["split"].items()}
    return d


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _num_list(obj)
    if isinstance(obj, (np.floating, float)):
        return fmt_float(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def dumps(payload: dict) -> str:
    """Deterministic JSON text (stable key order, fixed float formatting)."""
    return json.dumps(_jsonable(payload), indent=2, sort_keys=False) + "\n"


def write_json(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(payload))


def read_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)
