"""File formats: the JSON tensor document, trajectory CSV, and 2x2 matrices.

The tensor document is a UTF-8 JSON object

    {"g": {"dim": n, "C": [[[...]]], "names": [...]},
     "h": {"dim": m, "C": [[[...]]], "names": [...]},
     "rho": [[[...]]], "sigma": [[[...]]]}

with every tensor dense and nested exactly [target][first][second].  CSV
rows are printed with 17 significant digits so values round-trip exactly.
"""

from __future__ import annotations

import json
from typing import Iterable

import numpy as np

from .dynamics import TrajectoryRecord
from .errors import InputError
from .lie_core import LieAlgebra
from .matched_pair import MatchedPair


def _require(doc: dict, key: str, kind: type, where: str):
    if key not in doc:
        raise InputError(f"{where} is missing the key {key!r}")
    value = doc[key]
    if not isinstance(value, kind):
        raise InputError(f"{where}[{key!r}] must be {kind.__name__}")
    return value


def algebra_from_dict(doc: dict, where: str = "algebra") -> LieAlgebra:
    if not isinstance(doc, dict):
        raise InputError(f"{where} must be an object")
    dim = _require(doc, "dim", int, where)
    constants = np.asarray(_require(doc, "C", list, where), dtype=float)
    if constants.shape != (dim, dim, dim):
        raise InputError(
            f"{where}: tensor shape {constants.shape} does not match dim {dim}"
        )
    names = doc.get("names")
    return LieAlgebra(constants, names, validate=False)


def algebra_to_dict(alg: LieAlgebra) -> dict:
    doc = {"dim": alg.dim, "C": alg.C.tolist()}
    if alg.names is not None:
        doc["names"] = list(alg.names)
    return doc


def pair_from_dict(doc: dict) -> MatchedPair:
    """Build an (unvalidated) matched pair from a tensor document."""
    if not isinstance(doc, dict):
        raise InputError("tensor document must be a JSON object")
    g = algebra_from_dict(_require(doc, "g", dict, "document"), "g")
    h = algebra_from_dict(_require(doc, "h", dict, "document"), "h")
    rho = np.asarray(_require(doc, "rho", list, "document"), dtype=float)
    sigma = np.asarray(_require(doc, "sigma", list, "document"), dtype=float)
    return MatchedPair(g, h, rho, sigma, validate=False)


def pair_to_dict(mp: MatchedPair) -> dict:
    return {
        "g": algebra_to_dict(mp.g),
        "h": algebra_to_dict(mp.h),
        "rho": mp.rho.tolist(),
        "sigma": mp.sigma.tolist(),
    }


def load_pair_document(path: str) -> MatchedPair:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read tensor document {path}: {exc}") from exc
    return pair_from_dict(doc)


def dump_pair_document(mp: MatchedPair, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(pair_to_dict(mp), fh, indent=2)
        fh.write("\n")


# -- 2x2 complex matrices ------------------------------------------------------

def matrix_from_json(entries) -> np.ndarray:
    """Parse a 2x2 complex matrix; entries are [re, im] pairs or plain reals."""
    arr = np.asarray(entries, dtype=object)
    if arr.shape not in ((2, 2), (2, 2, 2)):
        raise InputError(f"expected a 2x2 matrix, got shape {arr.shape}")
    out = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            cell = entries[i][j]
            if isinstance(cell, (int, float)):
                out[i, j] = float(cell)
            elif isinstance(cell, (list, tuple)) and len(cell) == 2:
                out[i, j] = float(cell[0]) + 1j * float(cell[1])
            else:
                raise InputError(f"matrix entry {cell!r} is not a number or [re, im]")
    return out


def matrix_to_json(M: np.ndarray) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(M[i, j].real), float(M[i, j].imag)] for j in range(2)]
            for i in range(2)]


# -- trajectory CSV -----------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.17g}"


def trajectory_to_csv(record: TrajectoryRecord, path: str) -> None:
    """Columns: t, mu_1..mu_n, nu_1..nu_m, H, then extra invariants."""
    n, m = record.split
    extras = [name for name in record.invariants if name != "H"]
    header = (["t"]
              + [f"mu_{i + 1}" for i in range(n)]
              + [f"nu_{j + 1}" for j in range(m)]
              + ["H"] + extras)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row, t in enumerate(record.times):
            cells = [_fmt(t)]
            cells += [_fmt(v) for v in record.states[row]]
            cells.append(_fmt(record.invariants["H"][row]))
            cells += [_fmt(record.invariants[name][row]) for name in extras]
            fh.write(",".join(cells) + "\n")


def summary_dict(record: TrajectoryRecord, wall_time_s: float, **meta) -> dict:
    out = dict(meta)
    out["steps"] = int(len(record.times) - 1)
    out["drift"] = {name: record.drift[name] for name in record.drift}
    out["wall_time_s"] = wall_time_s
    return out
