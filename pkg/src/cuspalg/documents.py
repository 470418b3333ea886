"""JSON documents for connections and moduli points.

Complex numbers are always ``[re, im]`` pairs.
"""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass

import numpy as np

from .algebra import ModuliPoint
from .functionals import Connection, LocalFunctional
from .jet import factorials


class DocumentError(ValueError):
    pass


def parse_complex(x) -> complex:
    if (not isinstance(x, (list, tuple)) or len(x) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in x)):
        raise DocumentError(f"expected a [re, im] pair, got {x!r}")
    return complex(float(x[0]), float(x[1]))


def pair(z: complex, digits: int | None = None) -> list[float]:
    """``[re, im]``; optionally rounded to ``digits`` significant digits."""
    re, im = float(np.real(z)), float(np.imag(z))
    if digits is not None:
        re, im = float(f"{re:.{digits}g}"), float(f"{im:.{digits}g}")
    return [re + 0.0, im + 0.0]


def parse_vector(v) -> np.ndarray:
    if not isinstance(v, list):
        raise DocumentError(f"expected a list of [re, im] pairs, got {v!r}")
    return np.array([parse_complex(x) for x in v], dtype=complex)


@dataclass(frozen=True, eq=False)
class ConnectionDocument:
    truncation: int
    basis: str
    functionals: tuple[np.ndarray, ...]

    def to_connection(self) -> Connection:
        fs = []
        for v in self.functionals:
            if self.basis == "derivative":
                fs.append(LocalFunctional(v * factorials(self.truncation)))
            else:
                fs.append(LocalFunctional(v))
        return Connection(fs, self.truncation)

    @classmethod
    def from_connection(cls, gamma: Connection, digits: int | None = None) -> ConnectionDocument:
        rows = tuple(np.array([complex(*pair(z, digits)) for z in r]) for r in gamma.echelon)
        return cls(gamma.truncation, "taylor", rows)

    def to_dict(self) -> dict:
        return {
            "truncation": self.truncation,
            "basis": self.basis,
            "functionals": [[pair(z) for z in v] for v in self.functionals],
        }

    @classmethod
    def from_dict(cls, d) -> ConnectionDocument:
        if not isinstance(d, dict):
            raise DocumentError("connection document must be an object")
        try:
            N, basis, fs = d["truncation"], d.get("basis", "taylor"), d["functionals"]
        except KeyError as e:
            raise DocumentError(f"missing key {e}") from None
        if not isinstance(N, int) or isinstance(N, bool) or N < 0:
            raise DocumentError("truncation must be a nonnegative integer")
        if basis not in ("taylor", "derivative"):
            raise DocumentError(f"basis must be 'taylor' or 'derivative', got {basis!r}")
        if not isinstance(fs, list):
            raise DocumentError("functionals must be a list")
        vecs = tuple(parse_vector(v) for v in fs)
        for v in vecs:
            if len(v) != N + 1:
                raise DocumentError(f"functional has {len(v)} entries, expected {N + 1}")
        return cls(N, basis, vecs)


@dataclass(frozen=True, eq=False)
class ModuliDocument:
    n: int
    alphas: np.ndarray

    def to_point(self) -> ModuliPoint:
        return ModuliPoint(self.alphas)

    @classmethod
    def from_point(cls, m: ModuliPoint) -> ModuliDocument:
        return cls(m.n, m.as_array())

    def to_dict(self, digits: int | None = None) -> dict:
        return {"n": self.n, "alphas": [pair(a, digits) for a in self.alphas]}

    @classmethod
    def from_dict(cls, d) -> ModuliDocument:
        if not isinstance(d, dict):
            raise DocumentError("moduli document must be an object")
        try:
            n, alphas = d["n"], d["alphas"]
        except KeyError as e:
            raise DocumentError(f"missing key {e}") from None
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise DocumentError("n must be a nonnegative integer")
        a = parse_vector(alphas)
        if len(a) != n:
            raise DocumentError(f"n = {n} but {len(a)} alphas given")
        return cls(n, a)


def load_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise DocumentError(f"cannot read {path}: {e}") from None


def dumps(d: dict) -> str:
    return json.dumps(d, sort_keys=True)


def load_any(path: str) -> ConnectionDocument | ModuliDocument:
    d = load_json(path)
    if isinstance(d, dict) and "functionals" in d:
        return ConnectionDocument.from_dict(d)
    if isinstance(d, dict) and "alphas" in d:
        return ModuliDocument.from_dict(d)
    raise DocumentError(f"{path} is neither a connection nor a moduli document")
