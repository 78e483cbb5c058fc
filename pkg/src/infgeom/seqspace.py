"""Finitely supported real sequences.

A :class:`FinSeq` is a point of the space of all finite sequences: a dense
prefix of coordinates, with every coordinate past the prefix equal to zero.
The prefix is always stored in canonical form (no trailing zeros), so two
sequences are equal exactly when their stored prefixes are equal.

Basis vectors are numbered from 1, ``e(1)`` being the first coordinate.
"""

from __future__ import annotations

import json
import math
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "FinSeq",
    "e",
    "zeros",
    "add",
    "scale",
    "weak_inner",
    "weak_norm",
    "support",
    "trim",
    "pair",
    "unpair",
    "stack",
]


def _canonical(values: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(values)
    n = int(nz[-1]) + 1 if nz.size else 0
    out = np.array(values[:n], dtype=float)
    out.setflags(write=False)
    return out


class FinSeq:
    """Immutable finitely supported sequence of doubles."""

    __slots__ = ("_v",)
    # numpy scalars on the left defer to our reflected operators instead of
    # treating the sequence as an array
    __array_ufunc__ = None

    def __init__(self, entries: Iterable[float] | np.ndarray = ()):
        arr = np.asarray(entries if not isinstance(entries, FinSeq) else entries._v, dtype=float)
        if arr.ndim != 1:
            arr = arr.reshape(-1)
        self._v = _canonical(arr)

    @classmethod
    def _trusted(cls, canonical: np.ndarray) -> FinSeq:
        obj = cls.__new__(cls)
        obj._v = canonical
        return obj

    # -- container protocol ---------------------------------------------
    @property
    def entries(self) -> np.ndarray:
        """Read-only view of the canonical prefix."""
        return self._v

    @property
    def active_len(self) -> int:
        return self._v.shape[0]

    def __len__(self) -> int:
        return self._v.shape[0]

    def __getitem__(self, i: int) -> float:
        if i < 0:
            raise IndexError("FinSeq indices are non-negative")
        return float(self._v[i]) if i < self._v.shape[0] else 0.0

    def __iter__(self):
        return iter(self._v.tolist())

    def padded(self, n: int) -> np.ndarray:
        """Dense copy of the first ``n`` coordinates; ``n`` may exceed the support."""
        if n < self.active_len:
            raise ValueError(f"cannot pad a sequence of support {self.active_len} to {n}")
        out = np.zeros(n)
        out[: self.active_len] = self._v
        return out

    # -- algebra --------------------------------------------------------
    def __add__(self, other: FinSeq) -> FinSeq:
        if not isinstance(other, FinSeq):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other: FinSeq) -> FinSeq:
        if not isinstance(other, FinSeq):
            return NotImplemented
        return add(self, scale(-1.0, other))

    def __neg__(self) -> FinSeq:
        return scale(-1.0, self)

    def __mul__(self, lam: float) -> FinSeq:
        if isinstance(lam, FinSeq):
            return NotImplemented
        return scale(lam, self)

    __rmul__ = __mul__

    def __truediv__(self, lam: float) -> FinSeq:
        return FinSeq(self._v / lam)

    def dot(self, other: FinSeq) -> float:
        return weak_inner(self, other)

    def norm(self) -> float:
        return weak_norm(self)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self._v))) if self.active_len else 0.0

    # -- comparison / hashing -------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinSeq):
            return NotImplemented
        return np.array_equal(self._v, other._v)

    def __hash__(self) -> int:
        return hash(tuple(self._v.tolist()))

    def isclose(self, other: FinSeq, atol: float) -> bool:
        n = max(self.active_len, other.active_len)
        return bool(np.max(np.abs(self.padded(n) - other.padded(n)), initial=0.0) <= atol)

    def __repr__(self) -> str:
        return f"FinSeq({self._v.tolist()})"

    # -- serialization --------------------------------------------------
    def to_list(self) -> list[float]:
        return self._v.tolist()

    def to_json(self) -> str:
        return json.dumps(self.to_list())

    @classmethod
    def from_json(cls, text: str) -> FinSeq:
        data = json.loads(text)
        if not isinstance(data, list):
            raise ValueError("FinSeq JSON must be an array of numbers")
        return cls(data)


def e(k: int, coef: float = 1.0) -> FinSeq:
    """The ``k``-th standard basis vector (``k >= 1``), optionally scaled."""
    if k < 1:
        raise ValueError("basis vectors are numbered from 1")
    v = np.zeros(k)
    v[k - 1] = coef
    return FinSeq(v)


def zeros() -> FinSeq:
    return FinSeq()


def add(x: FinSeq, y: FinSeq) -> FinSeq:
    n = max(x.active_len, y.active_len)
    out = np.zeros(n)
    out[: x.active_len] += x.entries
    out[: y.active_len] += y.entries
    return FinSeq._trusted(_canonical(out))


def scale(lam: float, x: FinSeq) -> FinSeq:
    if lam == 0.0:
        return FinSeq()
    return FinSeq._trusted(_canonical(lam * x.entries))


def weak_inner(x: FinSeq, y: FinSeq) -> float:
    """Sum of ``x_i * y_i`` over the common support."""
    n = min(x.active_len, y.active_len)
    if n == 0:
        return 0.0
    return float(np.dot(x.entries[:n], y.entries[:n]))


def weak_norm(x: FinSeq) -> float:
    return math.sqrt(weak_inner(x, x))


def support(x: FinSeq) -> int:
    return x.active_len


def trim(x: FinSeq, eps: float) -> FinSeq:
    """Zero every coordinate with ``|x_i| <= eps``, then canonicalize."""
    v = np.where(np.abs(x.entries) <= eps, 0.0, x.entries)
    return FinSeq(v)


def pair(x: FinSeq, y: FinSeq) -> FinSeq:
    """Encode ``(x, y)`` in one sequence: ``x`` on even slots, ``y`` on odd slots."""
    n = max(x.active_len, y.active_len)
    out = np.zeros(2 * n)
    out[0 : 2 * x.active_len : 2] = x.entries
    out[1 : 2 * y.active_len : 2] = y.entries
    return FinSeq(out)


def unpair(z: FinSeq) -> tuple[FinSeq, FinSeq]:
    v = z.entries
    return FinSeq(v[0::2]), FinSeq(v[1::2])


def stack(xs: Sequence[FinSeq], n: int | None = None) -> np.ndarray:
    """Columns ``xs`` as a dense ``n x len(xs)`` matrix (``n`` defaults to the joint support)."""
    m = max((x.active_len for x in xs), default=0)
    n = m if n is None else n
    out = np.zeros((n, len(xs)))
    for j, x in enumerate(xs):
        out[: x.active_len, j] = x.entries
    return out
