"""The inductive-limit group GL(inf) and its Lie algebra gl(inf).

A group element is the identity outside a finite leading block; an algebra
element is zero outside one. Both are kept on their minimal block, so an
element and its padding to any larger block are the same object, and every
operation (exp included) commutes with the inclusions GL(n) -> GL(n+1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OutsideChart, Singular, UnsupportedOrder
from .seqspace import FinSeq

__all__ = [
    "GLInfElement",
    "GLInfAlgebra",
    "identity",
    "unit_matrix",
    "compose",
    "invert",
    "bracket",
    "exp",
    "log_near_id",
    "bch",
    "det",
    "act",
    "transitive_witness",
    "in_o",
    "in_so",
    "in_sl",
    "in_oalg",
    "in_slalg",
    "trim",
]

EXP_TAYLOR_DEGREE = 8
EXP_SCALE_NORM = 0.0625
LOG_CHART_RADIUS = 0.9
LOG_SQRT_TARGET = 0.25
LOG_TAYLOR_TERMS = 60
SINGULAR_RTOL = 1e-12


def _minimal_group_block(B: np.ndarray) -> np.ndarray:
    n = B.shape[0]
    while n > 0:
        row = B[n - 1, :n].copy()
        col = B[:n, n - 1].copy()
        row[n - 1] -= 1.0
        col[n - 1] -= 1.0
        if row.any() or col.any():
            break
        n -= 1
    return B[:n, :n]


def _minimal_algebra_block(X: np.ndarray) -> np.ndarray:
    n = X.shape[0]
    while n > 0 and not X[n - 1, :n].any() and not X[:n, n - 1].any():
        n -= 1
    return X[:n, :n]


def _as_square(M) -> np.ndarray:
    M = np.array(M, dtype=float)
    if M.ndim == 0 or M.size == 0:
        return np.zeros((0, 0))
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("block must be a square matrix")
    return M


def _frozen(M: np.ndarray) -> np.ndarray:
    M = np.array(M, dtype=float)
    M.setflags(write=False)
    return M


@dataclass(frozen=True, eq=False)
class GLInfAlgebra:
    """Finitely supported N x N matrix (zero outside ``block``)."""

    block: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "block", _frozen(_minimal_algebra_block(_as_square(self.block))))

    @property
    def n(self) -> int:
        return self.block.shape[0]

    def padded(self, n: int) -> np.ndarray:
        if n < self.n:
            raise ValueError("block smaller than the support")
        out = np.zeros((n, n))
        out[: self.n, : self.n] = self.block
        return out

    def __add__(self, other: GLInfAlgebra) -> GLInfAlgebra:
        n = max(self.n, other.n)
        return GLInfAlgebra(self.padded(n) + other.padded(n))

    def __sub__(self, other: GLInfAlgebra) -> GLInfAlgebra:
        n = max(self.n, other.n)
        return GLInfAlgebra(self.padded(n) - other.padded(n))

    def __neg__(self) -> GLInfAlgebra:
        return GLInfAlgebra(-self.block)

    def __mul__(self, s: float) -> GLInfAlgebra:
        return GLInfAlgebra(s * self.block)

    __rmul__ = __mul__

    def norm2(self) -> float:
        return float(np.linalg.norm(self.block, 2)) if self.n else 0.0

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.block), initial=0.0))

    def trace(self) -> float:
        return float(np.trace(self.block))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GLInfAlgebra):
            return NotImplemented
        return np.array_equal(self.block, other.block)

    def __hash__(self) -> int:
        return hash(self.block.tobytes())

    def to_dict(self) -> dict:
        return {"n": self.n, "block": self.block.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> GLInfAlgebra:
        return cls(np.asarray(data["block"], dtype=float).reshape(data["n"], data["n"]))


@dataclass(frozen=True, eq=False)
class GLInfElement:
    """Invertible N x N matrix equal to the identity outside ``block``."""

    block: np.ndarray

    def __post_init__(self):
        B = _minimal_group_block(_as_square(self.block))
        if B.shape[0]:
            # rank test: smallest singular value relative to the largest
            sv = np.linalg.svd(B, compute_uv=False)
            if not sv[-1] > SINGULAR_RTOL * sv[0]:
                raise Singular("block is not invertible at the configured tolerance")
        object.__setattr__(self, "block", _frozen(B))

    @property
    def n(self) -> int:
        return self.block.shape[0]

    def padded(self, n: int) -> np.ndarray:
        if n < self.n:
            raise ValueError("block smaller than the support")
        out = np.eye(n)
        out[: self.n, : self.n] = self.block
        return out

    def __matmul__(self, other: GLInfElement) -> GLInfElement:
        return compose(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GLInfElement):
            return NotImplemented
        return np.array_equal(self.block, other.block)

    def __hash__(self) -> int:
        return hash(self.block.tobytes())

    def distance(self, other: GLInfElement) -> float:
        n = max(self.n, other.n)
        return float(np.max(np.abs(self.padded(n) - other.padded(n)), initial=0.0))

    def to_dict(self) -> dict:
        return {"n": self.n, "block": self.block.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> GLInfElement:
        return cls(np.asarray(data["block"], dtype=float).reshape(data["n"], data["n"]))


def identity() -> GLInfElement:
    return GLInfElement(np.zeros((0, 0)))


def unit_matrix(i: int, j: int, value: float = 1.0) -> GLInfAlgebra:
    """The matrix unit ``E_ij`` (indices from 1)."""
    n = max(i, j)
    M = np.zeros((n, n))
    M[i - 1, j - 1] = value
    return GLInfAlgebra(M)


def compose(A: GLInfElement, B: GLInfElement) -> GLInfElement:
    n = max(A.n, B.n)
    return GLInfElement(A.padded(n) @ B.padded(n))


def invert(A: GLInfElement) -> GLInfElement:
    if A.n == 0:
        return A
    try:
        inv = np.linalg.inv(A.block)
    except np.linalg.LinAlgError as exc:
        raise Singular(str(exc)) from exc
    return GLInfElement(inv)


def bracket(X: GLInfAlgebra, Y: GLInfAlgebra) -> GLInfAlgebra:
    n = max(X.n, Y.n)
    x, y = X.padded(n), Y.padded(n)
    return GLInfAlgebra(x @ y - y @ x)


def _expm(M: np.ndarray) -> np.ndarray:
    """Scaling and squaring with a degree-8 Taylor kernel."""
    n = M.shape[0]
    nrm = np.linalg.norm(M, 2)
    s = 0
    if nrm > EXP_SCALE_NORM:
        s = int(math.ceil(math.log2(nrm / EXP_SCALE_NORM)))
    S = M / 2.0**s
    E = np.eye(n)
    for k in range(EXP_TAYLOR_DEGREE, 0, -1):
        # Horner: I + S/1 (I + S/2 (I + ...))
        E = np.eye(n) + (S @ E) / k
    for _ in range(s):
        E = E @ E
    return E


def exp(X: GLInfAlgebra) -> GLInfElement:
    if X.n == 0:
        return identity()
    return GLInfElement(_expm(X.block))


def _sqrtm_db(A: np.ndarray, tol: float = 1e-15, maxiter: int = 60) -> np.ndarray:
    """Principal square root by the Denman-Beavers iteration."""
    Y = A.copy()
    Z = np.eye(A.shape[0])
    for _ in range(maxiter):
        Yn = 0.5 * (Y + np.linalg.inv(Z))
        Zn = 0.5 * (Z + np.linalg.inv(Y))
        delta = np.max(np.abs(Yn - Y))
        Y, Z = Yn, Zn
        if delta <= tol * max(1.0, np.max(np.abs(Y))):
            break
    return Y


def _logm_near_identity(A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    I = np.eye(n)
    s = 0
    while np.linalg.norm(A - I, 2) > LOG_SQRT_TARGET:
        A = _sqrtm_db(A)
        s += 1
    E = A - I
    L = np.zeros((n, n))
    term = I
    for k in range(1, LOG_TAYLOR_TERMS + 1):
        term = term @ E
        L += ((-1) ** (k + 1) / k) * term
        if np.max(np.abs(term)) < 1e-18:
            break
    return L * 2.0**s


def log_near_id(A: GLInfElement, radius: float = LOG_CHART_RADIUS) -> GLInfAlgebra:
    """Principal logarithm on the chart ``|A - Id|_2 < radius``."""
    if A.n == 0:
        return GLInfAlgebra(np.zeros((0, 0)))
    dist = float(np.linalg.norm(A.block - np.eye(A.n), 2))
    if not dist < radius:
        raise OutsideChart(f"|A - Id|_2 = {dist:.3g} is outside the logarithm chart")
    return GLInfAlgebra(_logm_near_identity(A.block))


def bch(X: GLInfAlgebra, Y: GLInfAlgebra, order: int) -> GLInfAlgebra:
    """Campbell-Baker-Hausdorff series truncated after degree ``order`` (1..4)."""
    if order not in (1, 2, 3, 4):
        raise UnsupportedOrder(f"order must be 1..4, got {order}")
    Z = X + Y
    if order >= 2:
        XY = bracket(X, Y)
        Z = Z + 0.5 * XY
    if order >= 3:
        Z = Z + (1.0 / 12.0) * (bracket(X, XY) + bracket(Y, bracket(Y, X)))
    if order >= 4:
        Z = Z - (1.0 / 24.0) * bracket(Y, bracket(X, XY))
    return Z


def det(A: GLInfElement) -> float:
    return float(np.linalg.det(A.block)) if A.n else 1.0


def act(A: GLInfElement, x: FinSeq) -> FinSeq:
    n = max(A.n, x.active_len)
    return FinSeq(A.padded(n) @ x.padded(n))


def _basis_completion(x: np.ndarray) -> np.ndarray:
    """Invertible matrix with first column ``x``; the remaining columns are
    standard basis vectors, skipping the pivot of ``x``."""
    n = x.shape[0]
    pivot = int(np.argmax(np.abs(x)))
    M = np.zeros((n, n))
    M[:, 0] = x
    col = 1
    for i in range(n):
        if i != pivot:
            M[i, col] = 1.0
            col += 1
    return M


def transitive_witness(x: FinSeq, y: FinSeq) -> GLInfElement:
    """Some ``A`` in GL(inf) with ``act(A, x) = y`` (both nonzero)."""
    if x.active_len == 0 or y.active_len == 0:
        raise ValueError("both vectors must be nonzero")
    n = max(x.active_len, y.active_len)
    Bx = _basis_completion(x.padded(n))
    By = _basis_completion(y.padded(n))
    return GLInfElement(By @ np.linalg.inv(Bx))


def in_o(A: GLInfElement, tol: float = 1e-10) -> bool:
    if A.n == 0:
        return True
    return bool(np.max(np.abs(A.block.T @ A.block - np.eye(A.n))) <= tol)


def in_so(A: GLInfElement, tol: float = 1e-10, det_tol: float = 1e-8) -> bool:
    return in_o(A, tol) and abs(det(A) - 1.0) <= det_tol


def in_sl(A: GLInfElement, det_tol: float = 1e-8) -> bool:
    return abs(det(A) - 1.0) <= det_tol


def in_oalg(X: GLInfAlgebra, tol: float = 1e-12) -> bool:
    return bool(np.max(np.abs(X.block + X.block.T), initial=0.0) <= tol)


def in_slalg(X: GLInfAlgebra, tol: float = 1e-12) -> bool:
    return abs(X.trace()) <= tol


def trim(obj: GLInfElement | GLInfAlgebra, eps: float):
    """Snap entries within ``eps`` of the identity (resp. zero) and re-minimize."""
    if isinstance(obj, GLInfElement):
        B = obj.block
        I = np.eye(obj.n)
        return GLInfElement(np.where(np.abs(B - I) <= eps, I, B))
    if isinstance(obj, GLInfAlgebra):
        B = obj.block
        return GLInfAlgebra(np.where(np.abs(B) <= eps, 0.0, B))
    raise TypeError(f"cannot trim {type(obj).__name__}")
