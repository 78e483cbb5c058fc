"""Frames in the sequence space: Stiefel manifolds, the Grassmannian and the
Iwasawa decomposition.

A :class:`Frame` is a linear map ``R^k -> R^inf`` given by its k columns.
Injective frames form the Stiefel manifold of k-frames, orthonormal ones the
Stiefel manifold of orthonormal frames. The projection ``pi(A) = A(R^k)`` onto
the Grassmannian is realized by the orthogonal projector onto the image,
stored on the smallest coordinate block containing it.

All computations run on the joint support of the columns. Padding a frame
into a larger ambient block therefore cannot change any result.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import NotOrthonormal, RankDeficient
from .seqspace import FinSeq, stack

__all__ = [
    "Frame",
    "GrassmannPoint",
    "GrassTangent",
    "transpose_apply",
    "gram",
    "is_injective",
    "is_orthonormal",
    "iwasawa",
    "mgs_positive",
    "grassmann_project",
    "same_orbit",
    "universal_bundle_contains",
    "adapted_frames",
    "grassmann_tangent_move",
    "grassmann_velocity",
    "embed",
]

INJECTIVE_RTOL = 1e-12
ORTHONORMAL_TOL = 1e-10
GRASSMANN_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Frame:
    """k columns in the sequence space; ``ambient`` only records an embedding
    dimension and never takes part in arithmetic."""

    cols: tuple[FinSeq, ...]
    ambient: int | None = None

    def __post_init__(self):
        cols = tuple(c if isinstance(c, FinSeq) else FinSeq(c) for c in self.cols)
        if not cols:
            raise ValueError("a frame needs at least one column")
        object.__setattr__(self, "cols", cols)
        if self.ambient is not None and self.ambient < self.support:
            raise ValueError("ambient dimension below the frame's support")

    @classmethod
    def from_matrix(cls, mat: np.ndarray) -> Frame:
        mat = np.asarray(mat, dtype=float)
        if mat.ndim != 2:
            raise ValueError("expected an n x k matrix")
        return cls(tuple(FinSeq(mat[:, j]) for j in range(mat.shape[1])))

    @property
    def k(self) -> int:
        return len(self.cols)

    @property
    def support(self) -> int:
        return max(c.active_len for c in self.cols)

    def matrix(self, n: int | None = None) -> np.ndarray:
        return stack(self.cols, n)

    def scale(self) -> float:
        return max(c.norm() for c in self.cols)

    def right_multiply(self, M: np.ndarray) -> Frame:
        """The frame ``A o M`` for a k x k matrix ``M`` (right action of GL(k))."""
        M = np.asarray(M, dtype=float)
        if M.shape != (self.k, self.k):
            raise ValueError(f"expected a {self.k}x{self.k} matrix")
        return Frame.from_matrix(self.matrix() @ M)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Frame):
            return NotImplemented
        return self.cols == other.cols

    def __hash__(self) -> int:
        return hash(self.cols)

    def to_dict(self) -> dict:
        return {"k": self.k, "cols": [c.to_list() for c in self.cols]}

    @classmethod
    def from_dict(cls, data: dict) -> Frame:
        cols = tuple(FinSeq(c) for c in data["cols"])
        if len(cols) != data["k"]:
            raise ValueError("k does not match the number of columns")
        return cls(cols)


@dataclass(frozen=True, eq=False)
class GrassmannPoint:
    """A k-dimensional subspace, encoded by its orthogonal projector on the
    minimal coordinate block ``m``."""

    proj: np.ndarray

    def __post_init__(self):
        P = np.array(self.proj, dtype=float)
        if P.ndim != 2 or P.shape[0] != P.shape[1]:
            raise ValueError("projector must be square")
        m = P.shape[0]
        while m > 0 and not P[m - 1, :m].any() and not P[:m, m - 1].any():
            m -= 1
        P = P[:m, :m]
        P.setflags(write=False)
        object.__setattr__(self, "proj", P)

    @property
    def m(self) -> int:
        return self.proj.shape[0]

    @property
    def k(self) -> int:
        return int(round(float(np.trace(self.proj))))

    def block(self, n: int) -> np.ndarray:
        if n < self.m:
            raise ValueError("block smaller than the support")
        out = np.zeros((n, n))
        out[: self.m, : self.m] = self.proj
        return out

    def isclose(self, other: GrassmannPoint, atol: float = GRASSMANN_TOL) -> bool:
        n = max(self.m, other.m)
        return bool(np.max(np.abs(self.block(n) - other.block(n)), initial=0.0) <= atol)

    def check(self) -> dict[str, float]:
        """Residuals of the projector invariants."""
        P = self.proj
        return {
            "idempotent": float(np.max(np.abs(P @ P - P), initial=0.0)),
            "symmetric": float(np.max(np.abs(P - P.T), initial=0.0)),
            "trace": float(abs(np.trace(P) - round(float(np.trace(P))))),
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GrassmannPoint):
            return NotImplemented
        return np.array_equal(self.proj, other.proj)

    def __hash__(self) -> int:
        return hash(self.proj.tobytes())

    def to_dict(self) -> dict:
        return {"m": self.m, "proj": self.proj.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> GrassmannPoint:
        P = np.asarray(data["proj"], dtype=float).reshape(data["m"], data["m"])
        return cls(P)


@dataclass(frozen=True, eq=False)
class GrassTangent:
    """A tangent vector at ``base``: a linear map from the subspace to its
    orthogonal complement inside a coordinate block of size ``m``, written in
    the adapted orthonormal bases of :func:`adapted_frames`. ``hom`` has
    shape ``(m - k, k)``."""

    base: GrassmannPoint
    hom: np.ndarray

    def __post_init__(self):
        H = np.array(self.hom, dtype=float)
        if H.ndim != 2 or H.shape[1] != self.base.k:
            raise ValueError(f"hom must have {self.base.k} columns")
        if H.shape[0] + self.base.k < self.base.m:
            raise ValueError("block too small for the base subspace")
        H.setflags(write=False)
        object.__setattr__(self, "hom", H)

    @property
    def m(self) -> int:
        return self.hom.shape[0] + self.base.k


def transpose_apply(A: Frame, x: FinSeq) -> np.ndarray:
    """``A^t x = (<col_1, x>, ..., <col_k, x>)``."""
    return np.array([c.dot(x) for c in A.cols])


def gram(A: Frame) -> np.ndarray:
    M = A.matrix()
    return M.T @ M


def is_injective(A: Frame, rtol: float = INJECTIVE_RTOL) -> bool:
    s = A.scale()
    if s == 0.0:
        return False
    return bool(abs(np.linalg.det(gram(A))) > rtol * s ** (2 * A.k))


def is_orthonormal(A: Frame, tol: float = ORTHONORMAL_TOL) -> bool:
    return bool(np.max(np.abs(gram(A) - np.eye(A.k))) <= tol)


def mgs_positive(B: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Modified Gram-Schmidt ``B = P Q`` with Q upper triangular, positive diagonal.

    Each column is orthogonalized twice against the previous ones (the
    second pass restores orthogonality lost to cancellation); the
    coefficients of both passes are accumulated into Q.
    """
    n, k = B.shape
    P = np.array(B, dtype=float)
    Q = np.zeros((k, k))
    for j in range(k):
        v = P[:, j]
        for _ in range(2):
            for i in range(j):
                r = P[:, i] @ v
                Q[i, j] += r
                v = v - r * P[:, i]
        nrm = np.linalg.norm(v)
        if nrm == 0.0:
            raise RankDeficient(f"column {j} is dependent on the previous ones")
        Q[j, j] = nrm
        P[:, j] = v / nrm
    return P, Q


def iwasawa(B: Frame) -> tuple[Frame, np.ndarray]:
    """Unique factorization ``B = p o q`` with p orthonormal and q in T(k)."""
    if not is_injective(B):
        raise RankDeficient("frame is not injective at the configured tolerance")
    P, Q = mgs_positive(B.matrix())
    return Frame.from_matrix(P), Q


def grassmann_project(A: Frame) -> GrassmannPoint:
    p, _ = iwasawa(A)
    P = p.matrix(A.support)
    proj = P @ P.T
    proj = 0.5 * (proj + proj.T)
    return GrassmannPoint(proj)


def same_orbit(A: Frame, B: Frame, group: Literal["GL", "O"] = "GL", atol: float = GRASSMANN_TOL) -> bool:
    """Whether ``B = A o M`` for some M in GL(k) (or O(k)): equal images."""
    if group not in ("GL", "O"):
        raise ValueError("group must be 'GL' or 'O'")
    if A.k != B.k:
        return False
    if group == "O" and not (is_orthonormal(A) and is_orthonormal(B)):
        raise NotOrthonormal("O(k)-orbits are only defined for orthonormal frames")
    return grassmann_project(A).isclose(grassmann_project(B), atol)


def universal_bundle_contains(Q: GrassmannPoint, x: FinSeq, rtol: float = GRASSMANN_TOL) -> bool:
    """Whether ``(Q, x)`` lies in the universal bundle, i.e. ``x`` in ``Q``."""
    if x.active_len > Q.m:
        return False
    xv = x.padded(Q.m)
    return bool(np.linalg.norm(Q.proj @ xv - xv) <= rtol * (1.0 + np.linalg.norm(xv)))


def _extend_orthonormal(P: np.ndarray, m: int, count: int, tol: float = 1e-8) -> np.ndarray:
    """Extend the orthonormal columns ``P`` (block size ``m``) by ``count``
    columns from Gram-Schmidt on ``e_1, e_2, ...`` in index order."""
    basis = [P[:, j] for j in range(P.shape[1])]
    added = []
    for i in range(m):
        if len(added) == count:
            break
        v = np.zeros(m)
        v[i] = 1.0
        for _ in range(2):
            for b in basis:
                v = v - (b @ v) * b
        nrm = np.linalg.norm(v)
        if nrm > tol:
            v = v / nrm
            basis.append(v)
            added.append(v)
    if len(added) != count:
        raise RankDeficient("could not complete the orthonormal basis")
    return np.column_stack(added) if added else np.zeros((m, 0))


def adapted_frames(Q: GrassmannPoint, m: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic orthonormal bases ``(P, N)`` of ``Q`` and of its
    orthogonal complement inside the block of size ``m``.

    ``P`` comes from Gram-Schmidt on the projector's columns in index order,
    ``N`` from Gram-Schmidt on the standard basis vectors against ``P``.
    """
    m = Q.m if m is None else m
    k = Q.k
    proj = Q.block(m)
    cols: list[np.ndarray] = []
    for j in range(m):
        if len(cols) == k:
            break
        v = proj[:, j].copy()
        for _ in range(2):
            for b in cols:
                v = v - (b @ v) * b
        nrm = np.linalg.norm(v)
        if nrm > 1e-6:
            cols.append(v / nrm)
    if len(cols) != k:
        raise RankDeficient("projector rank differs from its trace")
    P = np.column_stack(cols)
    N = _extend_orthonormal(P, m, m - k)
    return P, N


def grassmann_tangent_move(T: GrassTangent, t: float) -> GrassmannPoint:
    """The subspace spanned by ``P + t N hom``: a curve through ``T.base``
    with velocity ``T``."""
    if t == 0.0 or not T.hom.any():
        return T.base
    P, N = adapted_frames(T.base, T.m)
    moved = Frame.from_matrix(P + t * (N @ T.hom))
    return grassmann_project(moved)


def grassmann_velocity(T: GrassTangent) -> np.ndarray:
    """Derivative at ``t = 0`` of the projector along :func:`grassmann_tangent_move`,
    on the ``m x m`` block: ``N hom P^t + P hom^t N^t``."""
    P, N = adapted_frames(T.base, T.m)
    D = N @ T.hom @ P.T
    return D + D.T


def embed(obj: Frame | GrassmannPoint, n: int):
    """Image under the inclusion ``R^n -> R^inf``.

    Data are stored canonically, so embedding only records the ambient size;
    every operation commutes with it.
    """
    if isinstance(obj, Frame):
        if n < obj.support:
            raise ValueError("n below the frame's support")
        return Frame(obj.cols, ambient=n)
    if isinstance(obj, GrassmannPoint):
        return GrassmannPoint(obj.block(n))
    raise TypeError(f"cannot embed {type(obj).__name__}")
