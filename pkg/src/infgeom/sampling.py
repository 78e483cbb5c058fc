"""Random generators for property checks, shared by the test-suite and the CLI.

All generators take an explicit :class:`numpy.random.Generator`; use
:func:`case_rng` to derive a reproducible stream from a seed and a case name.
"""

from __future__ import annotations

import zlib

import numpy as np

from .frames import Frame
from .glinf import GLInfAlgebra
from .mapspace.diffeo import CircleDiffeo
from .mapspace.trig import GridS1
from .seqspace import FinSeq

__all__ = [
    "case_rng",
    "random_finseq",
    "random_perp",
    "random_unit",
    "random_frame",
    "random_orthonormal",
    "random_upper_positive",
    "random_gl",
    "random_orthogonal",
    "random_algebra",
    "random_trig_poly",
    "random_diffeo",
]


def case_rng(seed: int, name: str) -> np.random.Generator:
    """PCG64 stream determined by ``(seed, name)`` only."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, zlib.crc32(name.encode())])))


def random_finseq(rng: np.random.Generator, max_support: int = 10, start: int = 0) -> FinSeq:
    """Gaussian coordinates on indices ``start .. n-1`` with random ``n <= max_support``."""
    n = int(rng.integers(start + 1, max_support + 1))
    v = np.zeros(n)
    v[start:] = rng.normal(size=n - start)
    return FinSeq(v)


def random_perp(rng: np.random.Generator, max_support: int = 16) -> FinSeq:
    """Nonzero sequence orthogonal to ``e_1`` (first coordinate zero)."""
    while True:
        y = random_finseq(rng, max_support, start=1)
        if y.active_len:
            return y


def random_unit(rng: np.random.Generator, max_support: int = 10) -> FinSeq:
    while True:
        x = random_finseq(rng, max_support)
        n = x.norm()
        if n > 1e-3:
            return x / n


def random_frame(rng: np.random.Generator, k: int, support: int) -> Frame:
    return Frame.from_matrix(rng.normal(size=(support, k)))


def random_orthonormal(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    Q, R = np.linalg.qr(rng.normal(size=(n, k)))
    return Q * np.sign(np.diag(R))


def random_upper_positive(rng: np.random.Generator, k: int) -> np.ndarray:
    T = np.triu(rng.normal(size=(k, k)), 1)
    T[np.diag_indices(k)] = rng.uniform(0.5, 2.0, size=k)
    return T


def random_gl(rng: np.random.Generator, k: int, min_sv: float = 0.2) -> np.ndarray:
    """Random invertible matrix with singular values in ``[min_sv, 1/min_sv]``."""
    U = random_orthonormal(rng, k, k)
    V = random_orthonormal(rng, k, k)
    s = np.exp(rng.uniform(np.log(min_sv), -np.log(min_sv), size=k))
    return U @ np.diag(s) @ V.T


def random_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    return random_orthonormal(rng, n, n)


def random_algebra(rng: np.random.Generator, n: int, norm2: float) -> GLInfAlgebra:
    """Random ``n x n`` block rescaled to spectral norm ``norm2``."""
    X = rng.normal(size=(n, n))
    return GLInfAlgebra(X * (norm2 / np.linalg.norm(X, 2)))


def random_trig_poly(rng: np.random.Generator, nodes: np.ndarray, modes: int) -> np.ndarray:
    k = np.arange(1, modes + 1)
    a = rng.normal(size=modes) / k
    b = rng.normal(size=modes) / k
    return np.cos(np.outer(nodes, k)) @ a + np.sin(np.outer(nodes, k)) @ b


def random_diffeo(rng: np.random.Generator, N: int, modes: int = 4, max_slope: float = 0.5) -> CircleDiffeo:
    """Band-limited diffeo ``theta + p(theta)`` with ``|p'| <= max_slope`` and a
    random rotation."""
    nodes = GridS1(N).nodes
    k = np.arange(1, modes + 1)
    a = rng.normal(size=modes)
    b = rng.normal(size=modes)
    p = np.cos(np.outer(nodes, k)) @ a + np.sin(np.outer(nodes, k)) @ b
    dp_bound = np.sum(k * (np.abs(a) + np.abs(b)))
    p *= max_slope / dp_bound
    return CircleDiffeo(nodes + p + rng.uniform(-np.pi, np.pi))
