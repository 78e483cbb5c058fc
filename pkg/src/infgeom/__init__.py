"""Finite-scale numerical geometry of infinite-dimensional manifolds.

Submodules:

- ``seqspace``  finitely supported sequences and the weak inner product
- ``calculus``  curve-based derivatives, currying, Mackey and smoothness diagnostics
- ``sphere``    the sphere with its stereographic atlas and geodesics
- ``frames``    Stiefel manifolds, Grassmannians, Iwasawa decomposition
- ``glinf``     GL(inf) and gl(inf): exp, log, BCH, det, action
- ``mapspace``  discretized mapping manifolds and Diff(S^1)
"""

from .seqspace import FinSeq, e

__version__ = "0.1.0"

__all__ = ["FinSeq", "e", "__version__"]
