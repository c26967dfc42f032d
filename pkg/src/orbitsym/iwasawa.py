"""Iwasawa factorization g = K(g) A(g) N(g) and its derivatives.

For SL(n, R) the factorization is QR with positive pivots: K(g) is the
orthogonal factor, A(g) the positive diagonal of R and N(g) the unit
upper-triangular remainder.  The logarithm of A(g) is the abelian
projection.

The derivative of the factor curves t -> K(g exp(tX)), A(..), N(..) at
t = 0, left-translated to the identity, has a closed form: conjugate X
by A(g)N(g) and split the result into antisymmetric / diagonal /
strictly-upper parts.  The antisymmetric and diagonal parts are the K-
and A-velocities; conjugating the upper part back by (A(g)N(g))^-1
gives the N-velocity.  ``fd_iwasawa_velocities`` recomputes all three by
central differences and serves as the independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import split_kan
from .numerics import central_diff, mat_exp, qr_positive

DET_RTOL = 1e-6


@dataclass(frozen=True, eq=False)
class IwasawaFactors:
    """Factors of g = k a n: orthogonal k, positive diagonal a, unit
    upper-triangular n, and the diagonal logarithm of a."""

    k_factor: np.ndarray
    a_factor: np.ndarray
    n_factor: np.ndarray
    h_projection: np.ndarray

    def an_factor(self) -> np.ndarray:
        return self.a_factor @ self.n_factor

    def reconstruct(self) -> np.ndarray:
        return self.k_factor @ self.a_factor @ self.n_factor


@dataclass(frozen=True, eq=False)
class InfinitesimalIwasawa:
    """Left-translated factor-curve velocities, one per subalgebra."""

    k_deriv: np.ndarray
    a_deriv: np.ndarray
    n_deriv: np.ndarray


def _require_det_one(g: np.ndarray) -> None:
    sign, logdet = np.linalg.slogdet(g)
    if sign <= 0 or abs(logdet) > DET_RTOL * max(1.0, g.shape[0]):
        raise ValueError("group element must have determinant 1")


def iwasawa(g) -> IwasawaFactors:
    """Unique factorization of a determinant-one matrix as k a n."""
    mat = np.asarray(g, dtype=float)
    _require_det_one(mat)
    q, r = qr_positive(mat)
    diag = np.diag(r)
    a = np.diag(diag)
    n = np.diag(1.0 / diag) @ r
    h = np.diag(np.log(diag))
    return IwasawaFactors(k_factor=q, a_factor=a, n_factor=n, h_projection=h)


def infinitesimal_iwasawa(x, g, factors: IwasawaFactors | None = None) -> InfinitesimalIwasawa:
    """Closed-form factor-curve velocities of t -> factors(g exp(tX)).

    ``factors`` may carry a precomputed factorization of g.
    """
    mat = np.asarray(x, dtype=float)
    fac = factors if factors is not None else iwasawa(g)
    an = fac.an_factor()
    conjugated = an @ mat @ np.linalg.inv(an)
    y_k, y_a, y_n = split_kan(conjugated)
    n_deriv = np.linalg.solve(an, y_n @ an)
    return InfinitesimalIwasawa(k_deriv=y_k, a_deriv=y_a, n_deriv=n_deriv)


def fd_iwasawa_velocities(x, g, h: float = 1e-3):
    """Factor-curve velocities by fourth-order central differences,
    left-translated to the identity.  Independent oracle for
    ``infinitesimal_iwasawa``; error O(h^4)."""
    mat = np.asarray(x, dtype=float)
    base = np.asarray(g, dtype=float)

    def factor_curve(t: float) -> np.ndarray:
        fac = iwasawa(base @ mat_exp(t * mat))
        return np.stack([fac.k_factor, fac.a_factor, fac.n_factor])

    stack0 = factor_curve(0.0)
    dstack = central_diff(factor_curve, 0.0, h)
    k_fd = np.linalg.solve(stack0[0], dstack[0])
    a_fd = np.linalg.solve(stack0[1], dstack[1])
    n_fd = np.linalg.solve(stack0[2], dstack[2])
    return k_fd, a_fd, n_fd


__all__ = [
    "IwasawaFactors",
    "InfinitesimalIwasawa",
    "fd_iwasawa_velocities",
    "infinitesimal_iwasawa",
    "iwasawa",
]
