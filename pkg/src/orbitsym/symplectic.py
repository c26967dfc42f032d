"""The two symplectic forms on a hyperbolic adjoint orbit.

The orbit form pairs bracket generators through the Killing form:
omega(x)([Z1, x], [Z2, x]) = <x, [Z1, Z2]>.  The cotangent-bundle form
is minus the exterior derivative of the tautological one-form; under
the bundle identification the tautological form has the closed
expression

    lambda(V) = < x - pr(x), Ad(K(g)) K-velocity >,

where the K-velocity is the antisymmetric part of the Iwasawa factor
derivative along V's generator.  Chart matrices of both forms, the
scalar potential of the abelian Iwasawa projection, and the one-form
cutting out a displaced flag section live here; the seeded verification
suites are in ``suites``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .iwasawa import infinitesimal_iwasawa, iwasawa
from .model import ChamberElement
from .numerics import central_diff, commutator, mat_exp
from .orbit import (
    OrbitChart,
    OrbitPoint,
    TangentVector,
    orbit_point,
    solve_generator,
    to_cotangent,
)


@dataclass(frozen=True, eq=False)
class FormMatrix:
    """Antisymmetric matrix of form values on chart velocity pairs."""

    chart: OrbitChart
    entries: np.ndarray

    def smallest_singular_value(self) -> float:
        if self.entries.size == 0:
            return float("inf")
        return float(np.linalg.svd(self.entries, compute_uv=False)[-1])


def _generator(x: OrbitPoint, v: TangentVector) -> np.ndarray:
    if v.generator is not None:
        return v.generator
    return solve_generator(x, v.value)


def kks(x: OrbitPoint, v: TangentVector, w: TangentVector) -> float:
    """Orbit symplectic form on two tangent vectors at x.

    Value <x, [Z_v, Z_w]>; well defined up to centralizer ambiguity in
    the generators, which the Killing pairing kills.
    """
    zv = _generator(x, v)
    zw = _generator(x, w)
    return x.chamber.model.killing(x.point, commutator(zv, zw))


def tautological(x: OrbitPoint, v: TangentVector, factors=None) -> float:
    """Tautological (Liouville) one-form transported to the orbit.

    Pairs the fiber part of x with the flag velocity of v pushed down by
    the ruling projection; vanishes on fiber directions and on the zero
    section.  ``factors`` may carry a precomputed factorization of the
    witness.
    """
    z = _generator(x, v)
    g = x.witness
    fac = factors if factors is not None else iwasawa(g)
    k = fac.k_factor
    fiber = x.point - k @ x.chamber.matrix @ k.T
    x_alg = np.linalg.solve(g, z @ g)
    inf = infinitesimal_iwasawa(x_alg, g, factors=fac)
    return x.chamber.model.killing(fiber, k @ inf.k_deriv @ k.T)


def _axis(dim: int, i: int, s: float) -> np.ndarray:
    t = np.zeros(dim)
    t[i] = s
    return t


def omega_std_chart(chart: OrbitChart, fd_step: float = 1e-3) -> FormMatrix:
    """Cotangent-bundle form, as minus the exterior derivative of the
    tautological one-form in chart coordinates.

    Entry (i, j) is -(d_i lambda_j - d_j lambda_i)(0) with fourth-order
    central differences along the coordinate axes; lambda_j is evaluated
    on the honest coordinate field, so the mixed partials cancel exactly
    and only the finite-difference error survives.  Grid points, their
    factorizations and all velocities are shared across direction pairs.
    """
    m = chart.dim
    entries = np.zeros((m, m))
    if m >= 2:
        h = fd_step
        offsets = (-2.0 * h, -h, h, 2.0 * h)
        lam = np.zeros((m, 4, m))  # axis, stencil offset, paired direction
        for i in range(m):
            for si, s in enumerate(offsets):
                p, frame = chart.coordinate_frame(_axis(m, i, s))
                fac = iwasawa(p.witness)
                for j in range(m):
                    if j != i:
                        lam[i, si, j] = tautological(p, frame[j], factors=fac)
        for i in range(m):
            for j in range(i + 1, m):
                dij = (lam[i, 0, j] - 8.0 * lam[i, 1, j] + 8.0 * lam[i, 2, j] - lam[i, 3, j]) / (12.0 * h)
                dji = (lam[j, 0, i] - 8.0 * lam[j, 1, i] + 8.0 * lam[j, 2, i] - lam[j, 3, i]) / (12.0 * h)
                value = -(dij - dji)
                entries[i, j] = value
                entries[j, i] = -value
    entries.setflags(write=False)
    return FormMatrix(chart=chart, entries=entries)


def omega_kks_chart(chart: OrbitChart, t=None) -> FormMatrix:
    """Orbit form on the moving frame of the chart.

    The frame generators conjugate along with the point, so every entry
    equals the value at t = 0; re-evaluating on a t-grid measures the
    invariance defect of the floating-point arithmetic.
    """
    if t is None:
        t = np.zeros(chart.dim)
    p, gens = chart.frame_generators(t)
    killing = chart.at.chamber.model.killing
    m = chart.dim
    entries = np.zeros((m, m))
    for i in range(m):
        for j in range(i + 1, m):
            value = killing(p.point, commutator(gens[i], gens[j]))
            entries[i, j] = value
            entries[j, i] = -value
    entries.setflags(write=False)
    return FormMatrix(chart=chart, entries=entries)


def iwasawa_potential(chamber: ChamberElement, g, k) -> float:
    """Scalar potential <H, log A(g k)> on rotations k.

    Constant along the compact centralizer, so it descends to the flag;
    its negative differential cuts out the displaced section through
    Ad(g) of the flag.
    """
    fac = iwasawa(np.asarray(g, dtype=float) @ np.asarray(k, dtype=float))
    return chamber.model.killing(chamber.matrix, fac.h_projection)


def section_one_form(chamber: ChamberElement, g, k, direction) -> float:
    """One-form whose graph is the displaced flag section, evaluated on
    the flag tangent generated by an antisymmetric ``direction`` at k:
    minus <H, A-velocity of the factor curve>."""
    inf = infinitesimal_iwasawa(direction, np.asarray(g, dtype=float) @ np.asarray(k, dtype=float))
    return -chamber.model.killing(chamber.matrix, inf.a_deriv)


def graph_routes(chamber: ChamberElement, g, k, direction, fd_step: float = 1e-3):
    """Three routes to the same covector value at the flag point of g k.

    Returns (form_value, pairing_value, derivative_value): the section
    one-form, the cotangent covector paired with the projected tangent,
    and minus the central difference of the potential along k exp(tX).
    The first two agree to rounding; the third carries the O(h^4)
    stencil error.
    """
    g = np.asarray(g, dtype=float)
    k = np.asarray(k, dtype=float)
    x_dir = np.asarray(direction, dtype=float)
    gk = g @ k

    fac = iwasawa(gk)
    inf = infinitesimal_iwasawa(x_dir, gk, factors=fac)
    form_value = -chamber.model.killing(chamber.matrix, inf.a_deriv)

    rep = to_cotangent(orbit_point(chamber, gk))
    kf = fac.k_factor
    pairing_value = rep.pair(kf @ inf.k_deriv @ kf.T)

    derivative_value = -central_diff(
        lambda t: iwasawa_potential(chamber, g, k @ mat_exp(t * x_dir)), 0.0, fd_step
    )
    return form_value, pairing_value, derivative_value


__all__ = [
    "FormMatrix",
    "graph_routes",
    "iwasawa_potential",
    "kks",
    "omega_kks_chart",
    "omega_std_chart",
    "section_one_form",
    "tautological",
]
