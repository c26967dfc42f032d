"""Adjoint-orbit geometry: points, tangents, the ruling, and the
identification of the orbit with the cotangent bundle of its flag.

An orbit point is stored together with a group witness g and the matrix
x = g H g^-1.  The orthogonal factor of the witness projects x to the
compact flag orbit (the zero section of the ruling); the difference
x - pr(x) is the fiber part, which lies in the K(g)-conjugate of n(H).
Pairing the fiber against conjugated m(H)-basis elements through the
Killing form gives cotangent coordinates; the inverse direction solves
for a unipotent witness inside the nilpotent slice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .iwasawa import IwasawaFactors, iwasawa
from .model import ChamberElement
from .numerics import char_poly, commutator, mat_exp


class NotOrthogonal(ValueError):
    """Flag witnesses must be rotations."""


class FiberResidual(ValueError):
    """Fiber part fails to lie in the conjugated nilpotent slice."""


class NoNilpotentWitness(ValueError):
    """Unipotent witness iteration did not converge."""


class NotTangent(ValueError):
    """Vector is not tangent to the orbit at the given point."""


class DegenerateChart(ValueError):
    """Chart directions are dependent modulo the centralizer."""


ORTHO_RTOL = 1e-8
CHAR_RTOL = 1e-9
TRACE_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class OrbitPoint:
    chamber: ChamberElement
    witness: np.ndarray
    point: np.ndarray


@dataclass(frozen=True, eq=False)
class TangentVector:
    at: OrbitPoint
    value: np.ndarray
    generator: np.ndarray | None = None


@dataclass(frozen=True, eq=False)
class CotangentRep:
    """Image of an orbit point under the bundle identification.

    ``base_witness`` is a rotation k, ``base`` the flag point k H k^-1,
    ``fiber`` a matrix whose k-deconjugation lies in n(H), and ``coords``
    the Killing pairings of the fiber against the conjugated m(H) basis.
    """

    chamber: ChamberElement
    base_witness: np.ndarray
    base: np.ndarray
    fiber: np.ndarray
    coords: tuple[float, ...]

    def pair(self, generator: np.ndarray) -> float:
        """Covector value on the flag tangent [generator, base]; the
        generator is given at the base point (already conjugated)."""
        return self.chamber.model.killing(self.fiber, generator)


def _locked(m: np.ndarray) -> np.ndarray:
    m = np.array(m, dtype=float)
    m.setflags(write=False)
    return m


def _check_on_orbit(chamber: ChamberElement, point: np.ndarray) -> None:
    nx = max(1.0, float(np.linalg.norm(point)))
    if abs(np.trace(point)) > TRACE_RTOL * nx:
        raise ValueError("orbit point must be traceless")
    coeffs = char_poly(point)
    for k, (got, ref) in enumerate(zip(coeffs[1:], chamber.char_coeffs[1:]), start=1):
        if abs(got - ref) > CHAR_RTOL * nx**k:
            raise ValueError("point spectrum does not match the chamber element")


def orbit_point(chamber: ChamberElement, witness) -> OrbitPoint:
    """Orbit point g H g^-1 carrying its witness g (determinant one)."""
    g = np.asarray(witness, dtype=float)
    sign, logdet = np.linalg.slogdet(g)
    if sign <= 0 or abs(logdet) > 1e-8 * max(1.0, chamber.model.n):
        raise ValueError("witness must have determinant 1")
    point = g @ chamber.matrix @ np.linalg.inv(g)
    _check_on_orbit(chamber, point)
    return OrbitPoint(chamber=chamber, witness=_locked(g), point=_locked(point))


def flag_point(chamber: ChamberElement, k) -> OrbitPoint:
    """Orbit point with rotation witness; lies on the compact flag."""
    mat = np.asarray(k, dtype=float)
    n = chamber.model.n
    if np.linalg.norm(mat.T @ mat - np.eye(n)) > ORTHO_RTOL or np.linalg.det(mat) < 0:
        raise NotOrthogonal("flag witness must be a rotation")
    point = mat @ chamber.matrix @ mat.T
    _check_on_orbit(chamber, point)
    return OrbitPoint(chamber=chamber, witness=_locked(mat), point=_locked(point))


def tangent_vector(x: OrbitPoint, value, generator=None) -> TangentVector:
    """Tangent vector at x, optionally with a generator Z, [Z, x] = V."""
    v = np.asarray(value, dtype=float)
    if generator is not None:
        z = np.asarray(generator, dtype=float)
        scale = max(1.0, float(np.linalg.norm(z)) * float(np.linalg.norm(x.point)))
        if np.linalg.norm(commutator(z, x.point) - v) > 1e-10 * scale:
            raise NotTangent("generator does not produce the given value")
        return TangentVector(at=x, value=_locked(v), generator=_locked(z))
    return TangentVector(at=x, value=_locked(v), generator=None)


def project_ruling(x: OrbitPoint, factors: IwasawaFactors | None = None) -> OrbitPoint:
    """Bundle projection onto the compact flag: conjugate H by the
    orthogonal factor of the witness."""
    fac = factors if factors is not None else iwasawa(x.witness)
    return flag_point(x.chamber, fac.k_factor)


def _fiber_coefficients(chamber: ChamberElement, w: np.ndarray) -> tuple[np.ndarray, float]:
    """Coefficients of w on the n(H) basis plus the off-pattern residual."""
    coeffs = np.array([w[i, j] for i, j in chamber.n_positions])
    recon = np.zeros_like(w)
    for c, (i, j) in zip(coeffs, chamber.n_positions):
        recon[i, j] = c
    residual = float(np.linalg.norm(w - recon))
    return coeffs, residual


def to_cotangent(x: OrbitPoint, rtol: float = 1e-10) -> CotangentRep:
    """Inverse of the bundle identification: split x into a flag base
    point and a fiber, and read off covector coordinates.

    Raises ``FiberResidual`` when the deconjugated fiber leaves the
    nilpotent slice, which signals witness or rounding breakdown.
    """
    chamber = x.chamber
    fac = iwasawa(x.witness)
    k = fac.k_factor
    base = project_ruling(x, factors=fac)
    fiber = x.point - base.point
    w = k.T @ fiber @ k
    _, residual = _fiber_coefficients(chamber, w)
    if residual > rtol * max(1.0, float(np.linalg.norm(w))):
        raise FiberResidual(f"fiber residual {residual:.3e} off the nilpotent slice")
    coords = tuple(chamber.model.killing(fiber, k @ e @ k.T) for e in chamber.m_basis)
    return CotangentRep(
        chamber=chamber,
        base_witness=_locked(k),
        base=base.point,
        fiber=_locked(fiber),
        coords=coords,
    )


def cotangent_rep(chamber: ChamberElement, base_witness, fiber, rtol: float = 1e-10) -> CotangentRep:
    """Build a cotangent representative from a rotation and a fiber
    matrix given at the base point."""
    base = flag_point(chamber, base_witness)
    k = base.witness
    v = np.asarray(fiber, dtype=float)
    w = k.T @ v @ k
    _, residual = _fiber_coefficients(chamber, w)
    if residual > rtol * max(1.0, float(np.linalg.norm(w))):
        raise FiberResidual(f"fiber residual {residual:.3e} off the nilpotent slice")
    _check_on_orbit(chamber, base.point + v)
    coords = tuple(chamber.model.killing(v, k @ e @ k.T) for e in chamber.m_basis)
    return CotangentRep(
        chamber=chamber,
        base_witness=k,
        base=base.point,
        fiber=_locked(v),
        coords=coords,
    )


def from_cotangent(rep: CotangentRep, max_iterations: int = 50, tol: float = 1e-12) -> OrbitPoint:
    """Bundle identification: recover the orbit point base + fiber with a
    witness k exp(Y), Y in n(H).

    The unipotent witness solves Ad(exp Y) H = H + w for the deconjugated
    fiber w.  Quasi-Newton iteration on the n(H) coefficients with the
    diagonal linearization [Y, H]; the nonlinearity only feeds strictly
    upward in the block grading, so the iteration settles in at most n
    steps.
    """
    chamber = rep.chamber
    h = chamber.matrix
    k = rep.base_witness
    w = k.T @ rep.fiber @ k
    target, _ = _fiber_coefficients(chamber, w)
    if len(target) == 0:
        return orbit_point(chamber, k)
    denom = -np.asarray(chamber.n_gaps)  # coords([Y, H]) = -gap * coords(Y)
    coeffs = target / denom
    scale = max(1.0, float(np.linalg.norm(target)))
    for _ in range(max_iterations):
        y = np.zeros_like(w)
        for c, (i, j) in zip(coeffs, chamber.n_positions):
            y[i, j] = c
        displaced = mat_exp(y) @ h @ mat_exp(-y) - h
        current, _ = _fiber_coefficients(chamber, displaced)
        gap = target - current
        if np.linalg.norm(gap) <= tol * scale:
            return orbit_point(chamber, k @ mat_exp(y))
        coeffs = coeffs + gap / denom
    raise NoNilpotentWitness(f"no unipotent witness after {max_iterations} iterations")


def solve_generator(x: OrbitPoint, value, rtol: float = 1e-9) -> np.ndarray:
    """Minimum-norm Z with [Z, x] = V, via least squares on the bracket
    operator.  The minimum-norm solution is orthogonal to the kernel, so
    it is automatically traceless.  Raises ``NotTangent`` when V is not
    in the image of ad(x)."""
    v = np.asarray(value, dtype=float)
    p = x.point
    n = p.shape[0]
    op = np.kron(np.eye(n), p.T) - np.kron(p, np.eye(n))
    z, *_ = np.linalg.lstsq(op, v.ravel(), rcond=None)
    z = z.reshape(n, n)
    residual = float(np.linalg.norm(commutator(z, p) - v))
    scale = max(1.0, float(np.linalg.norm(p)) * float(np.linalg.norm(v)))
    if residual > rtol * scale:
        raise NotTangent(f"residual {residual:.3e} for the bracket equation")
    return z


def _dexp(u: np.ndarray, x: np.ndarray, max_terms: int = 40) -> np.ndarray:
    """Left-trivialized directional derivative of the exponential:
    returns D with d/ds exp(u + s x)|_0 = exp(u) D.  Series in nested
    brackets, summed to machine precision."""
    term = x
    total = np.array(x, dtype=float)
    for m in range(1, max_terms):
        term = commutator(u, term) * (-1.0 / (m + 1))
        total += term
        if np.linalg.norm(term) <= 1e-17 * max(1.0, np.linalg.norm(total)):
            break
    return total


@dataclass(frozen=True, eq=False)
class OrbitChart:
    """Chart t -> Ad(g exp(sum t_i X_i)) H around a given point.

    ``velocity`` returns honest coordinate vector fields (pushforwards of
    the flat coordinates, which commute); away from t = 0 these pick up
    the exponential-derivative correction to the raw conjugated
    directions.  ``frame_velocity`` returns the moving frame
    [Ad(g(t)) X_i, x(t)] instead; the two agree at t = 0.
    """

    at: OrbitPoint
    directions: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return len(self.directions)

    def _displacement(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if t.shape != (self.dim,):
            raise ValueError(f"chart parameter must have shape ({self.dim},)")
        u = np.zeros_like(self.at.point)
        for ti, xi in zip(t, self.directions):
            u = u + ti * xi
        return u

    def point(self, t) -> OrbitPoint:
        u = self._displacement(t)
        return orbit_point(self.at.chamber, self.at.witness @ mat_exp(u))

    def velocity(self, t, i: int, at: OrbitPoint | None = None) -> TangentVector:
        u = self._displacement(t)
        p = at if at is not None else self.point(t)
        w = p.witness
        d = _dexp(u, self.directions[i])
        z = w @ d @ np.linalg.inv(w)
        return tangent_vector(p, commutator(z, p.point), generator=z)

    def frame_velocity(self, t, i: int, at: OrbitPoint | None = None) -> TangentVector:
        p = at if at is not None else self.point(t)
        w = p.witness
        z = w @ self.directions[i] @ np.linalg.inv(w)
        return tangent_vector(p, commutator(z, p.point), generator=z)

    def frame_generators(self, t) -> tuple[OrbitPoint, list[np.ndarray]]:
        """Point and all moving-frame generators at t, sharing one
        witness inversion."""
        p = self.point(t)
        w = p.witness
        w_inv = np.linalg.inv(w)
        return p, [w @ x @ w_inv for x in self.directions]

    def coordinate_frame(self, t) -> tuple[OrbitPoint, list[TangentVector]]:
        """Point and all coordinate velocity fields at t, sharing one
        witness inversion."""
        u = self._displacement(t)
        p = self.point(t)
        w = p.witness
        w_inv = np.linalg.inv(w)
        frame = []
        for x in self.directions:
            z = w @ _dexp(u, x) @ w_inv
            frame.append(tangent_vector(p, commutator(z, p.point), generator=z))
        return p, frame


def orbit_chart(x: OrbitPoint, directions=None) -> OrbitChart:
    """Chart through x; defaults to the theta n(H) + n(H) directions, a
    complement of the centralizer.  Raises ``DegenerateChart`` when the
    directions are dependent modulo z(H)."""
    chamber = x.chamber
    if directions is None:
        dirs = tuple(chamber.theta_n_basis) + tuple(chamber.n_basis)
    else:
        dirs = tuple(np.asarray(d, dtype=float) for d in directions)
    if dirs:
        rows = [d.ravel() for d in dirs] + [z.ravel() for z in chamber.z_basis]
        stacked = np.stack(rows)
        expected = len(dirs) + len(chamber.z_basis)
        if np.linalg.matrix_rank(stacked, tol=1e-10) < expected:
            raise DegenerateChart("directions are dependent modulo the centralizer")
    return OrbitChart(at=x, directions=tuple(_locked(d) for d in dirs))


__all__ = [
    "CotangentRep",
    "DegenerateChart",
    "FiberResidual",
    "NoNilpotentWitness",
    "NotOrthogonal",
    "NotTangent",
    "OrbitChart",
    "OrbitPoint",
    "TangentVector",
    "cotangent_rep",
    "flag_point",
    "from_cotangent",
    "orbit_chart",
    "orbit_point",
    "project_ruling",
    "solve_generator",
    "tangent_vector",
    "to_cotangent",
]
