"""First-order root dynamics, its fixed points and its conserved quantity.

The flow integrated here is

    dz_i/dt = sum_{j != i} Q_j / (z_i - z_j)

so bracket-certified equilibria are fixed points.  Differentiating the flow
once more yields a closed pairwise acceleration law

    d2z_i/dt2 = -sum_{j != i} Q_j (Q_i + Q_j) / (z_i - z_j)**3

(an identity in positions alone; cross terms cancel by three-index
antisymmetry), and with it the charge-weighted quantity

    H = sum_i Q_i v_i**2 - sum_{i<j} Q_i Q_j (Q_i + Q_j) / (z_i - z_j)**2

is exactly conserved along the flow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .generators import BracketParams, bracket
from .numerics import COLLISION_FACTOR, ChargeSystem, CollisionError, roots, to_floats
from .polyrat import ExactPoly, NotCoprime, NotSquarefree, gcd_poly, is_squarefree

__all__ = [
    "CollisionDetected",
    "StepSizeUnderflow",
    "Trajectory",
    "TrajectorySample",
    "acceleration_residual",
    "bilinear_residual",
    "conserved_quantity",
    "integrate",
    "vortex_rhs",
]


class CollisionDetected(RuntimeError):
    """Integration stopped because two charges collided.

    Carries the collision time, the offending pair and the trajectory
    accumulated so far.
    """

    def __init__(self, time: float, pair: tuple[int, int], trajectory: "Trajectory"):
        super().__init__(f"charges {pair[0]} and {pair[1]} collided at t={time:.6g}")
        self.time = time
        self.pair = pair
        self.trajectory = trajectory


class StepSizeUnderflow(RuntimeError):
    """The adaptive controller drove the step below the resolvable minimum."""


def _off_diag(zs: np.ndarray) -> np.ndarray:
    """Pairwise differences with the (singular) diagonal replaced by 1."""
    diff = zs[:, None] - zs[None, :]
    np.fill_diagonal(diff, 1.0)
    return diff


def _velocities(zs: np.ndarray, qs: np.ndarray) -> np.ndarray:
    n = len(zs)
    if n < 2:
        return np.zeros(n, dtype=complex)
    terms = qs[None, :] / _off_diag(zs)
    np.fill_diagonal(terms, 0.0)
    return terms.sum(axis=1)


def vortex_rhs(system: ChargeSystem) -> list[complex]:
    """Velocity of every root under the flow; zero exactly at equilibria of
    the field-free energy (the force of `numerics` divided by Q_i at k=0)."""
    zs = np.asarray(system.positions, dtype=complex)
    qs = np.asarray(system.charges, dtype=float)
    _check_separation(zs, system.diameter(), 0.0, None)
    return [complex(v) for v in _velocities(zs, qs)]


def _check_separation(zs: np.ndarray, diam: float, t: float, trajectory) -> None:
    n = len(zs)
    if n < 2:
        return
    diff = np.abs(zs[:, None] - zs[None, :])
    np.fill_diagonal(diff, np.inf)
    if diff.min() <= COLLISION_FACTOR * diam:
        i, j = np.unravel_index(int(diff.argmin()), diff.shape)
        if trajectory is None:
            raise CollisionError(f"charges {i} and {j} within {diff.min():.3e}")
        raise CollisionDetected(t, (int(i), int(j)), trajectory)


def _closest_pair(zs: np.ndarray) -> tuple[float, tuple[int, int]]:
    diff = np.abs(zs[:, None] - zs[None, :])
    np.fill_diagonal(diff, np.inf)
    i, j = np.unravel_index(int(diff.argmin()), diff.shape)
    return float(diff.min()), (int(i), int(j))


@dataclass
class TrajectorySample:
    t: float
    system: ChargeSystem
    velocities: list[complex]
    invariant: complex


@dataclass
class Trajectory:
    """Accepted integration steps plus controller statistics."""

    samples: list[TrajectorySample] = field(default_factory=list)
    steps_accepted: int = 0
    steps_rejected: int = 0
    max_error_estimate: float = 0.0

    @property
    def final(self) -> TrajectorySample:
        return self.samples[-1]

    def invariant_drift(self) -> tuple[float, float]:
        """(absolute, relative) drift of the conserved quantity."""
        h0 = self.samples[0].invariant
        drift = max(abs(s.invariant - h0) for s in self.samples)
        return drift, drift / (1.0 + abs(h0))


# Dormand-Prince 5(4) tableau
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_ERR = (
    71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40,
)


def integrate(
    system: ChargeSystem,
    t_end: float,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-12,
    _rhs_scale: float = 1.0,
) -> Trajectory:
    """Adaptive embedded Runge-Kutta integration of the root flow to t_end.

    Per-component error control with a PI step controller; every accepted
    step records positions, velocities and the conserved quantity.  Raises
    CollisionDetected (with time, pair and the partial trajectory) when two
    charges meet, StepSizeUnderflow when the controller collapses without a
    nearby pair to blame.
    """
    if t_end <= 0:
        raise ValueError("t_end must be positive")
    qs = np.asarray(system.charges, dtype=float)
    zs = np.asarray(system.positions, dtype=complex)
    k_field = system.field
    diam = system.diameter()
    traj = Trajectory()

    def rhs(y: np.ndarray) -> np.ndarray:
        return _rhs_scale * _velocities(y, qs)

    def record(t: float, y: np.ndarray, v: np.ndarray) -> None:
        snap = ChargeSystem([complex(z) for z in y], list(qs), field=k_field)
        traj.samples.append(
            TrajectorySample(t, snap, [complex(x) for x in v], _invariant(y, qs)))

    _check_separation(zs, diam, 0.0, traj)
    t = 0.0
    v = rhs(zs)
    record(t, zs, v / _rhs_scale if _rhs_scale != 1.0 else v)
    vmag = np.abs(v).max() if len(v) else 0.0
    h = min(t_end, 0.01 * (1.0 + float(np.abs(zs).max(initial=0.0))) / (1.0 + float(vmag)))
    h_min = 1e-14 * max(t_end, 1.0)
    err_prev = 1.0
    safety, alpha, beta = 0.9, 0.17, 0.04
    k1 = v
    while t < t_end:
        h = min(h, t_end - t)
        if h < h_min:
            dist, pair = _closest_pair(zs)
            if dist < 1e-6 * diam:
                raise CollisionDetected(t, pair, traj)
            raise StepSizeUnderflow(f"step size underflowed at t={t:.6g}")
        ks = [k1]
        for row in _DP_A[1:]:
            yi = zs + h * sum(a * k for a, k in zip(row, ks))
            ks.append(rhs(yi))
        y_new = zs + h * sum(b * k for b, k in zip(_DP_B5, ks))
        err_vec = h * sum(e * k for e, k in zip(_DP_ERR, ks))
        sc = abs_tol + rel_tol * np.maximum(np.abs(zs), np.abs(y_new))
        err = float(np.sqrt(np.mean(np.abs(err_vec / sc) ** 2))) if len(zs) else 0.0
        if err <= 1.0:
            t += h
            zs = y_new
            k1 = ks[-1]  # FSAL: last stage is the derivative at the new point
            record(t, zs, k1 / _rhs_scale if _rhs_scale != 1.0 else k1)
            traj.steps_accepted += 1
            traj.max_error_estimate = max(traj.max_error_estimate, err)
            _check_separation(zs, diam, t, traj)
            fac = safety * max(err, 1e-10) ** -alpha * err_prev ** beta
            h *= min(5.0, max(0.2, fac))
            err_prev = max(err, 1e-10)
        else:
            traj.steps_rejected += 1
            h *= max(0.2, safety * err ** -0.2)
    return traj


def _invariant(zs: np.ndarray, qs: np.ndarray) -> complex:
    v = _velocities(zs, qs)
    kinetic = (qs * v * v).sum()
    n = len(zs)
    if n < 2:
        return complex(kinetic)
    pair = qs[:, None] * qs[None, :] * (qs[:, None] + qs[None, :]) / _off_diag(zs) ** 2
    np.fill_diagonal(pair, 0.0)
    return complex(kinetic - 0.5 * pair.sum())


def conserved_quantity(system: ChargeSystem) -> complex:
    """The charge-weighted invariant H of the flow (see module docstring)."""
    zs = np.asarray(system.positions, dtype=complex)
    qs = np.asarray(system.charges, dtype=float)
    _check_separation(zs, system.diameter(), 0.0, None)
    return _invariant(zs, qs)


def acceleration_residual(system: ChargeSystem) -> float:
    """Max deviation between the two acceleration computations.

    (a) differentiates the flow along itself (chain rule), (b) uses the
    closed pairwise law; the difference must vanish at any configuration,
    not just along trajectories.
    """
    zs = np.asarray(system.positions, dtype=complex)
    qs = np.asarray(system.charges, dtype=float)
    _check_separation(zs, system.diameter(), 0.0, None)
    n = len(zs)
    if n < 2:
        return 0.0
    v = _velocities(zs, qs)
    diff = _off_diag(zs)
    chain_terms = (qs[None, :] * (v[:, None] - v[None, :])) / diff ** 2
    closed_terms = (qs[None, :] * (qs[:, None] + qs[None, :])) / diff ** 3
    np.fill_diagonal(chain_terms, 0.0)
    np.fill_diagonal(closed_terms, 0.0)
    return float(np.abs(chain_terms.sum(axis=1) - closed_terms.sum(axis=1)).max())


def bilinear_residual(p: ExactPoly, q: ExactPoly, lam, dt: float) -> float:
    """Residual of the bilinear evolution identity over one finite-difference
    window:  max coefficient of  q*dp/dt - lam*p*dq/dt - {p, q}_lam.

    The roots are evolved under the flow in the time normalization of the
    bilinear identity itself (a factor -2 relative to `integrate`); the
    returned residual is O(dt) plus root-finding noise.
    """
    lam = Fraction(lam)
    for name, poly in (("p", p), ("q", q)):
        if poly.is_zero or not is_squarefree(poly):
            raise NotSquarefree(f"{name} must be nonzero and squarefree")
    if gcd_poly(p, q).degree != 0:
        raise NotCoprime("p and q share a root")
    p, q = p.monic() if p.degree > 0 else ExactPoly.one(), q.monic() if q.degree > 0 else ExactPoly.one()
    n, m = max(int(p.degree), 0), max(int(q.degree), 0)
    positions = (roots(p) if n else []) + (roots(q) if m else [])
    charges = [1.0] * n + [-float(lam)] * m
    system = ChargeSystem(positions, charges)
    traj = integrate(system, dt, rel_tol=1e-12, abs_tol=1e-14, _rhs_scale=-2.0)
    moved = traj.final.system.positions
    p0 = np.asarray(to_floats(p))
    q0 = np.asarray(to_floats(q))
    p1 = np.poly(moved[:n])[::-1] if n else np.array([1.0 + 0j])
    q1 = np.poly(moved[n:])[::-1] if m else np.array([1.0 + 0j])
    dp = (p1 - p0) / dt
    dq = (q1 - q0) / dt
    br = np.asarray(to_floats(bracket(p, q, BracketParams(lam))))
    lhs = np.convolve(q0, dp) - float(lam) * np.convolve(p0, dq)
    width = max(len(lhs), len(br))
    lhs = np.pad(lhs, (0, width - len(lhs)))
    brp = np.pad(br.astype(complex), (0, width - len(br)))
    return float(np.abs(lhs - brp).max())
