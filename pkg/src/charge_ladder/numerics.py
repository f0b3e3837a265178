"""Floating-point layer: complex roots of exact polynomials and verification
that root configurations balance as Coulomb charges.

Roots are seeded from companion-matrix eigenvalues and polished by
simultaneous Aberth-Ehrlich iteration in extended precision; forces use the
complex convention F_i = Q_i (k + sum_{j != i} Q_j / (z_i - z_j)), whose zero
set coincides with critical points of the logarithmic energy.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .polyrat import ExactPoly, NotCoprime, NotSquarefree, gcd_poly, is_squarefree

__all__ = [
    "ChargeSystem",
    "CollisionError",
    "ConvergenceFailure",
    "EquilibriumReport",
    "MultipleRootWarning",
    "DEFAULT_ROOT_TOL",
    "DEFAULT_FORCE_TOL",
    "COLLISION_FACTOR",
    "force",
    "roots",
    "to_floats",
    "verify_equilibrium",
]

DEFAULT_ROOT_TOL = 1e-12
DEFAULT_FORCE_TOL = 1e-8
COLLISION_FACTOR = 1e-10


class CollisionError(ValueError):
    """Two charges sit closer than the collision tolerance."""


class ConvergenceFailure(RuntimeError):
    """Root polishing failed to meet the residual target."""


class MultipleRootWarning(UserWarning):
    """Near-coincident roots reported; inputs here should be squarefree."""


@dataclass
class ChargeSystem:
    """Point charges in the complex plane, optionally in a homogeneous field."""

    positions: list[complex]
    charges: list[float]
    field: complex = 0.0

    def __post_init__(self):
        if len(self.positions) != len(self.charges):
            raise ValueError("positions and charges must have equal length")
        self.positions = [complex(z) for z in self.positions]
        self.charges = [float(q) for q in self.charges]
        self.field = complex(self.field)

    def __len__(self) -> int:
        return len(self.positions)

    def diameter(self) -> float:
        if len(self.positions) < 2:
            return 1.0
        zs = np.asarray(self.positions)
        return float(np.abs(zs[:, None] - zs[None, :]).max())

    def to_json(self) -> dict:
        return {
            "positions": [[z.real, z.imag] for z in self.positions],
            "charges": list(self.charges),
            "field": [self.field.real, self.field.imag],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ChargeSystem":
        fld = obj.get("field", 0.0)
        if isinstance(fld, (list, tuple)):
            fld = complex(fld[0], fld[1])
        return cls(
            positions=[complex(re, im) for re, im in obj["positions"]],
            charges=list(obj["charges"]),
            field=fld,
        )


def to_floats(p: ExactPoly) -> np.ndarray:
    """Ascending-degree float64 coefficients (nearest-double rounding)."""
    return np.array([c.numerator / c.denominator for c in p.coeffs], dtype=float)


def _horner(coeffs: np.ndarray, zs: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(zs)
    for c in coeffs[::-1]:
        acc = acc * zs + c
    return acc


def roots(p: ExactPoly, tol: float = DEFAULT_ROOT_TOL) -> list[complex]:
    """All deg(p) complex roots of p.

    Companion-matrix eigenvalues provide the initial guess; Aberth-Ehrlich
    simultaneous iteration in extended precision polishes until every residual
    satisfies |p(r)| <= tol * max|coeff| * max(1, |r|)**deg.  Near-coincident
    roots trigger MultipleRootWarning (generated families are squarefree, so
    this flags an upstream problem rather than a legitimate outcome).
    """
    deg = p.degree
    if deg < 1:
        raise ValueError("root extraction needs degree >= 1")
    scale = max(abs(c) for c in p.coeffs)
    cf = np.array([float(c / scale) for c in p.coeffs], dtype=float)
    if deg == 1:
        return [complex(-cf[0] / cf[1])]
    seeds = np.roots(cf[::-1]).astype(complex)
    zs = seeds.astype(np.clongdouble)
    coeffs = cf.astype(np.longdouble)
    dcoeffs = (cf[1:] * np.arange(1, len(cf))).astype(np.longdouble)
    n = int(deg)
    converged = False
    for _ in range(120):
        pv = _horner(coeffs, zs)
        bound = tol * np.maximum(1.0, np.abs(zs).astype(float)) ** n
        if np.all(np.abs(pv).astype(float) <= bound):
            converged = True
            break
        dv = _horner(dcoeffs, zs)
        dv = np.where(dv == 0, np.clongdouble(1e-300), dv)
        newton = pv / dv
        diff = zs[:, None] - zs[None, :]
        np.fill_diagonal(diff, np.clongdouble(np.inf))
        repel = (1.0 / diff).sum(axis=1)
        denom = 1.0 - newton * repel
        denom = np.where(denom == 0, np.clongdouble(1e-300), denom)
        step = newton / denom
        zs = zs - step
    if not converged:
        pv = _horner(coeffs, zs)
        bound = tol * np.maximum(1.0, np.abs(zs).astype(float)) ** n
        if not np.all(np.abs(pv).astype(float) <= bound):
            raise ConvergenceFailure(
                f"root polishing stalled; worst residual {float(np.abs(pv).max()):.3e}")
    out = zs.astype(complex)
    spread = max(float(np.abs(out).max()), 1.0)
    diff = np.abs(out[:, None] - out[None, :])
    np.fill_diagonal(diff, np.inf)
    if diff.min() < 1e-7 * spread:
        warnings.warn("near-coincident roots detected", MultipleRootWarning)
    return [complex(z) for z in out]


def _pairwise_terms(system: ChargeSystem) -> np.ndarray:
    """Matrix Q_j / (z_i - z_j) with zero diagonal; raises on collisions."""
    zs = np.asarray(system.positions, dtype=complex)
    qs = np.asarray(system.charges, dtype=float)
    n = len(zs)
    if n < 2:
        return np.zeros((n, n), dtype=complex)
    diff = zs[:, None] - zs[None, :]
    dist = np.abs(diff)
    np.fill_diagonal(dist, np.inf)
    threshold = COLLISION_FACTOR * system.diameter()
    if dist.min() <= threshold:
        i, j = np.unravel_index(int(dist.argmin()), dist.shape)
        raise CollisionError(f"charges {i} and {j} within {dist.min():.3e}")
    np.fill_diagonal(diff, 1.0)
    terms = qs[None, :] / diff
    np.fill_diagonal(terms, 0.0)
    return terms


def force(system: ChargeSystem) -> list[complex]:
    """Complex force on every charge: F_i = Q_i (k + sum_{j!=i} Q_j/(z_i - z_j)).

    All components vanishing is exactly the critical-point condition of the
    logarithmic pair energy (plus linear field term).
    """
    terms = _pairwise_terms(system)
    qs = np.asarray(system.charges, dtype=float)
    f = qs * (system.field + terms.sum(axis=1))
    return [complex(v) for v in f]


@dataclass
class EquilibriumReport:
    """Force audit of a polynomial pair's root configuration."""

    max_force_norm: float
    per_charge_forces: list[complex]
    root_residuals: list[float]
    tolerances: dict = field(default_factory=dict)

    @property
    def equilibrium(self) -> bool:
        return self.max_force_norm < self.tolerances.get("force", DEFAULT_FORCE_TOL)

    def to_json(self) -> dict:
        return {
            "max_force_norm": self.max_force_norm,
            "equilibrium": self.equilibrium,
            "per_charge_forces": [[f.real, f.imag] for f in self.per_charge_forces],
            "root_residuals": self.root_residuals,
            "tolerances": dict(self.tolerances),
        }


def verify_equilibrium(
    p: ExactPoly,
    q: ExactPoly,
    lam,
    k=0,
    tol: float = DEFAULT_FORCE_TOL,
    root_tol: float = DEFAULT_ROOT_TOL,
) -> EquilibriumReport:
    """Extract roots of p (charge +1) and q (charge -lam), evaluate all forces
    in field k and report the maximum force norm against tol."""
    for name, poly in (("p", p), ("q", q)):
        if poly.is_zero or not is_squarefree(poly):
            raise NotSquarefree(f"{name} must be nonzero and squarefree")
    if gcd_poly(p, q).degree != 0:
        raise NotCoprime("p and q share a root")
    lam_f = float(Fraction(lam))
    k_f = complex(float(Fraction(k))) if not isinstance(k, complex) else k
    positions: list[complex] = []
    charges: list[float] = []
    residuals: list[float] = []

    def add(poly: ExactPoly, charge: float):
        if poly.degree < 1:
            return
        cf = to_floats(poly)
        for r in roots(poly, root_tol):
            positions.append(r)
            charges.append(charge)
            residuals.append(float(abs(_horner(cf, np.array([r], dtype=complex))[0])))

    add(p, 1.0)
    add(q, -lam_f)
    system = ChargeSystem(positions, charges, field=k_f)
    forces = force(system) if positions else []
    max_norm = max((abs(f) for f in forces), default=0.0)
    return EquilibriumReport(
        max_force_norm=max_norm,
        per_charge_forces=forces,
        root_residuals=residuals,
        tolerances={"force": tol, "root": root_tol, "collision": COLLISION_FACTOR},
    )
