import cmath
import random
from fractions import Fraction as F

import pytest

from charge_ladder.generators import LadderState, adler_moser, lambda2_ladder
from charge_ladder.numerics import (
    ChargeSystem,
    CollisionError,
    MultipleRootWarning,
    force,
    roots,
    to_floats,
    verify_equilibrium,
)
from charge_ladder.polyrat import ExactPoly, NotCoprime, NotSquarefree
from conftest import random_ladder_state

Z = ExactPoly.x()


def sorted_roots(rs):
    return sorted(rs, key=lambda c: (round(c.real, 9), round(c.imag, 9)))


# -- root extraction -------------------------------------------------------------


def test_roots_quadratic():
    got = sorted_roots(roots(Z ** 2 + 1))
    assert abs(got[0] + 1j) < 1e-12 and abs(got[1] - 1j) < 1e-12


def test_roots_quintic_closed_form():
    got = sorted_roots(roots(Z ** 5 + 1))
    expect = sorted_roots(cmath.exp(1j * cmath.pi * (2 * m + 1) / 5) for m in range(5))
    assert max(abs(a - b) for a, b in zip(got, expect)) < 1e-12


def test_roots_ladder_quadratic():
    _, qm1 = lambda2_ladder(-1, LadderState(-1, tau={-1: 1}))
    got = sorted_roots(roots(qm1))
    assert abs(got[0] + 1j) < 1e-12 and abs(got[1] - 1j) < 1e-12


def test_roots_residual_bound():
    rng = random.Random(8)
    for _ in range(15):
        coeffs = [F(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(rng.randint(1, 14))]
        p = ExactPoly(coeffs + [F(1)])
        if p.degree < 1:
            continue
        tol = 1e-12
        cf = to_floats(p)
        scale = float(max(abs(c) for c in cf))
        for r in roots(p, tol):
            horner = sum(c * r ** d for d, c in enumerate(cf))
            assert abs(horner) <= tol * scale * max(1.0, abs(r)) ** int(p.degree)


def test_roots_requires_degree():
    with pytest.raises(ValueError):
        roots(ExactPoly.one())


def test_roots_multiple_root_warning():
    with pytest.warns(MultipleRootWarning):
        roots(Z ** 2 - 2 * Z + 1)


# -- forces ---------------------------------------------------------------------


def test_two_mixed_charges_never_balance():
    system = ChargeSystem([1 + 0j, -1 + 0j], [1.0, -2.0])
    f = force(system)
    assert abs(f[0] + 1.0) < 1e-15  # Q1 * (-2)/(z1 - z2) = -1
    assert abs(f[0]) > 1e-3


def test_quintic_pair_is_equilibrium():
    positions = roots(Z ** 5 + 1) + [0j]
    system = ChargeSystem(positions, [1.0] * 5 + [-2.0])
    assert max(abs(v) for v in force(system)) < 1e-10


def test_field_pair_is_equilibrium():
    positions = roots(Z ** 2 - 3 * Z + 3) + [0j]
    system = ChargeSystem(positions, [1.0, 1.0, -2.0], field=1.0)
    assert max(abs(v) for v in force(system)) < 1e-10


def test_force_conjugation_symmetry():
    rng = random.Random(3)
    zs = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(6)]
    qs = [1, 1, -2, 1, -2, 1]
    f = force(ChargeSystem(zs, qs, field=0.3 + 0.2j))
    f_conj = force(ChargeSystem([z.conjugate() for z in zs], qs, field=0.3 - 0.2j))
    assert max(abs(a.conjugate() - b) for a, b in zip(f, f_conj)) < 1e-14


def test_zero_total_force_fieldless():
    rng = random.Random(9)
    for _ in range(10):
        n = rng.randint(2, 8)
        zs = [complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(n)]
        qs = [rng.choice([1.0, -2.0, -1.5]) for _ in range(n)]
        total = sum(force(ChargeSystem(zs, qs)))
        assert abs(total) < 1e-12 * max(1.0, n)


def test_collision_error():
    with pytest.raises(CollisionError):
        force(ChargeSystem([1 + 0j, 1 + 0j, -1 + 0j], [1, 1, -2]))


def test_charge_system_validation():
    with pytest.raises(ValueError):
        ChargeSystem([0j], [1.0, 1.0])


# -- equilibrium verification -------------------------------------------------------


def test_verify_equilibrium_adler_moser():
    th2 = adler_moser(2, {2: 1})
    th3 = adler_moser(3, {2: 1, 3: 2})
    report = verify_equilibrium(th2, th3, 1)
    assert report.max_force_norm < 1e-8
    assert report.equilibrium


def test_verify_equilibrium_ladder_pair():
    rng = random.Random(55)
    p2, q2 = lambda2_ladder(2, random_ladder_state(rng, 2))
    report = verify_equilibrium(p2, q2, 2)
    assert report.max_force_norm < 1e-8


def test_verify_equilibrium_field_case():
    report = verify_equilibrium(Z ** 2 - 3 * Z + 3, Z, 2, k=1)
    assert report.max_force_norm < 1e-10


def test_verify_equilibrium_rejects_non_solution():
    report = verify_equilibrium(Z ** 2 - 1, Z, 1)
    assert report.max_force_norm > 1e-3
    assert not report.equilibrium


def test_verify_equilibrium_preconditions():
    with pytest.raises(NotSquarefree):
        verify_equilibrium(Z ** 2, Z + 1, 1)
    with pytest.raises(NotCoprime):
        verify_equilibrium(Z ** 2 - 1, Z - 1, 1)


def test_report_echoes_tolerances_and_serializes():
    report = verify_equilibrium(Z ** 2 - 1, Z, 1, tol=1e-7, root_tol=1e-11)
    assert report.tolerances == {"force": 1e-7, "root": 1e-11, "collision": 1e-10}
    blob = report.to_json()
    assert blob["equilibrium"] is False
    assert len(blob["per_charge_forces"]) == 3
    assert len(blob["root_residuals"]) == 3
