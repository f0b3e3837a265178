import random
from fractions import Fraction

import pytest

from charge_ladder.generators import LadderState, adler_moser, lambda2_ladder


def rational(rng: random.Random, span: int = 4, max_den: int = 3) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, max_den))


def nonzero_rational(rng: random.Random, span: int = 4, max_den: int = 3) -> Fraction:
    while True:
        value = rational(rng, span, max_den)
        if value != 0:
            return value


def random_ladder_state(rng: random.Random, i: int) -> LadderState:
    """Generic constants for every step |i| uses; nonzero to stay squarefree."""
    steps = range(1, i + 1) if i >= 0 else range(-1, i - 1, -1)
    return LadderState(
        i,
        t={s: nonzero_rational(rng) for s in steps},
        tau={s: nonzero_rational(rng) for s in steps},
    )


@pytest.fixture(scope="session")
def ladder_chain():
    """One consistent constants chain with all pairs for |i| <= 4."""
    rng = random.Random(20240915)
    t = {s: nonzero_rational(rng) for s in range(-5, 6)}
    tau = {s: nonzero_rational(rng) for s in range(-5, 6)}
    t[-1] = Fraction(0)  # keeps the downward seed at p_{-1} = z, like the tables
    pairs = {}
    for i in range(-4, 5):
        pairs[i] = lambda2_ladder(i, LadderState(i, t, tau))
    return pairs


@pytest.fixture(scope="session")
def adler_moser_chain():
    """theta_0 .. theta_7 on one consistent set of constants."""
    rng = random.Random(1905)
    constants = {s: nonzero_rational(rng) for s in range(2, 8)}
    return [adler_moser(n, constants) for n in range(8)]
