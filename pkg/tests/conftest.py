"""Shared fixtures: the reference parameter set and random admissible sets."""

import numpy as np
import pytest

from zenerwave.params import MaterialParams, RestrictionKind, Verdict, restriction_rhs, validate


@pytest.fixture
def case1():
    """a₁=1, a₂=20, b₁=0.1, b₂=2, α=0.5, β=0.1 on a semi-infinite rod."""
    return MaterialParams(a1=1.0, a2=20.0, b1=0.1, b2=2.0, alpha=0.5, beta=0.1)


@pytest.fixture
def elastic():
    return MaterialParams(a1=1.0, a2=1.0, b1=0.1, b2=0.1, alpha=0.5, beta=0.1)


@pytest.fixture
def admissible_sets():
    """Factory for random parameter sets with b₂ = a₂b₁/a₁ and positive margins."""

    def make(n, seed):
        rng = np.random.default_rng(seed)
        out = []
        while len(out) < n:
            alpha = rng.uniform(0.1, 0.9)
            beta = rng.uniform(0.05, 1.0)
            a1 = rng.uniform(0.1, 5.0)
            a2 = a1 * rng.uniform(1.5, 30.0)
            bound = a1 / max(
                restriction_rhs(alpha, beta, RestrictionKind.CTG),
                restriction_rhs(alpha, beta, RestrictionKind.TG),
            )
            b1 = bound * rng.uniform(0.05, 0.95)
            params = MaterialParams.from_td1(a1, a2, b1, alpha, beta)
            if validate(params).verdict is Verdict.ADMISSIBLE_STRICT:
                out.append(params)
        return out

    return make
