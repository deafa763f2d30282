import functools
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from gridrig.characterize import random_framework, random_quotient
from gridrig.geometry import LINF, SymmetricFramework
from gridrig.quotient import SignedQuotientGraph
from gridrig.sparsity import enumerate_tight_graphs

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def quotient_from_seed(seed: int, max_orbits: int = 5, **kw) -> SignedQuotientGraph:
    return random_quotient(random.Random(seed), max_orbits, **kw)


def framework_from_seed(seed: int, max_orbits: int = 5):
    return random_framework(random.Random(seed), max_orbits=max_orbits)


# three orbits: a-b and b-c doubled, c-a single with trivial gain
TWO_K3 = [("a", "b", 1), ("a", "b", -1), ("c", "b", 1), ("c", "b", -1), ("c", "a", 1)]


@pytest.fixture
def two_k3():
    return SignedQuotientGraph.from_triples("abc", TWO_K3)


@pytest.fixture
def tall_triangles(two_k3):
    # normalized coordinates: the mirror is the vertical axis
    reps = {"a": (-2, 0), "b": (-1, Fraction(1, 2)), "c": (Fraction(-3, 2), Fraction(3, 2))}
    return SymmetricFramework.from_normalized(two_k3, reps, LINF)


@pytest.fixture
def flat_triangles(two_k3):
    reps = {"a": (Fraction(-1, 2), 0), "b": (Fraction(-1, 2), Fraction(3, 2)), "c": (Fraction(-3, 2), 0)}
    return SymmetricFramework.from_normalized(two_k3, reps, LINF)


@pytest.fixture
def fixed_bar_graph():
    # loop at c is the fixed bar between the two outer upper joints
    q = SignedQuotientGraph.from_triples(
        "abc", [("a", "b", 1), ("a", "b", -1), ("c", "b", 1), ("c", "c", -1), ("c", "a", 1)]
    )
    return q


@functools.lru_cache(maxsize=None)
def all_tight_graphs(max_orbits: int = 4) -> tuple[SignedQuotientGraph, ...]:
    """Every (2,2,1)-tight graph up to switching isomorphism, cached per session."""
    return tuple(g for n in range(1, max_orbits + 1) for g in enumerate_tight_graphs(n))
