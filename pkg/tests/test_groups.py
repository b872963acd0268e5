import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skewlab.errors import ContractError, InputError
from skewlab.groups import (
    FiniteGroup,
    SolvableSeries,
    abelian_exponent_vector,
    alternating_group,
    composition_series,
    is_solvable,
    symmetric_group,
)


def test_cyclic_series():
    g = FiniteGroup.cyclic(4)
    s = composition_series(g)
    assert s.primes == (2, 2)
    assert s.subgroups[1] == (0, 2)
    assert g.labels[s.generators[0]] == "s2" and g.labels[s.generators[1]] == "s"
    assert abelian_exponent_vector(g, s, 2, level=1) == (1,)


def test_klein_series():
    g = FiniteGroup.klein_four()
    s = composition_series(g)
    assert s.primes == (2, 2)
    s2 = s.generators[1]
    assert abelian_exponent_vector(g, s, g.power(s2, 2), level=1) == (0,)


def test_a5_not_solvable():
    g = alternating_group(5)
    assert g.order == 60
    assert not is_solvable(g)
    with pytest.raises(ContractError):
        composition_series(g)


def test_s4_series():
    g = symmetric_group(4)
    s = composition_series(g)
    assert s.primes == (2, 2, 3, 2)
    # the explicit chain id < <(01)(23)> < V < A4 < S4
    perms = [tuple(p) for p in sorted(itertools.permutations(range(4)))]
    idx = {p: i for i, p in enumerate(perms)}
    v = [(0, 1, 2, 3), (1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0)]
    a4 = [i for i in range(24) if _even(perms[i])]
    chain = [[idx[v[0]]], [idx[v[0]], idx[v[1]]], [idx[p] for p in v], a4, list(range(24))]
    explicit = SolvableSeries.from_subgroups(g, chain)
    assert explicit.primes == (2, 2, 3, 2)


def _even(p):
    return sum(1 for i in range(4) for j in range(i + 1, 4) if p[i] > p[j]) % 2 == 0


def test_invalid_table():
    with pytest.raises(InputError):
        FiniteGroup(["a", "b"], [[0, 1], [0, 1]])
    with pytest.raises(InputError):
        FiniteGroup(["a", "b", "c"], [[0, 1, 2], [1, 0, 2], [2, 2, 0]])


def test_bad_series_rejected():
    g = FiniteGroup.cyclic(4)
    with pytest.raises(ContractError):
        SolvableSeries.from_subgroups(g, [["id"], ["id", "s", "s2", "s3"]])


@pytest.mark.parametrize("g", [FiniteGroup.cyclic(6), FiniteGroup.klein_four(), symmetric_group(3), symmetric_group(4),
                               FiniteGroup.cyclic(8), alternating_group(4)], ids=["Z6", "V4", "S3", "S4", "Z8", "A4"])
def test_series_properties(g):
    s = composition_series(g)
    prod = 1
    for q in s.primes:
        prod *= q
    assert prod == g.order
    for lo, hi in zip(s.subgroups, s.subgroups[1:]):
        assert g.is_normal(lo, within=hi)
    if g.is_abelian():
        for i in range(s.length + 1):
            box = itertools.product(*[range(q) for q in s.primes[:i]])
            images = {g.product(g.power(x, e) for x, e in zip(s.generators, exps)) for exps in box}
            assert images == set(s.subgroups[i])
            for x in s.subgroups[i]:
                assert abelian_exponent_vector(g, s, x, level=i) is not None


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=2, max_value=24))
def test_cyclic_always_solvable(n):
    g = FiniteGroup.cyclic(n)
    s = composition_series(g)
    assert is_solvable(g)
    prod = 1
    for q in s.primes:
        prod *= q
    assert prod == n


def test_json_round_trip():
    g = symmetric_group(3)
    assert FiniteGroup.from_json(g.to_json()).table == g.table
