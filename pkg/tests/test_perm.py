import math

import pytest
from hypothesis import given

from irpdf.perm import (
    Perm,
    compose,
    conjugate,
    cycle_counts,
    from_cycles,
    inverse,
    parse_perm,
    parse_perm_list,
    restricted_inversion_parity,
    sign,
)

from conftest import perms

e = Perm()


def table(p, n):
    return [p(i) for i in range(1, n + 1)]


def product_sign(p, positions):
    """Oracle: sign of the literal product of differences."""
    prod = 1
    for a in positions:
        for b in positions:
            if a < b:
                prod *= p(b) - p(a)
    return 1 if prod > 0 else -1


def test_from_cycles_empty_is_identity():
    assert from_cycles([]) == e
    assert from_cycles([]).is_identity()


def test_from_cycles_transposition():
    t = from_cycles([[1, 2]])
    assert table(t, 3) == [2, 1, 3]


def test_from_cycles_two_cycles():
    p = from_cycles([[1, 2], [3, 4, 5]])
    assert p.support == {1, 2, 3, 4, 5}
    # order by brute force: smallest k with p^k = e
    q, k = p, 1
    while not q.is_identity():
        q, k = compose(p, q), k + 1
    assert k == 6 == p.order()


@pytest.mark.parametrize("cycles,point", [([[1, 2, 1]], 1), ([[1, 2], [2, 3]], 2), ([[4], [5, 4]], 4)])
def test_from_cycles_duplicate_names_point(cycles, point):
    with pytest.raises(ValueError, match=str(point)):
        from_cycles(cycles)


def test_compose_convention():
    p, q = parse_perm("(1 2)"), parse_perm("(2 3)")
    pq = compose(p, q)
    assert table(pq, 3) == [p(q(i)) for i in (1, 2, 3)] == [2, 3, 1]
    assert pq == parse_perm("(1 2 3)")


def test_inverse_examples():
    assert inverse(e) == e
    assert inverse(parse_perm("(1 2)")) == parse_perm("(1 2)")
    assert inverse(parse_perm("(1 2 3)")) == parse_perm("(1 3 2)")


@given(perms(), perms(), perms())
def test_group_laws(p, q, r):
    assert compose(compose(p, q), r) == compose(p, compose(q, r))
    assert compose(e, p) == p == compose(p, e)
    assert compose(p, inverse(p)) == e == compose(inverse(p), p)
    assert compose(p, q).support <= p.support | q.support
    assert inverse(p).support == p.support


def test_cycle_counts_examples():
    assert cycle_counts(e) == {}
    assert cycle_counts(parse_perm("(1 2)(3 4 5)")) == {2: 1, 3: 1}
    p = parse_perm("(1 2)(3 4)(5 6 7)")
    assert cycle_counts(p) == {2: 2, 3: 1}
    assert sum(k * r for k, r in cycle_counts(p).items()) == 7 == len(p.support)


@given(perms(), perms())
def test_cycle_counts_conjugation_invariant(g, h):
    assert cycle_counts(g) == cycle_counts(compose(compose(h, g), inverse(h)))
    assert conjugate(g, h) == compose(compose(h, g), inverse(h))


def test_restricted_parity_examples():
    assert restricted_inversion_parity(e, [1, 4, 9]) == 1
    assert restricted_inversion_parity(parse_perm("(1 2)"), [1, 2]) == -1
    assert restricted_inversion_parity(parse_perm("(1 2 3)"), [1, 2, 3]) == 1


@pytest.mark.parametrize("positions", [[2, 1], [1, 1], [3, 5, 4]])
def test_restricted_parity_rejects_unsorted(positions):
    with pytest.raises(ValueError):
        restricted_inversion_parity(parse_perm("(1 2)"), positions)


@given(perms())
def test_parity_on_full_interval_is_sign(p):
    n = max(p.max_support(), 1)
    full = restricted_inversion_parity(p, list(range(1, n + 1)))
    assert full == sign(p) == product_sign(p, range(1, n + 1))
    expected = math.prod((-1) ** ((k + 1) * r) for k, r in cycle_counts(p).items())
    assert full == expected


@given(perms(max_point=8))
def test_parity_off_support_is_plus_one(p):
    top = p.max_support()
    assert restricted_inversion_parity(p, [top + 1, top + 3, top + 10]) == 1


@given(perms())
def test_parity_matches_product_oracle_on_subsets(p):
    n = max(p.max_support(), 1)
    positions = [i for i in range(1, n + 1) if (i * 7 + n) % 3]
    assert restricted_inversion_parity(p, positions) == product_sign(p, positions)


def test_parse_and_print_roundtrip():
    for text in ["e", "(1 2)", "(1 2)(3 4 5)", "(2 7 4)(5 6)"]:
        assert str(parse_perm(text)) == text
    assert parse_perm("(3 1 2)") == parse_perm("(1 2 3)")
    assert parse_perm("(1)(2 3)") == parse_perm("(2 3)")
    assert parse_perm_list("(1 2);(1 2 3)") == [parse_perm("(1 2)"), parse_perm("(1 2 3)")]
    with pytest.raises(ValueError):
        parse_perm("1 2")


def test_immutability_and_hash():
    p = parse_perm("(1 2)")
    assert {p: 1}[from_cycles([[2, 1]])] == 1
    with pytest.raises(AttributeError):
        p.foo = 1
    assert Perm({1: 1, 2: 2}) == e
