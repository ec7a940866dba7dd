"""Finite field tables, vector helpers, and affine subspaces."""

import itertools

from hypothesis import given
from hypothesis import strategies as st
import pytest

from replab.fields import AffineSubspace, FiniteField

FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (13, 1), (2, 4)]


@pytest.mark.parametrize("p,r", FIELDS)
def test_construction_and_inverses(p, r):
    # the constructor itself checks every axiom exhaustively
    f = FiniteField(p, r)
    assert f.order == p**r
    assert (f.zero, f.one) == (0, 1)
    for a in f.elements:
        assert f.add(a, f.neg(a)) == 0
        if a != 0:
            assert f.mul(a, f.inv(a)) == 1


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        FiniteField(3).inv(0)


def test_rejects_non_prime_characteristic():
    for p in (0, 1, 4, 6, 9):
        with pytest.raises(ValueError):
            FiniteField(p)


def test_rejects_bad_degree_and_order_cap():
    with pytest.raises(ValueError):
        FiniteField(2, 0)
    with pytest.raises(ValueError):
        FiniteField(17)
    with pytest.raises(ValueError):
        FiniteField(2, 5)
    assert FiniteField(17, order_cap=17).order == 17


def test_gf4_tables():
    # reduction x**2 + x + 1; element 2 is t, and t*t = t + 1 = 3
    f = FiniteField(2, 2)
    assert f.reduction == (1, 1, 1)
    assert f.mul(2, 2) == 3
    assert f.mul(2, 3) == 1
    assert f.add(2, 3) == 1
    assert f.additive_generators() == (1, 2)


def test_gf8_and_gf9_reductions():
    # the smallest monic irreducibles in digit encoding: low coefficients
    # compare first, so x**3 + x**2 + 1 beats x**3 + x + 1 over GF(2)
    assert FiniteField(2, 3).reduction == (1, 0, 1, 1)  # x**3 + x**2 + 1
    assert FiniteField(3, 2).reduction == (1, 0, 1)     # x**2 + 1


def test_prime_field_is_mod_arithmetic():
    f = FiniteField(7)
    for a in range(7):
        for b in range(7):
            assert f.add(a, b) == (a + b) % 7
            assert f.mul(a, b) == (a * b) % 7


def test_additive_generators_span():
    f = FiniteField(3, 2)
    gens = f.additive_generators()
    assert gens == (1, 3)
    reachable = set()
    for digits in itertools.product(range(3), repeat=2):
        acc = 0
        for g, d in zip(gens, digits):
            for _ in range(d):
                acc = f.add(acc, g)
        reachable.add(acc)
    assert reachable == set(f.elements)


def test_field_identity():
    assert FiniteField(2, 2) == FiniteField(2, 2)
    assert FiniteField(2, 2) != FiniteField(3)
    assert hash(FiniteField(5)) == hash(FiniteField(5))
    assert repr(FiniteField(3, 2)) == "FiniteField(p=3, r=2)"


@given(st.sampled_from([(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)]),
       st.integers(0, 10**6), st.integers(0, 10**6))
def test_arithmetic_relations(pr, x, y):
    f = FiniteField(*pr)
    a, b = x % f.order, y % f.order
    assert f.sub(f.add(a, b), b) == a
    assert f.neg(f.neg(a)) == a
    assert f.mul(a, b) == f.mul(b, a)
    if b != 0:
        assert f.mul(f.mul(a, b), f.inv(b)) == a


def test_vectors_are_little_endian():
    f = FiniteField(3)
    vecs = f.vectors(2)
    assert len(vecs) == 9
    assert vecs[0] == (0, 0)
    assert vecs[1] == (1, 0)
    assert vecs[5] == (2, 1)
    for i, v in enumerate(vecs):
        assert f.vector_code(v) == i


def test_vector_arithmetic():
    f = FiniteField(2, 2)
    u, v = (1, 2), (3, 2)
    assert f.vec_add(u, v) == (f.add(1, 3), f.add(2, 2))
    assert f.vec_sub(f.vec_add(u, v), v) == u
    assert f.vec_scale(2, u) == (f.mul(2, 1), f.mul(2, 2))
    with pytest.raises(ValueError):
        f.vec_add((1,), (1, 2))


def test_affine_subspace_points_and_order():
    f = FiniteField(3)
    sub = AffineSubspace(f, [(1, 0, 2), (0, 1, 1)], (1, 1, 1))
    assert sub.dimension == 2
    assert sub.ambient_dim == 3
    assert len(sub) == 9
    pts = sub.points()
    assert len(set(pts)) == 9
    coeffs = list(itertools.product(f.elements, repeat=2))
    for c, p in zip(coeffs, pts):
        assert sub.point_at(c) == p
    assert sub.point_at((0, 0)) == (1, 1, 1)


def test_affine_subspace_rejects_bad_input():
    f = FiniteField(5)
    with pytest.raises(ValueError):
        AffineSubspace(f, [(1, 2), (2, 4)], (0, 0))  # dependent
    with pytest.raises(ValueError):
        AffineSubspace(f, [], (0, 0))
    with pytest.raises(ValueError):
        AffineSubspace(f, [(1, 0, 0)], (0, 0))  # length mismatch
    with pytest.raises(ValueError):
        AffineSubspace(f, [(1, 7)], (0, 0))  # entry outside the field
    with pytest.raises(ValueError):
        AffineSubspace(f, [(1, 0)], (0, 0)).point_at((1, 2))


@given(st.integers(0, 10**4), st.integers(0, 10**4), st.integers(0, 10**4))
def test_affine_points_satisfy_linearity(a, b, c):
    f = FiniteField(3)
    sub = AffineSubspace(f, [(1, 1, 2)], (0, 1, 0))
    c1, c2 = a % 3, b % 3
    p1, p2 = sub.point_at((c1,)), sub.point_at((c2,))
    # difference of two points lies in the span of the basis
    diff = f.vec_sub(p1, p2)
    assert diff == f.vec_scale(f.sub(c1, c2), sub.basis[0])
