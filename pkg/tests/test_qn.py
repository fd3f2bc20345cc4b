import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pql.cyclo import ring_context, xi, xi_power
from pql.qn import (qn_commutator, qn_element_order, qn_generators, qn_identity, qn_inv, qn_mul, qn_pow,
                    qn_pow_closed_form, random_word_element, verify_metabelian_periodic)


def as_matrix(x):
    ctx = x.context
    return [[xi_power(ctx, x.k_exp), x.upper], [ctx.zero(), ctx.one()]]


def matmul(m1, m2):
    # plain 2x2 product over R, the oracle for qn_mul
    return [[m1[i][0] * m2[0][j] + m1[i][1] * m2[1][j] for j in range(2)] for i in range(2)]


def test_generators_examples():
    A, B = qn_generators(3)
    assert (A.k_exp, A.upper.is_zero()) == (1, True)
    assert (B.k_exp, B.upper == B.context.one()) == (0, True)
    A5, _ = qn_generators(5)
    assert A5.context.n == 5
    with pytest.raises(ValueError):
        qn_generators(2)


def test_product_example():
    A, B = qn_generators(3)
    ctx = A.context
    AB = A * B
    assert AB.k_exp == 1 and AB.upper == xi(ctx)


def test_commutator_example():
    for n in range(3, 13):
        A, B = qn_generators(n)
        c = qn_commutator(A, B)
        ctx = A.context
        assert c.k_exp == 0 and c.upper == xi(ctx) - ctx.one()


def test_order_examples():
    A5, _ = qn_generators(5)
    A7, B7 = qn_generators(7)
    assert qn_element_order(A5) == 5
    assert qn_element_order(qn_commutator(A7, B7)) == 7
    assert qn_element_order(qn_identity(A5.context)) == 1


def test_metabelian_examples():
    assert verify_metabelian_periodic(7, 1000, 0).passed
    assert verify_metabelian_periodic(3, 1000, 0).passed


@st.composite
def elements(draw, count=2):
    n = draw(st.integers(3, 12))
    A, B = qn_generators(n)
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    return tuple(random_word_element(A, B, rng) for _ in range(count))


@settings(max_examples=200)
@given(elements(2))
def test_mul_matches_matrix_oracle(xy):
    x, y = xy
    lhs = as_matrix(qn_mul(x, y))
    rhs = matmul(as_matrix(x), as_matrix(y))
    assert lhs[0] == rhs[0] and lhs[1] == rhs[1]


@settings(max_examples=200)
@given(elements(3))
def test_group_axioms(xyz):
    x, y, z = xyz
    e = qn_identity(x.context)
    assert (x * y) * z == x * (y * z)
    assert x * e == x and e * x == x
    assert x * qn_inv(x) == e and qn_inv(x) * x == e


@settings(max_examples=200)
@given(elements(2))
def test_periodic_and_commutators_unitriangular(xy):
    x, y = xy
    n = x.context.n
    assert qn_pow(x, n).is_identity()
    assert qn_pow_closed_form(x, n) == qn_pow(x, n)
    assert qn_commutator(x, y).diagonal() == x.context.one()


@settings(max_examples=100)
@given(elements(4))
def test_derived_subgroup_abelian(xs):
    a, b, c, d = xs
    c1, c2 = qn_commutator(a, b), qn_commutator(c, d)
    assert c1 * c2 == c2 * c1


@settings(max_examples=100)
@given(elements(2))
def test_equality_respects_multiplication(xy):
    x, y = xy
    n = x.context.n
    shifted = type(x)(x.context, x.k_exp + n, x.upper)
    assert shifted == x
    assert shifted * y == x * y and hash(shifted) == hash(x)


def test_closed_form_powers():
    A, B = qn_generators(9)
    x = A * B * A
    for m in range(12):
        assert qn_pow_closed_form(x, m) == qn_pow(x, m)


def test_serialization():
    A, B = qn_generators(5)
    assert (A * B).to_json() == {"k": 1, "z": [0, 1, 0, 0], "n": 5}
    assert ring_context(5) is A.context
