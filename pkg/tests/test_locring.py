import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxkit import locring as L


@pytest.fixture(scope="module")
def tower3():
    return L.tower_build(3, 1, (2, 4))


def test_tower_layers(tower3):
    assert [lay.size for lay in tower3.layers] == [3, 9, 81]
    with pytest.raises(L.LocringError):
        L.tower_build(4, 1, (2,))
    with pytest.raises(L.LocringError):
        L.FieldTower(3, (2, 3))  # 2 does not divide 3


def test_norm_and_trace_surjective(tower3):
    f9, f3 = tower3.layer(2), tower3.layer(1)
    norms = {L.relative_norm(f9, 1, a) for a in range(1, 9)}
    assert norms == {1, 2}  # all of F_3^x
    traces = {L.relative_trace(f9, 1, a) for a in f9.elements()}
    assert traces == {0, 1, 2}


def test_embeddings_commute_with_frobenius(tower3):
    for e in tower3.embeddings:
        for a in e.src.elements():
            assert e(e.src.frobenius(a)) == e.dst.frobenius(e(a))
            # embedded elements are fixed by the source-layer power
            assert e.dst.pow(e(a), e.src.size) == e(a)


def test_frobenius_fixed_counts(tower3):
    f81 = tower3.layer(4)
    for d in (1, 2, 4):
        fixed = sum(1 for a in f81.elements() if f81.pow(a, 3**d) == a)
        assert fixed == 3 ** min(d, 4)


@given(st.integers(0, 80), st.integers(0, 80), st.integers(0, 80))
@settings(max_examples=60, deadline=None)
def test_field_laws(a, b, c):
    lay = L.tower_build(3, 1, (2, 4)).layer(4)
    assert lay.add(a, b) == lay.add(b, a)
    assert lay.mul(a, lay.add(b, c)) == lay.add(lay.mul(a, b), lay.mul(a, c))
    assert lay.mul(lay.mul(a, b), c) == lay.mul(a, lay.mul(b, c))
    if a:
        assert lay.mul(a, lay.inv(a)) == 1


def test_trunc_examples(tower3):
    f9 = tower3.layer(2)
    one = L.trunc_one(2, f9)
    pi = L.TruncElem((0, 1), f9)
    assert ((one + pi) * (one - pi)).coeffs == (1, 0)
    # geometric-series inverse at level 3
    f81 = tower3.layer(4)
    a = 7
    x = L.TruncElem((1, a, 0), f81)
    inv = x.inverse()
    assert (x * inv).coeffs == (1, 0, 0)
    a2 = f81.mul(a, a)
    assert inv.coeffs == (1, f81.neg(a), a2)
    with pytest.raises(L.LocringError):
        L.TruncElem((0, 1), f9).inverse()


def test_trunc_frobenius_is_ring_hom(tower3):
    f81 = tower3.layer(4)
    rng = random.Random(0)
    for _ in range(40):
        x = L.TruncElem(tuple(rng.randrange(81) for _ in range(3)), f81)
        y = L.TruncElem(tuple(rng.randrange(81) for _ in range(3)), f81)
        assert (x + y).frobenius().coeffs == (x.frobenius() + y.frobenius()).coeffs
        assert (x * y).frobenius().coeffs == (x.frobenius() * y.frobenius()).coeffs


def test_sigma_fixed_subring_counts(tower3):
    # level-2 ring over the degree-4 layer: sigma^2 fixes q^4 elements, sigma fixes q^2
    f81 = tower3.layer(4)
    fixed2 = fixed1 = 0
    for a0 in f81.elements():
        for a1 in f81.elements():
            t = L.TruncElem((a0, a1), f81)
            fixed2 += t.frobenius(2).coeffs == t.coeffs
            fixed1 += t.frobenius(1).coeffs == t.coeffs
    assert fixed2 == 81  # q^4
    assert fixed1 == 9  # q^2


def test_trunc_level_mismatch(tower3):
    f9 = tower3.layer(2)
    with pytest.raises(L.LocringError):
        L.trunc_one(2, f9) + L.trunc_one(3, f9)


# --- cyclotomic values -------------------------------------------------------


def test_root_sum_vanishes():
    for p in (3, 5, 7):
        s = L.cyc_sum(p, (L.CycValue.root_of_unity(p, j) for j in range(p)))
        assert s.is_zero()


def test_unit_modulus():
    for p in (3, 5):
        for a in range(p):
            z = L.CycValue.root_of_unity(p, a)
            assert z.abs_square() == L.CycValue.from_int(p, 1)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_gauss_sum(p):
    g = L.cyc_sum(p, (L.CycValue.root_of_unity(p, (x * x) % p) for x in range(p)))
    assert g.abs_square() == L.CycValue.from_int(p, p)


@given(
    st.integers(-9, 9),
    st.integers(-9, 9),
    st.integers(-9, 9),
    st.integers(0, 4),
    st.integers(0, 4),
    st.integers(0, 4),
)
@settings(max_examples=80, deadline=None)
def test_cyc_ring_laws(a, b, c, i, j, k):
    p = 5
    x = L.CycValue.root_of_unity(p, i).scale(a)
    y = L.CycValue.root_of_unity(p, j).scale(b)
    z = L.CycValue.root_of_unity(p, k).scale(c)
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x + y).conjugate() == x.conjugate() + y.conjugate()
    assert (x * y).conjugate() == x.conjugate() * y.conjugate()


def test_conjugation_fixes_rationals():
    p = 5
    x = L.CycValue.from_int(p, 7).scale(Fraction(2, 3))
    assert x.conjugate() == x
    assert x.as_rational() == Fraction(14, 3)
    with pytest.raises(L.LocringError):
        L.CycValue.root_of_unity(p, 1).as_rational()


def test_exact_division():
    p = 3
    x = L.CycValue.root_of_unity(p, 1).scale(6)
    assert x.divide_exact(3) == L.CycValue.root_of_unity(p, 1).scale(2)
    with pytest.raises(L.LocringError):
        x.divide_exact(4)
    with pytest.raises(L.LocringError):
        x.divide_exact(0)
    assert L.CycValue.zero(p).divide_exact(5).is_zero()


def test_mixed_orders_rejected():
    with pytest.raises(L.LocringError):
        L.CycValue.root_of_unity(3, 1) + L.CycValue.root_of_unity(5, 1)


# --- the degree-p extension --------------------------------------------------


def test_extension_field_frobenius(tower3):
    f9 = tower3.layer(2)
    K = L.ExtensionField(f9, 3)
    assert K.size == 729
    rng = random.Random(2)

    def pow_naive(a, e):
        out = 1
        for _ in range(e):
            out = K.mul(out, a)
        return out

    for _ in range(25):
        a = rng.randrange(K.size)
        for e in (3, 9):
            assert K.frob_power(a, e) == pow_naive(a, e)
    # the fixed field of the q^2 power is the embedded base
    fixed = {a for a in K.elements() if K.frob_power(a, 9) == a}
    assert fixed == {K.from_base(b) for b in f9.elements()}
    for b in f9.elements():
        assert K.to_base(K.from_base(b)) == b


def test_extension_field_laws(tower3):
    f9 = tower3.layer(2)
    K = L.ExtensionField(f9, 3)
    rng = random.Random(4)
    for _ in range(50):
        a, b, c = (rng.randrange(K.size) for _ in range(3))
        assert K.mul(a, K.add(b, c)) == K.add(K.mul(a, b), K.mul(a, c))
        assert K.mul(K.mul(a, b), c) == K.mul(a, K.mul(b, c))
        s = rng.randrange(9)
        assert K.scalar_mul(s, a) == K.mul(K.from_base(s), a)
