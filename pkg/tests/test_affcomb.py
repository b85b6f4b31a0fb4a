from fractions import Fraction

import pytest

from coxkit import affcomb as A
from coxkit import rootsys as R


def gl2_ctx():
    rs = R.gl2_root_datum()
    sigma = R.diagram_automorphisms(rs)[0]
    w = R.twisted_coxeter_elements(rs, sigma)[0]
    return rs, A.AffineContext(rs, w, sigma)


def coxeter_ctx(descriptor):
    rs = R.build_root_system(descriptor)
    sigma = R.diagram_automorphisms(rs)[0]
    w = R.twisted_coxeter_elements(rs, sigma)[0]
    return rs, A.AffineContext(rs, w, sigma)


def test_gl2_window_contents():
    rs, ctx = gl2_ctx()
    sets = A.affine_sets(ctx, 3)
    root_items = [f for f in sets.positive if f.vec is not None]
    zero_items = [f for f in sets.positive if f.vec is None]
    assert len(root_items) == 4  # 2 roots x levels {1, 2}
    assert sorted(z.level for z in zero_items) == [1, 2]
    assert sets.delta_red == sets.delta  # hyperspecial: all values integral
    assert sets.phi_red == frozenset(range(len(rs.roots)))


def test_orbit_count_identity():
    rs, ctx = gl2_ctx()
    sets = A.affine_sets(ctx, 3)
    n_root_items = sum(1 for f in sets.positive if f.vec is not None)
    n_zero_levels = sum(1 for f in sets.positive if f.vec is None)
    assert len(sets.delta_tilde) == n_root_items // 2 + n_zero_levels


def test_building_point_linearity():
    rs, ctx = gl2_ctx()
    ctx.x.check_linearity(rs)
    bad = A.BuildingPoint(values=tuple(Fraction(i) for i in range(len(rs.roots))))
    with pytest.raises(A.AffineError):
        bad.check_linearity(rs)


def test_orbit_bijection():
    rs, ctx = gl2_ctx()
    assert A.orbit_bijection_check(ctx, A.affine_sets(ctx, 3))
    rs2, ctx2 = coxeter_ctx("A2")
    assert A.orbit_bijection_check(ctx2, A.affine_sets(ctx2, 2))
    ctx_id = A.AffineContext(rs2, R.identity_weyl(rs2), R.diagram_automorphisms(rs2)[0])
    assert not A.orbit_bijection_check(ctx_id, A.affine_sets(ctx_id, 2))


def test_affine_order_axioms():
    for make in (gl2_ctx, lambda: coxeter_ctx("A2"), lambda: coxeter_ctx("B2")):
        rs, ctx = make()
        sets = A.affine_sets(ctx, 3)
        order = A.affine_order(ctx, sets)
        assert A.order_satisfies_axioms(ctx, sets, order)
        # totality and idempotence: ranks are a bijection onto 0..n-1
        ranks = sorted(order.rank_of.values())
        assert ranks == list(range(len(sets.positive)))
        assert order.sequence == A.affine_order(ctx, sets).sequence


def test_zero_item_precedes_root_items_at_equal_value():
    rs, ctx = gl2_ctx()
    sets = A.affine_sets(ctx, 3)
    order = A.affine_order(ctx, sets)
    for f in sets.positive:
        if f.vec is None:
            for g in sets.positive:
                if g.vec is not None and ctx.value(g) == ctx.value(f):
                    assert order.key(f) < order.key(g)


def test_orbit_blocks_follow_representative():
    rs, ctx = gl2_ctx()
    sets = A.affine_sets(ctx, 3)
    order = A.affine_order(ctx, sets)
    for f in sets.delta_aff:
        g = ctx.apply_F(f)
        while g != f:
            assert order.key(f) < order.key(g)
            g = ctx.apply_F(g)
    assert order.predecessor_rep(order.reps[0]) is None
    for a, b in zip(order.reps, order.reps[1:]):
        assert order.successor_rep(a) == b
        assert order.predecessor_rep(b) == a


def test_affine_order_requires_bijection():
    rs, _ = coxeter_ctx("A2")
    sigma = R.diagram_automorphisms(rs)[0]
    ctx = A.AffineContext(rs, R.identity_weyl(rs), sigma)
    sets = A.affine_sets(ctx, 2)
    with pytest.raises(A.AffineError):
        A.affine_order(ctx, sets)


def test_jump_sets_gl2_level2():
    rs, ctx = gl2_ctx()
    sets = A.affine_sets(ctx, 3)
    jd = A.jump_sets(ctx, sets, 2, [])
    # one orbit below level 2 outside the empty Levi, self-paired at value 1
    assert len(jd.d_set) == 1
    (f,) = jd.d_set
    assert jd.flats[f] == f
    assert ctx.value(f) == 1
    assert jd.m == jd.n == 1
    comp = A.AffineRoot(level=2 - f.level, vec=rs.negative(f.vec))
    assert comp in A.orbit_of(ctx, f, sets.positive)


def test_jump_sets_value_identity_and_involution():
    for make, r in ((gl2_ctx, 3), (lambda: coxeter_ctx("A2"), 2), (lambda: coxeter_ctx("B2"), 2)):
        rs, ctx = make()
        sets = A.affine_sets(ctx, r)
        for h in range(1, r + 1):
            jd = A.jump_sets(ctx, sets, h, [])
            for f in jd.d_set:
                assert ctx.value(f) + ctx.value(jd.flats[f]) == h
                assert jd.flats[jd.flats[f]] == f


def test_jump_sets_full_levi_empty():
    rs, ctx = gl2_ctx()
    sets = A.affine_sets(ctx, 3)
    jd = A.jump_sets(ctx, sets, 2, range(len(rs.roots)))
    assert jd.d_set == frozenset()
    assert jd.m == 1 and jd.n == 0


def test_levi_must_be_symmetric():
    rs, ctx = gl2_ctx()
    sets = A.affine_sets(ctx, 3)
    with pytest.raises(A.AffineError):
        A.jump_sets(ctx, sets, 2, [0])  # one root without its negative


@pytest.mark.parametrize(
    "make,r",
    [(gl2_ctx, 3), (lambda: coxeter_ctx("A2"), 2), (lambda: coxeter_ctx("B2"), 2)],
)
def test_closure_suite(make, r):
    rs, ctx = make()
    sets = A.affine_sets(ctx, r)
    for h in range(1, r + 1):
        for levi in (frozenset(), frozenset(range(len(rs.roots)))):
            jd = A.jump_sets(ctx, sets, h, levi)
            verdicts = A.verify_closure(ctx, jd, sets)
            assert all(verdicts.values()), {k: v for k, v in verdicts.items() if not v}
            key = f"C0+C0<=C0"
            assert key in verdicts  # the self-closure of the first C is checked


def test_flat_order_check():
    rs, ctx = gl2_ctx()
    sets = A.affine_sets(ctx, 3)
    jd = A.jump_sets(ctx, sets, 2, [])
    assert A.flat_order_check(ctx, jd)
    # every member of the jump set has value h/2, so the middle block is all of it
    assert all(ctx.value(f) == Fraction(2, 2) for f in jd.labels)
    empty = A.jump_sets(ctx, sets, 1, range(len(rs.roots)))
    assert A.flat_order_check(ctx, empty)


def test_flat_order_check_rejects_shuffle():
    rs, ctx = coxeter_ctx("A2")
    sets = A.affine_sets(ctx, 3)
    jd = A.jump_sets(ctx, sets, 3, [])
    assert len(jd.labels) >= 2
    shuffled = A.JumpData(
        h=jd.h,
        labels=tuple(reversed(jd.labels)),
        flats=jd.flats,
        m=jd.m,
        n=jd.n,
        d_set=jd.d_set,
        a_sets=jd.a_sets,
        b_sets=jd.b_sets,
        c_sets=jd.c_sets,
        levi=jd.levi,
    )
    assert not A.flat_order_check(ctx, shuffled)


def test_fixture_dump():
    rs, ctx = gl2_ctx()
    sets = A.affine_sets(ctx, 3)
    order = A.affine_order(ctx, sets)
    data = A.dump_fixture(ctx, sets, order)
    assert data["r"] == 3
    assert len(data["order"]) == len(sets.positive)
