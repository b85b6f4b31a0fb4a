import random
from math import isqrt

import pytest

from coxkit import dlcount as D
from coxkit import orbitmethod as O
from coxkit.locring import CycValue


@pytest.fixture(scope="module")
def ctx3(model3):
    return O.CoadjointContext(model3)


def test_log_exp_basics(model3):
    ident = model3.identity()
    assert O.log_elt(model3, ident) == (0, 0, 0, 0)
    assert O.exp_elt(model3, (0, 0, 0, 0)) == ident


def test_exp_log_bijective_exhaustive(model3):
    assert O.exp_log_bijectivity(model3)


def test_log_is_hom_on_torus_not_on_group(model3):
    rng = random.Random(0)
    for _ in range(60):
        t = model3.torus_to_group((rng.randrange(9), rng.randrange(9)))
        s = model3.torus_to_group((rng.randrange(9), rng.randrange(9)))
        lhs = O.log_elt(model3, model3.mul(t, s))
        rhs = O.lie_add(model3, O.log_elt(model3, t), O.log_elt(model3, s))
        assert lhs == rhs
    witnesses = 0
    for g in [(0, 0, 1, 0), (1, 0, 3, 0), (3, 0, 1, 0)]:
        for h in [(0, 0, 3, 0), (3, 0, 4, 0), (0, 0, 4, 0)]:
            lhs = O.log_elt(model3, model3.mul(g, h))
            rhs = O.lie_add(model3, O.log_elt(model3, g), O.log_elt(model3, h))
            witnesses += lhs != rhs
    assert witnesses > 0  # the logarithm is not a homomorphism on the group


def test_bracket_alternating_and_level2(model3):
    rng = random.Random(1)
    for _ in range(40):
        y = tuple(rng.randrange(9) for _ in range(4))
        z = tuple(rng.randrange(9) for _ in range(4))
        b = O.lie_bracket(model3, y, z)
        assert b[0] == b[2] == 0  # class two: brackets live at the top level
        assert O.lie_bracket(model3, y, y) == (0, 0, 0, 0)
        assert O.lie_bracket(model3, z, y) == O.lie_neg(model3, b)
        # triple brackets vanish
        w = tuple(rng.randrange(9) for _ in range(4))
        assert O.lie_bracket(model3, w, b) == (0, 0, 0, 0)


def test_adjoint_properties(model3):
    rng = random.Random(2)
    ys = [tuple(rng.randrange(9) for _ in range(4)) for _ in range(20)]
    for y in ys:
        assert O.adjoint(model3, model3.identity(), y) == y
    # torus fixes the torus part of the Lie ring
    for _ in range(20):
        t = model3.torus_to_group((rng.randrange(9), rng.randrange(9)))
        y = (rng.randrange(9), rng.randrange(9), 0, 0)
        assert O.adjoint(model3, t, y) == y
    # additive in y, and factors through the level-2 quotient of g
    for _ in range(30):
        g = tuple(rng.randrange(9) for _ in range(4))
        g2 = (g[0], rng.randrange(9), g[2], rng.randrange(9))
        y, z = ys[rng.randrange(len(ys))], ys[rng.randrange(len(ys))]
        assert O.adjoint(model3, g, O.lie_add(model3, y, z)) == O.lie_add(
            model3, O.adjoint(model3, g, y), O.adjoint(model3, g, z)
        )
        assert O.adjoint(model3, g, y) == O.adjoint(model3, g2, y)


def test_delta_projection(model3):
    rng = random.Random(3)
    for _ in range(40):
        y = tuple(rng.randrange(9) for _ in range(4))
        d = O.delta_projection(y)
        assert d == (y[0], y[1], 0, 0)
        assert O.delta_projection(d) == d
        t = model3.torus_to_group((rng.randrange(9), rng.randrange(9)))
        assert O.delta_projection(O.adjoint(model3, t, y)) == O.delta_projection(y)


def test_trivial_functional_orbit(model3, ctx3):
    zero = tuple([0] * (8 * model3.e))
    orb = O.coadjoint_orbit(model3, zero, ctx3)
    assert orb == frozenset({zero})
    tr = O.kirillov_trace(model3, (1, 2, 3, 4), orb)
    assert tr == CycValue.from_int(3, 1)


def test_epsilon_orbit_sizes(model3, ctx3):
    for chi in D.torus_characters(model3):
        eps = O.epsilon_functional(model3, chi)
        orb = ctx3.orbit(eps)
        big = O.orbit_size_criterion(model3, chi)
        assert len(orb) == (model3.q**2 if big else 1)
        # the separation criterion is membership of the dual level-2
        # parameter in the q-element subfield
        assert big == (chi.b not in model3.fq_subfield)


def test_projection_criterion_exhaustive(model3):
    assert O.projection_criterion_exhaustive(model3)


def test_kirillov_at_identity(model3, ctx3):
    for chi in D.torus_characters(model3)[:10]:
        eps = O.epsilon_functional(model3, chi)
        orb = ctx3.orbit(eps)
        tr = O.kirillov_trace(model3, model3.identity(), orb)
        assert tr == CycValue.from_int(3, isqrt(len(orb)))


def test_kirillov_orthonormality(model3, ctx3):
    """(1/#group) sum over the group of |trace|^2 is one per orbit."""
    classes = model3.conjugacy_classes()
    rng = random.Random(4)
    chars = D.torus_characters(model3)
    for chi in rng.sample(chars, 5):
        orb = ctx3.orbit(O.epsilon_functional(model3, chi))
        acc = CycValue.zero(model3.p)
        for cls in classes:
            tr = O.kirillov_trace(model3, cls[0], orb)
            acc = acc + tr.abs_square().scale(len(cls))
        assert acc.divide_exact(model3.order) == CycValue.from_int(model3.p, 1)


def test_orbit_completeness(model3):
    comp = O.orbit_method_completeness(model3)
    assert comp["ok"]
    assert comp["dim_square_sum"] == model3.order


def test_distinct_characters_distinct_traces(model3, ctx3, table3):
    """Orbits arising from distinct characters are distinct, and so are the
    resulting trace functions (restricted to the geometric trace rows, which
    equal the orbit-method rows by the conjecture check)."""
    seen_orbits = set()
    for chi in table3.characters:
        orb = ctx3.orbit(O.epsilon_functional(model3, chi))
        assert orb not in seen_orbits
        seen_orbits.add(orb)
    rows = {
        tuple(str(v.to_json()) for v in row) for row in table3.values
    }
    assert len(rows) == len(table3.characters)


def test_conjecture_full(model3, table3):
    rep = O.verify_conjecture(model3, table3)
    assert rep.ok
    assert rep.orbit_sizes_ok and rep.size_criterion_ok
    from collections import Counter

    sizes = Counter(c["orbit_size"] for c in rep.per_char)
    assert sizes == Counter({9: 54, 1: 27})
    for c in rep.per_char:
        assert not c["trace_mismatches"]
        assert isqrt(c["orbit_size"]) == c["dim"]
        assert (c["s_hom"] + c["s_coh"]) % 2 == 0


def test_streaming_verifier_matches_table_driven(model3, table3):
    stream = O.verify_conjecture_streaming(model3)
    table = O.verify_conjecture(model3, table3)
    assert stream.ok and table.ok
    assert len(stream.per_char) == len(table.per_char)
    for cs, ct in zip(stream.per_char, table.per_char):
        assert (cs["a"], cs["b"], cs["orbit_size"], cs["dim"], cs["ok"]) == (
            ct["a"],
            ct["b"],
            ct["orbit_size"],
            ct["dim"],
            ct["ok"],
        )


def test_non_square_orbit_rejected(model3):
    with pytest.raises(O.OrbitError):
        O.kirillov_trace(model3, model3.identity(), frozenset({(0,) * 8, (1,) * 8}))
