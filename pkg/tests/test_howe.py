from itertools import product

import pytest

from coxkit import affcomb, howe
from coxkit import rootsys as R


def coxeter_ctx(descriptor, gl2=False):
    rs = R.gl2_root_datum() if gl2 else R.build_root_system(descriptor)
    sigma = R.diagram_automorphisms(rs)[0]
    w = R.twisted_coxeter_elements(rs, sigma)[0]
    return rs, sigma, w


@pytest.mark.parametrize(
    "descriptor,primes",
    [
        ("A1", set()),
        ("A4", set()),
        ("B2", set()),
        ("C3", set()),
        ("B3", {2}),
        ("D4", {2}),
        ("G2", {2}),
        ("F4", {2, 3}),
        ("E6", {2, 3}),
        ("E8", {2, 3, 5}),
        ("F4xA2", {2, 3}),
    ],
)
def test_torsion_primes(descriptor, primes):
    assert howe.torsion_primes(R.build_root_system(descriptor)) == primes


def test_smith_diagonal_basics():
    assert howe.smith_diagonal([[2, 0], [0, 3]]) == [1, 6]
    assert howe.smith_diagonal([[1, 0], [0, 1]]) == [1, 1]
    assert howe.smith_diagonal([[2, 4]]) == [2]
    assert howe.smith_diagonal([[0, 0]]) == []
    # divisibility chain normalization d1 | d2 | ...
    d = howe.smith_diagonal([[6, 0], [0, 4]])
    assert d == [2, 12]


def brute_coset_count(rows, bound=8):
    """Oracle for full-rank row sets in small rank: the saturation is all of
    Z^m, so the index is the number of residues of Z^m modulo the row
    lattice, counted by reducing a box of lattice points."""
    import itertools

    m = len(rows[0])
    lattice = {
        tuple(sum(c * r[i] for c, r in zip(coeffs, rows)) for i in range(m))
        for coeffs in itertools.product(range(-bound, bound + 1), repeat=len(rows))
    }
    reps = set()
    for v in itertools.product(range(-2, 3), repeat=m):
        key = min(
            (
                tuple(a - b for a, b in zip(v, w))
                for w in lattice
                if all(abs(a - b) <= 2 for a, b in zip(v, w))
            ),
            key=lambda t: (sum(x * x for x in t), t),
        )
        reps.add(key)
    return len(reps)


def test_pi1_order_against_enumeration_oracle():
    # full-rank two-row cases where the saturation is the whole plane
    for rows in ([(1, 0), (0, 1)], [(2, 0), (0, 1)], [(1, 1), (1, -1)]):
        idx = 1
        for d in howe.smith_diagonal(list(rows)):
            idx *= d
        assert idx == brute_coset_count(rows)
    # rank-one rows: saturation index is the content of the vector
    from math import gcd

    for row in [(2, 4), (3, 0, 6), (5,), (0, 7)]:
        d = howe.smith_diagonal([list(row)])
        idx = d[0] if d else 1
        expected = gcd(*row) if len(row) > 1 else abs(row[0])
        assert idx == expected


def test_pi1_order_examples():
    rs = R.build_root_system("A2")
    assert howe.pi1_order(rs, []) == 1
    # the coroot lattice saturates itself: simply connected datum
    assert howe.pi1_order(rs, range(len(rs.roots))) == 1
    gl2 = R.gl2_root_datum()
    assert howe.pi1_order(gl2, range(len(gl2.roots))) == 1
    # a coroot of content two in the ambient lattice has saturation index two
    doubled = R.build_root_system("A1", coweight_embedding=[(2,)])
    assert howe.pi1_order(doubled, range(len(doubled.roots))) == 2


def test_f_stable_levi_subsystems():
    rs, sigma, w = coxeter_ctx("A2")
    levis = howe.f_stable_levi_subsystems(rs, w, sigma)
    assert frozenset() in levis
    assert frozenset(range(len(rs.roots))) in levis
    f = R.twist_perm(rs, w, sigma)
    for levi in levis:
        assert frozenset(f[i] for i in levi) == levi
        for i in levi:
            assert rs.negative(i) in levi


def test_condition_on_p_reports():
    rs, sigma, w = coxeter_ctx("A2")
    rep = howe.check_condition_on_p(7, rs, w, sigma)
    assert rep.verdict
    assert rep.torsion_verdict
    rs8, sigma8, w8 = coxeter_ctx("E6")
    rep2 = howe.check_condition_on_p(2, rs8, w8, sigma8)
    assert not rep2.torsion_verdict


@pytest.mark.parametrize(
    "descriptor,bound",
    [
        ("B2", {2}),  # even-rank doubled series stays within {2}
        ("B4", {2}),
        ("D4", {2, 3}),  # primes below the rank
        ("A3", set()),  # no torsion and simply connected coroot lattice
    ],
)
def test_bad_prime_bounds(descriptor, bound):
    rs, sigma, w = coxeter_ctx(descriptor)
    assert howe.bad_primes(rs, w, sigma) <= bound


def gl2_counts(r=3):
    rs, sigma, w = coxeter_ctx(None, gl2=True)
    ctx = affcomb.AffineContext(rs, w, sigma)
    sets = affcomb.affine_sets(ctx, r)
    return howe.AffineCounts.from_sets(sets, rs, 2), sets.phi_red


def test_gl2_degree_examples():
    counts, phi_red = gl2_counts()
    generic = howe.HoweDatum(depth=3, jumps=(2,), levis=(frozenset(),))
    assert howe.cohomological_degree(generic, counts, phi_red) == 3
    assert howe.homology_degree(generic, counts, phi_red) == 1
    low = howe.HoweDatum(depth=3, jumps=(1,), levis=(frozenset(),))
    assert howe.cohomological_degree(low, counts, phi_red) == 4
    assert howe.homology_degree(low, counts, phi_red) == 0
    trivial = howe.HoweDatum(depth=3, jumps=(), levis=())
    assert howe.cohomological_degree(trivial, counts, phi_red) == 4
    assert howe.homology_degree(trivial, counts, phi_red) == 0
    # depth-2 datum: degrees complement twice the dimension at depth 2
    counts2, phi_red2 = gl2_counts(r=2)
    d2 = howe.HoweDatum(depth=2, jumps=(2,), levis=(frozenset(),))
    assert howe.homology_degree(d2, counts2, phi_red2) == 1


def test_dim_yr():
    counts, _ = gl2_counts()
    assert howe.dim_Yr(3, counts) == 2
    assert howe.dim_Yr(1, counts) == 0
    rs, sigma, w = coxeter_ctx("A2")
    ctx = affcomb.AffineContext(rs, w, sigma)
    sets = affcomb.affine_sets(ctx, 2)
    c2 = howe.AffineCounts.from_sets(sets, rs, 3)
    assert howe.dim_Yr(2, c2) == 2


def test_weight_dimension():
    assert howe.weight_dimension(3, 2, 0) == 1
    assert howe.weight_dimension(3, 2, 1) == 3
    assert howe.weight_dimension(5, 2, 1) == 5
    with pytest.raises(howe.HoweError):
        howe.weight_dimension(3, 1, 1)


def test_howe_datum_validation():
    with pytest.raises(howe.HoweError):
        howe.HoweDatum(depth=3, jumps=(2, 1), levis=(frozenset(), frozenset()))
    with pytest.raises(howe.HoweError):
        howe.HoweDatum(depth=3, jumps=(1,), levis=())
    with pytest.raises(howe.HoweError):
        howe.HoweDatum(
            depth=3, jumps=(1, 2), levis=(frozenset({0, 1}), frozenset({2}))
        )


def test_degree_family_invariants():
    from coxkit.acceptance import generate_howe_family

    fam = generate_howe_family(min_size=120, seed=7)
    assert len(fam) >= 100
    for datum, counts, phi_red, r in fam:
        s_hom = howe.homology_degree(datum, counts, phi_red)
        s_coh = howe.cohomological_degree(datum, counts, phi_red)
        assert s_hom + s_coh == 2 * howe.dim_Yr(r, counts)
        assert (s_hom * counts.n_order) % 2 == 0


@pytest.mark.parametrize("q", [3, 5])
def test_weight_dim_times_torus_matches_group_order(q):
    """q^s_hom * q^4 * q^s_coh = q^8 for every datum kind of the depth-3 model."""
    counts, phi_red = gl2_counts()
    for datum in (
        howe.HoweDatum(depth=3, jumps=(2,), levis=(frozenset(),)),
        howe.HoweDatum(depth=3, jumps=(1,), levis=(frozenset(),)),
        howe.HoweDatum(depth=3, jumps=(), levis=()),
    ):
        s_hom = howe.homology_degree(datum, counts, phi_red)
        s_coh = howe.cohomological_degree(datum, counts, phi_red)
        wdim = howe.weight_dimension(q, counts.n_order, s_hom)
        assert wdim * q**4 * q ** (s_coh * counts.n_order // 2) == q**8


def test_divisibility_error():
    counts, phi_red = gl2_counts()
    bad = howe.AffineCounts(
        n_phi=counts.n_phi,
        n_phi_red=1,  # odd reduced count breaks divisibility by N=2
        n_delta=counts.n_delta,
        n_delta_red=counts.n_delta_red,
        n_order=counts.n_order,
    )
    datum = howe.HoweDatum(depth=3, jumps=(), levis=())
    with pytest.raises(howe.HoweError):
        howe.cohomological_degree(datum, bad, frozenset())
