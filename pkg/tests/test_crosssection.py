import pytest

from coxkit import crosssection as C
from coxkit import rootsys as R


def ctx_for(descriptor, sigma_order=1):
    rs = R.build_root_system(descriptor)
    sigma = next(s for s in R.diagram_automorphisms(rs) if s.order == sigma_order)
    return rs, sigma


def test_find_candidate_a1():
    rs, sigma = ctx_for("A1")
    w = R.weyl_element(rs, (0,))
    out = C.find_candidate_for_one_step(w, sigma, frozenset(), rs)
    assert out == frozenset({0})


def test_find_candidate_rejects_full_set():
    rs, sigma = ctx_for("A2")
    w = R.weyl_element(rs, (0, 1))
    with pytest.raises(ValueError):
        C.find_candidate_for_one_step(w, sigma, frozenset(range(rs.n_pos)), rs)


def test_find_candidate_a2_from_inversion_set():
    rs, sigma = ctx_for("A2")
    w = R.weyl_element(rs, (0, 1))
    inv = R.inversion_set(w, sigma, rs)
    assert len(inv) == 2
    out = C.find_candidate_for_one_step(w, sigma, inv, rs)
    assert isinstance(out, frozenset)
    assert len(out) == 3 and inv < out


def test_iterate_steps_full_inversion_set():
    rs, sigma = ctx_for("A1")
    w = R.weyl_element(rs, (0,))
    # the inversion set is everything: immediate success
    assert C.iterate_steps(w, sigma, R.inversion_set(w, sigma, rs), rs) is True


def test_iterate_steps_not_found_sentinel():
    rs, sigma = ctx_for("A2")
    w = R.weyl_element(rs, (0, 1))
    assert C.iterate_steps(w, sigma, C.NOT_FOUND, rs) is False


def test_iterate_steps_a2_reaches_top():
    rs, sigma = ctx_for("A2")
    w = R.weyl_element(rs, (0, 1))
    chain = [R.inversion_set(w, sigma, rs)]
    assert C.iterate_steps(w, sigma, chain[0], rs, _chain=chain) is True
    assert chain[-1] == frozenset(range(rs.n_pos))


def test_certificate_a2():
    rs, sigma = ctx_for("A2")
    w = R.weyl_element(rs, (0, 1))
    cert = C.verify_cross_section(rs, sigma, w)
    assert isinstance(cert, C.FiltrationCertificate)
    assert cert.chain[0] == R.inversion_set(w, sigma, rs)
    assert cert.chain[-1] == frozenset(range(rs.n_pos))
    assert len(cert.chain[0]) + sum(cert.step_sizes) == rs.n_pos
    assert set(cert.step_sizes) <= {1}


@pytest.mark.parametrize(
    "descriptor,sigma_order", [("G2", 1), ("F4", 1), ("D4", 3), ("E6", 2)]
)
def test_sweeps_certify(descriptor, sigma_order):
    rs, sigma = ctx_for(descriptor, sigma_order)
    results = C.sweep_twisted_coxeter(rs, sigma)
    assert results
    for res in results:
        assert isinstance(res, C.FiltrationCertificate)
        assert len(res.chain[0]) + sum(res.step_sizes) == rs.n_pos


def test_determinism():
    rs, sigma = ctx_for("F4")
    w = R.twisted_coxeter_elements(rs, sigma)[0]
    a = C.verify_cross_section(rs, sigma, w)
    b = C.verify_cross_section(rs, sigma, w)
    assert a.chain == b.chain


def test_non_coxeter_failure_witness():
    # a single simple reflection in rank 2 is not twisted Coxeter and the
    # search dead-ends (the sufficient condition is not necessary)
    rs, sigma = ctx_for("A2")
    w = R.weyl_element(rs, (0,))
    res = C.verify_cross_section(rs, sigma, w)
    assert isinstance(res, C.Failure)
    assert res.reason


def test_incremental_matches_full_check():
    """The production path uses an incremental condition check after the
    first step; a full-check-only driver must accept identical chains."""

    def full_driver(rs, sigma, w):
        ctx = C._Context(rs, sigma, w)
        psi = ctx.phi_w
        chain = [psi]
        if psi == ctx.full:
            return chain
        while True:
            nxt = None
            for b in ctx.order:
                if psi >> b & 1:
                    continue
                if C._step_conditions(ctx, psi, b):
                    nxt = psi | (1 << b)
                    break
            if nxt is None:
                return None
            chain.append(nxt)
            psi = nxt
            if psi == ctx.full:
                return chain

    import itertools

    for descriptor, sigma_order in [("A3", 1), ("B3", 1), ("D4", 3)]:
        rs, sigma = ctx_for(descriptor, sigma_order)
        words = list(itertools.product(range(rs.rank), repeat=2))
        elements = R.twisted_coxeter_elements(rs, sigma) + [
            R.weyl_element(rs, word) for word in words
        ]
        for w in elements:
            ctx = C._Context(rs, sigma, w)
            ref = full_driver(rs, sigma, w)
            res = C.verify_cross_section(rs, sigma, w)
            if ref is None:
                assert isinstance(res, C.Failure)
            else:
                assert isinstance(res, C.FiltrationCertificate)
                got = [ctx.mask_of(s) for s in res.chain]
                assert got == ref


def test_validator_catches_corruption():
    rs, sigma = ctx_for("G2")
    w = R.twisted_coxeter_elements(rs, sigma)[0]
    cert = C.verify_cross_section(rs, sigma, w)
    chain = [set(s) for s in cert.chain]
    # swap one chain member for a set violating the one-level-down rule
    chain[1] = set(cert.chain[2])
    reason = C._validate_chain(rs, sigma, w, [frozenset(s) for s in chain])
    assert reason is not None


def test_certificate_json():
    rs, sigma = ctx_for("G2")
    w = R.twisted_coxeter_elements(rs, sigma)[0]
    cert = C.verify_cross_section(rs, sigma, w)
    data = cert.to_json(rs)
    assert data["type"] == "G2"
    assert data["step_sizes"] == [1] * (rs.n_pos - len(cert.chain[0]))
    assert [sorted(s) for s in cert.chain] == data["chain"]
