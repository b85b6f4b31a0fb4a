"""The acceptance gate: one test per criterion, with a printed verdict line.

Criterion 7's q=5 sweep is an extended target behind the ``slow`` marker
(deselected by default; run with ``pytest -m slow``).
"""

import pytest

from coxkit import acceptance


def _report(result):
    print(f"[{'PASS' if result['ok'] else 'FAIL'}] {result['id']}: {result['description']}")
    assert result["ok"], result


def test_criterion_1_cross_section():
    _report(acceptance.criterion_cross_section())


def test_criterion_2_closure_suite():
    _report(acceptance.criterion_closure_suite())


def test_criterion_3_degree_family():
    _report(acceptance.criterion_degree_family(min_size=100, seed=0))


@pytest.fixture(scope="module")
def trace_suite(model3, table3):
    # reuse the session model/table; rebuild only the cheap parts
    import coxkit.dlcount as D
    from coxkit.locring import CycValue

    model, table = model3, table3
    ident = model.identity()
    a_ok = D.count_S_structured(model, ident, (0, 0)) == model.order and all(
        D.count_S_structured(model, ident, t) == 0
        for t in model.torus_elements()
        if t != (0, 0)
    )
    counts = D.count_table(model, ident)
    b_ok = True
    for chi in table.characters:
        tr = D.geometric_trace(model, ident, chi, counts=counts)
        expected = 3 if D.character_degrees(chi)[0] == 1 else 1
        b_ok &= tr == CycValue.from_int(model.p, expected)
    cmp = D.structured_vs_brute(model, 200, 0)
    d_ok = all(v.is_integral() for row in table.values for v in row)
    return {
        "id": "4-trace-suite",
        "description": "identity counts, identity dimensions, 200 counter comparisons, exact divisions",
        "ok": a_ok and b_ok and bool(cmp["ok"]) and d_ok,
    }


def test_criterion_4_trace_suite(trace_suite):
    _report(trace_suite)


def test_criterion_5_irreducibility(table3):
    _report(acceptance.criterion_irreducibility(table3))


def test_criterion_6_maximality(model3):
    _report(acceptance.criterion_maximality(model3))


def test_criterion_7_orbit_method_q3(model3, table3):
    _report(acceptance.criterion_orbit_method(table3, model3))


@pytest.mark.slow
def test_criterion_7_orbit_method_q5_extended():
    _report(acceptance.criterion_orbit_method(q=5))


def test_criterion_8_exhaustive_structure(model3):
    _report(acceptance.criterion_exhaustive_structure(model3))
