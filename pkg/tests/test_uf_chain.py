import csv
import io
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qiforge import OutOfWindow, SpecError
from qiforge.folner import standard_family, subset
from qiforge.marked_group import ball, make_group
from qiforge.qi_maps import floor_map_Z, inclusion_map
from qiforge.uf_chain import (
    EVIDENCE_NONZERO,
    EVIDENCE_ZERO,
    INCONCLUSIVE,
    DecisionRule,
    EdgeChain,
    StatisticRow,
    UFChain,
    boundary_1,
    decide_class,
    difference,
    folner_statistic,
    fundamental_class,
    index_chain,
    indicator,
    paired_edges,
    pushforward_chain,
    table_chain,
    unit_edges,
    vanishing_report,
)

ZFAM = standard_family("Z")


def test_coefficients():
    c = index_chain(2)
    assert [c((x,)) for x in range(-2, 3)] == [0, 1, 0, 1, 0]
    assert c.bound == 2
    with pytest.raises(ValueError):
        UFChain(make_group("Z"), lambda x: 5, 1)((0,))


def test_pushforward_of_floor():
    window = [(x,) for x in range(-40, 41)]
    push = pushforward_chain(floor_map_Z(2), window, [(y,) for y in range(-20, 21)])
    assert push((7,)) == 2 and push.is_interior((7,))
    assert push((20,)) == 1 and not push.is_interior((20,))
    with pytest.raises(OutOfWindow):
        push((100,))


def test_pushforward_of_inclusion_counts_subgroup():
    # each target carries the number of its preimages; summing recovers the source window
    window = [(2 * t,) for t in range(-10, 11)]
    push = pushforward_chain(inclusion_map("2Z", "Z"), window, [(y,) for y in range(-20, 21)])
    assert sum(push((y,)) for y in range(-20, 21)) == len(window)
    assert push((3,)) == 0 and push((4,)) == 1


def test_index_chain_sums_by_direct_count():
    for row in folner_statistic(index_chain(2), ZFAM, 30):
        odd = sum(1 for x in range(-row.i, row.i + 1) if x % 2)
        assert row.sum_abs == odd and row.boundary == 2


def test_index_chain_ratio_and_verdict():
    rep = vanishing_report(index_chain(2), ZFAM, 100)
    for r in rep.rows:
        if r.i % 2 == 0:
            assert r.ratio == Fraction(r.i, 2)
    assert rep.verdict == EVIDENCE_NONZERO


def test_index_chain_on_plane():
    G = make_group("Z^2")
    c = difference(fundamental_class(G), indicator(G, lambda x: x[0] % 2 == 0))
    rows = folner_statistic(c, standard_family(G), 48, 2)
    assert rows[-1].ratio == Fraction(48 * 97, 4 * 97)
    assert decide_class(rows) == EVIDENCE_NONZERO


def test_boundary_chain_vanishes():
    e = paired_edges(2)
    d = boundary_1(e, ball("Z", 101))
    assert [d((x,)) for x in range(-2, 3)] == [-1, 1, -1, 1, -1]
    rep = vanishing_report(d, ZFAM, 100)
    assert all(abs(sum(d((x,)) for x in range(-i, i + 1))) <= 1 for i in range(101))
    assert rep.verdict == EVIDENCE_ZERO


def test_telescoping_chain_is_zero_inside():
    d = boundary_1(unit_edges(), ball("Z", 20))
    assert all(d((x,)) == 0 for x in range(-19, 20))
    with pytest.raises(OutOfWindow):
        d((20,))
    assert not d.is_interior((20,)) and d.is_interior((19,))


def test_boundary_window_checks():
    with pytest.raises(SpecError):
        boundary_1(paired_edges(), ball("Z^2", 3))
    wide = EdgeChain(make_group("Z"), lambda x, y: 1, 1, 5)
    with pytest.raises(SpecError):
        boundary_1(wide, ball("Z", 3))


@settings(max_examples=50, deadline=None)
@given(st.dictionaries(st.tuples(st.integers(-6, 6), st.integers(-2, 2)), st.integers(-3, 3), max_size=20))
def test_boundary_coefficient_bound_and_sum(table):
    """Random finitely supported 1-chains on Z with radius 2: coefficients stay
    within 2 M |B(2)| and the total of the boundary is zero."""
    e = EdgeChain(
        make_group("Z"),
        lambda x, y: table.get((x[0], y[0] - x[0]), 0),
        max((abs(v) for v in table.values()), default=0),
        2,
    )
    d = boundary_1(e, ball("Z", 12))
    vals = [d((z,)) for z in range(-10, 11)]
    assert all(abs(v) <= d.bound for v in vals)
    assert sum(vals) == 0


def test_table_chain_and_arithmetic():
    c = table_chain("Z", {(0,): 3, (1,): -2})
    assert c.bound == 3
    s = c + c.scaled(-1)
    assert all(s((x,)) == 0 for x in range(-3, 4))
    with pytest.raises(SpecError):
        fundamental_class("Z") - fundamental_class("Z^2")


def _rows(ratios):
    return [StatisticRow(i, int(r * 10), 10) for i, r in enumerate(ratios, 1)]


def test_decide_class_rules():
    assert decide_class(_rows([1, 2, 5, 8, 12, 15])) == EVIDENCE_NONZERO
    assert decide_class(_rows([1, 2, 1, 2, 1])) == EVIDENCE_ZERO
    assert decide_class(_rows([20, 20, 20, 20, 20])) == INCONCLUSIVE
    assert decide_class(_rows([3, 3, 4, 3, 4])) == INCONCLUSIVE
    with pytest.raises(ValueError):
        decide_class(_rows([1, 2]))


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.tuples(st.integers(0, 500), st.integers(1, 50)), min_size=5, max_size=12),
    st.integers(1, 20),
)
def test_decide_class_scaling_invariance(data, k):
    rows = [StatisticRow(i, s, b) for i, (s, b) in enumerate(data)]
    scaled = [StatisticRow(r.i, k * r.sum_abs, k * r.boundary) for r in rows]
    assert decide_class(rows) == decide_class(scaled)


def test_statistic_group_mismatch():
    with pytest.raises(SpecError):
        folner_statistic(index_chain(2), standard_family("Z^2"), 3)


def test_report_csv():
    text = vanishing_report(index_chain(2), ZFAM, 6).to_csv()
    lines = text.splitlines()
    assert lines[0] == "i,sum_abs,boundary,ratio"
    assert lines[-1].startswith("# verdict=")
    rows = list(csv.reader(io.StringIO("\n".join(lines[:-1]))))
    assert rows[2] == ["2", "2", "2", "1"]
