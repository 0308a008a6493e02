import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twouniv.decompose import (
    Decomposition,
    DecompositionInfeasible,
    check_partition_props,
    decompose,
    edge_partition_audit,
)
from twouniv.graph import Graph
from twouniv.instances import ParamSet, build_f_graph, linear_components, parse_spec, random_spec


def triangles(k):
    return build_f_graph(parse_spec(",".join(["C3"] * k)))


def test_twenty_triangles():
    f = triangles(20)
    prm = ParamSet.practical(60, 1.0, beta=0.05, epsilon=0.1, ell0=100)
    d = decompose(f, prm)
    assert len(d.u_set) == 30 and len(d.leftover) == 6 and len(d.middle) == 24
    rest = linear_components(f, d.leftover)
    assert [c.size for c in rest] == [3, 3] and all(c.kind == "cycle" for c in rest)
    assert check_partition_props(f, d, prm.ell0) == (True, True, True)
    assert edge_partition_audit(f, d)


def test_hamilton_cycle():
    f = Graph.cycle(100)
    prm = ParamSet.practical(100, 1.0, beta=0.03, epsilon=0.1, ell0=20)
    d = decompose(f, prm)
    assert abs(len(d.u_set) - 30) <= 2
    assert abs(len(d.leftover) - 10) <= 2
    # U is one consecutive run of the cycle
    sub, _ = f.induced_subgraph(d.u_set)
    assert len(sub.components()) == 1 and sub.edge_count == len(d.u_set) - 1
    assert all(c.kind == "path" and c.size == 2 for c in linear_components(f, d.leftover))
    assert all(check_partition_props(f, d, prm.ell0)) and edge_partition_audit(f, d)


def test_single_triangle_is_infeasible():
    with pytest.raises(DecompositionInfeasible):
        decompose(Graph.cycle(3), ParamSet.practical(3, 1.0, beta=0.05))


def test_non_maximal_input_rejected():
    with pytest.raises(ValueError):
        decompose(Graph.from_edges(60, [(0, 1)]), ParamSet.practical(60, 0.5))


def test_planted_violations_are_caught():
    f = triangles(20)
    prm = ParamSet.practical(60, 1.0, beta=0.05, epsilon=0.1, ell0=100)
    d = decompose(f, prm)
    # move one vertex of a core triangle into the middle: a U/middle edge appears
    x = min(d.u_set)
    moved = Decomposition(60, d.u_set - {x}, d.w_set, d.tolerance, d.u_target, d.leftover_target)
    assert check_partition_props(f, moved, prm.ell0)[2] is False
    # a C_{ell0} inside the middle breaks P1
    c = Graph.cycle(30)
    bad = Decomposition(30, frozenset(), frozenset(range(30)), 2, 0, 0)
    assert check_partition_props(c, bad, 30)[0] is False
    assert check_partition_props(c, bad, 31)[0] is True


def test_record_round_trip():
    f = triangles(20)
    d = decompose(f, ParamSet.practical(60, 1.0, beta=0.05, epsilon=0.1))
    back = Decomposition.from_record(d.to_record())
    assert (back.u_set, back.w_set, back.tolerance) == (d.u_set, d.w_set, d.tolerance)


@settings(max_examples=150, deadline=None)
@given(
    st.integers(30, 300),
    st.sampled_from([3, 4, 5, 6]),
    st.floats(0.1, 0.5),
    st.sampled_from([0.05, 0.1, 0.2]),
    st.integers(0, 2**32),
)
def test_random_specs_satisfy_partition_props(n, ell, alpha, eps, seed):
    prm = ParamSet.practical(n, alpha, ell=ell, epsilon=eps)
    if prm.violations() or prm.u_target < 3:
        return
    f = build_f_graph(random_spec(n, ell, seed))
    d = decompose(f, prm)
    assert check_partition_props(f, d, prm.ell0) == (True, True, True)
    assert edge_partition_audit(f, d)
    assert abs(len(d.u_set) - prm.u_target) <= prm.slack
    assert abs(len(d.leftover) - prm.leftover_target) <= prm.slack
    # the run cut from the last core cycle is 2 or at least 5 vertices
    assert len(d.trimmed) in (0, 2) or len(d.trimmed) >= 5
