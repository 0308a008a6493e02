import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twouniv.counting import (
    certify_pseudorandom,
    count_cherries,
    count_cycles_rainbow,
    count_edges_between,
    count_global,
    rainbow_cycle_dfs,
    reports_to_csv,
)
from twouniv.graph import Graph
from twouniv.instances import ParamSet, sample_gnp
from twouniv.rng import make_rng


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


# -- naive generate-and-test oracles ----------------------------------------


def naive_edges(g, v1, v2):
    return sum(1 for x in v1 for y in v2 if g.has_edge(x, y))


def naive_cherries(g, v1, v2, v3):
    return sum(1 for x in v1 for y in v2 for z in v3 if g.has_edge(x, y) and g.has_edge(x, z))


def naive_rainbow(g, parts):
    k = len(parts)
    return sum(
        1
        for tup in itertools.product(*parts)
        if all(g.has_edge(tup[i], tup[(i + 1) % k]) for i in range(k))
    )


def naive_global(g, shape):
    n = g.n
    if shape == "cherry":
        return sum(
            1
            for x in range(n)
            for y, z in itertools.combinations(range(n), 2)
            if x not in (y, z) and g.has_edge(x, y) and g.has_edge(x, z)
        )
    if shape == "C3":
        return sum(1 for a, b, c in itertools.combinations(range(n), 3) if g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c))
    total = 0
    for q in itertools.combinations(range(n), 4):
        a, b, c, d = q
        for order in ((a, b, c, d), (a, b, d, c), (a, c, b, d)):
            if all(g.has_edge(order[i], order[(i + 1) % 4]) for i in range(4)):
                total += 1
    return total


def random_instance(seed):
    rng = make_rng(seed)
    n = int(rng.integers(3, 9))
    g = sample_gnp(n, float(rng.uniform(0.2, 0.9)), rng)
    labels = rng.integers(0, 6, size=n)  # part index per vertex, 5 = unused
    parts = [[v for v in range(n) if labels[v] == i] for i in range(5)]
    return g, parts


# -- spec examples -----------------------------------------------------------


def test_edge_count_examples():
    k22 = Graph.from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3)])
    assert count_edges_between(k22, [0, 1], [2, 3]) == 4
    assert count_edges_between(Graph.empty(6), [0, 1], [2, 3, 4]) == 0
    assert count_edges_between(petersen(), range(5), range(5, 10)) == 5


def test_cherry_examples():
    path = Graph.from_edges(3, [(1, 0), (0, 2)])
    assert count_cherries(path, [0], [1], [2]) == 1
    assert count_cherries(path, [1], [0], [2]) == 0
    assert count_cherries(Graph.complete(4), [0], [1], [2]) == 1
    assert count_global(Graph.complete(4), "cherry") == 12


def test_rainbow_examples():
    assert count_cycles_rainbow(Graph.cycle(3), [[0], [1], [2]]) == 1
    assert count_cycles_rainbow(Graph.cycle(4), [[0], [2], [1], [3]]) == 0
    assert count_cycles_rainbow(Graph.complete(5), [[0], [1], [2], [3]]) == 1


def test_global_examples():
    assert count_global(Graph.complete(3), "cherry") == 3
    assert count_global(Graph.complete(3), "C3") == 1
    assert count_global(Graph.cycle(4), "C4") == 1
    assert count_global(Graph.cycle(4), "C3") == 0
    assert count_global(Graph.complete(4), "C3") == 4
    assert count_global(Graph.complete(4), "C4") == 3


def test_overlapping_parts_raise():
    with pytest.raises(ValueError):
        count_edges_between(Graph.complete(3), [0, 1], [1, 2])


# -- oracle equivalence --------------------------------------------------------


@pytest.mark.parametrize("seed", range(100))
def test_kernels_match_naive_enumeration(seed):
    g, parts = random_instance(seed)
    v1, v2, v3, v4, v5 = parts
    assert count_edges_between(g, v1, v2) == naive_edges(g, v1, v2)
    assert count_cherries(g, v1, v2, v3) == naive_cherries(g, v1, v2, v3)
    for k in (3, 4, 5):
        assert count_cycles_rainbow(g, parts[:k]) == naive_rainbow(g, parts[:k])
        assert rainbow_cycle_dfs(g, parts[:k]) == naive_rainbow(g, parts[:k])
    for shape in ("cherry", "C3", "C4"):
        assert count_global(g, shape) == naive_global(g, shape)


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_rainbow_invariant_under_rotation_and_reversal(seed):
    g, parts = random_instance(seed)
    for k in (3, 4, 5):
        ps = parts[:k]
        base = count_cycles_rainbow(g, ps)
        for r in range(k):
            assert count_cycles_rainbow(g, ps[r:] + ps[:r]) == base
        assert count_cycles_rainbow(g, ps[::-1]) == base


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_cherries_over_centre_choices_match_rainbow_cherries(seed):
    rng = make_rng(seed)
    n = int(rng.integers(3, 9))
    g = sample_gnp(n, 0.6, rng)
    labels = rng.integers(0, 3, size=n)
    parts = [[v for v in range(n) if labels[v] == i] for i in range(3)]
    total = sum(count_cherries(g, parts[c], *[parts[j] for j in range(3) if j != c]) for c in range(3))
    brute = sum(
        1
        for x in range(n)
        for y, z in itertools.combinations(range(n), 2)
        if x not in (y, z)
        and len({labels[x], labels[y], labels[z]}) == 3
        and g.has_edge(x, y)
        and g.has_edge(x, z)
    )
    assert total == brute


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_adding_an_edge_never_lowers_counts(seed):
    g, parts = random_instance(seed)
    missing = [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if not g.has_edge(u, v)]
    if not missing:
        return
    g2 = g.with_edges([missing[seed % len(missing)]])
    v1, v2, v3 = parts[:3]
    assert count_edges_between(g2, v1, v2) >= count_edges_between(g, v1, v2)
    assert count_cherries(g2, v1, v2, v3) >= count_cherries(g, v1, v2, v3)
    assert count_cycles_rainbow(g2, parts[:4]) >= count_cycles_rainbow(g, parts[:4])
    for shape in ("cherry", "C3", "C4"):
        assert count_global(g2, shape) >= count_global(g, shape)


def test_first_witness_is_a_rainbow_cycle():
    g = sample_gnp(40, 0.5, 3)
    parts = [list(range(i, 40, 4)) for i in range(4)]
    cyc = rainbow_cycle_dfs(g, parts, first=True, rng=make_rng(1))
    assert cyc is not None
    assert all(cyc[i] in parts[i] for i in range(4))
    assert all(g.has_edge(cyc[i], cyc[(i + 1) % 4]) for i in range(4))


# -- certification ---------------------------------------------------------------


def test_complete_graph_passes_a1():
    g = Graph.complete(60)
    reps = certify_pseudorandom(g, ParamSet.practical(60, 0.1, p=1.0, ell0=6), 20, seed=1, include_global=False)
    assert all(r.passed for r in reps if r.prop == "A1")


def test_empty_graph_fails_every_lower_bound():
    g = Graph.empty(60)
    reps = certify_pseudorandom(g, ParamSet.practical(60, 0.1, p=0.1, ell0=6), 10, seed=1)
    lower = [r for r in reps if not r.upper]
    assert lower and not any(r.passed for r in lower)


def test_report_csv_shape():
    g = sample_gnp(100, 0.3, 2)
    reps = certify_pseudorandom(g, ParamSet.practical(100, 0.1, p=0.3, ell0=6), 3, seed=2)
    lines = reports_to_csv(reps).strip().splitlines()
    assert lines[0] == "property,k,sizes,observed,bound,pass"
    assert len(lines) == len(reps) + 1
    ks = {r.k for r in reps if r.prop == "A3"}
    assert ks == {3, 4, 5}  # ell <= k < min(ell0, cap)
