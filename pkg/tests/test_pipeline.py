import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twouniv.decompose import decompose
from twouniv.errors import PathSearchError, ReservoirUnderflow, StageError, SwitchSearchError
from twouniv.graph import Graph
from twouniv.instances import (
    ParamSet,
    augment_to_maximal,
    build_f_graph,
    make_bipartite_host,
    parse_spec,
    random_spec,
    sample_gnp,
)
from twouniv.oracle import verify_embedding
from twouniv.pipeline import (
    FailureReport,
    build_switch_plan,
    embed_full,
    embed_middle,
    switch_insert_pair,
    switch_insert_triangle,
)
from twouniv.reservoir import PartialEmbedding
from twouniv.rng import derive_seed
from twouniv.search import find_cycle, find_long_path


def is_path(g, vs):
    return len(set(vs)) == len(vs) and all(g.has_edge(a, b) for a, b in zip(vs, vs[1:]))


def tri_spec(k):
    return parse_spec(",".join(["C3"] * k))


# -- search -----------------------------------------------------------------


def test_hamilton_path_in_k10():
    vs = find_long_path(Graph.complete(10), [], 9, seed=1)
    assert len(vs) == 10 and is_path(Graph.complete(10), vs)


def test_star_has_no_long_path():
    star = Graph.from_edges(10, [(0, i) for i in range(1, 10)])
    with pytest.raises(PathSearchError):
        find_long_path(star, [], 3, seed=1)


def test_long_path_in_sparse_random_graph():
    g = sample_gnp(500, 0.1, 5)
    hits = 0
    for s in range(5):
        try:
            vs = find_long_path(g, [], 450, seed=s)
        except PathSearchError:
            continue
        assert len(vs) >= 451 and is_path(g, vs)
        hits += 1
    assert hits >= 4


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(3, 9))
def test_find_cycle_returns_cycles(seed, k):
    g = sample_gnp(40, 0.3, seed)
    allowed = set(range(5, 40))
    cyc = find_cycle(g, allowed, k, seed)
    if cyc is not None:
        assert len(cyc) == k and set(cyc) <= allowed
        assert is_path(g, cyc) and g.has_edge(cyc[-1], cyc[0])


# -- middle -----------------------------------------------------------------


def test_middle_paths_in_k20():
    f = Graph.from_edges(10, [(i, i + 1) for i in range(5)] + [(6, 7), (7, 8), (8, 9)])
    k = Graph.complete(20)
    emb = embed_middle(f, k, set(), ParamSet.practical(20, 0.5), seed=1)
    assert verify_embedding(f, k, emb.as_dict())[0]


def test_middle_two_short_cycles_in_k20():
    f = build_f_graph(parse_spec("C5,C4"))
    k = Graph.complete(20)
    emb = embed_middle(f, k, set(), ParamSet.practical(20, 0.5), seed=2)
    assert len(emb) == 9 and verify_embedding(f, k, emb.as_dict())[0]


def test_middle_cycles_and_long_path_in_random_host():
    f = build_f_graph(parse_spec("C4,C4,C4;P50"))
    g = sample_gnp(200, 0.3, 3)
    occupied = set(range(30))
    emb = embed_middle(f, g, occupied, ParamSet.practical(200, 0.1, ell0=20), seed=3)
    assert verify_embedding(f, g, emb.as_dict())[0]
    assert not set(emb.covered) & occupied


# -- switch plan ---------------------------------------------------------------


def test_plan_pair_with_anchors():
    f = augment_to_maximal(Graph.cycle(100), 3)
    d = decompose(f, ParamSet.practical(100, 1.0, beta=0.03, epsilon=0.1, ell0=20))
    plan = build_switch_plan(f, d, 3)
    assert plan.t == len(d.leftover) // 2 and plan.t_prime == plan.t + 1
    for inc in plan.increments:
        assert inc.kind == "pair" and all(a is not None and a in d.w_set for a in inc.anchors)


def test_plan_two_triangles():
    f = build_f_graph(tri_spec(20))
    d = decompose(f, ParamSet.practical(60, 1.0, beta=0.05, epsilon=0.1))
    plan = build_switch_plan(f, d, 3)
    assert [i.kind for i in plan.increments] == ["triangle", "triangle"] and plan.t_prime == 1


def test_plan_anchor_free_pair():
    from twouniv.decompose import Decomposition

    f = Graph.from_edges(8, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (6, 7)])
    d = Decomposition(8, frozenset(range(6)), frozenset(range(6)), 2, 6, 2)
    (inc,) = build_switch_plan(f, d, 3).increments
    assert inc.kind == "pair" and inc.anchors == (None, None)


# -- switch steps -----------------------------------------------------------------


def _pair_state():
    # path 0..7; edge 3-4 is new, anchored at 2 and 5
    f = Graph.path(8)
    emb = PartialEmbedding(f, 10, {0: 0, 1: 1, 2: 2, 5: 5, 6: 6, 7: 7})
    return f, emb


def test_pair_switch_in_k10():
    k = Graph.complete(10)
    for s in range(10):
        f, emb = _pair_state()
        log = []
        switch_insert_pair(emb, None, k, k, k, (2, 5), seed=s, new=(3, 4), log=log)
        assert len(emb) == 8 and emb.is_valid(k)
        assert log[0].valid and log[0].changed <= 10


def test_pair_switch_underflow_leaves_state():
    k = Graph.complete(10)
    f, emb = _pair_state()
    before = emb.as_dict()
    with pytest.raises(ReservoirUnderflow):
        switch_insert_pair(emb, None, k, k, k, (2, 5), seed=0, new=(3, 4), floor=1.0)
    assert emb.as_dict() == before


def _triangle_state():
    f = build_f_graph(tri_spec(4))
    return f, PartialEmbedding(f, 12, {a: a for a in range(9)})


def test_triangle_switch_in_k12():
    k = Graph.complete(12)
    for s in range(10):
        f, emb = _triangle_state()
        log = []
        switch_insert_triangle(emb, None, k, k, k, seed=s, new=(9, 10, 11), log=log)
        assert len(emb) == 12 and emb.is_valid(k) and log[0].changed <= 9


def test_triangle_switch_needs_a_triangle_in_g():
    k = Graph.complete(12)
    bip = make_bipartite_host(12, 0.5)
    f, emb = _triangle_state()
    before = emb.as_dict()
    with pytest.raises(SwitchSearchError):
        switch_insert_triangle(emb, None, k, bip, k, seed=0, new=(9, 10, 11))
    assert emb.as_dict() == before


# -- end to end --------------------------------------------------------------------


def test_hamilton_cycle_in_complete_host():
    k = Graph.complete(60)
    res = embed_full(Graph.cycle(60), k, k, ParamSet.practical(60, 0.5, p=1.0), seed=1)
    assert res.success and verify_embedding(Graph.cycle(60), k, res.embedding, require_spanning=True)[0]


def test_triangle_factor_n60_success_rate():
    f = build_f_graph(tri_spec(20))
    ga = make_bipartite_host(60, 0.3)
    prm = ParamSet.practical(60, 0.3, p=0.5)
    wins = 0
    for s in range(50):
        g = sample_gnp(60, 0.5, derive_seed(60, s))
        res = embed_full(f, g, ga, prm, seed=s)
        if res.success:
            assert verify_embedding(f, g.union(ga), res.embedding, require_spanning=True)[0]
            wins += 1
    assert wins >= 45


def test_triangle_factor_in_bipartite_host_fails():
    f = build_f_graph(tri_spec(20))
    res = embed_full(f, Graph.empty(60), make_bipartite_host(60, 0.3), ParamSet.practical(60, 0.3, retry_budget=3), seed=0)
    assert not res.success and res.failure.stage in ("core", "middle", "switch")
    rec = res.failure.to_record()
    assert rec.startswith(f"stage={res.failure.stage}\treason=") and "\tseed=0\tsizes=" in rec


def test_input_checks():
    k = Graph.complete(10)
    prm = ParamSet.practical(10, 0.3)
    assert embed_full(Graph.cycle(9), k, k, prm).failure.stage == "input"
    assert embed_full(Graph.cycle(10), k, Graph.empty(10), prm).failure.stage == "input"
    assert embed_full(Graph.cycle(10), k, k, ParamSet.practical(10, 0.3, ell=11)).failure.stage == "input"


def test_failure_record_is_one_line():
    rep = FailureReport("switch", "no edge\nfound", 7, {"n": 5})
    assert rep.to_record() == "stage=switch\treason=no edge found\tseed=7\tsizes=n=5"


@settings(max_examples=25, deadline=None)
@given(st.integers(30, 90), st.sampled_from([3, 4, 5]), st.integers(0, 2**32))
def test_every_success_is_a_spanning_embedding(n, ell, seed):
    f = build_f_graph(random_spec(n, ell, seed))
    g = sample_gnp(n, 0.5, seed)
    ga = make_bipartite_host(n, 0.3)
    alpha = ga.min_degree() / n  # the host rounds 0.3 n to the nearest integer
    res = embed_full(f, g, ga, ParamSet.practical(n, alpha, ell=ell, p=0.5, retry_budget=5), seed=seed)
    if res.success:
        ok, problems = verify_embedding(f, g.union(ga), res.embedding, require_spanning=True)
        assert ok, problems
        for rec in res.switch_log:
            assert rec.valid and rec.changed <= (10 if rec.kind == "pair" else 9)
    else:
        assert res.failure.stage in ("decompose", "core", "middle", "switch", "verify")
