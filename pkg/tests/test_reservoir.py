import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twouniv.errors import CenterCapacityError, PlacementError, StageError
from twouniv.graph import Graph
from twouniv.instances import ParamSet, build_f_graph, make_bipartite_host, parse_spec, sample_gnp
from twouniv.oracle import verify_embedding
from twouniv.reservoir import (
    PartialEmbedding,
    ReservoirIndex,
    center_capacity,
    copy_audit,
    embed_core,
    pick_centers,
    place_centered_copies,
    reservoir_set,
    reservoir_single,
)
from twouniv.rng import make_rng


def brute_reservoir(emb, h, u, v):
    out = set()
    for w in range(h.n):
        if not emb.is_covered(w) or not h.has_edge(u, w):
            continue
        a = emb.preimage(w)
        nbr_imgs = {emb.image(b) for b in emb.target.neighbors(a) if emb.is_mapped(b)}
        if all(h.has_edge(v, x) for x in nbr_imgs):
            out.add(w)
    return out


def test_empty_embedding_has_empty_reservoirs():
    h = Graph.complete(6)
    emb = PartialEmbedding(Graph.cycle(3), 6)
    assert all(not reservoir_set(emb, h, u, v) for u in range(6) for v in range(6) if u != v)


def test_single_edge_in_k5():
    h = Graph.complete(5)
    emb = PartialEmbedding(Graph.path(2), 5, {0: 1, 1: 3})
    for u in range(5):
        for v in (0, 2, 4):  # v outside the image
            if u != v:
                assert reservoir_set(emb, h, u, v) == {1, 3} - {u}


def test_edge_inside_bipartite_side_is_invalid():
    h = make_bipartite_host(10, 0.3)  # parts {0,1,2} and {3..9}
    emb = PartialEmbedding(Graph.path(2), 10, {0: 4, 1: 5})
    assert not emb.is_valid(h) and emb.violations(h) == [(0, 1)]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_reservoir_matches_brute_force(seed):
    rng = make_rng(seed)
    f = build_f_graph(parse_spec("C5,C4,C3;P1"))
    n = int(rng.integers(f.n, 51))
    h = sample_gnp(n, 0.5, rng)
    perm = rng.permutation(n)[: f.n]
    emb = PartialEmbedding(f, n, {a: int(perm[a]) for a in range(f.n) if rng.random() < 0.8})
    for _ in range(20):
        u, v = (int(x) for x in rng.choice(n, size=2, replace=False))
        assert reservoir_set(emb, h, u, v) == brute_reservoir(emb, h, u, v)
        single = {w for w in emb.covered if w != v and emb.image_neighbors(w) <= h.neighbors(v)}
        assert reservoir_single(emb, h, v) == single


def test_partial_embedding_bookkeeping():
    emb = PartialEmbedding(Graph.cycle(4), 10)
    emb.assign(0, 5)
    with pytest.raises(ValueError):
        emb.assign(1, 5)
    with pytest.raises(ValueError):
        emb.assign(0, 6)
    assert emb.move(0, 7) == 5 and emb.preimage(7) == 0 and not emb.is_covered(5)


def test_centres_on_c10_are_antipodal():
    f = Graph.cycle(10)
    for s in range(10):
        a, b = pick_centers(f, 2, 3, s)
        assert f.distance(a, b) == 5


def test_centres_one_per_triangle():
    f = build_f_graph(parse_spec("C3,C3,C3,C3"))
    cs = pick_centers(f, 4, 3, 0)
    assert sorted(c // 3 for c in cs) == [0, 1, 2, 3]


def test_centre_capacity_shortfall():
    f = build_f_graph(parse_spec("C7,C3"))
    assert center_capacity(f, 3) == 1
    with pytest.raises(CenterCapacityError):
        pick_centers(f, 2, 3, 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_centres_are_far_apart(seed):
    rng = make_rng(seed)
    spec = parse_spec(",".join(f"C{int(k)}" for k in rng.integers(5, 40, size=int(rng.integers(1, 6)))))
    f = build_f_graph(spec)
    t = center_capacity(f, 5)
    cs = pick_centers(f, t, 5, rng)
    assert len(set(cs)) == t
    for i, a in enumerate(cs):
        assert f.degree(a) == 2
        for b in cs[i + 1 :]:
            assert f.distance(a, b) >= 5


def test_copies_in_complete_host():
    k = Graph.complete(30)
    copies = place_centered_copies(k, k, "cherry", 5, 3, seed=1)
    used = [x for c in copies for x in c.vertices]
    assert len(copies) == 5 and len(set(used)) == len(used)
    for c in copies:
        assert k.has_edge(c.center, c.ends[0]) and k.has_edge(c.center, c.ends[1])


def test_copies_need_edges():
    with pytest.raises(PlacementError):
        place_centered_copies(Graph.empty(30), Graph.empty(30), "cherry", 2, 0, seed=1)


def test_c3_and_c4_shapes():
    g = sample_gnp(80, 0.4, 2)
    for shape in ("C3", "C4"):
        copies = place_centered_copies(g, g, shape, 6, 0, seed=3)
        used = [x for c in copies for x in c.vertices]
        assert len(set(used)) == len(used)
        for c in copies:
            a, b = c.ends
            assert g.has_edge(c.center, a) and g.has_edge(c.center, b)
            if shape == "C3":
                assert g.has_edge(a, b)
            else:
                assert g.has_edge(a, c.fourth) and g.has_edge(b, c.fourth)


def test_bipartite_reservoir_audit_target():
    # pairs with both ends in the large side need a cherry wholly inside the
    # 60-vertex side; uniform draws essentially never give one, so the
    # calibrated audit target is 0 and a target of 6 is reported as a failure
    g = sample_gnp(600, 0.2, 1)
    ga = make_bipartite_host(600, 0.1)
    copies = place_centered_copies(g, ga, "cherry", 30, 0, seed=0)
    assert len(copies) == 30
    assert min(copy_audit(copies, ga, [(100, 200), (300, 400)])) == 0
    with pytest.raises(PlacementError) as info:
        place_centered_copies(g, ga, "cherry", 30, 6, seed=0, retries=3)
    assert info.value.audit.best_min < 6


def test_core_of_ten_triangles_in_k60():
    k = Graph.complete(60)
    f = build_f_graph(parse_spec(",".join(["C3"] * 10)))
    prm = ParamSet.practical(60, 0.5)
    emb, index = embed_core(f, k, k, prm, seed=4)
    ok, problems = verify_embedding(f, k, emb.as_dict())
    assert ok, problems
    uncovered = [x for x in range(60) if not emb.is_covered(x)]
    assert min(len(reservoir_set(emb, k, u, v)) for u in range(60) for v in uncovered if u != v) >= 29


def test_core_hamilton_cycle_in_perturbed_host():
    g = sample_gnp(600, 0.15, 11)
    ga = make_bipartite_host(600, 0.2)
    f = Graph.cycle(30)
    prm = ParamSet.practical(600, 0.2, p=0.15, beta=0.005)
    for attempt in range(20):
        try:
            emb, index = embed_core(f, g, ga, prm, seed=attempt)
            break
        except StageError:
            continue
    else:
        pytest.fail("no core embedding in 20 attempts")
    ok, problems = verify_embedding(f, g.union(ga), emb.as_dict())
    assert ok, problems
    assert isinstance(index, ReservoirIndex) and index.sizes


def test_core_fails_without_edges():
    e = Graph.empty(60)
    f = build_f_graph(parse_spec(",".join(["C3"] * 10)))
    with pytest.raises(StageError):
        embed_core(f, e, e, ParamSet.practical(60, 0.5), seed=0)
