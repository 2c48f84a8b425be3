import random
from collections import deque

import pytest

from polyalc import (
    And,
    AtLeastBin,
    AtomicConcept,
    BinRole,
    InputError,
    Not,
    ReifySignature,
    UnravelBudgetError,
    canonical_map,
    check_alcqi,
    extract_polyadic,
    g_unravel,
    make_interp,
    modal_depth,
    random_interp,
)
from polyalc.model import ArityRel, Signature


def loop_model():
    return make_interp(["r"], {}, {"R": ArityRel.of(2, {("r", "r")})})


def undirected_edges(tree):
    pairs = []
    for rel in tree.roles.values():
        pairs.extend(rel.tuples)
    return pairs


def node_depths(result):
    adj = {}
    for a, b in undirected_edges(result.tree):
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    depths = {result.root: 0}
    queue = deque([result.root])
    while queue:
        node = queue.popleft()
        for nxt in adj.get(node, ()):
            if nxt not in depths:
                depths[nxt] = depths[node] + 1
                queue.append(nxt)
    return depths


def rand_alcqi(rng, depth):
    roll = rng.random()
    if depth == 0 or roll < 0.3:
        return rng.choice(
            [AtomicConcept("A"), AtomicConcept("B"), Not(AtomicConcept("A"))]
        )
    if roll < 0.5:
        return And(rand_alcqi(rng, depth - 1), rand_alcqi(rng, depth - 1))
    if roll < 0.6:
        return Not(rand_alcqi(rng, depth - 1))
    role = BinRole("R", rng.random() < 0.5)
    return AtLeastBin(rng.randint(1, 2), role, rand_alcqi(rng, depth - 1))


def rand_binary_interp(seed, size=4, density=0.35):
    sig = Signature.make(concepts=["A", "B"], roles={"R": 2})
    return random_interp(seed, size, sig, density=density)


# ---------------------------------------------------------------------------
# construction goldens

def test_loop_depth_two_has_five_nodes():
    res = g_unravel(loop_model(), "r", 2)
    assert len(res.tree.domain) == 5
    assert len(res.tree.roles["R"].tuples) == 4
    assert all(elem == "r" for elem in res.canon.values())


def test_loop_depth_two_excludes_mixed_walks():
    # forward and backward runs never alternate on a single loop edge
    res = g_unravel(loop_model(), "r", 2)
    out_of_root = {b for (a, b) in res.tree.roles["R"].tuples if a == res.root}
    into_root = {a for (a, b) in res.tree.roles["R"].tuples if b == res.root}
    assert len(out_of_root) == 1 and len(into_root) == 1
    fwd = out_of_root.pop()
    bwd = into_root.pop()
    rel = res.tree.roles["R"].tuples
    assert {a for (a, b) in rel if b == fwd} == {res.root}
    assert len({b for (a, b) in rel if a == fwd}) == 1
    assert {b for (a, b) in rel if a == bwd} == {res.root}
    assert len({a for (a, b) in rel if b == bwd}) == 1


def test_depth_zero_single_node():
    res = g_unravel(loop_model(), "r", 0)
    assert res.tree.domain == frozenset({res.root})
    assert res.tree.roles["R"].tuples == frozenset()
    assert res.canon[res.root] == "r"


def test_atomic_concepts_follow_last_element():
    interp = make_interp(
        ["a", "b"], {"A": ["b"]}, {"R": ArityRel.of(2, {("a", "b")})}
    )
    res = g_unravel(interp, "a", 1)
    for node in res.tree.domain:
        assert (node in res.tree.concept_ext("A")) == (res.canon[node] == "b")


def test_tree_input_reproduced_up_to_isomorphism():
    rng = random.Random(9)
    for _ in range(20):
        size = rng.randint(2, 7)
        elems = ["e%d" % i for i in range(size)]
        edges = set()
        for i in range(1, size):
            parent = elems[rng.randrange(i)]
            if rng.random() < 0.5:
                edges.add((parent, elems[i]))
            else:
                edges.add((elems[i], parent))
        interp = make_interp(elems, {"A": [elems[0]]}, {"R": ArityRel.of(2, edges)})
        res = g_unravel(interp, "e0", size)
        canon = res.canon
        assert len(res.tree.domain) == size
        assert len(set(canon.values())) == size
        mapped = {(canon[a], canon[b]) for (a, b) in res.tree.roles["R"].tuples}
        assert mapped == edges
        assert len(res.tree.roles["R"].tuples) == len(edges)


# ---------------------------------------------------------------------------
# canonical map

def test_canonical_map_goldens():
    interp = make_interp(["a", "b"], {}, {"R": ArityRel.of(2, {("a", "b")})})
    res = g_unravel(interp, "a", 1)
    assert canonical_map(res, res.root) == "a"
    child = next(iter(res.tree.domain - {res.root}))
    assert canonical_map(res, child) == "b"
    with pytest.raises(InputError):
        canonical_map(res, "zzz")


def test_canon_image_is_reachable_set():
    for seed in range(20):
        interp = rand_binary_interp(seed)
        root = sorted(interp.domain)[0]
        res = g_unravel(interp, root, len(interp.domain))
        adj = {}
        for a, b in interp.roles["R"].tuples:
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        reach = {root}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in adj.get(x, ()):
                if y not in reach:
                    reach.add(y)
                    queue.append(y)
        assert set(res.canon.values()) == reach


# ---------------------------------------------------------------------------
# invariants

def test_tree_likeness():
    for seed in range(15):
        interp = rand_binary_interp(seed)
        root = sorted(interp.domain)[0]
        res = g_unravel(interp, root, 3)
        nodes = res.tree.domain
        edges = undirected_edges(res.tree)
        assert len(edges) == len(nodes) - 1
        assert set(node_depths(res)) == set(nodes)


def test_degree_preservation_below_frontier():
    depth = 3
    for seed in range(15):
        interp = rand_binary_interp(seed, size=3, density=0.4)
        root = sorted(interp.domain)[0]
        res = g_unravel(interp, root, depth)
        depths = node_depths(res)
        rel = res.tree.roles["R"].tuples
        src = interp.roles["R"].tuples
        for node, level in depths.items():
            if level >= depth:
                continue
            elem = res.canon[node]
            assert len([b for (a, b) in rel if a == node]) == len(
                [b for (a, b) in src if a == elem]
            )
            assert len([a for (a, b) in rel if b == node]) == len(
                [a for (a, b) in src if b == elem]
            )


def test_bounded_concept_agreement():
    # walks deeper than depth - modal depth may disagree, all others agree
    rng = random.Random(21)
    depth = 3
    checked = 0
    for seed in range(10):
        interp = rand_binary_interp(seed, size=3, density=0.4)
        root = sorted(interp.domain)[0]
        res = g_unravel(interp, root, depth)
        depths = node_depths(res)
        for _ in range(8):
            c = rand_alcqi(rng, 2)
            q = modal_depth(c)
            tree_ext = check_alcqi(c, res.tree)
            src_ext = check_alcqi(c, interp)
            for node, level in depths.items():
                if level <= depth - q:
                    assert (node in tree_ext) == (res.canon[node] in src_ext)
                    checked += 1
    assert checked > 200


def test_duplicate_lanterns_separate_after_unraveling():
    # two lanterns encode one source tuple; their walk copies encode two
    binary = make_interp(
        ["a", "b", "l1", "l2"],
        {"@dom": ["a", "b"], "@L_R": ["l1", "l2"]},
        {
            "@F1": ArityRel.of(2, {("l1", "a"), ("l2", "a")}),
            "@F2": ArityRel.of(2, {("l1", "b"), ("l2", "b")}),
        },
    )
    sig = ReifySignature({"R": 2})
    assert extract_polyadic(binary, sig).roles["R"].tuples == frozenset({("a", "b")})
    res = g_unravel(binary, "a", 2)
    unraveled = extract_polyadic(res.tree, sig)
    assert len(unraveled.roles["R"].tuples) == 2


# ---------------------------------------------------------------------------
# errors

def test_unknown_root_rejected():
    with pytest.raises(InputError):
        g_unravel(loop_model(), "q", 1)


def test_negative_depth_rejected():
    with pytest.raises(InputError):
        g_unravel(loop_model(), "r", -1)


def test_nonbinary_role_rejected():
    interp = make_interp(["a"], {}, {"R": ArityRel.of(3, {("a", "a", "a")})})
    with pytest.raises(InputError):
        g_unravel(interp, "a", 1)


def test_node_budget_enforced():
    with pytest.raises(UnravelBudgetError):
        g_unravel(loop_model(), "r", 2, max_nodes=3)
