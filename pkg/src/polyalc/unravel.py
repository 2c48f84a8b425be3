"""Depth-bounded graded unraveling of binary structures.

Nodes of the result are walks from the root that never immediately undo the
step just taken (down an edge and straight back up it). This keeps both the
out-degree and the in-degree of every role at every non-frontier node equal
to the degrees of the walk's last element in the source structure.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import BudgetError, InputError
from .model import ArityRel, Interp


class UnravelBudgetError(BudgetError):
    pass


@dataclass(frozen=True)
class UnravelResult:
    tree: Interp
    canon: Mapping[str, str]
    root: str


def canonical_map(result: UnravelResult, node: str) -> str:
    got = result.canon.get(node)
    if got is None:
        raise InputError("unknown node %s" % node)
    return got


def g_unravel(
    interp: Interp,
    root: str,
    depth: int,
    max_nodes: Optional[int] = None,
) -> UnravelResult:
    """Unravel from root into walks of at most `depth` edges.

    An edge is a role name taken forward or backward; a walk may not follow
    an edge and immediately return along it, but every other revisit is kept.
    Role edges connect each walk to its one-step extensions: forward steps
    point from the shorter walk to the longer one, backward steps the other
    way around.
    """
    if root not in interp.domain:
        raise InputError("root %s not in the domain" % root)
    if depth < 0:
        raise InputError("depth must be >= 0, got %d" % depth)
    for name, rel in interp.roles.items():
        if rel.arity != 2:
            raise InputError("role %s has arity %d, binary structure required" % (name, rel.arity))

    forward: dict[str, dict[str, list[str]]] = {}
    backward: dict[str, dict[str, list[str]]] = {}
    for name in sorted(interp.roles):
        fw: dict[str, list[str]] = {}
        bw: dict[str, list[str]] = {}
        for (a, b) in sorted(interp.roles[name].tuples):
            fw.setdefault(a, []).append(b)
            bw.setdefault(b, []).append(a)
        forward[name] = fw
        backward[name] = bw

    # node bookkeeping: element, previous element and incoming edge label
    ids: list[str] = []
    elem_of: dict[str, str] = {}
    edges: dict[str, set[tuple[str, str]]] = {name: set() for name in interp.roles}

    def new_node(elem: str) -> str:
        node = "n%d" % len(ids)
        ids.append(node)
        elem_of[node] = elem
        if max_nodes is not None and len(ids) > max_nodes:
            raise UnravelBudgetError("unraveling exceeded %d nodes" % max_nodes)
        return node

    root_id = new_node(root)
    queue: deque = deque()
    queue.append((root_id, root, None, None, 0))
    while queue:
        node, elem, prev_elem, in_edge, level = queue.popleft()
        if level == depth:
            continue
        for role in sorted(interp.roles):
            for inv in (False, True):
                steps = backward[role] if inv else forward[role]
                for target in steps.get(elem, ()):
                    if (
                        prev_elem is not None
                        and target == prev_elem
                        and in_edge == (role, not inv)
                    ):
                        continue
                    child = new_node(target)
                    if inv:
                        edges[role].add((child, node))
                    else:
                        edges[role].add((node, child))
                    queue.append((child, target, elem, (role, inv), level + 1))

    concepts = {
        name: frozenset(n for n in ids if elem_of[n] in ext)
        for name, ext in interp.concepts.items()
    }
    tree = Interp(
        frozenset(ids),
        concepts,
        {name: ArityRel.of(2, pairs) for name, pairs in edges.items()},
    )
    return UnravelResult(tree, dict(elem_of), root_id)
