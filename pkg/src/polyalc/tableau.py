"""Tableau decision procedure for the binary fragment, no TBox.

alcqi_sat explores a completion tree depth-first: conjunctions expand in
place, disjunctions and at-most constraints branch, at-least constraints
create fresh pairwise-distinct successors, and overfull at-most
neighborhoods merge compatible neighbors. Without a TBox the exploration
terminates, so unsat verdicts are final. alcqp_sat composes the polyadic
reduction with this procedure and reads a polyadic witness back off the
unraveled tree model.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .errors import BudgetError, InputError
from .model import ArityRel, Interp
from .reify import ReifySignature, extract_polyadic, translate, with_dom
from .semantics import check_alcqi, check_concept
from .syntax import (
    And, AtLeastBin, AtMostBin, AtomicConcept, Bot, Concept, AlcqiConcept,
    BinRole, Not, Or, Top, expand_shorthand, modal_depth,
)
from .unravel import g_unravel

DEFAULT_K_CAP = 64
DEFAULT_STEP_BUDGET = 200_000


class KCapError(BudgetError):
    pass


class TableauBudgetError(BudgetError):
    pass


def nnf(c: AlcqiConcept) -> AlcqiConcept:
    """Negation normal form; negated counting bounds flip between at-least
    and at-most."""
    if isinstance(c, (Top, Bot, AtomicConcept)):
        return c
    if isinstance(c, And):
        return And(nnf(c.left), nnf(c.right))
    if isinstance(c, Or):
        return Or(nnf(c.left), nnf(c.right))
    if isinstance(c, AtLeastBin):
        return AtLeastBin(c.count, c.role, nnf(c.arg))
    if isinstance(c, AtMostBin):
        return AtMostBin(c.count, c.role, nnf(c.arg))
    if isinstance(c, Not):
        return nnf_not(c.sub)
    raise TypeError("not a binary-fragment concept: %r" % (c,))


def nnf_not(c: AlcqiConcept) -> AlcqiConcept:
    if isinstance(c, Top):
        return Bot()
    if isinstance(c, Bot):
        return Top()
    if isinstance(c, AtomicConcept):
        return Not(c)
    if isinstance(c, Not):
        return nnf(c.sub)
    if isinstance(c, And):
        return Or(nnf_not(c.left), nnf_not(c.right))
    if isinstance(c, Or):
        return And(nnf_not(c.left), nnf_not(c.right))
    if isinstance(c, AtLeastBin):
        return AtMostBin(c.count - 1, c.role, nnf(c.arg))
    if isinstance(c, AtMostBin):
        return AtLeastBin(c.count + 1, c.role, nnf(c.arg))
    raise TypeError("not a binary-fragment concept: %r" % (c,))


@dataclass(frozen=True)
class SatResult:
    sat: bool
    witness: Optional[Interp] = None
    element: Optional[str] = None


def _entails(c: AlcqiConcept, d: AlcqiConcept) -> bool:
    """Sound syntactic entailment check on NNF concepts; False means unknown."""
    if isinstance(d, Top) or isinstance(c, Bot):
        return True
    if c == d:
        return True
    if isinstance(c, And):
        return _entails(c.left, d) or _entails(c.right, d)
    if isinstance(d, And):
        return _entails(c, d.left) and _entails(c, d.right)
    if isinstance(d, Or):
        return _entails(c, d.left) or _entails(c, d.right)
    if isinstance(c, Or):
        return _entails(c.left, d) and _entails(c.right, d)
    if isinstance(c, AtLeastBin) and isinstance(d, AtLeastBin):
        return c.role == d.role and c.count >= d.count and _entails(c.arg, d.arg)
    if isinstance(c, AtMostBin) and isinstance(d, AtMostBin):
        return c.role == d.role and c.count <= d.count and _entails(d.arg, c.arg)
    return False


class _Node:
    __slots__ = ("label", "parent", "edge")

    def __init__(self, label, parent, edge):
        self.label = label  # dict[NnfConcept, None], insertion-ordered
        self.parent = parent
        self.edge = edge  # (role name, "fwd"|"inv") toward the parent

    def clone(self) -> "_Node":
        return _Node(dict(self.label), self.parent, self.edge)


class _State:
    __slots__ = ("nodes", "neq", "counter")

    def __init__(self, nodes, neq, counter):
        self.nodes = nodes  # dict[str, _Node], insertion-ordered
        self.neq = neq  # set of frozenset node-id pairs
        self.counter = counter

    def clone(self) -> "_State":
        return _State(
            {k: v.clone() for k, v in self.nodes.items()},
            set(self.neq),
            self.counter,
        )

    def fresh(self, label, parent, edge) -> str:
        name = "w%d" % self.counter
        self.counter += 1
        self.nodes[name] = _Node(label, parent, edge)
        return name

    def distinct(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self.neq

    def neighbors(self, x: str, role: BinRole) -> list[str]:
        """Nodes y with (x,y) in the role's relation as oriented by the tree."""
        out = []
        node = self.nodes[x]
        if node.parent is not None and node.parent in self.nodes:
            name, how = node.edge
            if name == role.name:
                # edge fwd means (parent, x); inv means (x, parent)
                if (how == "fwd") == role.inverse:
                    out.append(node.parent)
        for y, rec in self.nodes.items():
            if rec.parent != x:
                continue
            name, how = rec.edge
            if name == role.name and (how == "inv") == role.inverse:
                out.append(y)
        return out

    def prune(self, top: str) -> None:
        doomed = {top}
        changed = True
        while changed:
            changed = False
            for y, rec in self.nodes.items():
                if y not in doomed and rec.parent in doomed:
                    doomed.add(y)
                    changed = True
        for y in doomed:
            del self.nodes[y]

    def merge(self, merged: str, survivor: str) -> None:
        self.nodes[survivor].label.update(self.nodes[merged].label)
        for pair in [p for p in self.neq if merged in p]:
            (other,) = pair - {merged}
            self.neq.add(frozenset((survivor, other)))
        self.prune(merged)


def _has_distinct_subset(state: _State, candidates: list[str], k: int) -> bool:
    """Whether k of the candidates are pairwise recorded as distinct."""
    if k == 0:
        return True
    if len(candidates) < k:
        return False

    def grow(pool: list[str], need: int) -> bool:
        if need == 0:
            return True
        if len(pool) < need:
            return False
        first, rest = pool[0], pool[1:]
        linked = [y for y in rest if state.distinct(first, y)]
        if grow(linked, need - 1):
            return True
        return grow(rest, need)

    return grow(candidates, k)


class _Tableau:
    def __init__(self, k_cap: int, step_budget: int, rng: Optional[random.Random]):
        self.k_cap = k_cap
        self.steps = step_budget
        self.rng = rng
        self._entcache: dict = {}

    def _tick(self) -> None:
        self.steps -= 1
        if self.steps < 0:
            raise TableauBudgetError("tableau exceeded its step budget")

    def _order(self, alternatives: list) -> list:
        if self.rng is not None:
            alternatives = list(alternatives)
            self.rng.shuffle(alternatives)
        return alternatives

    def run(self, state: _State) -> Optional[_State]:
        while True:
            self._tick()
            if self._clash(state):
                return None
            if self._apply_and(state):
                continue
            branches = self._branch_rule(state)
            if branches is not None:
                for action in self._order(branches):
                    child = state.clone()
                    action(child)
                    found = self.run(child)
                    if found is not None:
                        return found
                return None
            if self._apply_atleast(state):
                continue
            return state

    # -- clash ---------------------------------------------------------------

    def _clash(self, state: _State) -> bool:
        for x, rec in state.nodes.items():
            uppers = []
            for c in rec.label:
                if isinstance(c, Bot):
                    return True
                if isinstance(c, Not) and c.sub in rec.label:
                    return True
                if isinstance(c, AtMostBin):
                    uppers.append(c)
                    cands = [
                        y for y in state.neighbors(x, c.role)
                        if self._holds(state, y, c.arg)
                    ]
                    if _has_distinct_subset(state, cands, c.count + 1):
                        return True
            for c in rec.label:
                if not isinstance(c, AtLeastBin):
                    continue
                for u in uppers:
                    if (
                        c.role == u.role
                        and c.count > u.count
                        and self._entails_memo(c.arg, u.arg)
                    ):
                        return True
        return False

    def _entails_memo(self, c: AlcqiConcept, d: AlcqiConcept) -> bool:
        key = (c, d)
        hit = self._entcache.get(key)
        if hit is None:
            hit = self._entcache[key] = _entails(c, d)
        return hit

    @staticmethod
    def _holds(state: _State, y: str, c: AlcqiConcept) -> bool:
        if isinstance(c, Top):
            return True
        return c in state.nodes[y].label

    # -- deterministic expansion ----------------------------------------------

    def _apply_and(self, state: _State) -> bool:
        acted = False
        for rec in list(state.nodes.values()):
            for c in list(rec.label):
                if isinstance(c, And):
                    for part in (c.left, c.right):
                        if part not in rec.label:
                            rec.label[part] = None
                            acted = True
        return acted

    # -- branching rules --------------------------------------------------------

    def _branch_rule(self, state: _State):
        for x in list(state.nodes):
            rec = state.nodes[x]
            for c in list(rec.label):
                if isinstance(c, Or):
                    if c.left in rec.label or c.right in rec.label:
                        continue
                    return [
                        lambda s, x=x, d=c.left: s.nodes[x].label.update({d: None}),
                        lambda s, x=x, d=c.right: s.nodes[x].label.update({d: None}),
                    ]
                if isinstance(c, AtMostBin):
                    arg, neg_arg = c.arg, nnf_not(c.arg)
                    for y in state.neighbors(x, c.role):
                        if isinstance(arg, Top):
                            break
                        if arg in state.nodes[y].label or neg_arg in state.nodes[y].label:
                            continue
                        return [
                            lambda s, y=y, d=arg: s.nodes[y].label.update({d: None}),
                            lambda s, y=y, d=neg_arg: s.nodes[y].label.update({d: None}),
                        ]
                    cands = [
                        y for y in state.neighbors(x, c.role)
                        if self._holds(state, y, c.arg)
                    ]
                    if len(cands) > c.count:
                        actions = []
                        for a, b in combinations(cands, 2):
                            if state.distinct(a, b):
                                continue
                            merged, survivor = self._merge_direction(state, x, a, b)
                            actions.append(
                                lambda s, m=merged, v=survivor: s.merge(m, v)
                            )
                        if actions:
                            return actions
        return None

    @staticmethod
    def _merge_direction(state: _State, x: str, a: str, b: str) -> tuple[str, str]:
        """Merge a child into the shared neighbor's parent, or the younger
        sibling into the older one."""
        if state.nodes[x].parent == a:
            return b, a
        if state.nodes[x].parent == b:
            return a, b
        if int(a[1:]) < int(b[1:]):
            return b, a
        return a, b

    # -- generating rule -----------------------------------------------------------

    def _apply_atleast(self, state: _State) -> bool:
        for x in list(state.nodes):
            rec = state.nodes[x]
            for c in list(rec.label):
                if not isinstance(c, AtLeastBin):
                    continue
                if c.count > self.k_cap:
                    raise KCapError(
                        "count %d exceeds the configured cap %d" % (c.count, self.k_cap)
                    )
                cands = [
                    y for y in state.neighbors(x, c.role)
                    if self._holds(state, y, c.arg)
                ]
                if _has_distinct_subset(state, cands, c.count):
                    continue
                how = "inv" if c.role.inverse else "fwd"
                created = []
                for _ in range(c.count):
                    label = {Top(): None, c.arg: None}
                    created.append(state.fresh(label, x, (c.role.name, how)))
                for a, b in combinations(created, 2):
                    state.neq.add(frozenset((a, b)))
                return True
        return False


def alcqi_sat(
    c: AlcqiConcept,
    k_cap: int = DEFAULT_K_CAP,
    step_budget: int = DEFAULT_STEP_BUDGET,
    shuffle_seed: Optional[int] = None,
) -> SatResult:
    """Satisfiability of a binary-fragment concept, with a tree witness."""
    root_concept = nnf(c)
    rng = random.Random(shuffle_seed) if shuffle_seed is not None else None
    driver = _Tableau(k_cap, step_budget, rng)
    state = _State({}, set(), 0)
    root = state.fresh({Top(): None, root_concept: None}, None, None)
    final = driver.run(state)
    if final is None:
        return SatResult(False)
    witness = _state_to_interp(final, c)
    if root not in check_alcqi(c, witness):
        raise AssertionError("internal: open branch does not model-check")
    return SatResult(True, witness, root)


def _state_to_interp(state: _State, c: AlcqiConcept) -> Interp:
    from .syntax import concept_names, concept_roles

    names = concept_names(c)
    role_names = set(concept_roles(c))
    concepts: dict[str, set[str]] = {n: set() for n in names}
    roles: dict[str, set[tuple[str, str]]] = {n: set() for n in role_names}
    for x, rec in state.nodes.items():
        for d in rec.label:
            if isinstance(d, AtomicConcept):
                concepts.setdefault(d.name, set()).add(x)
        if rec.parent is not None:
            name, how = rec.edge
            pair = (rec.parent, x) if how == "fwd" else (x, rec.parent)
            roles.setdefault(name, set()).add(pair)
    return Interp(
        frozenset(state.nodes),
        {n: frozenset(v) for n, v in concepts.items()},
        {n: ArityRel.of(2, v) for n, v in roles.items()},
    )


def branching_bound(c: Concept) -> int:
    """Tree-model domain bound 1 + b + b^2 with b the worst single counting
    constraint, b = max k*(arity-1) over counting subconcepts."""
    core = expand_shorthand(c)

    def max_b(x) -> int:
        if isinstance(x, (Top, Bot, AtomicConcept)):
            return 0
        if isinstance(x, Not):
            return max_b(x.sub)
        if isinstance(x, And):
            return max(max_b(x.left), max_b(x.right))
        from .syntax import AtLeast

        if isinstance(x, AtLeast):
            own = x.count * (x.role.arity - 1)
            return max(own, max((max_b(a) for a in x.args), default=0))
        raise TypeError("not a core concept: %r" % (x,))

    b = max_b(core)
    return 1 + b + b * b


def alcqp_sat(
    c: Concept,
    k_cap: int = DEFAULT_K_CAP,
    step_budget: int = DEFAULT_STEP_BUDGET,
    shuffle_seed: Optional[int] = None,
) -> SatResult:
    """Polyadic satisfiability via the binary reduction.

    On sat, the binary tree witness is unraveled to the translated concept's
    modal depth so every tuple representative is unambiguous, then a polyadic
    witness is extracted; the result model-checks at the returned element.
    """
    core = expand_shorthand(c)
    sig = ReifySignature.from_concept(core)
    target = with_dom(translate(core, sig))
    res = alcqi_sat(target, k_cap, step_budget, shuffle_seed)
    if not res.sat:
        return SatResult(False)
    unr = g_unravel(res.witness, res.element, modal_depth(target))
    poly = extract_polyadic(unr.tree, sig)
    if unr.root not in check_concept(core, poly):
        raise AssertionError("internal: extracted witness does not model-check")
    return SatResult(True, poly, unr.root)
