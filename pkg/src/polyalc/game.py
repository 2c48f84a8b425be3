"""Round-based comparison game between two pointed structures.

Each round the challenger names up to `grading` distinct tuples of one role
type starting at the current point on a side of their choice, the defender
answers with that many matching-type tuples on the other side, the
challenger then points at a coordinate of any named tuple, and the defender
commits to the same coordinate of one tuple on the opposite side. The new
points must carry the same atomic concepts. The defender wins by surviving
`rounds` rounds.

`duplicator_wins` is the exhaustive minimax over that game for two pointed
structures of any arity. `game_partition` computes the same relation for
every pair of points across many binary structures at once by iterated
refinement, which the bulk comparisons need.
"""

from __future__ import annotations

from itertools import combinations, permutations, product
from typing import Mapping, Optional, Sequence

from .errors import BudgetError, InputError
from .model import Interp
from .syntax import (
    And, AtLeast, AtomicConcept, Concept, Not, Permutation, RoleExpr, Top,
    perm_of_word,
)


class EnumerationBudgetError(BudgetError):
    pass


def role_type(tup: tuple[str, ...], interp: Interp) -> frozenset[tuple[str, Permutation]]:
    """All (role name, permutation) pairs under which the rearranged tuple
    lies in the role's relation. The tuple's repetition pattern is not part
    of the type."""
    m = len(tup)
    out = []
    for name, rel in interp.roles.items():
        if rel.arity != m:
            continue
        for vec in permutations(range(1, m + 1)):
            perm = Permutation(m, vec)
            if perm.apply(tup) in rel.tuples:
                out.append((name, perm))
    return frozenset(out)


def _props(interp: Interp, x: str) -> frozenset[str]:
    return frozenset(n for n in interp.concepts if x in interp.concept_ext(n))


def _type_groups(interp: Interp, dom: list[str], point: str, m: int) -> dict[frozenset, list[tuple[str, ...]]]:
    groups: dict[frozenset, list[tuple[str, ...]]] = {}
    for rest in product(dom, repeat=m - 1):
        t = (point,) + rest
        groups.setdefault(role_type(t, interp), []).append(t)
    return groups


class _Game:
    def __init__(self, left: Interp, right: Interp, grading: int):
        self.left = left
        self.right = right
        self.grading = grading
        self.ldom = sorted(left.domain)
        self.rdom = sorted(right.domain)
        self.arities = sorted(
            {r.arity for r in left.roles.values()}
            | {r.arity for r in right.roles.values()}
        )
        self.memo: dict[tuple[str, str, int], bool] = {}

    def wins(self, wl: str, wr: str, r: int) -> bool:
        """Whether the defender survives r rounds from the position."""
        if _props(self.left, wl) != _props(self.right, wr):
            return False
        if r == 0:
            return True
        key = (wl, wr, r)
        hit = self.memo.get(key)
        if hit is None:
            hit = self.memo[key] = self._challenge(wl, wr, r) is None
        return hit

    def _challenge(self, wl: str, wr: str, r: int):
        """A challenger move defeating every answer, or None. A move is
        (side, role type, tuples): n distinct same-type tuples from the
        current point of one side, n at most the grading."""
        for on_left in (True, False):
            if on_left:
                cur, cdom, cw = self.left, self.ldom, wl
                oth, odom, ow = self.right, self.rdom, wr
            else:
                cur, cdom, cw = self.right, self.rdom, wr
                oth, odom, ow = self.left, self.ldom, wl
            for m in self.arities:
                groups = _type_groups(cur, cdom, cw, m)
                other = _type_groups(oth, odom, ow, m)
                for tau, pool in groups.items():
                    answers = other.get(tau, [])
                    for n in range(1, min(self.grading, len(pool)) + 1):
                        for chosen in combinations(pool, n):
                            if not any(
                                self._covers(chosen, reply, m, r - 1, on_left)
                                for reply in combinations(answers, n)
                            ):
                                return (on_left, tau, chosen)
        return None

    def _covers(self, chosen, reply, m: int, r: int, on_left: bool) -> bool:
        """Whether the answer survives every point challenge: for each
        coordinate, each tuple on either side has a counterpart on the other
        whose same-coordinate point keeps the defender alive."""
        for i in range(m):
            for t in chosen:
                if not any(self._pair(t[i], u[i], r, on_left) for u in reply):
                    return False
            for u in reply:
                if not any(self._pair(t[i], u[i], r, on_left) for t in chosen):
                    return False
        return True

    def _pair(self, cur_pt: str, oth_pt: str, r: int, on_left: bool) -> bool:
        if on_left:
            return self.wins(cur_pt, oth_pt, r)
        return self.wins(oth_pt, cur_pt, r)


def _validate_game_args(left, left_point, right, right_point, rounds, grading) -> None:
    if rounds < 0:
        raise InputError("rounds must be >= 0, got %d" % rounds)
    if grading < 1:
        raise InputError("grading must be >= 1, got %d" % grading)
    if left_point not in left.domain:
        raise InputError("point %s is not in the first domain" % left_point)
    if right_point not in right.domain:
        raise InputError("point %s is not in the second domain" % right_point)


def duplicator_wins(left: Interp, left_point: str, right: Interp, right_point: str,
                    rounds: int, grading: int) -> bool:
    """Whether the defender survives the full game between the two pointed
    structures."""
    _validate_game_args(left, left_point, right, right_point, rounds, grading)
    return _Game(left, right, grading).wins(left_point, right_point, rounds)


def winning_trace(left: Interp, left_point: str, right: Interp, right_point: str,
                  rounds: int, grading: int) -> str:
    """One-line account of the winner: the defender's hold, or the
    challenger's first winning move."""
    _validate_game_args(left, left_point, right, right_point, rounds, grading)
    game = _Game(left, right, grading)
    if game.wins(left_point, right_point, rounds):
        return "defender survives %d round(s) at grading %d" % (rounds, grading)
    if _props(left, left_point) != _props(right, right_point):
        return "challenger wins before round 1: points differ on atomic concepts"
    move = game._challenge(left_point, right_point, rounds)
    on_left, tau, chosen = move
    side = "left" if on_left else "right"
    tau_txt = ", ".join(
        "%s^(%s)" % (name, " ".join(str(v) for v in perm.vec))
        for name, perm in sorted(tau, key=lambda sp: (sp[0], sp[1].vec))
    ) or "no role"
    tup_txt = " ".join("(%s)" % ",".join(t) for t in chosen)
    return "challenger wins: picks %d tuple(s) of type {%s} on the %s: %s" % (
        len(chosen), tau_txt, side, tup_txt,
    )


# ---------------------------------------------------------------------------
# bulk comparison over many binary structures

def game_partition(interps: Sequence[Interp], rounds: int, grading: int
                   ) -> tuple[list[tuple[int, str]], list[list[int]]]:
    """Survival classes for every point of every structure at once: two
    points get the same class id at round r exactly when the defender
    survives r rounds between them.

    Binary roles only. Over an equivalence a round reduces to counts: an
    answer set matching a challenge set exists exactly when, per role type
    and per class of the free coordinate, both sides hold the same number of
    successors capped at the grading. Iterating that refinement from the
    atomic-concept partition is the game recursion itself.

    Returns (elements, classes) with elements[i] = (structure index, point)
    and classes[r][i] the class id of elements[i] after r rounds.
    """
    if rounds < 0:
        raise InputError("rounds must be >= 0, got %d" % rounds)
    if grading < 1:
        raise InputError("grading must be >= 1, got %d" % grading)
    for interp in interps:
        for name, rel in interp.roles.items():
            if rel.arity != 2:
                raise InputError(
                    "role %s has arity %d, the bulk comparison needs binary structures"
                    % (name, rel.arity)
                )
    elements: list[tuple[int, str]] = []
    offsets: list[dict[str, int]] = []
    for si, interp in enumerate(interps):
        offsets.append({})
        for x in sorted(interp.domain):
            offsets[si][x] = len(elements)
            elements.append((si, x))

    def tau_key(tau: frozenset) -> tuple:
        return tuple(sorted((name, perm.vec) for name, perm in tau))

    succ_types: list[list[tuple[tuple, list[int]]]] = []
    for si, x in elements:
        interp = interps[si]
        by_tau: dict[tuple, list[int]] = {}
        for u in sorted(interp.domain):
            tau = tau_key(role_type((x, u), interp))
            by_tau.setdefault(tau, []).append(offsets[si][u])
        succ_types.append(sorted(by_tau.items()))

    def dedupe(keys: list) -> list[int]:
        ids: dict = {}
        return [ids.setdefault(k, len(ids)) for k in keys]

    classes = [dedupe([_props(interps[si], x) for si, x in elements])]
    for _ in range(rounds):
        prev = classes[-1]
        sigs = []
        for i, by_tau in enumerate(succ_types):
            parts = []
            for tau, succs in by_tau:
                counts: dict[int, int] = {}
                for j in succs:
                    counts[prev[j]] = counts.get(prev[j], 0) + 1
                capped = tuple(sorted((c, min(n, grading)) for c, n in counts.items()))
                parts.append((tau, capped))
            sigs.append((prev[i], tuple(parts)))
        classes.append(dedupe(sigs))
    return elements, classes


# ---------------------------------------------------------------------------
# bounded concept enumeration

def canonical_words(arity: int) -> list[str]:
    """One shortest word over {p, s} per coordinate permutation of the
    arity, ordered by (length, text)."""
    if arity < 1:
        raise InputError("arity must be >= 1, got %d" % arity)
    seen = {perm_of_word("", arity): ""}
    frontier = [""]
    while frontier:
        word = frontier.pop(0)
        for step in ("s", "p"):
            nxt = word + step
            perm = perm_of_word(nxt, arity)
            if perm not in seen:
                seen[perm] = nxt
                frontier.append(nxt)
    return sorted(seen.values(), key=lambda w: (len(w), w))


def enumerate_concepts(atoms: Sequence[str], roles: Mapping[str, int],
                       depth: int, grading: int, budget: int) -> list[Concept]:
    """Representatives of the counting concepts over the signature with
    modal depth at most `depth` and thresholds at most `grading`: atomic
    concepts, counting concepts layer by layer with literal arguments, their
    negations, and pairwise conjunctions, skipping trivially redundant
    shapes. Raises when the output would exceed `budget` concepts."""
    if depth < 0:
        raise InputError("depth must be >= 0, got %d" % depth)
    if grading < 1:
        raise InputError("grading must be >= 1, got %d" % grading)
    out: list[Concept] = []

    def emit(c: Concept) -> None:
        out.append(c)
        if len(out) > budget:
            raise EnumerationBudgetError(
                "enumeration exceeds the budget of %d concepts" % budget
            )

    base = [AtomicConcept(a) for a in sorted(atoms)]
    for c in base:
        emit(c)
    arg_pool: list[Concept] = [Top()] + base + [Not(b) for b in base]
    modal: list[Concept] = []
    level = arg_pool
    for _ in range(depth):
        fresh: list[Concept] = []
        for name in sorted(roles):
            arity = roles[name]
            for word in canonical_words(arity):
                for count in range(1, grading + 1):
                    for args in product(level, repeat=arity - 1):
                        c = AtLeast(count, RoleExpr(name, arity, word), args)
                        fresh.append(c)
                        emit(c)
        modal.extend(fresh)
        level = arg_pool + [x for c in fresh for x in (c, Not(c))]
    literals = base + modal
    for c in literals:
        emit(Not(c))
    for i, c in enumerate(literals):
        for d in literals[i + 1:]:
            emit(And(c, d))
    return out
