"""Model checking and bounded satisfiability search.

check_concept and check_alcqi compute extensions bottom-up on explicit
structures. oracle_sat is an exhaustive bounded-domain search used as ground
truth: satisfaction at one element over a fixed finite domain is reduced to
propositional satisfiability over structure cells (one variable per concept
membership and per role tuple) and decided by a clause-learning SAT core.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

from .errors import BudgetError, InputError
from .model import ArityRel, Interp
from .solver import CnfSolver
from .syntax import (
    And, AtLeast, AtLeastBin, AtMostBin, AtomicConcept, Bot, Concept,
    AlcqiConcept, Not, Or, Top, concept_roles, expand_shorthand,
)
from .gra import apply_permutation


class SearchBudgetError(BudgetError):
    pass


def check_concept(c: Concept, interp: Interp) -> frozenset[str]:
    """Extension of a concept (sugar allowed) in a structure."""
    c = expand_shorthand(c)
    dom = interp.domain

    def ext(x: Concept) -> frozenset[str]:
        if isinstance(x, Top):
            return dom
        if isinstance(x, Bot):
            return frozenset()
        if isinstance(x, AtomicConcept):
            return interp.concept_ext(x.name)
        if isinstance(x, Not):
            return dom - ext(x.sub)
        if isinstance(x, And):
            return ext(x.left) & ext(x.right)
        if isinstance(x, AtLeast):
            rel = interp.role_rel(x.role.name, x.role.arity)
            moved = apply_permutation(rel, x.role.perm())
            arg_exts = [ext(a) for a in x.args]
            counts: dict[str, int] = {}
            for t in moved.tuples:
                if all(t[i + 1] in arg_exts[i] for i in range(len(arg_exts))):
                    counts[t[0]] = counts.get(t[0], 0) + 1
            return frozenset(e for e, n in counts.items() if n >= x.count)
        raise TypeError("not a concept: %r" % (x,))

    return ext(c)


def check_alcqi(c: AlcqiConcept, interp: Interp) -> frozenset[str]:
    """Extension of a binary-fragment concept; Or/AtMost nodes are accepted
    so normal forms can be checked directly."""
    dom = interp.domain
    for name, rel in interp.roles.items():
        if rel.arity != 2:
            raise InputError("role %s has arity %d, binary structure required" % (name, rel.arity))

    def successors(role_name: str, inverse: bool) -> dict[str, set[str]]:
        rel = interp.roles.get(role_name)
        out: dict[str, set[str]] = {}
        if rel is None:
            return out
        for (a, b) in rel.tuples:
            src, dst = (b, a) if inverse else (a, b)
            out.setdefault(src, set()).add(dst)
        return out

    def ext(x) -> frozenset[str]:
        if isinstance(x, Top):
            return dom
        if isinstance(x, Bot):
            return frozenset()
        if isinstance(x, AtomicConcept):
            return interp.concept_ext(x.name)
        if isinstance(x, Not):
            return dom - ext(x.sub)
        if isinstance(x, And):
            return ext(x.left) & ext(x.right)
        if isinstance(x, Or):
            return ext(x.left) | ext(x.right)
        if isinstance(x, (AtLeastBin, AtMostBin)):
            succ = successors(x.role.name, x.role.inverse)
            arg_ext = ext(x.arg)
            empty: set[str] = set()
            if isinstance(x, AtLeastBin):
                return frozenset(
                    e for e in dom if len(succ.get(e, empty) & arg_ext) >= x.count
                )
            return frozenset(
                e for e in dom if len(succ.get(e, empty) & arg_ext) <= x.count
            )
        raise TypeError("not a binary-fragment concept: %r" % (x,))

    return ext(c)


# ---------------------------------------------------------------------------
# bounded exhaustive satisfiability

@dataclass(frozen=True)
class OracleResult:
    sat: bool
    witness: Optional[Interp] = None
    element: Optional[str] = None
    domain_size: Optional[int] = None


def _implies(c: Concept, d: Concept) -> bool:
    """Sound syntactic entailment on core concepts; False means unknown."""
    while isinstance(c, Not) and isinstance(c.sub, Not):
        c = c.sub.sub
    while isinstance(d, Not) and isinstance(d.sub, Not):
        d = d.sub.sub
    if isinstance(d, Top) or isinstance(c, Bot):
        return True
    if c == d:
        return True
    if isinstance(c, And) and (_implies(c.left, d) or _implies(c.right, d)):
        return True
    if isinstance(d, And):
        return _implies(c, d.left) and _implies(c, d.right)
    if isinstance(c, Not) and isinstance(d, Not):
        return _implies(d.sub, c.sub)
    if isinstance(c, AtLeast) and isinstance(d, AtLeast):
        return (
            c.role == d.role
            and c.count >= d.count
            and all(_implies(a, b) for a, b in zip(c.args, d.args))
        )
    return False


class _Encoder:
    """Propositional encoding of 'the concept holds at element 0' over a
    fixed domain {0..size-1}.

    Cells are variables: one per (concept name, element) and one per
    (role name, raw tuple). Each subconcept occurrence at an element gets a
    gate variable tied to its cells by biconditional clauses; counting
    subconcepts use a conditional sequential-counter cardinality encoding in
    both directions.
    """

    def __init__(self, core: Concept, size: int):
        self.solver = CnfSolver()
        self.size = size
        self.cells: dict[tuple, int] = {}
        self.gates: dict[tuple, int] = {}
        self.counting_sites: dict[tuple, list[tuple]] = {}
        t = self.solver.new_var()
        self.solver.add_clause([t])
        self.true_lit = t
        self.solver.add_clause([self.enc(core, 0)])
        self._link_counting_members()
        self._break_symmetry()

    def _break_symmetry(self) -> None:
        """Non-root elements are interchangeable, so usable models can be
        packed into a prefix: element e+1 may carry cells only if e does."""
        mentions: dict[int, list[int]] = {e: [] for e in range(1, self.size)}
        for key, var in self.cells.items():
            elems = {key[2]} if key[0] == "c" else set(key[2])
            for e in elems:
                if e > 0:
                    mentions[e].append(var)
        used_prev = None
        for e in range(1, self.size):
            if not mentions[e]:
                continue
            used = self.solver.new_var()
            for var in mentions[e]:
                self.solver.add_clause([-var, used])
            self.solver.add_clause([-used] + mentions[e])
            if used_prev is not None:
                self.solver.add_clause([-used, used_prev])
            used_prev = used

    def cell(self, key: tuple) -> int:
        v = self.cells.get(key)
        if v is None:
            v = self.cells[key] = self.solver.new_var()
        return v

    def enc(self, c: Concept, x: int) -> int:
        key = (c, x)
        hit = self.gates.get(key)
        if hit is None:
            hit = self.gates[key] = self._enc(c, x)
        return hit

    def _enc(self, c: Concept, x: int) -> int:
        if isinstance(c, Top):
            return self.true_lit
        if isinstance(c, Bot):
            return -self.true_lit
        if isinstance(c, AtomicConcept):
            return self.cell(("c", c.name, x))
        if isinstance(c, Not):
            return -self.enc(c.sub, x)
        if isinstance(c, And):
            a = self.enc(c.left, x)
            b = self.enc(c.right, x)
            g = self.solver.new_var()
            self.solver.add_clause([-g, a])
            self.solver.add_clause([-g, b])
            self.solver.add_clause([g, -a, -b])
            return g
        if isinstance(c, AtLeast):
            return self._enc_atleast(c, x)
        raise TypeError("not a core concept: %r" % (c,))

    def _enc_atleast(self, c: AtLeast, x: int) -> int:
        vec = c.role.perm().vec
        arity = c.role.arity
        # enumerate raw tuples in lexicographic order so counting registers
        # over differently permuted views of one role line up clause-wise
        anchor = vec[0] - 1
        free = [j for j in range(arity) if j != anchor]
        members = []
        for fill in product(range(self.size), repeat=arity - 1):
            raw = [0] * arity
            raw[anchor] = x
            for j, e in zip(free, fill):
                raw[j] = e
            parts = [self.cell(("r", c.role.name, tuple(raw)))]
            parts.extend(
                self.enc(arg, raw[vec[i + 1] - 1]) for i, arg in enumerate(c.args)
            )
            m = self.solver.new_var()
            for p in parts:
                self.solver.add_clause([-m, p])
            self.solver.add_clause([m] + [-p for p in parts])
            members.append(m)
        if c.count > len(members):
            return -self.true_lit
        g = self.solver.new_var()
        self._atleast(members, c.count, -g)
        self._atmost(members, c.count - 1, g)
        pos_args = {vec[i + 1] - 1: arg for i, arg in enumerate(c.args)}
        site_key = (c.role.name, anchor, x)
        self.counting_sites.setdefault(site_key, []).append((pos_args, c.count, g, members))
        return g

    def _link_counting_members(self) -> None:
        """Redundant implications between counting sites sharing a role and
        anchor coordinate, implied by the definitions; they shorten
        refutations. When one site's arguments entail another's position by
        position, each member implies its aligned counterpart, and with a
        threshold at least as large the whole gate follows."""
        for sites in self.counting_sites.values():
            for pa, ka, ga, ma in sites:
                for pb, kb, gb, mb in sites:
                    if ga == gb:
                        continue
                    if all(_implies(pa[j], pb[j]) for j in pa):
                        for la, lb in zip(ma, mb):
                            self.solver.add_clause([-la, lb])
                        if ka >= kb:
                            self.solver.add_clause([-ga, gb])

    def _atleast(self, lits: list[int], k: int, cond: int) -> None:
        """Clauses forcing sum(lits) >= k whenever cond is false; cond is
        added to every clause. Register u_{i,j}: at least j true among the
        first i literals."""
        prev: list[int] = []
        for i, l in enumerate(lits, start=1):
            width = min(i, k)
            reg = [self.solver.new_var() for _ in range(width)]
            for j in range(width):
                carry = [prev[j]] if j < len(prev) else []
                self.solver.add_clause([-reg[j], l] + carry + [cond])
                if j > 0:
                    self.solver.add_clause([-reg[j], prev[j - 1]] + carry + [cond])
            prev = reg
        self.solver.add_clause([prev[k - 1], cond])

    def _atmost(self, lits: list[int], bound: int, cond: int) -> None:
        """Clauses forcing sum(lits) <= bound whenever cond is false; cond is
        added to every clause. Sequential counter registers."""
        if bound >= len(lits):
            return
        if bound == 0:
            for l in lits:
                self.solver.add_clause([-l, cond])
            return
        prev: list[int] = []
        for i, l in enumerate(lits):
            if i == 0:
                reg = [self.solver.new_var()]
                self.solver.add_clause([-l, reg[0], cond])
                prev = reg
                continue
            width = min(i + 1, bound)
            reg = [self.solver.new_var() for _ in range(width)]
            self.solver.add_clause([-l, reg[0], cond])
            for j in range(len(prev)):
                self.solver.add_clause([-prev[j], reg[j], cond])
            for j in range(1, width):
                if j - 1 < len(prev):
                    self.solver.add_clause([-l, -prev[j - 1], reg[j], cond])
            if len(prev) >= bound:
                self.solver.add_clause([-l, -prev[bound - 1], cond])
            prev = reg

    def decode(self) -> Interp:
        model = self.solver.model()
        label = {e: "e%d" % (e + 1) for e in range(self.size)}
        concepts: dict[str, set[str]] = {}
        roles: dict[str, set[tuple[str, ...]]] = {}
        arities: dict[str, int] = {}
        for key, var in self.cells.items():
            if key[0] == "c":
                concepts.setdefault(key[1], set())
                if model[var]:
                    concepts[key[1]].add(label[key[2]])
            else:
                name, raw = key[1], key[2]
                arities[name] = len(raw)
                roles.setdefault(name, set())
                if model[var]:
                    roles[name].add(tuple(label[e] for e in raw))
        return Interp(
            frozenset(label.values()),
            {n: frozenset(v) for n, v in concepts.items()},
            {n: ArityRel.of(arities[n], v) for n, v in roles.items()},
        )


def oracle_sat(c: Concept, max_domain: int, node_budget: int = 2_000_000) -> OracleResult:
    """Exhaustive search for a structure and element satisfying the concept.

    Searching at size max_domain alone covers all smaller sizes: a model
    padded with isolated elements still satisfies the concept at the same
    element, so 'no model' here means none with at most max_domain elements.
    The budget caps solver conflicts; running out raises instead of guessing.
    """
    if max_domain < 1:
        raise InputError("max_domain must be at least 1")
    core = expand_shorthand(c)
    concept_roles(core)  # arity consistency check up front
    enc = _Encoder(core, max_domain)
    verdict = enc.solver.solve(conflict_budget=node_budget)
    if verdict is None:
        raise SearchBudgetError("satisfiability search exceeded its conflict budget")
    if not verdict:
        return OracleResult(False)
    witness = enc.decode()
    element = "e1"
    if element not in check_concept(core, witness):
        raise AssertionError("internal: search produced a bad witness")
    return OracleResult(True, witness, element, len(witness.domain))


def minimal_witness_size(c: Concept, max_domain: int, node_budget: int = 2_000_000) -> Optional[int]:
    """Smallest domain size admitting a model, or None up to the bound."""
    for size in range(1, max_domain + 1):
        if oracle_sat(c, size, node_budget).sat:
            return size
    return None
