"""Reduction of polyadic concepts and structures to binary ones.

Each n-tuple of a role is represented by one fresh element carrying the role's
marker concept and connected to the tuple's coordinates by functional binary
roles F1..Fn. translate rewrites counting over n-ary roles into counting over
inverse F-edges into such representative elements; lanternize performs the
matching structure transformation, and extract_polyadic reads a polyadic
structure back off a binary one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import InputError
from .model import ArityRel, Interp
from .syntax import (
    And, AtLeast, AtLeastBin, AtomicConcept, BinRole, Bot, Concept,
    AlcqiConcept, Not, Top, concept_names, concept_roles, expand_shorthand,
)

DOM = "@dom"


def marker_name(role: str) -> str:
    return "@L_" + role


def f_role(i: int, inverse: bool = False) -> BinRole:
    return BinRole("@F%d" % i, inverse)


@dataclass(frozen=True)
class ReifySignature:
    """Source roles of the polyadic side and the derived binary vocabulary."""

    roles: Mapping[str, int]

    def __post_init__(self) -> None:
        for name, arity in self.roles.items():
            if name.startswith("@"):
                raise InputError("role name %s collides with generated names" % name)
            if arity < 2:
                raise InputError("role %s has arity %d, need at least 2" % (name, arity))

    @property
    def max_arity(self) -> int:
        return max(self.roles.values(), default=0)

    @classmethod
    def from_concept(cls, c: Concept) -> "ReifySignature":
        return cls(concept_roles(expand_shorthand(c)))

    @classmethod
    def for_interp(cls, interp: Interp) -> "ReifySignature":
        return cls({name: rel.arity for name, rel in interp.roles.items()})


def _conjoin(parts: list) -> AlcqiConcept:
    node = parts[0]
    for p in parts[1:]:
        node = And(node, p)
    return node


def build_outdeg(n: int) -> AlcqiConcept:
    """Exactly one Fi-successor for each i <= n, all successors in @dom."""
    if n < 2:
        raise InputError("out-degree constraint needs arity >= 2, got %d" % n)
    exactly_one = [
        And(
            AtLeastBin(1, f_role(i), Top()),
            Not(AtLeastBin(2, f_role(i), Top())),
        )
        for i in range(1, n + 1)
    ]
    all_in_dom = [
        Not(AtLeastBin(1, f_role(i), Not(AtomicConcept(DOM))))
        for i in range(1, n + 1)
    ]
    return And(_conjoin(exactly_one), _conjoin(all_in_dom))


def build_chi(role: str, source_roles) -> AlcqiConcept:
    """The marker of this role and no other role's marker."""
    names = set(source_roles)
    if role not in names:
        raise InputError("role %s not among source roles" % role)
    parts: list = [AtomicConcept(marker_name(role))]
    for other in sorted(names - {role}):
        parts.append(Not(AtomicConcept(marker_name(other))))
    return _conjoin(parts)


def translate(c: Concept, sig: Optional[ReifySignature] = None) -> AlcqiConcept:
    """Rewrite a polyadic concept over the binary reified vocabulary.

    Callers testing satisfiability conjoin @dom to the result. Counting over
    an n-ary role becomes counting over inverse F-edges into tuple
    representatives, with one forward F-edge per remaining coordinate.
    """
    core = expand_shorthand(c)
    for name in concept_names(core):
        if name.startswith("@"):
            raise InputError("concept name %s collides with generated names" % name)
    if sig is None:
        sig = ReifySignature.from_concept(core)
    else:
        for name, arity in concept_roles(core).items():
            if sig.roles.get(name) != arity:
                raise InputError("role %s (arity %d) not in the given signature" % (name, arity))

    def walk(x: Concept) -> AlcqiConcept:
        if isinstance(x, (Top, Bot, AtomicConcept)):
            return x
        if isinstance(x, Not):
            return Not(walk(x.sub))
        if isinstance(x, And):
            return And(walk(x.left), walk(x.right))
        if isinstance(x, AtLeast):
            n = x.role.arity
            vec = x.role.perm().vec
            parts: list = [
                Not(AtomicConcept(DOM)),
                build_chi(x.role.name, sig.roles),
                build_outdeg(n),
            ]
            for i in range(1, n):
                parts.append(AtLeastBin(1, f_role(vec[i]), walk(x.args[i - 1])))
            return AtLeastBin(x.count, f_role(vec[0], inverse=True), _conjoin(parts))
        raise TypeError("not a concept: %r" % (x,))

    return walk(core)


def with_dom(c: AlcqiConcept) -> AlcqiConcept:
    return And(AtomicConcept(DOM), c)


def lanternize(interp: Interp, sig: Optional[ReifySignature] = None) -> Interp:
    """Binary structure with one fresh representative element per role tuple.

    The original elements form @dom and keep their atomic concepts; each
    representative carries its role's marker and one Fi-edge to the tuple's
    i-th coordinate. Source roles do not survive.
    """
    if sig is None:
        sig = ReifySignature.for_interp(interp)
    for name in interp.concepts:
        if name.startswith("@"):
            raise InputError("concept name %s collides with generated names" % name)
    for name in interp.roles:
        if name.startswith("@") and name not in sig.roles:
            raise InputError("role name %s collides with generated names" % name)

    domain = set(interp.domain)
    concepts = {name: set(ext) for name, ext in interp.concepts.items()}
    concepts[DOM] = set(interp.domain)
    f_edges: dict[int, set[tuple[str, str]]] = {i: set() for i in range(1, sig.max_arity + 1)}
    for role in sorted(sig.roles):
        arity = sig.roles[role]
        markers = concepts.setdefault(marker_name(role), set())
        rel = interp.role_rel(role, arity)
        for t in sorted(rel.tuples):
            fresh = "@l:%s(%s)" % (role, ",".join(t))
            while fresh in domain:
                fresh += "'"
            domain.add(fresh)
            markers.add(fresh)
            for i, coord in enumerate(t, start=1):
                f_edges[i].add((fresh, coord))
    roles = {
        f_role(i).name: ArityRel.of(2, edges) for i, edges in f_edges.items()
    }
    return Interp(
        frozenset(domain),
        {name: frozenset(ext) for name, ext in concepts.items()},
        roles,
    )


def extract_polyadic(binary: Interp, sig: ReifySignature) -> Interp:
    """Polyadic structure read off a binary one.

    The domain is @dom's extension; a tuple belongs to a role exactly when
    some element outside @dom carries that role's marker alone, has exactly
    one Fi-successor per coordinate (each inside @dom), and those successors
    spell the tuple.
    """
    from .semantics import check_alcqi

    domain = binary.concept_ext(DOM) & binary.domain
    if not domain:
        raise InputError("@dom is empty, nothing to extract")
    concepts = {
        name: ext & domain
        for name, ext in binary.concepts.items()
        if not name.startswith("@")
    }
    roles: dict[str, ArityRel] = {}
    for role in sorted(sig.roles):
        arity = sig.roles[role]
        qualifier = _conjoin(
            [
                Not(AtomicConcept(DOM)),
                build_chi(role, sig.roles),
                build_outdeg(arity),
            ]
        )
        carriers = check_alcqi(qualifier, binary)
        tuples = set()
        for carrier in carriers:
            coords = []
            for i in range(1, arity + 1):
                succ = [
                    b for (a, b) in binary.role_rel(f_role(i).name, 2).tuples if a == carrier
                ]
                coords.append(succ[0])
            tuples.add(tuple(coords))
        roles[role] = ArityRel.of(arity, tuples)
    return Interp(frozenset(domain), concepts, roles)
