"""Relation operators and term evaluation over a finite structure.

Every operator is arity-definite. Tuple positions are 1-based in the
definitions; suffixes are taken from the right end.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping

from .errors import BudgetError, InputError
from .model import ArityRel, Interp
from .syntax import (
    GraAtom, GraBot, GraCap1, GraDotCap, GraEq, GraEx, GraEx1, GraI, GraJoin,
    GraNeg, GraNeg1, GraP, GraS, GraTerm, GraTop, Permutation,
)

DEFAULT_BUDGET = 10 ** 6


class EvalBudgetError(BudgetError):
    pass


class UndeclaredAtomError(InputError):
    pass


def apply_p(rel: ArityRel) -> ArityRel:
    """Cyclic shift: the last coordinate moves to the front. Identity below arity 2."""
    if rel.arity < 2:
        return rel
    return ArityRel(rel.arity, frozenset((t[-1],) + t[:-1] for t in rel.tuples))


def apply_s(rel: ArityRel) -> ArityRel:
    """Swap of the last two coordinates. Identity below arity 2."""
    if rel.arity < 2:
        return rel
    return ArityRel(rel.arity, frozenset(t[:-2] + (t[-1], t[-2]) for t in rel.tuples))


def apply_i(rel: ArityRel) -> ArityRel:
    """Identification: keep tuples whose last two coordinates agree and drop
    the last one. Identity below arity 2."""
    if rel.arity < 2:
        return rel
    return ArityRel(rel.arity - 1, frozenset(t[:-1] for t in rel.tuples if t[-2] == t[-1]))


def apply_permutation(rel: ArityRel, perm: Permutation) -> ArityRel:
    if perm.n != rel.arity:
        raise InputError("permutation on arity %d applied to relation of arity %d" % (perm.n, rel.arity))
    if perm.is_identity():
        return rel
    return ArityRel(rel.arity, frozenset(perm.apply(t) for t in rel.tuples))


def complement(rel: ArityRel, domain: frozenset[str], budget: int = DEFAULT_BUDGET) -> ArityRel:
    """All tuples over the domain of the same arity that are not in the relation."""
    if len(domain) ** rel.arity > budget:
        raise EvalBudgetError(
            "complement would range over %d^%d tuples" % (len(domain), rel.arity)
        )
    elems = sorted(domain)
    return ArityRel(
        rel.arity,
        frozenset(t for t in product(elems, repeat=rel.arity) if t not in rel.tuples),
    )


def join(left: ArityRel, right: ArityRel, budget: int = DEFAULT_BUDGET) -> ArityRel:
    """Concatenation product; output arity is the sum of the input arities."""
    if len(left) * len(right) > budget:
        raise EvalBudgetError("join would build %d tuples" % (len(left) * len(right)))
    return ArityRel(
        left.arity + right.arity,
        frozenset(a + b for a in left.tuples for b in right.tuples),
    )


def project(rel: ArityRel) -> ArityRel:
    """Drop the last coordinate. Identity on arity 0."""
    if rel.arity == 0:
        return rel
    return ArityRel(rel.arity - 1, frozenset(t[:-1] for t in rel.tuples))


def equality_rel(domain: frozenset[str]) -> ArityRel:
    return ArityRel(2, frozenset((a, a) for a in domain))


def suffix_intersect(left: ArityRel, right: ArityRel) -> ArityRel:
    """Tuples of arity max(k, l) whose length-k suffix is in the left relation
    and whose length-l suffix is in the right one.

    The nullary unit {()} imposes no constraint; the nullary empty relation
    empties the result.
    """
    if left.arity >= right.arity:
        big, small = left, right
    else:
        big, small = right, left
    cut = big.arity - small.arity
    return ArityRel(big.arity, frozenset(t for t in big.tuples if t[cut:] in small.tuples))


def project1(rel: ArityRel) -> ArityRel:
    """Set of first coordinates; identity on arity at most 1."""
    if rel.arity <= 1:
        return rel
    return ArityRel(1, frozenset((t[0],) for t in rel.tuples))


def cap1(left: ArityRel, right: ArityRel) -> ArityRel:
    """One-dimensional intersection: first coordinates of the suffix
    intersection when an operand has arity at most 1, the empty unary
    relation otherwise."""
    if min(left.arity, right.arity) <= 1:
        return project1(suffix_intersect(left, right))
    return ArityRel.empty(1)


def neg1(rel: ArityRel, domain: frozenset[str], budget: int = DEFAULT_BUDGET) -> ArityRel:
    """One-dimensional complement: ordinary complement on arity at most 1,
    the empty unary relation otherwise."""
    if rel.arity <= 1:
        return complement(rel, domain, budget)
    return ArityRel.empty(1)


# ---------------------------------------------------------------------------
# term evaluation

@dataclass
class EvalEnv:
    """Evaluation context: a structure plus the atom signature.

    Unary atoms resolve to concept valuations, other arities to role
    valuations; a name present as both is rejected as ambiguous. Atoms
    declared in the signature but absent from the structure evaluate to the
    empty relation of the declared arity.
    """

    interp: Interp
    atoms: Mapping[str, int] = field(default_factory=dict)
    budget: int = DEFAULT_BUDGET

    @staticmethod
    def for_interp(interp: Interp, budget: int = DEFAULT_BUDGET) -> "EvalEnv":
        atoms: dict[str, int] = {}
        for name in interp.concepts:
            atoms[name] = 1
        for name, rel in interp.roles.items():
            if name in atoms:
                raise InputError("name %s is both a concept and a role" % name)
            atoms[name] = rel.arity
        return EvalEnv(interp, atoms, budget)

    def atom_rel(self, name: str) -> ArityRel:
        if name not in self.atoms:
            raise UndeclaredAtomError("undeclared relation symbol %s" % name)
        arity = self.atoms[name]
        if arity == 1 and name in self.interp.concepts:
            if name in self.interp.roles:
                raise InputError("name %s is both a concept and a role" % name)
            return ArityRel(1, frozenset((x,) for x in self.interp.concepts[name]))
        rel = self.interp.roles.get(name)
        if rel is None:
            return ArityRel.empty(arity)
        if rel.arity != arity:
            raise InputError("role %s has arity %d, signature says %d" % (name, rel.arity, arity))
        return rel


def eval_term(term: GraTerm, env: EvalEnv) -> ArityRel:
    dom = env.interp.domain
    if isinstance(term, GraAtom):
        return env.atom_rel(term.name)
    if isinstance(term, GraTop):
        return ArityRel(1, frozenset((x,) for x in dom))
    if isinstance(term, GraBot):
        return ArityRel.empty(1)
    if isinstance(term, GraEq):
        return equality_rel(dom)
    if isinstance(term, GraP):
        return apply_p(eval_term(term.sub, env))
    if isinstance(term, GraS):
        return apply_s(eval_term(term.sub, env))
    if isinstance(term, GraI):
        return apply_i(eval_term(term.sub, env))
    if isinstance(term, GraNeg):
        return complement(eval_term(term.sub, env), dom, env.budget)
    if isinstance(term, GraJoin):
        return join(eval_term(term.left, env), eval_term(term.right, env), env.budget)
    if isinstance(term, GraEx):
        return project(eval_term(term.sub, env))
    if isinstance(term, GraDotCap):
        return suffix_intersect(eval_term(term.left, env), eval_term(term.right, env))
    if isinstance(term, GraEx1):
        return project1(eval_term(term.sub, env))
    if isinstance(term, GraCap1):
        return cap1(eval_term(term.left, env), eval_term(term.right, env))
    if isinstance(term, GraNeg1):
        return neg1(eval_term(term.sub, env), dom, env.budget)
    raise TypeError("not a gra term: %r" % (term,))
