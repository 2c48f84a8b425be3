"""Translations between binary existential concepts and the fragment of
relation terms built from one-dimensional intersection and complement.

Inside that fragment every term of arity two is a bare role atom, because
neither operator can output arity two; the back-translation's case analysis
relies on this and checks it rather than assuming it.
"""

from __future__ import annotations

from typing import Mapping, Union

from .errors import InputError
from .syntax import (
    And, AtLeast, AtomicConcept, Bot, Concept, GraAtom, GraBot, GraCap1,
    GraNeg1, GraTerm, GraTop, Not, RoleExpr, Top, expand_shorthand,
)


class BridgeError(InputError):
    pass


AlcOrRole = Union[Concept, RoleExpr]


def to_gra(c: AlcOrRole) -> GraTerm:
    """Translate a concept over plain binary roles with threshold 1 (or a
    bare binary role) into a fragment term of arity 1 (or 2)."""
    if isinstance(c, RoleExpr):
        if c.arity != 2 or not c.perm().is_identity():
            raise BridgeError("only a plain binary role translates to an atom")
        return GraAtom(c.name)
    return _concept_to_term(expand_shorthand(c))


def _concept_to_term(c: Concept) -> GraTerm:
    if isinstance(c, Top):
        return GraTop()
    if isinstance(c, Bot):
        return GraBot()
    if isinstance(c, AtomicConcept):
        return GraAtom(c.name)
    if isinstance(c, Not):
        return GraNeg1(_concept_to_term(c.sub))
    if isinstance(c, And):
        return GraCap1(_concept_to_term(c.left), _concept_to_term(c.right))
    if isinstance(c, AtLeast):
        if c.count != 1:
            raise BridgeError(
                "threshold %d does not translate, only 1 does" % c.count
            )
        if c.role.arity != 2:
            raise BridgeError(
                "role %s has arity %d, only binary roles translate"
                % (c.role.name, c.role.arity)
            )
        if not c.role.perm().is_identity():
            raise BridgeError(
                "permuted role %s^%s does not translate" % (c.role.name, c.role.word)
            )
        return GraCap1(GraAtom(c.role.name), _concept_to_term(c.args[0]))
    raise TypeError("not a concept: %r" % (c,))


def to_alc(t: GraTerm, atoms: Mapping[str, int]) -> AlcOrRole:
    """Translate a fragment term back by arity cases; the result is a concept
    for unary terms and a bare role for binary atoms. `atoms` maps relation
    symbols to arities."""
    if isinstance(t, GraAtom):
        arity = atoms.get(t.name)
        if arity is None:
            raise BridgeError("undeclared relation symbol %s" % t.name)
        if arity == 1:
            return AtomicConcept(t.name)
        if arity == 2:
            return RoleExpr(t.name, 2)
        raise BridgeError(
            "relation %s has arity %d, the fragment admits 1 or 2" % (t.name, arity)
        )
    if isinstance(t, GraTop):
        return Top()
    if isinstance(t, GraBot):
        return Bot()
    if isinstance(t, GraNeg1):
        sub = to_alc(t.sub, atoms)
        if isinstance(sub, RoleExpr):
            return Bot()  # one-dimensional complement of a binary relation is empty
        return Not(sub)
    if isinstance(t, GraCap1):
        left = to_alc(t.left, atoms)
        right = to_alc(t.right, atoms)
        if isinstance(left, RoleExpr) and isinstance(right, RoleExpr):
            return Bot()  # one-dimensional intersection of two binary relations is empty
        if isinstance(left, RoleExpr):
            return AtLeast(1, left, (right,))
        if isinstance(right, RoleExpr):
            return AtLeast(1, right, (left,))
        return And(left, right)
    raise BridgeError("operator outside the fragment: %s" % type(t).__name__)
