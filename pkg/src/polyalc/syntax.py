"""Abstract syntax, parsers and printers.

Three term languages share one lexer:

  concepts    counting quantifiers over polyadic roles with permutation
              words, e.g.  >=2 R^pp.(A, not B)
  binary view the fragment of the concept language with binary roles only;
              the inverse of a role F is written F^s (swap on a pair)
  gra terms   relation-algebra terms, e.g.  cap1(ex1(R), neg1(A))

Role and concept names match [A-Za-z][A-Za-z0-9_]* and may carry a leading
'@'; plain input should not use '@' names, they are reserved for symbols
generated by the reifier.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Union

from .errors import InputError


class ParseError(InputError):
    pass


class ArityError(InputError):
    pass


NAME_RE = re.compile(r"@?[A-Za-z][A-Za-z0-9_]*")


# ---------------------------------------------------------------------------
# permutation words

ROLE_WORD_CHARS = frozenset("ps")


def _check_word(word: str) -> None:
    if not ROLE_WORD_CHARS.issuperset(word):
        raise ParseError("permutation word may only use the letters p and s: %r" % word)


@dataclass(frozen=True)
class Permutation:
    """Coordinate map on arity n.

    vec[i-1] is the source coordinate that lands at output position i, so a
    relation tuple t maps to tuple(t[v - 1] for v in vec).
    """

    n: int
    vec: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.vec) != list(range(1, self.n + 1)):
            raise ValueError("not a permutation of 1..%d: %r" % (self.n, self.vec))

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(n, tuple(range(1, n + 1)))

    def then(self, other: "Permutation") -> "Permutation":
        """Composite map: self applied to the relation first, then other."""
        if self.n != other.n:
            raise ValueError("arity mismatch")
        return Permutation(self.n, tuple(self.vec[v - 1] for v in other.vec))

    def inverse(self) -> "Permutation":
        out = [0] * self.n
        for i, v in enumerate(self.vec):
            out[v - 1] = i + 1
        return Permutation(self.n, tuple(out))

    def apply(self, items: tuple) -> tuple:
        return tuple(items[v - 1] for v in self.vec)

    def is_identity(self) -> bool:
        return all(v == i + 1 for i, v in enumerate(self.vec))


def _step(op: str, n: int) -> Permutation:
    if n < 2:
        return Permutation.identity(n)
    if op == "p":
        # cyclic shift: last coordinate moves to the front
        return Permutation(n, (n,) + tuple(range(1, n)))
    if op == "s":
        # swap of the last two coordinates
        return Permutation(n, tuple(range(1, n - 1)) + (n, n - 1))
    raise ParseError("unknown permutation letter %r" % op)


def perm_of_word(word: str, n: int) -> Permutation:
    """Coordinate map of a word over {p, s} on arity n (identity for n < 2)."""
    _check_word(word)
    if n < 0:
        raise ValueError("negative arity")
    perm = Permutation.identity(n)
    for ch in word:
        perm = perm.then(_step(ch, n))
    return perm


# ---------------------------------------------------------------------------
# concept ASTs

@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class AtomicConcept:
    name: str


@dataclass(frozen=True)
class Not:
    sub: "Concept"


@dataclass(frozen=True)
class And:
    left: "Concept"
    right: "Concept"


@dataclass(frozen=True)
class RoleExpr:
    """A role name of fixed arity with a permutation word applied to it."""

    name: str
    arity: int
    word: str = ""

    def __post_init__(self) -> None:
        if self.arity < 2:
            raise ArityError("role %s must have arity >= 2, got %d" % (self.name, self.arity))
        _check_word(self.word)

    def perm(self) -> Permutation:
        return perm_of_word(self.word, self.arity)


@dataclass(frozen=True)
class AtLeast:
    """x satisfies this when at least `count` distinct tuples of the permuted
    role start at x and have their remaining coordinates in the argument
    concepts, position by position."""

    count: int
    role: RoleExpr
    args: tuple["Concept", ...]

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError("count must be >= 1, got %d" % self.count)
        if len(self.args) + 1 != self.role.arity:
            raise ArityError(
                "role %s has arity %d but %d argument concepts were given"
                % (self.role.name, self.role.arity, len(self.args))
            )


@dataclass(frozen=True)
class Exists:
    role: RoleExpr
    args: tuple["Concept", ...]


@dataclass(frozen=True)
class ForAll:
    role: RoleExpr
    args: tuple["Concept", ...]


@dataclass(frozen=True)
class LessThan:
    count: int
    role: RoleExpr
    args: tuple["Concept", ...]


@dataclass(frozen=True)
class Exactly:
    count: int
    role: RoleExpr
    args: tuple["Concept", ...]


Concept = Union[Top, Bot, AtomicConcept, Not, And, AtLeast, Exists, ForAll, LessThan, Exactly]

_SUGAR = (Exists, ForAll, LessThan, Exactly)


@dataclass(frozen=True)
class BinRole:
    """A binary role or its inverse, for the binary fragment."""

    name: str
    inverse: bool = False

    def flipped(self) -> "BinRole":
        return BinRole(self.name, not self.inverse)


@dataclass(frozen=True)
class AtLeastBin:
    count: int
    role: BinRole
    arg: "AlcqiConcept"

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError("count must be >= 1, got %d" % self.count)


@dataclass(frozen=True)
class Or:
    """Disjunction node used by normal forms of the binary fragment."""

    left: "AlcqiConcept"
    right: "AlcqiConcept"


@dataclass(frozen=True)
class AtMostBin:
    """Upper counting bound; count may be 0."""

    count: int
    role: BinRole
    arg: "AlcqiConcept"

    def __post_init__(self) -> None:
        if self.count < 0:
            raise ValueError("count must be >= 0, got %d" % self.count)


AlcqiConcept = Union[Top, Bot, AtomicConcept, Not, And, Or, AtLeastBin, AtMostBin]


def expand_shorthand(c: Concept) -> Concept:
    """Lower the sugared quantifiers to the core constructors."""
    if isinstance(c, (Top, Bot, AtomicConcept)):
        return c
    if isinstance(c, Not):
        return Not(expand_shorthand(c.sub))
    if isinstance(c, And):
        return And(expand_shorthand(c.left), expand_shorthand(c.right))
    if isinstance(c, AtLeast):
        return AtLeast(c.count, c.role, tuple(expand_shorthand(a) for a in c.args))
    if isinstance(c, Exists):
        return AtLeast(1, c.role, tuple(expand_shorthand(a) for a in c.args))
    if isinstance(c, LessThan):
        return Not(AtLeast(c.count, c.role, tuple(expand_shorthand(a) for a in c.args)))
    if isinstance(c, ForAll):
        return Not(AtLeast(1, c.role, tuple(Not(expand_shorthand(a)) for a in c.args)))
    if isinstance(c, Exactly):
        args = tuple(expand_shorthand(a) for a in c.args)
        return And(AtLeast(c.count, c.role, args), Not(AtLeast(c.count + 1, c.role, args)))
    raise TypeError("not a concept: %r" % (c,))


def is_core(c: Concept) -> bool:
    if isinstance(c, (Top, Bot, AtomicConcept)):
        return True
    if isinstance(c, Not):
        return is_core(c.sub)
    if isinstance(c, And):
        return is_core(c.left) and is_core(c.right)
    if isinstance(c, AtLeast):
        return all(is_core(a) for a in c.args)
    return False


def concept_size(c) -> int:
    """Number of AST nodes, counting role expressions as one node each."""
    if isinstance(c, (Top, Bot, AtomicConcept)):
        return 1
    if isinstance(c, Not):
        return 1 + concept_size(c.sub)
    if isinstance(c, And):
        return 1 + concept_size(c.left) + concept_size(c.right)
    if isinstance(c, AtLeast):
        return 2 + sum(concept_size(a) for a in c.args)
    if isinstance(c, (Exists, ForAll)):
        return 2 + sum(concept_size(a) for a in c.args)
    if isinstance(c, (LessThan, Exactly)):
        return 2 + sum(concept_size(a) for a in c.args)
    if isinstance(c, Or):
        return 1 + concept_size(c.left) + concept_size(c.right)
    if isinstance(c, (AtLeastBin, AtMostBin)):
        return 2 + concept_size(c.arg)
    raise TypeError("not a concept: %r" % (c,))


def modal_depth(c) -> int:
    if isinstance(c, (Top, Bot, AtomicConcept)):
        return 0
    if isinstance(c, Not):
        return modal_depth(c.sub)
    if isinstance(c, (And, Or)):
        return max(modal_depth(c.left), modal_depth(c.right))
    if isinstance(c, (AtLeast, Exists, ForAll, LessThan, Exactly)):
        return 1 + max((modal_depth(a) for a in c.args), default=0)
    if isinstance(c, (AtLeastBin, AtMostBin)):
        return 1 + modal_depth(c.arg)
    raise TypeError("not a concept: %r" % (c,))


def concept_roles(c) -> dict[str, int]:
    """Role name to arity map of every role occurring in the concept."""
    out: dict[str, int] = {}

    def walk(x) -> None:
        if isinstance(x, (Top, Bot, AtomicConcept)):
            return
        if isinstance(x, Not):
            walk(x.sub)
        elif isinstance(x, (And, Or)):
            walk(x.left)
            walk(x.right)
        elif isinstance(x, (AtLeast, Exists, ForAll, LessThan, Exactly)):
            seen = out.get(x.role.name)
            if seen is not None and seen != x.role.arity:
                raise ArityError(
                    "role %s used with arities %d and %d" % (x.role.name, seen, x.role.arity)
                )
            out[x.role.name] = x.role.arity
            for a in x.args:
                walk(a)
        elif isinstance(x, (AtLeastBin, AtMostBin)):
            seen = out.get(x.role.name)
            if seen is not None and seen != 2:
                raise ArityError("role %s used with arities %d and 2" % (x.role.name, seen))
            out[x.role.name] = 2
            walk(x.arg)
        else:
            raise TypeError("not a concept: %r" % (x,))

    walk(c)
    return out


def concept_names(c) -> frozenset[str]:
    out: set[str] = set()

    def walk(x) -> None:
        if isinstance(x, AtomicConcept):
            out.add(x.name)
        elif isinstance(x, Not):
            walk(x.sub)
        elif isinstance(x, (And, Or)):
            walk(x.left)
            walk(x.right)
        elif isinstance(x, (AtLeast, Exists, ForAll, LessThan, Exactly)):
            for a in x.args:
                walk(a)
        elif isinstance(x, (AtLeastBin, AtMostBin)):
            walk(x.arg)

    walk(c)
    return frozenset(out)


# ---------------------------------------------------------------------------
# binary fragment conversions

def embed_alcqi(c: AlcqiConcept) -> Concept:
    """View a binary-fragment concept as a polyadic one (inverse becomes ^s)."""
    if isinstance(c, (Top, Bot, AtomicConcept)):
        return c
    if isinstance(c, Not):
        return Not(embed_alcqi(c.sub))
    if isinstance(c, And):
        return And(embed_alcqi(c.left), embed_alcqi(c.right))
    if isinstance(c, AtLeastBin):
        word = "s" if c.role.inverse else ""
        return AtLeast(c.count, RoleExpr(c.role.name, 2, word), (embed_alcqi(c.arg),))
    raise TypeError("not a binary-fragment concept: %r" % (c,))


def concept_to_alcqi(c: Concept) -> AlcqiConcept:
    """Restrict a polyadic concept to the binary fragment.

    Requires every role to be binary; a permutation word reduces to the
    identity (plain role) or the swap (inverse role).
    """
    c = expand_shorthand(c)

    def conv(x: Concept) -> AlcqiConcept:
        if isinstance(x, (Top, Bot, AtomicConcept)):
            return x
        if isinstance(x, Not):
            return Not(conv(x.sub))
        if isinstance(x, And):
            return And(conv(x.left), conv(x.right))
        if isinstance(x, AtLeast):
            if x.role.arity != 2:
                raise ArityError("role %s has arity %d, binary fragment needs 2" % (x.role.name, x.role.arity))
            inverse = not x.role.perm().is_identity()
            return AtLeastBin(x.count, BinRole(x.role.name, inverse), conv(x.args[0]))
        raise TypeError("not a concept: %r" % (x,))

    return conv(c)


def parse_alcqi(text: str, roles: Optional[Mapping[str, int]] = None) -> AlcqiConcept:
    return concept_to_alcqi(parse_concept(text, roles))


def print_alcqi(c: AlcqiConcept) -> str:
    return print_concept(embed_alcqi(c))


# ---------------------------------------------------------------------------
# gra term AST

@dataclass(frozen=True)
class GraAtom:
    name: str


@dataclass(frozen=True)
class GraTop:
    pass


@dataclass(frozen=True)
class GraBot:
    pass


@dataclass(frozen=True)
class GraEq:
    pass


@dataclass(frozen=True)
class GraP:
    sub: "GraTerm"


@dataclass(frozen=True)
class GraS:
    sub: "GraTerm"


@dataclass(frozen=True)
class GraI:
    sub: "GraTerm"


@dataclass(frozen=True)
class GraNeg:
    sub: "GraTerm"


@dataclass(frozen=True)
class GraJoin:
    left: "GraTerm"
    right: "GraTerm"


@dataclass(frozen=True)
class GraEx:
    sub: "GraTerm"


@dataclass(frozen=True)
class GraDotCap:
    left: "GraTerm"
    right: "GraTerm"


@dataclass(frozen=True)
class GraEx1:
    sub: "GraTerm"


@dataclass(frozen=True)
class GraCap1:
    left: "GraTerm"
    right: "GraTerm"


@dataclass(frozen=True)
class GraNeg1:
    sub: "GraTerm"


GraTerm = Union[
    GraAtom, GraTop, GraBot, GraEq,
    GraP, GraS, GraI, GraNeg, GraJoin, GraEx,
    GraDotCap, GraEx1, GraCap1, GraNeg1,
]

GRA_KEYWORDS = {
    "e": (GraEq, 0),
    "top": (GraTop, 0),
    "bot": (GraBot, 0),
    "p": (GraP, 1),
    "s": (GraS, 1),
    "I": (GraI, 1),
    "neg": (GraNeg, 1),
    "join": (GraJoin, 2),
    "ex": (GraEx, 1),
    "dotcap": (GraDotCap, 2),
    "ex1": (GraEx1, 1),
    "cap1": (GraCap1, 2),
    "neg1": (GraNeg1, 1),
}


def arity_of_term(t: GraTerm, atoms: Mapping[str, int]) -> int:
    """Output arity of a term; `atoms` maps relation symbols to arities."""
    if isinstance(t, GraAtom):
        if t.name not in atoms:
            raise ArityError("undeclared relation symbol %s" % t.name)
        return atoms[t.name]
    if isinstance(t, (GraTop, GraBot)):
        return 1
    if isinstance(t, GraEq):
        return 2
    if isinstance(t, (GraP, GraS, GraNeg)):
        return arity_of_term(t.sub, atoms)
    if isinstance(t, GraI):
        a = arity_of_term(t.sub, atoms)
        return a - 1 if a >= 2 else a
    if isinstance(t, GraJoin):
        return arity_of_term(t.left, atoms) + arity_of_term(t.right, atoms)
    if isinstance(t, GraEx):
        a = arity_of_term(t.sub, atoms)
        return a - 1 if a >= 1 else 0
    if isinstance(t, GraDotCap):
        return max(arity_of_term(t.left, atoms), arity_of_term(t.right, atoms))
    if isinstance(t, GraEx1):
        a = arity_of_term(t.sub, atoms)
        return a if a <= 1 else 1
    if isinstance(t, GraCap1):
        a = arity_of_term(t.left, atoms)
        b = arity_of_term(t.right, atoms)
        return 0 if a == 0 and b == 0 else 1
    if isinstance(t, GraNeg1):
        a = arity_of_term(t.sub, atoms)
        return a if a <= 1 else 1
    raise TypeError("not a gra term: %r" % (t,))


# ---------------------------------------------------------------------------
# lexing

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<ge>>=)
  | (?P<lt><)
  | (?P<eq>=)
  | (?P<int>\d+)
  | (?P<name>@?[A-Za-z][A-Za-z0-9_]*)
  | (?P<caret>\^)
  | (?P<dot>\.)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<comma>,)
    """,
    re.VERBOSE,
)


def _lex(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError("unexpected character %r at offset %d" % (text[pos], pos))
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _lex(text)
        self.i = 0

    def peek(self, ahead: int = 0) -> tuple[str, str, int]:
        j = min(self.i + ahead, len(self.tokens) - 1)
        return self.tokens[j]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        if tok[0] != "eof":
            self.i += 1
        return tok

    def expect(self, kind: str) -> tuple[str, str, int]:
        tok = self.next()
        if tok[0] != kind:
            raise ParseError("expected %s but found %r at offset %d" % (kind, tok[1], tok[2]))
        return tok

    def expect_eof(self) -> None:
        tok = self.peek()
        if tok[0] != "eof":
            raise ParseError("trailing input %r at offset %d" % (tok[1], tok[2]))

    # -- concept grammar ----------------------------------------------------

    def concept(self) -> Concept:
        node = self.unary()
        while self.peek()[0] == "name" and self.peek()[1] == "and":
            self.next()
            node = And(node, self.unary())
        return node

    def unary(self) -> Concept:
        kind, value, pos = self.peek()
        if kind == "lpar":
            self.next()
            node = self.concept()
            self.expect("rpar")
            return node
        if kind == "ge" or kind == "lt" or kind == "eq":
            self.next()
            count = self.count(pos)
            role, args = self.role_args()
            if kind == "ge":
                return AtLeast(count, role, args)
            if kind == "lt":
                return LessThan(count, role, args)
            return Exactly(count, role, args)
        if kind == "name":
            if value == "not":
                self.next()
                return Not(self.unary())
            if value == "top":
                self.next()
                return Top()
            if value == "bot":
                self.next()
                return Bot()
            if value in ("E", "A") and self.peek(1)[0] == "name" and self.peek(1)[1] != "and":
                self.next()
                role, args = self.role_args()
                return Exists(role, args) if value == "E" else ForAll(role, args)
            if value == "and":
                raise ParseError("'and' is a keyword, not a concept name (offset %d)" % pos)
            self.next()
            return AtomicConcept(value)
        raise ParseError("expected a concept at offset %d, found %r" % (pos, value))

    def count(self, at: int) -> int:
        tok = self.next()
        if tok[0] != "int":
            raise ParseError("expected a count at offset %d" % at)
        k = int(tok[1])
        if k < 1:
            raise ParseError("count must be at least 1 at offset %d" % tok[2])
        return k

    def role_args(self) -> tuple[RoleExpr, tuple[Concept, ...]]:
        name_tok = self.expect("name")
        if name_tok[1] in ("top", "bot", "not", "and"):
            raise ParseError("%r is a keyword, not a role name (offset %d)" % (name_tok[1], name_tok[2]))
        word = ""
        if self.peek()[0] == "caret":
            self.next()
            word_tok = self.expect("name")
            if not ROLE_WORD_CHARS.issuperset(word_tok[1]):
                raise ParseError(
                    "permutation word may only use p and s at offset %d" % word_tok[2]
                )
            word = word_tok[1]
        self.expect("dot")
        self.expect("lpar")
        args = [self.concept()]
        while self.peek()[0] == "comma":
            self.next()
            args.append(self.concept())
        self.expect("rpar")
        return RoleExpr(name_tok[1], len(args) + 1, word), tuple(args)

    # -- gra term grammar ---------------------------------------------------

    def gra_term(self) -> GraTerm:
        kind, value, pos = self.next()
        if kind != "name":
            raise ParseError("expected a term at offset %d, found %r" % (pos, value))
        spec = GRA_KEYWORDS.get(value)
        if spec is None:
            return GraAtom(value)
        cls, argc = spec
        if argc == 0:
            return cls()
        self.expect("lpar")
        first = self.gra_term()
        if argc == 1:
            self.expect("rpar")
            return cls(first)
        self.expect("comma")
        second = self.gra_term()
        self.expect("rpar")
        return cls(first, second)


def parse_concept(text: str, roles: Optional[Mapping[str, int]] = None) -> Concept:
    """Parse a concept; role arities are read off the argument counts.

    With a role->arity map given, every occurrence is checked against it and
    undeclared roles are rejected. Without one, occurrences only need to be
    consistent with each other.
    """
    p = _Parser(text)
    node = p.concept()
    p.expect_eof()
    used = concept_roles(node)
    if roles is not None:
        for name, arity in used.items():
            if name not in roles:
                raise ArityError("undeclared role %s" % name)
            if roles[name] != arity:
                raise ArityError(
                    "role %s declared with arity %d but used with %d arguments"
                    % (name, roles[name], arity - 1)
                )
    return node


def parse_gra_term(text: str, atoms: Optional[Mapping[str, int]] = None) -> GraTerm:
    """Parse a relation-algebra term; `atoms` (if given) validates symbols."""
    p = _Parser(text)
    node = p.gra_term()
    p.expect_eof()
    if atoms is not None:
        arity_of_term(node, atoms)
    return node


# ---------------------------------------------------------------------------
# printing

def _role_str(role: RoleExpr) -> str:
    return role.name if not role.word else "%s^%s" % (role.name, role.word)


def _args_str(args: tuple[Concept, ...]) -> str:
    return ", ".join(print_concept(a) for a in args)


def _wrap_and(c: Concept) -> str:
    s = print_concept(c)
    return "(%s)" % s if isinstance(c, And) else s


def print_concept(c: Concept) -> str:
    if isinstance(c, Top):
        return "top"
    if isinstance(c, Bot):
        return "bot"
    if isinstance(c, AtomicConcept):
        return c.name
    if isinstance(c, Not):
        return "not %s" % _wrap_and(c.sub)
    if isinstance(c, And):
        left = print_concept(c.left) if isinstance(c.left, And) else _wrap_and(c.left)
        return "%s and %s" % (left, _wrap_and(c.right))
    if isinstance(c, AtLeast):
        return ">=%d %s.(%s)" % (c.count, _role_str(c.role), _args_str(c.args))
    if isinstance(c, Exists):
        return "E %s.(%s)" % (_role_str(c.role), _args_str(c.args))
    if isinstance(c, ForAll):
        return "A %s.(%s)" % (_role_str(c.role), _args_str(c.args))
    if isinstance(c, LessThan):
        return "<%d %s.(%s)" % (c.count, _role_str(c.role), _args_str(c.args))
    if isinstance(c, Exactly):
        return "=%d %s.(%s)" % (c.count, _role_str(c.role), _args_str(c.args))
    raise TypeError("not a printable concept: %r" % (c,))


def print_gra_term(t: GraTerm) -> str:
    if isinstance(t, GraAtom):
        if t.name in GRA_KEYWORDS:
            raise ValueError("relation symbol %s collides with a keyword" % t.name)
        return t.name
    if isinstance(t, GraTop):
        return "top"
    if isinstance(t, GraBot):
        return "bot"
    if isinstance(t, GraEq):
        return "e"
    for cls, kw in (
        (GraP, "p"), (GraS, "s"), (GraI, "I"), (GraNeg, "neg"),
        (GraEx, "ex"), (GraEx1, "ex1"), (GraNeg1, "neg1"),
    ):
        if isinstance(t, cls):
            return "%s(%s)" % (kw, print_gra_term(t.sub))
    for cls, kw in ((GraJoin, "join"), (GraDotCap, "dotcap"), (GraCap1, "cap1")):
        if isinstance(t, cls):
            return "%s(%s, %s)" % (kw, print_gra_term(t.left), print_gra_term(t.right))
    raise TypeError("not a printable term: %r" % (t,))
