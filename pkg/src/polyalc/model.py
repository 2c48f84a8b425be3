"""Finite interpretations with arity-definite relations.

An empty binary relation and an empty ternary relation are different values;
every relation carries its arity explicitly. The nullary relations are the
empty one and {()}.

JSON shape (exact keys, no extras):

    {"domain": ["a", "b"],
     "concepts": {"A": ["a"]},
     "roles": {"R": {"arity": 3, "tuples": [["a", "a", "b"]]}}}
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping

from .errors import InputError


class ModelFormatError(InputError):
    pass


@dataclass(frozen=True)
class ArityRel:
    arity: int
    tuples: frozenset[tuple[str, ...]] = frozenset()

    def __post_init__(self) -> None:
        if self.arity < 0:
            raise ModelFormatError("negative arity")
        for t in self.tuples:
            if len(t) != self.arity:
                raise ModelFormatError(
                    "tuple %r has length %d in a relation of arity %d" % (t, len(t), self.arity)
                )

    @staticmethod
    def empty(arity: int) -> "ArityRel":
        return ArityRel(arity, frozenset())

    @staticmethod
    def of(arity: int, tuples: Iterable[tuple[str, ...]]) -> "ArityRel":
        return ArityRel(arity, frozenset(tuples))

    def __len__(self) -> int:
        return len(self.tuples)


NULLARY_EMPTY = ArityRel(0, frozenset())
NULLARY_UNIT = ArityRel(0, frozenset({()}))


@dataclass(frozen=True)
class Signature:
    concepts: frozenset[str]
    roles: Mapping[str, int]

    @staticmethod
    def make(concepts: Iterable[str] = (), roles: Mapping[str, int] | None = None) -> "Signature":
        return Signature(frozenset(concepts), dict(roles or {}))

    def merge(self, other: "Signature") -> "Signature":
        roles = dict(self.roles)
        for name, arity in other.roles.items():
            if roles.get(name, arity) != arity:
                raise ModelFormatError("role %s has conflicting arities %d and %d" % (name, roles[name], arity))
            roles[name] = arity
        return Signature(self.concepts | other.concepts, roles)


@dataclass(frozen=True)
class Interp:
    """A finite structure: nonempty domain, concept valuation, role valuation."""

    domain: frozenset[str]
    concepts: Mapping[str, frozenset[str]] = field(default_factory=dict)
    roles: Mapping[str, ArityRel] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.domain:
            raise ModelFormatError("empty domain")

    def signature(self) -> Signature:
        return Signature(frozenset(self.concepts), {n: r.arity for n, r in self.roles.items()})

    def concept_ext(self, name: str) -> frozenset[str]:
        return self.concepts.get(name, frozenset())

    def role_rel(self, name: str, arity: int) -> ArityRel:
        rel = self.roles.get(name)
        if rel is None:
            return ArityRel.empty(arity)
        if rel.arity != arity:
            raise ModelFormatError("role %s has arity %d, expected %d" % (name, rel.arity, arity))
        return rel


def make_interp(domain: Iterable[str],
                concepts: Mapping[str, Iterable[str]] | None = None,
                roles: Mapping[str, ArityRel] | None = None) -> Interp:
    dom = frozenset(domain)
    cmap = {n: frozenset(v) for n, v in (concepts or {}).items()}
    interp = Interp(dom, cmap, dict(roles or {}))
    validate_interp(interp)
    return interp


def validate_interp(interp: Interp) -> None:
    for name, ext in interp.concepts.items():
        if name in ("top", "bot"):
            raise ModelFormatError("'%s' is a built-in and cannot be a concept name" % name)
        bad = ext - interp.domain
        if bad:
            raise ModelFormatError("concept %s contains non-domain elements %s" % (name, sorted(bad)))
    for name, rel in interp.roles.items():
        for t in rel.tuples:
            for elem in t:
                if elem not in interp.domain:
                    raise ModelFormatError("role %s mentions non-domain element %r" % (name, elem))


# ---------------------------------------------------------------------------
# JSON round trip

def interp_to_dict(interp: Interp) -> dict:
    return {
        "domain": sorted(interp.domain),
        "concepts": {n: sorted(v) for n, v in sorted(interp.concepts.items())},
        "roles": {
            n: {"arity": r.arity, "tuples": sorted(list(t) for t in r.tuples)}
            for n, r in sorted(interp.roles.items())
        },
    }


def interp_from_dict(data: object) -> Interp:
    if not isinstance(data, dict):
        raise ModelFormatError("model must be a JSON object")
    extra = set(data) - {"domain", "concepts", "roles"}
    if extra:
        raise ModelFormatError("unknown keys %s" % sorted(extra))
    for key in ("domain", "concepts", "roles"):
        if key not in data:
            raise ModelFormatError("missing key %r" % key)
    dom_list = data["domain"]
    if not isinstance(dom_list, list) or not all(isinstance(x, str) and x for x in dom_list):
        raise ModelFormatError("domain must be a list of nonempty strings")
    if len(set(dom_list)) != len(dom_list):
        raise ModelFormatError("duplicate domain elements")
    if not dom_list:
        raise ModelFormatError("empty domain")
    domain = frozenset(dom_list)

    concepts_obj = data["concepts"]
    if not isinstance(concepts_obj, dict):
        raise ModelFormatError("concepts must be an object")
    concepts = {}
    for name, members in concepts_obj.items():
        if not isinstance(members, list) or not all(isinstance(x, str) for x in members):
            raise ModelFormatError("concept %s must map to a list of strings" % name)
        concepts[name] = frozenset(members)

    roles_obj = data["roles"]
    if not isinstance(roles_obj, dict):
        raise ModelFormatError("roles must be an object")
    roles = {}
    for name, body in roles_obj.items():
        if not isinstance(body, dict):
            raise ModelFormatError("role %s must map to an object" % name)
        extra = set(body) - {"arity", "tuples"}
        if extra:
            raise ModelFormatError("role %s has unknown keys %s" % (name, sorted(extra)))
        if "arity" not in body or "tuples" not in body:
            raise ModelFormatError("role %s needs 'arity' and 'tuples'" % name)
        arity = body["arity"]
        if not isinstance(arity, int) or isinstance(arity, bool) or arity < 0:
            raise ModelFormatError("role %s has a bad arity" % name)
        tuples_list = body["tuples"]
        if not isinstance(tuples_list, list):
            raise ModelFormatError("role %s tuples must be a list" % name)
        tuples = set()
        for t in tuples_list:
            if not isinstance(t, list) or not all(isinstance(x, str) for x in t):
                raise ModelFormatError("role %s has a malformed tuple %r" % (name, t))
            tuples.add(tuple(t))
        roles[name] = ArityRel.of(arity, tuples)

    interp = Interp(domain, concepts, roles)
    validate_interp(interp)
    return interp


def load_interp(text: str) -> Interp:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError("invalid JSON: %s" % exc) from exc
    return interp_from_dict(data)


def save_interp(interp: Interp) -> str:
    return json.dumps(interp_to_dict(interp), indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# random structures

def random_interp(seed: int, domain_size: int, signature: Signature, density: float = 0.5) -> Interp:
    """Seed-determined random structure over elements e1..eN.

    Every concept membership and every role tuple is included independently
    with probability `density`, drawn in a fixed iteration order.
    """
    if domain_size < 1:
        raise ModelFormatError("domain size must be at least 1")
    if not 0.0 <= density <= 1.0:
        raise ModelFormatError("density must lie in [0, 1]")
    rng = random.Random(seed)
    elems = ["e%d" % (i + 1) for i in range(domain_size)]
    concepts = {}
    for name in sorted(signature.concepts):
        concepts[name] = frozenset(x for x in elems if rng.random() < density)
    roles = {}
    for name in sorted(signature.roles):
        arity = signature.roles[name]
        tuples = frozenset(t for t in product(elems, repeat=arity) if rng.random() < density)
        roles[name] = ArityRel(arity, tuples)
    return Interp(frozenset(elems), concepts, roles)
