import random

import pytest

from polyalc import (
    And,
    AtLeastBin,
    AtomicConcept,
    BinRole,
    InputError,
    Not,
    ReifySignature,
    Top,
    build_chi,
    build_outdeg,
    check_alcqi,
    check_concept,
    concept_roles,
    concept_size,
    extract_polyadic,
    lanternize,
    make_interp,
    parse_concept,
    random_interp,
    translate,
    with_dom,
)
from polyalc.model import ArityRel, Signature
from polyalc.reify import DOM, f_role, marker_name

from gen import rand_counting, rand_nested


A = AtomicConcept("A")
B = AtomicConcept("B")


def conj(parts):
    node = parts[0]
    for p in parts[1:]:
        node = And(node, p)
    return node


def exactly_one(i):
    return And(
        AtLeastBin(1, f_role(i), Top()),
        Not(AtLeastBin(2, f_role(i), Top())),
    )


def all_in_dom(i):
    return Not(AtLeastBin(1, f_role(i), Not(AtomicConcept(DOM))))


# ---------------------------------------------------------------------------
# generated names and signature validation

def test_generated_names():
    assert DOM == "@dom"
    assert marker_name("R") == "@L_R"
    assert f_role(1) == BinRole("@F1", False)
    assert f_role(3, inverse=True) == BinRole("@F3", True)


def test_signature_accepts_plain_roles():
    sig = ReifySignature({"R": 3, "S": 2})
    assert sig.max_arity == 3


def test_signature_rejects_collisions_and_low_arity():
    with pytest.raises(InputError):
        ReifySignature({"@F1": 2})
    with pytest.raises(InputError):
        ReifySignature({"R": 1})


def test_signature_from_concept():
    sig = ReifySignature.from_concept(parse_concept(">=1 R.(top, top) and E S.(A)"))
    assert dict(sig.roles) == {"R": 3, "S": 2}


# ---------------------------------------------------------------------------
# build_outdeg

def test_outdeg_two_golden():
    expected = And(
        conj([exactly_one(1), exactly_one(2)]),
        conj([all_in_dom(1), all_in_dom(2)]),
    )
    assert build_outdeg(2) == expected


def test_outdeg_three_conjunct_order():
    expected = And(
        conj([exactly_one(1), exactly_one(2), exactly_one(3)]),
        conj([all_in_dom(1), all_in_dom(2), all_in_dom(3)]),
    )
    assert build_outdeg(3) == expected


def test_outdeg_rejects_low_arity():
    with pytest.raises(InputError):
        build_outdeg(1)


def test_outdeg_satisfiers_have_one_successor_each():
    sig = Signature.make(concepts=[DOM], roles={"@F1": 2, "@F2": 2, "@F3": 2})
    outdeg = build_outdeg(3)
    seen = 0
    for seed in range(200):
        interp = random_interp(seed, 2, sig, density=0.5)
        for x in check_alcqi(outdeg, interp):
            seen += 1
            for i in (1, 2, 3):
                succ = [b for (a, b) in interp.roles["@F%d" % i].tuples if a == x]
                assert len(succ) == 1
                assert succ[0] in interp.concept_ext(DOM)
    assert seen > 0


# ---------------------------------------------------------------------------
# build_chi

def test_chi_single_role():
    assert build_chi("R", {"R"}) == AtomicConcept("@L_R")


def test_chi_two_roles():
    assert build_chi("R", {"R", "S"}) == And(
        AtomicConcept("@L_R"), Not(AtomicConcept("@L_S"))
    )


def test_chi_unknown_role():
    with pytest.raises(InputError):
        build_chi("T", {"R", "S"})


def test_chi_markers_disjoint():
    sig = Signature.make(concepts=["@L_R", "@L_S"], roles={})
    chi_r = build_chi("R", {"R", "S"})
    chi_s = build_chi("S", {"R", "S"})
    for seed in range(30):
        interp = random_interp(seed, 4, sig, density=0.5)
        assert not (check_alcqi(chi_r, interp) & check_alcqi(chi_s, interp))


# ---------------------------------------------------------------------------
# translate

def test_translate_boolean_part_unchanged():
    c = parse_concept("A and not B")
    assert translate(c, ReifySignature({"R": 2})) == c


def test_translate_rule_five_golden():
    c = parse_concept(">=2 R^pp.(A, B)")
    sig = ReifySignature({"R": 3})
    expected = AtLeastBin(
        2,
        BinRole("@F2", True),
        conj([
            Not(AtomicConcept(DOM)),
            build_chi("R", {"R"}),
            build_outdeg(3),
            AtLeastBin(1, BinRole("@F3", False), A),
            AtLeastBin(1, BinRole("@F1", False), B),
        ]),
    )
    assert translate(c, sig) == expected


def test_translate_reifies_binary_roles_too():
    out = translate(parse_concept(">=1 R.(A)"), ReifySignature({"R": 2}))
    assert isinstance(out, AtLeastBin)
    assert out.role == BinRole("@F1", True)


def test_translate_boolean_homomorphism():
    rng = random.Random(11)
    sig = ReifySignature({"R": 3})
    for _ in range(25):
        a = rand_counting(rng, 3, 2)
        b = rand_counting(rng, 3, 2)
        assert translate(Not(a), sig) == Not(translate(a, sig))
        assert translate(And(a, b), sig) == And(translate(a, sig), translate(b, sig))


def test_translate_symbol_hygiene():
    rng = random.Random(23)
    from polyalc import concept_names

    for _ in range(25):
        c = rand_nested(rng, 3, 2, 2)
        out = translate(c, ReifySignature({"R": 3}))
        for name in concept_names(out):
            assert name.startswith("@") or name in {"A", "B"}
        for role in concept_roles(out):
            assert role in {"@F1", "@F2", "@F3"}


def test_translate_rejects_user_at_names():
    with pytest.raises(InputError):
        translate(parse_concept("@dom and A"), ReifySignature({"R": 2}))


def test_translate_rejects_signature_mismatch():
    with pytest.raises(InputError):
        translate(parse_concept(">=1 R.(top, top)"), ReifySignature({"R": 2}))


def test_translate_size_linear_in_input():
    rng = random.Random(5)
    sig = ReifySignature({"R": 3})
    for _ in range(20):
        c = rand_nested(rng, 3, 3, 3)
        out = translate(c, sig)
        assert concept_size(out) <= 40 * concept_size(c) * sig.max_arity


# ---------------------------------------------------------------------------
# lanternize

def test_lanternize_single_tuple_golden():
    interp = make_interp(["a"], {}, {"R": ArityRel.of(3, {("a", "a", "a")})})
    out = lanternize(interp)
    lanterns = out.domain - {"a"}
    assert len(lanterns) == 1
    (ell,) = lanterns
    assert out.concept_ext(DOM) == frozenset({"a"})
    assert out.concept_ext("@L_R") == frozenset({ell})
    for i in (1, 2, 3):
        assert out.roles["@F%d" % i].tuples == frozenset({(ell, "a")})


def test_lanternize_domain_size_formula():
    rng = random.Random(3)
    sig = Signature.make(concepts=["A"], roles={"R": 3, "S": 2})
    for seed in range(25):
        interp = random_interp(seed, rng.randint(1, 4), sig, density=0.4)
        out = lanternize(interp)
        tuples = sum(len(rel) for rel in interp.roles.values())
        assert len(out.domain) == len(interp.domain) + tuples


def test_lanternize_keeps_atomic_concepts():
    interp = make_interp(["a", "b"], {"A": ["a"]}, {"R": ArityRel.of(2, {("a", "b")})})
    out = lanternize(interp)
    assert out.concept_ext("A") == frozenset({"a"})


def test_lanternize_rejects_at_names():
    with pytest.raises(InputError):
        lanternize(make_interp(["a"], {"@dom": ["a"]}, {}))


def test_lanternize_transfer_of_satisfaction():
    # membership carries over between C and @dom and T(C) at the same element
    rng = random.Random(17)
    sig_m = Signature.make(concepts=["A", "B"], roles={"R": 3})
    rsig = ReifySignature({"R": 3})
    checked = 0
    for seed in range(20):
        interp = random_interp(seed, 3, sig_m, density=0.5)
        lantern = lanternize(interp, rsig)
        for _ in range(5):
            c = rand_nested(rng, 3, 2, 2)
            before = check_concept(c, interp)
            after = check_alcqi(with_dom(translate(c, rsig)), lantern)
            assert before == after & interp.domain
            assert after <= interp.domain
            checked += 1
    assert checked == 100


# ---------------------------------------------------------------------------
# extract_polyadic

def test_extract_round_trip():
    sig_m = Signature.make(concepts=["A", "B"], roles={"R": 3, "S": 2})
    rsig = ReifySignature({"R": 3, "S": 2})
    for seed in range(25):
        interp = random_interp(seed, 3, sig_m, density=0.4)
        back = extract_polyadic(lanternize(interp, rsig), rsig)
        assert back.domain == interp.domain
        assert back.concepts == dict(interp.concepts)
        assert back.roles == dict(interp.roles)


def test_extract_ignores_outdeg_violation():
    binary = make_interp(
        ["a", "b", "l"],
        {DOM: ["a", "b"], "@L_R": ["l"]},
        {
            "@F1": ArityRel.of(2, {("l", "a"), ("l", "b")}),
            "@F2": ArityRel.of(2, {("l", "a")}),
        },
    )
    out = extract_polyadic(binary, ReifySignature({"R": 2}))
    assert out.roles["R"].tuples == frozenset()


def test_extract_merges_duplicate_lanterns():
    binary = make_interp(
        ["a", "b", "l1", "l2"],
        {DOM: ["a", "b"], "@L_R": ["l1", "l2"]},
        {
            "@F1": ArityRel.of(2, {("l1", "a"), ("l2", "a")}),
            "@F2": ArityRel.of(2, {("l1", "b"), ("l2", "b")}),
        },
    )
    out = extract_polyadic(binary, ReifySignature({"R": 2}))
    assert out.roles["R"].tuples == frozenset({("a", "b")})


def test_extract_requires_nonempty_dom():
    binary = make_interp(["a"], {}, {})
    with pytest.raises(InputError):
        extract_polyadic(binary, ReifySignature({"R": 2}))
