import random

import pytest

from polyalc import (
    ArityRel,
    EvalBudgetError,
    EvalEnv,
    Signature,
    UndeclaredAtomError,
    eval_term,
    make_interp,
    parse_gra_term,
    random_interp,
)
from polyalc.gra import (
    apply_i,
    apply_p,
    apply_s,
    cap1,
    complement,
    equality_rel,
    join,
    neg1,
    project,
    project1,
    suffix_intersect,
)
from polyalc.syntax import (
    GraAtom,
    GraCap1,
    GraDotCap,
    GraEq,
    GraEx,
    GraEx1,
    GraI,
    GraJoin,
    GraNeg,
    GraNeg1,
    GraP,
    GraS,
)


def rel(arity, *tuples):
    return ArityRel.of(arity, tuples)


DOM = frozenset({"1", "2", "3"})


# -- single operators ---------------------------------------------------------

def test_p_moves_last_to_front():
    assert apply_p(rel(3, ("1", "2", "3"))) == rel(3, ("3", "1", "2"))


def test_p_identity_below_arity_two():
    assert apply_p(rel(1, ("1",))) == rel(1, ("1",))
    assert apply_p(ArityRel.empty(0)) == ArityRel.empty(0)


def test_p_preserves_empty_arity():
    assert apply_p(ArityRel.empty(4)) == ArityRel.empty(4)


def test_s_swaps_last_two():
    assert apply_s(rel(3, ("1", "2", "3"))) == rel(3, ("1", "3", "2"))


def test_s_on_binary_is_inverse():
    assert apply_s(rel(2, ("1", "2"))) == rel(2, ("2", "1"))


def test_s_identity_below_arity_two():
    assert apply_s(rel(0, ())) == rel(0, ())


def test_i_keeps_tuples_with_repeated_tail():
    got = apply_i(rel(3, ("1", "2", "2"), ("1", "2", "3")))
    assert got == rel(2, ("1", "2"))


def test_i_on_pair():
    assert apply_i(rel(2, ("5", "5"))) == rel(1, ("5",))


def test_i_identity_below_arity_two():
    assert apply_i(rel(1, ("1",))) == rel(1, ("1",))


def test_complement_of_empty_binary():
    assert complement(ArityRel.empty(2), frozenset({"a"})) == rel(2, ("a", "a"))


def test_complement_involution():
    rng = random.Random(0)
    for _ in range(40):
        arity = rng.randint(0, 3)
        dom = frozenset(str(i) for i in range(rng.randint(1, 3)))
        from itertools import product
        pool = list(product(sorted(dom), repeat=arity))
        r = ArityRel.of(arity, (t for t in pool if rng.random() < 0.5))
        assert complement(complement(r, dom), dom) == r


def test_complement_unary():
    assert complement(rel(1, ("a",)), frozenset({"a", "b"})) == rel(1, ("b",))


def test_join_concatenates():
    assert join(rel(1, ("1",)), rel(2, ("2", "3"))) == rel(3, ("1", "2", "3"))


def test_join_nullary_unit():
    r = rel(2, ("1", "2"))
    assert join(r, ArityRel.of(0, [()])) == r


def test_join_with_empty():
    assert join(rel(2, ("1", "2")), ArityRel.empty(3)) == ArityRel.empty(5)


def test_project_drops_last():
    assert project(rel(2, ("1", "2"), ("1", "3"))) == rel(1, ("1",))


def test_project_unary_gives_nullary():
    assert project(rel(1, ("1",))) == ArityRel.of(0, [()])
    assert project(ArityRel.empty(1)) == ArityRel.empty(0)


def test_project_empty():
    assert project(ArityRel.empty(2)) == ArityRel.empty(1)


def test_project_identity_on_nullary():
    assert project(ArityRel.of(0, [()])) == ArityRel.of(0, [()])


def test_equality_rel():
    e = equality_rel(frozenset({"a", "b"}))
    assert e == rel(2, ("a", "a"), ("b", "b"))
    assert len(e) == 2
    assert apply_s(e) == e


def test_suffix_intersect_matches_suffix():
    got = suffix_intersect(rel(2, ("1", "2")), rel(1, ("2",)))
    assert got == rel(2, ("1", "2"))


def test_suffix_intersect_equal_arity_is_intersection():
    a = rel(2, ("1", "2"), ("2", "1"))
    b = rel(2, ("1", "2"), ("2", "2"))
    assert suffix_intersect(a, b) == rel(2, ("1", "2"))


def test_suffix_intersect_nullary_operands():
    r = rel(2, ("1", "2"))
    assert suffix_intersect(r, ArityRel.empty(0)) == ArityRel.empty(2)
    assert suffix_intersect(r, ArityRel.of(0, [()])) == r


def test_project1_first_coordinates():
    assert project1(rel(2, ("1", "2"), ("3", "2"))) == rel(1, ("1",), ("3",))


def test_project1_identity_at_most_unary():
    assert project1(rel(1, ("1",))) == rel(1, ("1",))
    assert project1(ArityRel.of(0, [()])) == ArityRel.of(0, [()])


def test_project1_empty():
    assert project1(ArityRel.empty(3)) == ArityRel.empty(1)


def test_cap1_mixed_arity():
    got = cap1(rel(2, ("1", "2")), rel(1, ("2",)))
    assert got == rel(1, ("1",))


def test_cap1_both_binary_is_empty_unary():
    assert cap1(rel(2, ("1", "2")), rel(2, ("1", "2"))) == ArityRel.empty(1)


def test_neg1_binary_is_empty_unary():
    assert neg1(rel(2, ("1", "2")), DOM) == ArityRel.empty(1)


def test_neg1_unary_complements():
    assert neg1(rel(1, ("1",)), DOM) == rel(1, ("2",), ("3",))


def test_cap1_equals_project1_of_suffix_intersect():
    rng = random.Random(1)
    from itertools import product
    for _ in range(60):
        dom = frozenset(str(i) for i in range(rng.randint(1, 3)))
        ar, br = rng.randint(0, 2), rng.randint(0, 2)
        if min(ar, br) > 1:
            continue
        pa = list(product(sorted(dom), repeat=ar))
        pb = list(product(sorted(dom), repeat=br))
        a = ArityRel.of(ar, (t for t in pa if rng.random() < 0.5))
        b = ArityRel.of(br, (t for t in pb if rng.random() < 0.5))
        assert cap1(a, b) == project1(suffix_intersect(a, b))


# -- term evaluation ----------------------------------------------------------

def interp_ab():
    return make_interp(
        ["1", "2"],
        {"A": ["2"]},
        {"R": ArityRel.of(2, [("1", "2")])},
    )


def test_eval_atom():
    env = EvalEnv.for_interp(interp_ab())
    assert eval_term(GraAtom("R"), env) == rel(2, ("1", "2"))


def test_eval_double_negation_preserves_empty_atoms():
    interp = make_interp(["1"], {}, {"Q": ArityRel.empty(3)})
    env = EvalEnv.for_interp(interp)
    assert eval_term(GraNeg(GraNeg(GraAtom("Q"))), env) == ArityRel.empty(3)


def test_eval_ex1_dotcap():
    env = EvalEnv.for_interp(interp_ab())
    got = eval_term(GraEx1(GraDotCap(GraAtom("R"), GraAtom("A"))), env)
    assert got == rel(1, ("1",))


def test_eval_matches_cap1():
    env = EvalEnv.for_interp(interp_ab())
    assert eval_term(GraCap1(GraAtom("R"), GraAtom("A")), env) == rel(1, ("1",))


def test_eval_compositionality():
    rng = random.Random(2)
    sig = Signature.make(["A"], {"R": 2, "T": 3})
    for trial in range(40):
        interp = random_interp(trial, rng.randint(1, 3), sig)
        env = EvalEnv.for_interp(interp)
        dom = interp.domain
        t = rng.choice([GraAtom("R"), GraAtom("T"), GraAtom("A")])
        v = eval_term(t, env)
        assert eval_term(GraP(t), env) == apply_p(v)
        assert eval_term(GraS(t), env) == apply_s(v)
        assert eval_term(GraI(t), env) == apply_i(v)
        assert eval_term(GraNeg(t), env) == complement(v, dom)
        assert eval_term(GraEx(t), env) == project(v)
        assert eval_term(GraEx1(t), env) == project1(v)
        assert eval_term(GraNeg1(t), env) == neg1(v, dom)
        u = GraAtom("A")
        uv = eval_term(u, env)
        assert eval_term(GraJoin(t, u), env) == join(v, uv)
        assert eval_term(GraDotCap(t, u), env) == suffix_intersect(v, uv)
        assert eval_term(GraCap1(t, u), env) == cap1(v, uv)
        assert eval_term(GraEq(), env) == equality_rel(dom)


def test_eval_isomorphism_invariance():
    rng = random.Random(3)
    sig = Signature.make(["A"], {"R": 2})
    terms = [
        parse_gra_term("neg(R)"),
        parse_gra_term("cap1(R, A)"),
        parse_gra_term("ex(join(A, R))"),
        parse_gra_term("I(s(R))"),
        parse_gra_term("dotcap(R, neg1(A))"),
    ]
    for trial in range(30):
        interp = random_interp(trial, rng.randint(1, 4), sig)
        elems = sorted(interp.domain)
        image = ["r%d" % i for i in range(len(elems))]
        rng.shuffle(image)
        g = dict(zip(elems, image))
        renamed = make_interp(
            g.values(),
            {n: frozenset(g[x] for x in v) for n, v in interp.concepts.items()},
            {n: ArityRel.of(r.arity, (tuple(g[x] for x in t) for t in r.tuples))
             for n, r in interp.roles.items()},
        )
        for t in terms:
            a = eval_term(t, EvalEnv.for_interp(interp))
            b = eval_term(t, EvalEnv.for_interp(renamed))
            assert b.arity == a.arity
            assert b.tuples == frozenset(tuple(g[x] for x in tup) for tup in a.tuples)


def test_eval_budget_guard():
    interp = make_interp(["1", "2", "3", "4"], {}, {"R": ArityRel.empty(2)})
    env = EvalEnv.for_interp(interp, budget=10)
    with pytest.raises(EvalBudgetError):
        eval_term(GraNeg(GraAtom("R")), env)


def test_eval_undeclared_atom():
    env = EvalEnv.for_interp(interp_ab())
    with pytest.raises(UndeclaredAtomError):
        eval_term(GraAtom("Q"), env)


def test_declared_but_absent_atom_is_empty():
    interp = interp_ab()
    env = EvalEnv(interp, {"R": 2, "A": 1, "Z": 4}, 10**6)
    assert eval_term(GraAtom("Z"), env) == ArityRel.empty(4)
