import random
from itertools import combinations, product

from polyalc.solver import CnfSolver


def brute_force_sat(nvars: int, clauses: list[list[int]]) -> bool:
    for bits in product([False, True], repeat=nvars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in cl) for cl in clauses):
            return True
    return False


def build(nvars: int, clauses: list[list[int]]) -> CnfSolver:
    s = CnfSolver()
    for _ in range(nvars):
        s.new_var()
    for cl in clauses:
        s.add_clause(cl)
    return s


def test_trivial_cases():
    s = CnfSolver()
    assert s.solve() is True
    s = build(1, [[1], [-1]])
    assert s.solve() is False
    s = build(2, [[1, 2], [-1, 2]])
    assert s.solve() is True
    model = s.model()
    assert model[2] is True


def test_empty_clause_unsat():
    s = build(1, [[]])
    assert s.solve() is False


def test_model_satisfies_formula():
    rng = random.Random(9)
    for _ in range(300):
        nvars = rng.randint(1, 12)
        clauses = [
            [rng.choice([-1, 1]) * rng.randint(1, nvars)
             for _ in range(rng.randint(1, 4))]
            for _ in range(rng.randint(1, 5 * nvars))
        ]
        s = build(nvars, clauses)
        verdict = s.solve()
        assert verdict is not None
        if verdict:
            m = s.model()
            for cl in clauses:
                assert any(m[abs(l)] == (l > 0) for l in cl)


def test_agrees_with_brute_force():
    rng = random.Random(10)
    for _ in range(500):
        nvars = rng.randint(1, 9)
        clauses = [
            [rng.choice([-1, 1]) * rng.randint(1, nvars)
             for _ in range(rng.randint(1, 3))]
            for _ in range(rng.randint(1, 4 * nvars))
        ]
        s = build(nvars, clauses)
        assert s.solve() is brute_force_sat(nvars, clauses)


def pigeonhole(holes: int) -> CnfSolver:
    # holes+1 pigeons into `holes` holes: classic unsat family
    pigeons = holes + 1
    s = CnfSolver()
    var = {}
    for p in range(pigeons):
        for h in range(holes):
            var[p, h] = s.new_var()
    for p in range(pigeons):
        s.add_clause([var[p, h] for h in range(holes)])
    for h in range(holes):
        for p1, p2 in combinations(range(pigeons), 2):
            s.add_clause([-var[p1, h], -var[p2, h]])
    return s


def test_pigeonhole_unsat():
    for holes in (3, 4, 5):
        assert pigeonhole(holes).solve() is False


def test_conflict_budget_returns_none():
    assert pigeonhole(7).solve(conflict_budget=30) is None


def test_learned_clause_reduction_keeps_verdicts():
    # force many restarts and reductions on a hard-ish random batch
    rng = random.Random(11)
    for _ in range(40):
        nvars = rng.randint(8, 14)
        ratio = 4.2
        clauses = [
            rng.sample(range(1, nvars + 1), 3)
            for _ in range(int(nvars * ratio))
        ]
        clauses = [[l * rng.choice([-1, 1]) for l in cl] for cl in clauses]
        s = build(nvars, clauses)
        s.reduce_at = 4
        assert s.solve() is brute_force_sat(nvars, clauses)
