"""Small conflict-driven clause-learning SAT core.

Used by the bounded satisfiability oracle, which reduces concept
satisfiability over a fixed finite domain to propositional satisfiability.
Literals are nonzero ints, positive for a variable, negative for its
negation, as in DIMACS. Default decision phase is false, so solutions tend
toward sparse structures.
"""

from __future__ import annotations

import heapq
from typing import Optional


class CnfSolver:
    def __init__(self) -> None:
        self.nvars = 0
        self.clauses: list[Optional[list[int]]] = []
        self.watches: dict[int, list[int]] = {}
        self.values: list[int] = [0]  # 1-indexed; 0 unknown, 1 true, -1 false
        self.levels: list[int] = [0]
        self.reasons: list[Optional[int]] = [None]
        self.activity: list[float] = [0.0]
        self.phase: list[int] = [-1]  # preferred sign when deciding
        self.heap: list[tuple[float, int]] = []  # lazy max-activity queue
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.inc = 1.0
        self.empty_clause = False
        self.learned: list[int] = []
        self.lbds: dict[int, int] = {}
        self.reduce_at = 4000

    def new_var(self) -> int:
        self.nvars += 1
        self.values.append(0)
        self.levels.append(0)
        self.reasons.append(None)
        self.activity.append(0.0)
        self.phase.append(-1)
        heapq.heappush(self.heap, (0.0, self.nvars))
        return self.nvars

    def lit_value(self, lit: int) -> int:
        v = self.values[abs(lit)]
        return v if lit > 0 else -v

    def add_clause(self, lits) -> None:
        seen = set()
        out = []
        for l in lits:
            if -l in seen:
                return  # tautology
            if l not in seen:
                seen.add(l)
                out.append(l)
        if not out:
            self.empty_clause = True
            return
        if len(out) == 1:
            # queued as a root-level fact once solving starts
            self.clauses.append(out)
            return
        idx = len(self.clauses)
        self.clauses.append(out)
        self.watches.setdefault(out[0], []).append(idx)
        self.watches.setdefault(out[1], []).append(idx)

    # -- assignment ------------------------------------------------------------

    def _assign(self, lit: int, reason: Optional[int]) -> None:
        v = abs(lit)
        self.values[v] = 1 if lit > 0 else -1
        self.levels[v] = len(self.trail_lim)
        self.reasons[v] = reason
        self.phase[v] = 1 if lit > 0 else -1
        self.trail.append(lit)

    def _propagate(self) -> Optional[int]:
        """Returns a conflicting clause index, or None."""
        while self.qhead < len(self.trail):
            lit = self.trail[self.qhead]
            self.qhead += 1
            falsified = -lit
            watchlist = self.watches.get(falsified)
            if not watchlist:
                continue
            kept = []
            i = 0
            while i < len(watchlist):
                ci = watchlist[i]
                i += 1
                clause = self.clauses[ci]
                if clause is None:
                    continue
                if clause[0] == falsified:
                    clause[0], clause[1] = clause[1], clause[0]
                first = clause[0]
                if self.lit_value(first) == 1:
                    kept.append(ci)
                    continue
                moved = False
                for j in range(2, len(clause)):
                    if self.lit_value(clause[j]) != -1:
                        clause[1], clause[j] = clause[j], clause[1]
                        self.watches.setdefault(clause[1], []).append(ci)
                        moved = True
                        break
                if moved:
                    continue
                kept.append(ci)
                if self.lit_value(first) == -1:
                    kept.extend(watchlist[i:])
                    self.watches[falsified] = kept
                    return ci
                self._assign(first, ci)
            self.watches[falsified] = kept
        return None

    # -- conflict analysis -------------------------------------------------------

    def _bump(self, v: int) -> None:
        self.activity[v] += self.inc
        if self.activity[v] > 1e100:
            for i in range(1, self.nvars + 1):
                self.activity[i] *= 1e-100
            self.inc *= 1e-100
            self.heap = [(-self.activity[i], i) for i in range(1, self.nvars + 1)]
            heapq.heapify(self.heap)
        else:
            heapq.heappush(self.heap, (-self.activity[v], v))

    def _analyze(self, conflict: int) -> tuple[list[int], int]:
        """First unique implication point; returns (learned clause, backjump
        level) with the asserting literal first."""
        learned = []
        seen = [False] * (self.nvars + 1)
        counter = 0
        skip = 0
        clause = self.clauses[conflict]
        idx = len(self.trail)
        level = len(self.trail_lim)
        while True:
            for q in clause:
                if q == skip:
                    continue
                v = abs(q)
                if not seen[v] and self.levels[v] > 0:
                    seen[v] = True
                    self._bump(v)
                    if self.levels[v] >= level:
                        counter += 1
                    else:
                        learned.append(q)
            while True:
                idx -= 1
                p = self.trail[idx]
                if seen[abs(p)]:
                    break
            seen[abs(p)] = False
            counter -= 1
            if counter == 0:
                break
            skip = p
            clause = self.clauses[self.reasons[abs(p)]]
        # drop literals whose reason clause is covered by the rest (self-
        # subsumption); literals from level 0 are always redundant
        kept = []
        for q in learned:
            r = self.reasons[abs(q)]
            if r is None:
                kept.append(q)
                continue
            for other in self.clauses[r]:
                v = abs(other)
                if other != -q and not seen[v] and self.levels[v] > 0:
                    kept.append(q)
                    break
        learned = kept
        learned.insert(0, -p)
        if len(learned) == 1:
            return learned, 0
        # second watch must sit at the backjump level
        high = max(range(1, len(learned)), key=lambda i: self.levels[abs(learned[i])])
        learned[1], learned[high] = learned[high], learned[1]
        return learned, self.levels[abs(learned[1])]

    def _backjump(self, level: int) -> None:
        if level >= len(self.trail_lim):
            return
        cut = self.trail_lim[level]
        for lit in self.trail[cut:]:
            v = abs(lit)
            self.values[v] = 0
            self.reasons[v] = None
            heapq.heappush(self.heap, (-self.activity[v], v))
        del self.trail[cut:]
        del self.trail_lim[level:]
        self.qhead = len(self.trail)

    # -- driver -----------------------------------------------------------------

    def solve(self, conflict_budget: Optional[int] = None) -> Optional[bool]:
        """True sat, False unsat, None budget exhausted."""
        if self.empty_clause:
            return False
        for ci, clause in enumerate(self.clauses):
            if len(clause) == 1:
                val = self.lit_value(clause[0])
                if val == -1:
                    return False
                if val == 0:
                    self._assign(clause[0], ci)
        conflicts = 0
        restart_at = 128
        while True:
            conflict = self._propagate()
            if conflict is not None:
                conflicts += 1
                if conflict_budget is not None and conflicts > conflict_budget:
                    return None
                if not self.trail_lim:
                    return False
                learned, back = self._analyze(conflict)
                lbd = len({self.levels[abs(q)] for q in learned})
                self._backjump(back)
                idx = len(self.clauses)
                self.clauses.append(learned)
                if len(learned) > 1:
                    self.watches.setdefault(learned[0], []).append(idx)
                    self.watches.setdefault(learned[1], []).append(idx)
                    self.learned.append(idx)
                    self.lbds[idx] = lbd
                self._assign(learned[0], idx if len(learned) > 1 else None)
                self.inc *= 1.05
                if conflicts >= restart_at:
                    restart_at += restart_at // 2
                    self._backjump(0)
                    if len(self.learned) >= self.reduce_at:
                        self._reduce_db()
                        self.reduce_at = int(self.reduce_at * 1.15)
                continue
            decision = self._decide()
            if decision == 0:
                return True
            self.trail_lim.append(len(self.trail))
            self._assign(decision, None)

    def _reduce_db(self) -> None:
        """Drop the weaker half of the learned clauses, judged by the number
        of decision levels they spanned when learned, then by length. Clauses
        acting as reasons for current assignments and tightly connected ones
        are kept. Runs at a restart, so only root-level reasons are live."""
        locked = {self.reasons[abs(lit)] for lit in self.trail}
        keep, cand = [], []
        for ci in self.learned:
            if self.clauses[ci] is None:
                continue
            if ci in locked or self.lbds[ci] <= 3 or len(self.clauses[ci]) <= 2:
                keep.append(ci)
            else:
                cand.append(ci)
        cand.sort(key=lambda ci: (self.lbds[ci], len(self.clauses[ci])))
        cut = len(cand) // 2
        for ci in cand[cut:]:
            self.clauses[ci] = None
            del self.lbds[ci]
        self.learned = keep + cand[:cut]

    def _decide(self) -> int:
        while self.heap:
            act, v = heapq.heappop(self.heap)
            if self.values[v] == 0 and -act == self.activity[v]:
                return v * self.phase[v]
        for v in range(1, self.nvars + 1):  # heap entries can go stale
            if self.values[v] == 0:
                return v * self.phase[v]
        return 0

    def model(self) -> list[bool]:
        """1-indexed truth values after a sat answer."""
        return [v == 1 for v in self.values]
