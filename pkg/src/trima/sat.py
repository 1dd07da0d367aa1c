"""CNF formulas, DIMACS I/O and a small conflict-driven DPLL solver.

The solver does unit propagation with two watched literals, learns a
first-UIP clause on every conflict, branches on VSIDS activity with phase
saving, and restarts on the Luby sequence.  Time and conflict budgets turn
into an ``unknown`` answer, never a guess.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence


@dataclass
class CnfFormula:
    n_vars: int
    clauses: list[tuple[int, ...]] = field(default_factory=list)
    comments: list[str] = field(default_factory=list)

    def add(self, clause: Iterable[int]) -> None:
        cl = tuple(clause)
        for lit in cl:
            if lit == 0 or abs(lit) > self.n_vars:
                raise ValueError(f"literal {lit} out of range")
        self.clauses.append(cl)

    def to_dimacs(self) -> str:
        lines = [f"c {c}" for c in self.comments]
        lines.append(f"p cnf {self.n_vars} {len(self.clauses)}")
        lines += [" ".join(map(str, cl)) + " 0" for cl in self.clauses]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dimacs(cls, text: str) -> "CnfFormula":
        comments: list[str] = []
        clauses: list[tuple[int, ...]] = []
        n_vars = n_clauses = None
        pending: list[int] = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("c"):
                comments.append(line[2:] if line.startswith("c ") else line[1:])
                continue
            if line.startswith("p"):
                parts = line.split()
                if len(parts) != 4 or parts[1] != "cnf":
                    raise ValueError(f"bad problem line: {line!r}")
                n_vars, n_clauses = int(parts[2]), int(parts[3])
                continue
            if n_vars is None:
                raise ValueError("clause before problem line")
            for tok in line.split():
                lit = int(tok)
                if lit == 0:
                    clauses.append(tuple(pending))
                    pending = []
                else:
                    pending.append(lit)
        if n_vars is None:
            raise ValueError("missing problem line")
        if pending:
            raise ValueError("unterminated clause")
        if len(clauses) != n_clauses:
            raise ValueError(f"header says {n_clauses} clauses, found {len(clauses)}")
        f = cls(n_vars, [], comments)
        for cl in clauses:
            f.add(cl)
        return f

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_dimacs())

    @classmethod
    def read(cls, path: str | Path) -> "CnfFormula":
        return cls.from_dimacs(Path(path).read_text())

    def satisfied_by(self, model: Sequence[bool]) -> bool:
        """``model[v-1]`` is the value of variable v."""
        return all(any(model[abs(l) - 1] == (l > 0) for l in cl) for cl in self.clauses)


@dataclass
class SolveResult:
    status: str  # "sat", "unsat" or "unknown"
    model: list[bool] | None = None
    stats: dict = field(default_factory=dict)


def _luby(i: int) -> int:
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while i != (1 << k) - 1:
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1
    return 1 << (k - 1)


class _Solver:
    # literal encoding: 2*v for +v, 2*v+1 for -v (v is 1-based)

    def __init__(self, cnf: CnfFormula, phase: Sequence[bool] | None):
        n = cnf.n_vars
        self.n = n
        self.value = [-1] * (n + 1)  # -1 unassigned, else 0/1
        self.level = [0] * (n + 1)
        self.reason: list[list[int] | None] = [None] * (n + 1)
        self.saved = [0] * (n + 1)
        if phase is not None:
            for v in range(1, n + 1):
                self.saved[v] = 1 if phase[v - 1] else 0
        self.activity = [0.0] * (n + 1)
        self.inc = 1.0
        self.heap = [(0.0, v) for v in range(1, n + 1)]
        heapq.heapify(self.heap)
        self.watches: list[list[list[int]]] = [[] for _ in range(2 * n + 2)]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.learnts: list[list[int]] = []
        self.deleted: set[int] = set()
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0
        self.ok = True
        for cl in cnf.clauses:
            self._add_input(cl)

    @staticmethod
    def _enc(lit: int) -> int:
        return 2 * lit if lit > 0 else 2 * (-lit) + 1

    def _lit_val(self, l: int) -> int:
        v = self.value[l >> 1]
        return -1 if v < 0 else v ^ (l & 1)

    def _add_input(self, cl: Sequence[int]) -> None:
        if not self.ok:
            return
        lits = sorted({self._enc(x) for x in cl})
        if any((l ^ 1) in lits for l in lits):
            return  # tautology
        lits = [l for l in lits if self._lit_val(l) != 0]
        if any(self._lit_val(l) == 1 for l in lits):
            return
        if not lits:
            self.ok = False
        elif len(lits) == 1:
            self._assign(lits[0], None)
            if self._propagate() is not None:
                self.ok = False
        else:
            self._attach(lits)

    def _attach(self, c: list[int]) -> None:
        self.watches[c[0] ^ 1].append(c)
        self.watches[c[1] ^ 1].append(c)

    def _assign(self, l: int, reason: list[int] | None) -> None:
        v = l >> 1
        self.value[v] = 1 ^ (l & 1)
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(l)

    def _propagate(self) -> list[int] | None:
        value = self.value
        watches = self.watches
        trail = self.trail
        while self.qhead < len(trail):
            p = trail[self.qhead]  # p became true; clauses watching ~p
            self.qhead += 1
            self.propagations += 1
            false_lit = p ^ 1
            ws = watches[p]
            i = j = 0
            n_ws = len(ws)
            while i < n_ws:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0], c[1] = c[1], false_lit
                first = c[0]
                fv = value[first >> 1]
                if fv >= 0 and (fv ^ (first & 1)) == 1:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    vk = value[lk >> 1]
                    if vk < 0 or (vk ^ (lk & 1)) == 1:
                        c[1], c[k] = lk, false_lit
                        watches[lk ^ 1].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if fv < 0:
                        self._assign(first, c)
                    else:
                        while i < n_ws:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        self.qhead = len(trail)
                        return c
            del ws[j:]
        return None

    def _bump(self, v: int) -> None:
        self.activity[v] += self.inc
        if self.activity[v] > 1e100:
            for u in range(1, self.n + 1):
                self.activity[u] *= 1e-100
            self.inc *= 1e-100
            self.heap = [(-self.activity[u], u) for u in range(1, self.n + 1) if self.value[u] < 0]
            heapq.heapify(self.heap)
        elif self.value[v] < 0:
            heapq.heappush(self.heap, (-self.activity[v], v))

    def _analyze(self, confl: list[int]) -> tuple[list[int], int]:
        seen = set()
        learnt = [0]
        counter = 0
        p = -1
        idx = len(self.trail) - 1
        cur = len(self.trail_lim)
        clause = confl
        while True:
            for q in clause:
                if q == p:
                    continue
                v = q >> 1
                if v not in seen and self.level[v] > 0:
                    seen.add(v)
                    self._bump(v)
                    if self.level[v] >= cur:
                        counter += 1
                    else:
                        learnt.append(q)
            while (self.trail[idx] >> 1) not in seen:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            counter -= 1
            if counter == 0:
                break
            clause = self.reason[p >> 1]
            seen.discard(p >> 1)
        learnt[0] = p ^ 1
        self.inc *= 1.05
        if len(learnt) == 1:
            return learnt, 0
        # second watch goes to the literal from the highest remaining level
        best = max(range(1, len(learnt)), key=lambda i: self.level[learnt[i] >> 1])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, self.level[learnt[1] >> 1]

    def _cancel_until(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        start = self.trail_lim[lvl]
        for l in self.trail[start:]:
            v = l >> 1
            self.saved[v] = self.value[v]
            self.value[v] = -1
            self.reason[v] = None
            heapq.heappush(self.heap, (-self.activity[v], v))
        del self.trail[start:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)

    def _pick(self) -> int | None:
        heap = self.heap
        while heap:
            _, v = heapq.heappop(heap)
            if self.value[v] < 0:
                return 2 * v + (0 if self.saved[v] else 1)
        return None

    def _reduce(self) -> None:
        locked = {id(self.reason[l >> 1]) for l in self.trail if self.reason[l >> 1] is not None}
        self.learnts.sort(key=len)
        keep = len(self.learnts) // 2
        survivors = []
        for i, c in enumerate(self.learnts):
            if i < keep or len(c) <= 2 or id(c) in locked:
                survivors.append(c)
            else:
                self.deleted.add(id(c))
        self.learnts = survivors
        # rebuild watch lists without deleted clauses
        if self.deleted:
            for ws in self.watches:
                ws[:] = [c for c in ws if id(c) not in self.deleted]
            self.deleted.clear()

    def solve(self, deadline: float | None, max_conflicts: int | None) -> str:
        if not self.ok:
            return "unsat"
        if self._propagate() is not None:
            return "unsat"
        restart_no = 1
        budget = 100 * _luby(restart_no)
        since_restart = 0
        max_learnts = max(1000, self.n)
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                since_restart += 1
                if not self.trail_lim:
                    return "unsat"
                learnt, back = self._analyze(confl)
                self._cancel_until(back)
                if len(learnt) == 1:
                    self._assign(learnt[0], None)
                else:
                    self._attach(learnt)
                    self.learnts.append(learnt)
                    self._assign(learnt[0], learnt)
                if max_conflicts is not None and self.conflicts >= max_conflicts:
                    return "unknown"
                if deadline is not None and (self.conflicts & 63) == 0 and time.monotonic() > deadline:
                    return "unknown"
                continue
            if since_restart >= budget:
                restart_no += 1
                budget = 100 * _luby(restart_no)
                since_restart = 0
                self._cancel_until(0)
                if len(self.learnts) > max_learnts:
                    self._reduce()
                    max_learnts = int(max_learnts * 1.1)
                continue
            if deadline is not None and (self.decisions & 1023) == 0 and time.monotonic() > deadline:
                return "unknown"
            lit = self._pick()
            if lit is None:
                return "sat"
            self.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._assign(lit, None)

    def model(self) -> list[bool]:
        return [self.value[v] == 1 for v in range(1, self.n + 1)]


def solve(cnf: CnfFormula, time_budget: float | None = None, max_conflicts: int | None = None,
          phase: Sequence[bool] | None = None) -> SolveResult:
    """Decide satisfiability of ``cnf`` within the given budgets.

    ``phase`` seeds the saved polarity of each variable (default: false).
    """
    t0 = time.monotonic()
    deadline = None if time_budget is None else t0 + time_budget
    s = _Solver(cnf, phase)
    status = s.solve(deadline, max_conflicts)
    stats = {
        "conflicts": s.conflicts,
        "decisions": s.decisions,
        "propagations": s.propagations,
        "seconds": round(time.monotonic() - t0, 3),
    }
    model = s.model() if status == "sat" else None
    if model is not None and not cnf.satisfied_by(model):
        raise AssertionError("solver produced a model that violates the formula")
    return SolveResult(status, model, stats)
