"""Exact rational linear feasibility and optimization.

A dense two-phase simplex over ``Fraction`` entries with Bland's pivoting
rule (guaranteed termination, deterministic output).  The independent
Fourier-Motzkin verifier lives in :mod:`famkit.oracle` and shares no
pivoting code with this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import CapExceededError, FamkitError

#: Guard on tableau size (rows * columns).
TABLEAU_CAP = 2_000_000


@dataclass(frozen=True)
class FeasibilitySystem:
    """``A w = b`` with ``w >= 0`` plus optional interval rows ``lo <= c.w <= hi``.

    One variable per atom of the generated algebra; all coefficients exact
    rationals.
    """

    n_vars: int
    equalities: tuple[tuple[tuple[Fraction, ...], Fraction], ...] = ()
    intervals: tuple[tuple[tuple[Fraction, ...], Fraction | None, Fraction | None], ...] = ()

    def __post_init__(self):
        for coeffs, _ in self.equalities:
            if len(coeffs) != self.n_vars:
                raise FamkitError("equality row has wrong arity")
        for coeffs, lo, hi in self.intervals:
            if len(coeffs) != self.n_vars:
                raise FamkitError("interval row has wrong arity")
            if lo is None and hi is None:
                raise FamkitError("vacuous interval row")


@dataclass
class SimplexOutcome:
    feasible: bool
    solution: tuple[Fraction, ...] | None = None
    #: Farkas certificate: one multiplier per equality row, such that the
    #: nonnegative combination sum(y_r * row_r) has all coefficients <= 0
    #: but a positive right-hand side.  Only produced for pure-equality
    #: systems.
    farkas: tuple[Fraction, ...] | None = None


class _Tableau:
    """Phase-1/phase-2 simplex tableau (rows of Fractions)."""

    def __init__(self, system: FeasibilitySystem):
        self.n = system.n_vars
        rows: list[list[Fraction]] = []
        rhs: list[Fraction] = []
        signs: list[int] = []  # +1 if the row kept its orientation
        kinds: list[int] = []  # index into system.equalities, or -1 for slack rows

        for r, (coeffs, b) in enumerate(system.equalities):
            rows.append(list(coeffs))
            rhs.append(Fraction(b))
            kinds.append(r)
        for coeffs, lo, hi in system.intervals:
            if lo is not None:
                rows.append([-c for c in coeffs])
                rhs.append(-Fraction(lo))
                kinds.append(-1)
            if hi is not None:
                rows.append(list(coeffs))
                rhs.append(Fraction(hi))
                kinds.append(-1)

        # interval rows arrive as inequalities c.w <= rhs; add slack columns
        self.n_slacks = sum(1 for k in kinds if k == -1)
        slack_at = 0
        for i, k in enumerate(kinds):
            rows[i].extend([Fraction(0)] * self.n_slacks)
            if k == -1:
                rows[i][self.n + slack_at] = Fraction(1)
                slack_at += 1

        # normalize b >= 0, remembering orientation for the certificate
        for i in range(len(rows)):
            if rhs[i] < 0:
                rows[i] = [-c for c in rows[i]]
                rhs[i] = -rhs[i]
                signs.append(-1)
            else:
                signs.append(1)

        self.m = len(rows)
        self.width = self.n + self.n_slacks + self.m + 1
        if self.m * self.width > TABLEAU_CAP:
            raise CapExceededError("feasibility system exceeds the solver size cap")
        # columns: vars | slacks | artificials | rhs
        self.rows = [
            rows[i] + [Fraction(1) if j == i else Fraction(0) for j in range(self.m)] + [rhs[i]]
            for i in range(self.m)
        ]
        self.basis = [self.n + self.n_slacks + i for i in range(self.m)]
        self.signs = signs
        self.kinds = kinds
        self.art0 = self.n + self.n_slacks

    def _pivot(self, row: int, col: int, obj: list[Fraction]) -> None:
        piv = self.rows[row][col]
        self.rows[row] = [c / piv for c in self.rows[row]]
        for i in range(self.m):
            if i != row and self.rows[i][col]:
                f = self.rows[i][col]
                self.rows[i] = [a - f * b for a, b in zip(self.rows[i], self.rows[row])]
        if obj[col]:
            f = obj[col]
            obj[:] = [a - f * b for a, b in zip(obj, self.rows[row])]
        self.basis[row] = col

    def _run(self, obj: list[Fraction], allowed: int) -> None:
        """Bland's rule: entering = lowest negative reduced cost, leaving by
        minimal ratio with lowest basis index tie-break."""
        while True:
            enter = -1
            for j in range(allowed):
                if obj[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return
            leave = -1
            best: Fraction | None = None
            for i in range(self.m):
                a = self.rows[i][enter]
                if a > 0:
                    ratio = self.rows[i][-1] / a
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        best = ratio
                        leave = i
            if leave < 0:
                raise FamkitError("unbounded direction in a bounded system")
            self._pivot(leave, enter, obj)

    def phase1(self) -> Fraction:
        # reduced costs for min sum(artificials) with artificial basis
        obj = [Fraction(0)] * self.width
        for j in range(self.art0, self.art0 + self.m):
            obj[j] = Fraction(1)
        for i in range(self.m):
            obj = [a - b for a, b in zip(obj, self.rows[i])]
        self._obj1 = None
        self._run(obj, self.art0)
        self._obj1 = obj
        return -obj[-1]

    def farkas(self) -> tuple[Fraction, ...]:
        # y_i = 1 - reduced cost of artificial column i, unnegating flipped rows;
        # then y.A <= 0 on variable columns while y.b equals the positive optimum
        obj = self._obj1
        raw = [Fraction(1) - obj[self.art0 + i] for i in range(self.m)]
        per_row = [self.signs[i] * raw[i] for i in range(self.m)]
        out = []
        for i, k in enumerate(self.kinds):
            if k >= 0:
                out.append(per_row[i])
        return tuple(out)

    def drive_out_artificials(self) -> None:
        for i in range(self.m):
            if self.basis[i] >= self.art0:
                for j in range(self.art0):
                    if self.rows[i][j]:
                        self._pivot(i, j, [Fraction(0)] * self.width)
                        break
                # an all-zero row is redundant; its artificial stays basic at 0

    def phase2(self, objective: Sequence[Fraction]) -> Fraction:
        obj = [Fraction(0)] * self.width
        for j, c in enumerate(objective):
            obj[j] = Fraction(c)
        for i in range(self.m):
            c = obj[self.basis[i]]
            if c:
                obj = [a - c * b for a, b in zip(obj, self.rows[i])]
                obj[self.basis[i]] = Fraction(0)
        self._run(obj, self.art0)
        return -obj[-1]

    def solution(self) -> tuple[Fraction, ...]:
        x = [Fraction(0)] * self.n
        for i, j in enumerate(self.basis):
            if j < self.n:
                x[j] = self.rows[i][-1]
        return tuple(x)


def solve_feasibility(system: FeasibilitySystem) -> SimplexOutcome:
    """Decide feasibility; deterministic first basic solution under Bland order."""
    tab = _Tableau(system)
    if tab.phase1() != 0:
        farkas = tab.farkas() if not system.intervals else None
        return SimplexOutcome(feasible=False, farkas=farkas)
    return SimplexOutcome(feasible=True, solution=tab.solution())


def optimize(system: FeasibilitySystem, objective: Sequence[Fraction], maximize: bool = False) -> tuple[Fraction, tuple[Fraction, ...]] | None:
    """Exact optimum of ``objective . w`` over the system, or None if infeasible.

    The feasible regions built by famkit always include a total-mass row, so
    they are bounded and the optimum is attained.
    """
    tab = _Tableau(system)
    if tab.phase1() != 0:
        return None
    tab.drive_out_artificials()
    coeffs = [Fraction(-c) for c in objective] if maximize else [Fraction(c) for c in objective]
    coeffs += [Fraction(0)] * tab.n_slacks
    value = tab.phase2(coeffs)
    if maximize:
        value = -value
    return value, tab.solution()
