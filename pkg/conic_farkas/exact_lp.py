"""
Exact rational linear algebra: matrix rank and phase-1 simplex feasibility.

Everything runs over fractions.Fraction, so there are no tolerances: a pivot
is positive, zero or negative, nothing in between.
"""

import logging
from fractions import Fraction
from numbers import Rational
from typing import List, Optional, Sequence

logger = logging.getLogger(__name__)


def rank(matrix: Sequence[Sequence[Rational]]) -> int:
    """
    Rank of a rational matrix by fraction Gaussian elimination.

    Args:
        matrix: Row-major matrix (may be empty)

    Returns:
        int: rank
    """
    rows = [[Fraction(v) for v in row] for row in matrix]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(r + 1, len(rows)):
            f = rows[i][col] / rows[r][col]
            if f:
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


class PhaseOneTableau:
    """
    Dense simplex tableau for {x >= 0 : A x = b} with one artificial per row.

    Minimizes the sum of artificials using Bland's rule (smallest entering
    index, ties in the ratio test broken by smallest basic index), which
    cannot cycle.
    """

    def __init__(self, a_eq: Sequence[Sequence[Rational]], b_eq: Sequence[Rational]):
        self.m = len(a_eq)
        self.n = len(a_eq[0]) if self.m else 0
        self.rows: List[List[Fraction]] = []
        self.rhs: List[Fraction] = []
        for i, (row, bi) in enumerate(zip(a_eq, b_eq)):
            if len(row) != self.n:
                raise ValueError(f"row {i} has {len(row)} entries, expected {self.n}")
            sign = -1 if bi < 0 else 1
            artificial = [Fraction(0)] * self.m
            artificial[i] = Fraction(1)
            self.rows.append([Fraction(sign * v) for v in row] + artificial)
            self.rhs.append(Fraction(sign * bi))
        self.basis = [self.n + i for i in range(self.m)]
        # Reduced cost of raising x_j against the artificial objective
        self.cost = [sum((self.rows[i][j] for i in range(self.m)), Fraction(0))
                     if j < self.n else Fraction(0)
                     for j in range(self.n + self.m)]
        self.pivots = 0

    def pivot(self, i: int, j: int):
        piv = self.rows[i][j]
        self.rows[i] = [v / piv for v in self.rows[i]]
        self.rhs[i] /= piv
        for k in range(self.m):
            if k != i:
                f = self.rows[k][j]
                if f:
                    self.rows[k] = [a - f * b for a, b in zip(self.rows[k], self.rows[i])]
                    self.rhs[k] -= f * self.rhs[i]
        f = self.cost[j]
        if f:
            self.cost = [a - f * b for a, b in zip(self.cost, self.rows[i])]
        self.basis[i] = j
        self.pivots += 1

    def bland_step(self) -> str:
        """One Bland pivot: 'optimal', 'unbounded' or 'go_on'."""
        entering = next((j for j in range(self.n) if self.cost[j] > 0), None)
        if entering is None:
            return "optimal"
        candidates = [(self.rhs[i] / self.rows[i][entering], self.basis[i], i)
                      for i in range(self.m) if self.rows[i][entering] > 0]
        if not candidates:
            # Cannot happen for phase 1 (objective bounded below by 0)
            return "unbounded"
        _, _, leaving = min(candidates)
        self.pivot(leaving, entering)
        return "go_on"

    def solve(self) -> Optional[List[Fraction]]:
        while self.bland_step() == "go_on":
            pass
        infeasibility = sum((self.rhs[i] for i in range(self.m) if self.basis[i] >= self.n),
                            Fraction(0))
        logger.debug("phase 1 finished after %d pivots, residual %s", self.pivots, infeasibility)
        if infeasibility > 0:
            return None
        x = [Fraction(0)] * self.n
        for i, var in enumerate(self.basis):
            if var < self.n:
                x[var] = self.rhs[i]
        return x


def find_feasible_point(a_eq: Sequence[Sequence[Rational]],
                        b_eq: Sequence[Rational]) -> Optional[List[Fraction]]:
    """
    Find x >= 0 with a_eq x = b_eq, exactly.

    Args:
        a_eq: Constraint matrix (rows x variables)
        b_eq: Right-hand side, one entry per row

    Returns:
        list of Fraction, or None if the system is infeasible
    """
    if len(a_eq) != len(b_eq):
        raise ValueError(f"{len(a_eq)} rows but {len(b_eq)} right-hand-side entries")
    if not a_eq:
        return []
    return PhaseOneTableau(a_eq, b_eq).solve()
