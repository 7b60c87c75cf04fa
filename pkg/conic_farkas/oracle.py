"""
Brute-force ground truth for the engines.

Every function here enumerates integer points in a fixed lexicographic order
and checks Ax <=_K beta directly. Nothing is pruned; if the enumeration would
be larger than the budget an EnumerationBudget error is raised instead of
returning a truncated answer.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

from .config import ORACLE_ENUMERATION_BUDGET
from .cone import leq
from .errors import EnumerationBudget
from .model import Instance
from .rational import IntVector

FEASIBLE = 0
INFEASIBLE = -1


@dataclass(frozen=True)
class Witness:
    """Nonnegative integer x with Ax <=_K beta for the queried beta."""

    x: IntVector

    @property
    def cardinality(self) -> int:
        return sum(self.x)


def bounded_points(n: int, k: int) -> Iterator[IntVector]:
    """All x in Z^n_+ with 1^T x <= k, lexicographically increasing."""
    if n == 0:
        yield ()
        return
    for first in range(k + 1):
        for rest in bounded_points(n - 1, k - first):
            yield (first,) + rest


def _check_cardinality_budget(n: int, k: int, budget: int):
    count = math.comb(k + n, n)
    if count > budget:
        raise EnumerationBudget(f"{count} points with 1^T x <= {k} in {n} variables, budget is {budget}")


def _check_box_budget(n: int, k: int, budget: int):
    count = (2 ** k + 1) ** n
    if count > budget:
        raise EnumerationBudget(f"{count} points with x <= 2^{k} in {n} variables, budget is {budget}")


def oracle_F(inst: Instance, beta: Sequence[int], k: int,
             budget: int = ORACLE_ENUMERATION_BUDGET) -> Tuple[int, Optional[Witness]]:
    """
    Cardinality-bounded feasibility by exhaustive enumeration.

    Args:
        inst: Instance with nonnegative variables
        beta: Right-hand side
        k: Bound on 1^T x
        budget: Maximum number of points to enumerate

    Returns:
        tuple: (0, first witness in lexicographic order) or (-1, None)
    """
    _check_cardinality_budget(inst.n, k, budget)
    for x in bounded_points(inst.n, k):
        if leq(inst.cone, inst.apply(x), beta):
            return FEASIBLE, Witness(x)
    return INFEASIBLE, None


def oracle_G(inst: Instance, beta: Sequence[int], k: int,
             budget: int = ORACLE_ENUMERATION_BUDGET) -> int:
    """Componentwise-bounded feasibility: some x in {0..2^k}^n with Ax <=_K beta."""
    _check_box_budget(inst.n, k, budget)
    for x in itertools.product(range(2 ** k + 1), repeat=inst.n):
        if leq(inst.cone, inst.apply(x), beta):
            return FEASIBLE
    return INFEASIBLE


def oracle_Bk(inst: Instance, beta: Sequence[int], k: int,
              budget: int = ORACLE_ENUMERATION_BUDGET) -> bool:
    """
    Level-set-minimal membership at level k.

    beta is in B^k iff it is feasible with 1^T x <= k and every such feasible
    x has Ax = beta exactly.
    """
    _check_cardinality_budget(inst.n, k, budget)
    beta = tuple(beta)
    found = False
    for x in bounded_points(inst.n, k):
        ax = inst.apply(x)
        if leq(inst.cone, ax, beta):
            if ax != beta:
                return False
            found = True
    return found


def oracle_represent(inst: Instance, target: Sequence[int], k: int,
                     budget: int = ORACLE_ENUMERATION_BUDGET) -> Optional[Witness]:
    """First x (lexicographic) with Ax = target and 1^T x <= k, or None."""
    _check_cardinality_budget(inst.n, k, budget)
    target = tuple(target)
    for x in bounded_points(inst.n, k):
        if inst.apply(x) == target:
            return Witness(x)
    return None


def reachable_points(inst: Instance, k: int,
                     budget: int = ORACLE_ENUMERATION_BUDGET) -> set:
    """{Ax : x in Z^n_+, 1^T x <= k}, the finite superset of B^k."""
    _check_cardinality_budget(inst.n, k, budget)
    return {inst.apply(x) for x in bounded_points(inst.n, k)}
