"""
Nested construction of the cardinality-bounded feasibility functions F^k.

The pool B^k of level-set-minimal right-hand sides is the authoritative
representation of F^k on all of Z^m: F^k(beta) = 0 iff some pool element is
<=_K beta. The verdict table over H is a cache derived from it.

One iteration (step) runs two phases:
  1. build the candidate set C^{k-1} from B^{k-1}, evaluate F^k on it with
     the previous pool, and keep the feasible candidates as B^k;
  2. evaluate the remaining unsolved right-hand sides of H against B^k.
Per-beta work inside a phase only reads an immutable snapshot, so it can be
farmed out to a thread pool; the pool and solved set are merged afterwards.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple, TypeVar, Union

from .config import DEFAULT_THREADS, ORACLE_ENUMERATION_BUDGET
from .cone import contains, leq
from .errors import EnumerationBudget, InconsistentState, InstanceError
from .model import Instance
from .oracle import oracle_F
from .rational import IntVector, vsub

logger = logging.getLogger(__name__)

FEASIBLE = 0
INFEASIBLE = -1

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class MinimalPool:
    """
    B^k: finite antichain of level-set-minimal right-hand sides.

    witnesses maps each element to an x with Ax equal to it and 1^T x <= k.
    """

    k: int
    elements: Tuple[IntVector, ...]
    witnesses: Dict[IntVector, IntVector] = field(default_factory=dict, hash=False, compare=False)

    def __contains__(self, beta) -> bool:
        return tuple(beta) in self.witnesses

    def __len__(self) -> int:
        return len(self.elements)

    def dominating(self, beta: Sequence[int], cone) -> Optional[IntVector]:
        """First element (lexicographic) that is <=_K beta, if any."""
        for bbar in self.elements:
            if leq(cone, bbar, beta):
                return bbar
        return None

    def is_antichain(self, cone) -> bool:
        return not any(b1 != b2 and leq(cone, b1, b2)
                       for b1 in self.elements for b2 in self.elements)


@dataclass(frozen=True)
class FeasTable:
    """Verdicts of F^k over H; first_feasible_k is None while infeasible."""

    k: int
    verdicts: Dict[IntVector, int]
    solved: FrozenSet[IntVector]
    first_feasible_k: Dict[IntVector, Optional[int]]

    def verdict(self, beta: Sequence[int]) -> int:
        return self.verdicts[tuple(beta)]

    @property
    def feasible(self) -> List[IntVector]:
        return [b for b, v in self.verdicts.items() if v == FEASIBLE]


@dataclass(frozen=True)
class TraceRecord:
    k: int
    candidates: int
    pool: int
    solved: int
    total: int
    elapsed_ms: int

    @property
    def line(self) -> str:
        return (f"k={self.k} |C|={self.candidates} |B|={self.pool} "
                f"solved={self.solved}/{self.total} elapsed_ms={self.elapsed_ms}")


@dataclass(frozen=True)
class EngineState:
    instance: Instance
    rhs: Tuple[IntVector, ...]
    table: FeasTable
    pool: MinimalPool
    columns: Tuple[Tuple[int, IntVector], ...]  # deduplicated (original index, a^j)
    trace: Tuple[TraceRecord, ...] = ()

    def __post_init__(self):
        assert self.table.k == self.pool.k, "table and pool out of step"

    @property
    def k(self) -> int:
        return self.pool.k


@dataclass(frozen=True)
class Feasible:
    """Primal branch: x >= 0 integral with Ax <=_K beta."""

    beta: IntVector
    witness: IntVector


@dataclass(frozen=True)
class Infeasible:
    """
    Dual branch: the pool representation of F with F(a^j) >= 0 for every
    column and F(beta) = -1.
    """

    beta: IntVector
    k: int
    pool: Tuple[IntVector, ...]
    column_checks: Tuple[bool, ...]
    alternative: str  # "nonneg" (D+) or "free" (D#, split instance)


AlternativeVerdict = Union[Feasible, Infeasible]


def parallel_map(fn: Callable[[T], R], items: Sequence[T], threads: int) -> List[R]:
    if threads <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(fn, items))


def _unit_step(x: Sequence[int], j: int) -> IntVector:
    return tuple(v + 1 if i == j else v for i, v in enumerate(x))


def unique_columns(inst: Instance) -> Tuple[Tuple[int, IntVector], ...]:
    """Columns of A with duplicates removed (first occurrence wins)."""
    seen = set()
    out = []
    for j, col in enumerate(inst.columns):
        if col not in seen:
            seen.add(col)
            out.append((j, col))
    return tuple(out)


def init(inst: Instance, rhs: Sequence[Sequence[int]]) -> EngineState:
    """
    F^0 over H and B^0 = {0}.

    F^0(beta) = 0 exactly when beta is in K, since P^0(beta) = {0}.
    """
    if inst.has_free:
        raise InstanceError("free variables must be split before running the engine")
    start = time.perf_counter()
    points = tuple(tuple(b) for b in rhs)
    verdicts = {}
    first = {}
    for beta in points:
        inside = contains(inst.cone, beta)
        verdicts[beta] = FEASIBLE if inside else INFEASIBLE
        first[beta] = 0 if inside else None
    solved = frozenset(b for b, v in verdicts.items() if v == FEASIBLE)
    zero = (0,) * inst.m
    pool = MinimalPool(0, (zero,), {zero: (0,) * inst.n})
    record = TraceRecord(0, 0, 1, len(solved), len(points),
                         int((time.perf_counter() - start) * 1000))
    logger.info(record.line)
    return EngineState(instance=inst, rhs=points, table=FeasTable(0, verdicts, solved, first),
                       pool=pool, columns=unique_columns(inst), trace=(record,))


def pool_feasible(pool: MinimalPool, beta: Sequence[int], cone) -> int:
    """F^k(beta) from B^k: 0 iff some pool element is <=_K beta."""
    return FEASIBLE if pool.dominating(beta, cone) is not None else INFEASIBLE


def lsm_pool(state: EngineState) -> Tuple[IntVector, ...]:
    """
    C^{k-1}: candidates from B^{k-1} and B^{k-1} + a^j, filtered so that
    every feasible point they touch (themselves or beta - a^l) is already
    level-set-minimal.

    F^{k-1} is read from the pool, so candidates need not lie in H.
    """
    pool = state.pool
    cone = state.instance.cone
    raw = set(pool.elements)
    for _, col in state.columns:
        raw.update(tuple(b + a for b, a in zip(bbar, col)) for bbar in pool.elements)

    def keep(beta: IntVector) -> bool:
        if beta not in pool and pool_feasible(pool, beta, cone) == FEASIBLE:
            return False
        for _, col in state.columns:
            shifted = vsub(beta, col)
            if shifted not in pool and pool_feasible(pool, shifted, cone) == FEASIBLE:
                return False
        return True

    return tuple(sorted(b for b in raw if keep(b)))


def _eval_spec_detail(beta: Sequence[int], prev_pool: MinimalPool,
                      columns: Sequence[IntVector], cone) -> Optional[Tuple[Optional[int], IntVector]]:
    """(None, bbar) if F^{k-1}(beta) = 0, (j, bbar) if bbar <=_K beta - a^j, else None."""
    bbar = prev_pool.dominating(beta, cone)
    if bbar is not None:
        return None, bbar
    for j, col in enumerate(columns):
        bbar = prev_pool.dominating(vsub(beta, col), cone)
        if bbar is not None:
            return j, bbar
    return None


def eval_spec(beta: Sequence[int], prev_pool: MinimalPool,
              columns: Sequence[IntVector], cone) -> int:
    """F^k(beta) = max{F^{k-1}(beta), max_j F^{k-1}(beta - a^j)} via B^{k-1}."""
    return FEASIBLE if _eval_spec_detail(beta, prev_pool, columns, cone) is not None else INFEASIBLE


def eval_pool(beta: Sequence[int], pool: MinimalPool, cone) -> int:
    """F^k(beta) for beta outside C^{k-1}, once B^k is complete."""
    return pool_feasible(pool, beta, cone)


def step(state: EngineState, threads: int = DEFAULT_THREADS) -> EngineState:
    """
    Advance from k-1 to k.

    Args:
        state: State at iteration k-1
        threads: Worker threads per phase (1 = inline)

    Returns:
        EngineState: state at iteration k
    """
    start = time.perf_counter()
    cone = state.instance.cone
    prev = state.pool
    k = prev.k + 1
    column_vectors = [col for _, col in state.columns]
    in_rhs = set(state.rhs)
    solved = set(state.table.solved)
    first = dict(state.table.first_feasible_k)

    # Phase 1: candidates -> B^k. Solved candidates outside B^{k-1} are skipped.
    candidates = lsm_pool(state)
    work = [b for b in candidates if not (b in solved and b not in prev)]

    def evaluate_candidate(beta: IntVector) -> Optional[IntVector]:
        hit = _eval_spec_detail(beta, prev, column_vectors, cone)
        if hit is None:
            return None
        j, bbar = hit
        witness = prev.witnesses[bbar]
        if j is None:
            return witness
        return _unit_step(witness, state.columns[j][0])

    new_pool: Dict[IntVector, IntVector] = {}
    for beta, witness in zip(work, parallel_map(evaluate_candidate, work, threads)):
        if witness is None:
            continue
        new_pool[beta] = witness
        if beta in in_rhs and beta not in solved:
            solved.add(beta)
            first[beta] = k
    pool = MinimalPool(k, tuple(sorted(new_pool)), new_pool)

    # Phase 2: everything else in H against the finished B^k
    candidate_set = set(candidates)
    remaining = [b for b in state.rhs if b not in solved and b not in candidate_set]
    verdicts = parallel_map(lambda b: eval_pool(b, pool, cone), remaining, threads)
    for beta, verdict in zip(remaining, verdicts):
        if verdict == FEASIBLE:
            solved.add(beta)
            first[beta] = k

    table = FeasTable(k, {b: FEASIBLE if b in solved else INFEASIBLE for b in state.rhs},
                      frozenset(solved), first)
    record = TraceRecord(k, len(candidates), len(pool), len(solved), len(state.rhs),
                         int((time.perf_counter() - start) * 1000))
    logger.info(record.line)
    return EngineState(instance=state.instance, rhs=state.rhs, table=table, pool=pool,
                       columns=state.columns, trace=state.trace + (record,))


def run(inst: Instance, rhs: Sequence[Sequence[int]], kbar: int,
        threads: int = DEFAULT_THREADS) -> EngineState:
    """
    Iterate step() kbar times from F^0.

    With kbar from a verified dual certificate the final table equals F_+ on H.
    """
    if kbar < 0:
        raise ValueError(f"kbar must be >= 0, got {kbar}")
    state = init(inst, rhs)
    for _ in range(kbar):
        state = step(state, threads)
    return state


def certificate_check(inst: Instance, state: EngineState, beta: Sequence[int],
                      reextract: bool = True,
                      budget: int = ORACLE_ENUMERATION_BUDGET) -> AlternativeVerdict:
    """
    Return the one branch of the theorem of the alternative that holds at beta.

    The feasible branch needs a witness x with Ax <=_K beta; with reextract it
    is searched by the oracle (bound first_feasible_k, or k off the table) and
    otherwise taken from the pool. The infeasible branch needs F(beta) = -1
    and F(a^j) = 0 for every column, all read from the pool.

    Args:
        inst: The (split) instance the state was built from
        state: Converged engine state
        beta: Right-hand side to certify
        reextract: Search a witness with the oracle instead of the pool
        budget: Oracle enumeration cap; the pool witness is used beyond it

    Raises:
        InconsistentState: both or neither branch validated
    """
    beta = tuple(beta)
    if state.k == 0:
        # F^0 need not contain a^j; F^1 always does and agrees with F^0 on a converged H
        state = step(state)
    cone = inst.cone
    pool = state.pool
    bbar = pool.dominating(beta, cone)

    witness = None
    if reextract:
        bound = state.table.first_feasible_k.get(beta)
        if bound is None:
            bound = state.k
        try:
            _, found = oracle_F(inst, beta, bound, budget)
            witness = found.x if found is not None else None
        except EnumerationBudget:
            logger.debug("oracle budget exceeded at %s, using the pool witness", beta)
    if witness is None and bbar is not None:
        witness = pool.witnesses[bbar]
    feasible_ok = witness is not None and leq(cone, inst.apply(witness), beta)

    column_checks = tuple(pool_feasible(pool, col, cone) == FEASIBLE for col in inst.columns)
    infeasible_ok = bbar is None and all(column_checks)

    if feasible_ok == infeasible_ok:
        raise InconsistentState(f"beta={beta}: feasible branch {feasible_ok}, "
                                f"infeasible branch {infeasible_ok} at k={state.k}")
    if feasible_ok:
        return Feasible(beta, witness)
    return Infeasible(beta, state.k, pool.elements, column_checks,
                      "free" if inst.was_split else "nonneg")
