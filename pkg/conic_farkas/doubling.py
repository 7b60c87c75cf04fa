"""
Doubling sequence G^k: feasibility with x <= 2^k componentwise.

    G^0(beta) = 0 iff some x in {0,1}^n has Ax <=_K beta
    G^k(beta) = max over y in {0,1}^n of G^{k-1}(beta - 2^{k-1} A y)

Evaluated top-down with a shared memo. Columns are never deduplicated here:
two equal columns are two independent bounded variables.
"""

import itertools
import logging
import threading
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .config import DEFAULT_THREADS, G_MEMO_CAP
from .cone import leq
from .engine import FEASIBLE, INFEASIBLE, parallel_map
from .errors import InstanceError, RecursionBudgetExceeded
from .model import Instance
from .rational import IntVector, vscale, vsub

logger = logging.getLogger(__name__)


class GMemo:
    """(k, beta) -> G^k(beta), thread-safe insert-if-absent."""

    def __init__(self, cap: int = G_MEMO_CAP):
        self.cap = cap
        self._cache: Dict[Tuple[int, IntVector], int] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._cache)

    def get(self, k: int, beta: IntVector) -> Optional[int]:
        return self._cache.get((k, beta))

    def put(self, k: int, beta: IntVector, value: int) -> int:
        with self._lock:
            existing = self._cache.get((k, beta))
            if existing is not None:
                return existing
            if len(self._cache) >= self.cap:
                raise RecursionBudgetExceeded(f"doubling memo reached its cap of {self.cap} entries")
            self._cache[(k, beta)] = value
            return value


def _shifts(inst: Instance) -> List[IntVector]:
    """A y for every y in {0,1}^n, in increasing binary order of y."""
    return [inst.apply(y) for y in itertools.product((0, 1), repeat=inst.n)]


def g_base(inst: Instance, beta: Sequence[int], shifts: Optional[List[IntVector]] = None) -> int:
    """G^0(beta): some x in {0,1}^n with Ax <=_K beta."""
    for ay in shifts if shifts is not None else _shifts(inst):
        if leq(inst.cone, ay, beta):
            return FEASIBLE
    return INFEASIBLE


def g_eval(inst: Instance, memo: GMemo, k: int, beta: Sequence[int],
           shifts: Optional[List[IntVector]] = None) -> int:
    """
    G^k(beta) by memoized recursion over binary shift vectors.

    Raises:
        RecursionBudgetExceeded: memo grew past its cap
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    beta = tuple(beta)
    cached = memo.get(k, beta)
    if cached is not None:
        return cached
    if shifts is None:
        shifts = _shifts(inst)
    if k == 0:
        value = g_base(inst, beta, shifts)
    else:
        scale = 2 ** (k - 1)
        value = INFEASIBLE
        for ay in shifts:
            if g_eval(inst, memo, k - 1, vsub(beta, vscale(scale, ay)), shifts) == FEASIBLE:
                value = FEASIBLE
                break
    return memo.put(k, beta, value)


@dataclass(frozen=True)
class GTraceRecord:
    k: int
    feasible: int
    total: int
    memo: int
    elapsed_ms: int

    @property
    def line(self) -> str:
        return (f"k={self.k} feasible={self.feasible}/{self.total} "
                f"memo={self.memo} elapsed_ms={self.elapsed_ms}")


@dataclass(frozen=True)
class GTable:
    """G^{kmax} over H; first_feasible_k counts doubling levels."""

    kmax: int
    rhs: Tuple[IntVector, ...]
    verdicts: Dict[IntVector, int]
    first_feasible_k: Dict[IntVector, Optional[int]]
    trace: Tuple[GTraceRecord, ...] = field(default=())

    @property
    def feasible(self) -> List[IntVector]:
        return [b for b, v in self.verdicts.items() if v == FEASIBLE]


def g_run(inst: Instance, rhs: Sequence[Sequence[int]], kmax: int,
          threads: int = DEFAULT_THREADS, memo_cap: int = G_MEMO_CAP) -> GTable:
    """
    Tabulate G^0..G^{kmax} over H with one shared memo.

    Args:
        inst: Instance with nonnegative variables
        rhs: Enumerated right-hand sides
        kmax: Last doubling level
        threads: Worker threads per level (1 = inline)
        memo_cap: Cap on memo entries

    Returns:
        GTable: verdicts at kmax with the per-level stabilization trace
    """
    if kmax < 0:
        raise ValueError(f"kmax must be >= 0, got {kmax}")
    if inst.has_free:
        raise InstanceError("free variables must be split before running the doubling engine")
    points = tuple(tuple(b) for b in rhs)
    memo = GMemo(memo_cap)
    shifts = _shifts(inst)
    first: Dict[IntVector, Optional[int]] = {b: None for b in points}
    trace = []
    for k in range(kmax + 1):
        start = time.perf_counter()
        pending = [b for b in points if first[b] is None]
        values = parallel_map(lambda b: g_eval(inst, memo, k, b, shifts), pending, threads)
        for beta, value in zip(pending, values):
            if value == FEASIBLE:
                first[beta] = k
        feasible = sum(1 for b in points if first[b] is not None)
        record = GTraceRecord(k, feasible, len(points), len(memo),
                              int((time.perf_counter() - start) * 1000))
        logger.info(record.line)
        trace.append(record)
    verdicts = {b: FEASIBLE if first[b] is not None else INFEASIBLE for b in points}
    return GTable(kmax, points, verdicts, first, tuple(trace))


def kmax_for(kbar: int) -> int:
    """Smallest k with 2^k >= max(kbar, 1)."""
    return max(kbar - 1, 0).bit_length()
