"""
Shared helpers for the test suite: fixture loading, the seeded random
instance corpus and a few brute-force references.
"""

import itertools
import os
import random
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from conic_farkas.bound import DualLPStatus, compute_kbar, solve_dual_lp
from conic_farkas.cone import ConeBlock, ConeSpec, leq
from conic_farkas.model import Instance, ParsedInstance, VarSign, parse_instance
from conic_farkas.oracle import bounded_points

FIXTURES = os.path.abspath(os.path.join(os.path.dirname(__file__), '..', 'fixtures'))

# Box half-widths per m, keeping |H| <= 200
BOX_RANGES = {1: (-6, 6), 2: (-4, 4), 3: (-2, 2), 4: (-1, 1)}

CORPUS_SEED = 20240611
CORPUS_SIZE = 100

# Keeps the converged checks desk-sized; larger certified bounds are skipped
KBAR_LIMIT = 10


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


def load_fixture(name: str) -> ParsedInstance:
    with open(fixture_path(name), "rb") as f:
        return parse_instance(f.read())


def random_cone(rng: random.Random, m: int) -> ConeSpec:
    kinds = ["orthant", "polyhedral"]
    if m >= 2:
        kinds.append("soc")
    if m >= 3:
        kinds.append("orthant_soc")
    kind = rng.choice(kinds)
    if kind == "orthant":
        return ConeSpec.orthant(m)
    if kind == "soc":
        return ConeSpec((ConeBlock.second_order(m),))
    if kind == "orthant_soc":
        return ConeSpec((ConeBlock.orthant(1), ConeBlock.second_order(m - 1)))
    # identity rows keep it pointed, the extra row cuts it down
    rows = [tuple(1 if i == j else 0 for j in range(m)) for i in range(m)]
    rows.append(tuple(rng.randint(-1, 2) for _ in range(m)))
    return ConeSpec((ConeBlock.polyhedral(rows),))


def random_instance(rng: random.Random, m: Optional[int] = None, n: Optional[int] = None,
                    cone: Optional[ConeSpec] = None, free: bool = False) -> Instance:
    m = m or rng.randint(1, 4)
    n = n or rng.randint(1, 3)
    cone = cone or random_cone(rng, m)
    A = tuple(tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(m))
    signs = tuple(VarSign.FREE if free and rng.random() < 0.5 else VarSign.NONNEG for _ in range(n))
    return Instance(A=A, cone=cone, var_signs=signs)


def corpus(seed: int = CORPUS_SEED, size: int = CORPUS_SIZE) -> List[Instance]:
    rng = random.Random(seed)
    return [random_instance(rng) for _ in range(size)]


def certified_corpus(limit: int = KBAR_LIMIT) -> List[Tuple[Instance, List[Tuple[int, ...]], int]]:
    """Polyhedral corpus instances whose dual LP certifies kbar <= limit over box(m)."""
    out = []
    for inst in corpus():
        if not inst.cone.polyhedral_only:
            continue
        outcome = solve_dual_lp(inst)
        if outcome.status is not DualLPStatus.CERTIFIED:
            continue
        rhs = box(inst.m)
        kbar = compute_kbar(outcome.certificate, rhs)
        if kbar <= limit:
            out.append((inst, rhs, kbar))
    return out


def box(m: int) -> List[Tuple[int, ...]]:
    low, high = BOX_RANGES[m]
    return list(itertools.product(range(low, high + 1), repeat=m))


def min_cardinality(inst: Instance, beta: Sequence[int], kmax: int) -> Optional[int]:
    """Smallest 1^T x over feasible x with 1^T x <= kmax, by enumeration."""
    best = None
    for x in bounded_points(inst.n, kmax):
        s = sum(x)
        if (best is None or s < best) and leq(inst.cone, inst.apply(x), beta):
            best = s
    return best


def free_feasible(inst: Instance, beta: Sequence[int], radius: int) -> bool:
    """Some x in Z^n with sum |x_j| <= radius, x_j >= 0 unless free, and Ax <=_K beta."""
    ranges = [range(-radius, radius + 1) if s is VarSign.FREE else range(0, radius + 1)
              for s in inst.var_signs]
    return any(leq(inst.cone, inst.apply(x), beta) for x in itertools.product(*ranges)
               if sum(abs(v) for v in x) <= radius)


def solve_square(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Unique solution of a square system by Gauss-Jordan, or None if singular."""
    size = len(rows)
    work = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if work[r][col] != 0), None)
        if pivot is None:
            return None
        work[col], work[pivot] = work[pivot], work[col]
        for r in range(size):
            if r != col and work[r][col]:
                f = work[r][col] / work[col][col]
                work[r] = [a - f * b for a, b in zip(work[r], work[col])]
    return [work[i][size] / work[i][i] for i in range(size)]


def orthant_dual_feasible(inst: Instance) -> bool:
    """
    {u >= 0 : A^T u >= 1} nonempty, by enumerating vertices.

    The region is pointed (u >= 0), so it is nonempty iff some choice of m
    tight constraints gives a feasible point.
    """
    m = inst.m
    constraints = [(tuple(1 if i == j else 0 for j in range(m)), 0) for i in range(m)]
    constraints += [(col, 1) for col in inst.columns]
    for subset in itertools.combinations(constraints, m):
        u = solve_square([c for c, _ in subset], [b for _, b in subset])
        if u is None:
            continue
        if all(sum(a * v for a, v in zip(c, u)) >= b for c, b in constraints):
            return True
    return False
