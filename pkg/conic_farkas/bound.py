"""
Stopping bound kbar from a dual certificate u in K* with A^T u >= 1.

For every beta in H and every feasible x, 1^T x <= u^T A x <= u^T beta, so
x with 1^T x <= ceil(max u^T beta) suffices and the engine can stop there.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import List, Optional, Sequence, Tuple

from .cone import BlockKind, dual_contains
from .errors import DimensionError
from .exact_lp import find_feasible_point
from .model import Instance
from .rational import ceil_rational, dot

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DualCertificate:
    u: Tuple[Fraction, ...]

    @classmethod
    def of(cls, values: Sequence[Rational]) -> "DualCertificate":
        return cls(tuple(Fraction(v) for v in values))


class DualLPStatus(str, Enum):
    CERTIFIED = "certified"
    NO_CERTIFICATE = "no_certificate"
    UNSUPPORTED_CONE = "unsupported_cone"


@dataclass(frozen=True)
class DualLPResult:
    status: DualLPStatus
    certificate: Optional[DualCertificate] = None


def verify_certificate(inst: Instance, u: Sequence[Rational]) -> bool:
    """
    Check u in K* and A^T u >= 1 exactly.

    Raises:
        DimensionError: len(u) != m
    """
    if len(u) != inst.m:
        raise DimensionError(f"dual certificate has {len(u)} entries, expected {inst.m}")
    u = [Fraction(v) for v in u]
    short = [j for j, col in enumerate(inst.columns) if dot(u, col) < 1]
    if short:
        logger.debug("A^T u >= 1 fails at columns %s", short)
        return False
    if not dual_contains(inst.cone, u):
        logger.debug("u is not in the dual cone")
        return False
    return True


def compute_kbar(u: DualCertificate, rhs: Sequence[Sequence[int]]) -> int:
    """max(0, ceil(max_{beta in H} u^T beta)); 0 for an empty H."""
    best = max((dot(u.u, beta) for beta in rhs), default=0)
    return max(0, ceil_rational(best))


def _dual_generators(inst: Instance) -> List[List[int]]:
    """
    Block-diagonal T with K* = {T z : z >= 0}.

    Orthant blocks contribute identity columns, polyhedral blocks the rows of
    M (K* = {M^T lam : lam >= 0}).
    """
    columns: List[List[int]] = []
    offset = 0
    for block in inst.cone.blocks:
        generators = ([[1 if r == i else 0 for r in range(block.dim)] for i in range(block.dim)]
                      if block.kind is BlockKind.ORTHANT else [list(row) for row in block.matrix])
        for g in generators:
            columns.append([0] * offset + g + [0] * (inst.m - offset - block.dim))
        offset += block.dim
    return columns


def solve_dual_lp(inst: Instance) -> DualLPResult:
    """
    Decide {u in K* : A^T u >= 1} for orthant/polyhedral cones.

    With u = T z the system is (A^T T) z - s = 1, z >= 0, s >= 0, solved by
    the exact phase-1 simplex. Second-order and PSD blocks are not handled;
    the caller has to supply u.

    Returns:
        DualLPResult: certificate, no certificate, or unsupported cone
    """
    if not inst.cone.polyhedral_only:
        return DualLPResult(DualLPStatus.UNSUPPORTED_CONE)
    generators = _dual_generators(inst)
    n_gen = len(generators)
    n = inst.n
    a_eq = []
    for j, col in enumerate(inst.columns):
        row = [dot(col, g) for g in generators]
        row += [-1 if i == j else 0 for i in range(n)]
        a_eq.append(row)
    z = find_feasible_point(a_eq, [1] * n)
    if z is None:
        logger.info("dual LP infeasible: no u in K* with A^T u >= 1")
        return DualLPResult(DualLPStatus.NO_CERTIFICATE)
    u = [sum((z[g] * generators[g][i] for g in range(n_gen)), Fraction(0)) for i in range(inst.m)]
    certificate = DualCertificate.of(u)
    logger.info("dual LP certificate u=%s", [str(v) for v in certificate.u])
    return DualLPResult(DualLPStatus.CERTIFIED, certificate)
