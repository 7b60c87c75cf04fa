"""
Exact cone membership, the induced partial order and the dual cone.

A ConeSpec is a product of blocks; each block is an orthant, a pointed
polyhedral cone {x : Mx >= 0}, a second-order cone {(x, t) : t >= ||x||}
(the last coordinate is t) or the PSD cone in upper-triangular row-major
packing with no off-diagonal scaling.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import List, Sequence, Tuple

from .errors import DimensionError, IntegralityError, PointednessError, UnsupportedCone
from .exact_lp import find_feasible_point, rank
from .rational import IntVector, vsub


class BlockKind(str, Enum):
    ORTHANT = "orthant"
    POLYHEDRAL = "polyhedral"
    SECOND_ORDER = "soc"
    PSD = "psd"


@dataclass(frozen=True)
class ConeBlock:
    """One factor of a product cone."""

    kind: BlockKind
    dim: int
    matrix: Tuple[Tuple[int, ...], ...] = ()  # polyhedral only
    order: int = 0  # psd only: matrix side d

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionError(f"{self.kind.value} block needs dim >= 1, got {self.dim}")
        if self.kind is BlockKind.PSD and self.dim != self.order * (self.order + 1) // 2:
            raise DimensionError(f"psd block with d={self.order} must have dim "
                                 f"{self.order * (self.order + 1) // 2}, got {self.dim}")
        if self.kind is BlockKind.POLYHEDRAL:
            if not self.matrix:
                raise DimensionError("polyhedral block needs at least one row in M")
            for i, row in enumerate(self.matrix):
                if len(row) != self.dim:
                    raise DimensionError(f"polyhedral M row {i} has {len(row)} entries, expected {self.dim}")
                if any(not isinstance(v, int) or isinstance(v, bool) for v in row):
                    raise IntegralityError(f"polyhedral M row {i} is not integral: {row}")
            if rank(self.matrix) != self.dim:
                raise PointednessError(
                    f"polyhedral cone {{x : Mx >= 0}} is not pointed: rank(M) < {self.dim}")

    @classmethod
    def orthant(cls, dim: int) -> "ConeBlock":
        return cls(BlockKind.ORTHANT, dim)

    @classmethod
    def polyhedral(cls, matrix: Sequence[Sequence[int]]) -> "ConeBlock":
        rows = tuple(tuple(row) for row in matrix)
        return cls(BlockKind.POLYHEDRAL, len(rows[0]) if rows else 0, matrix=rows)

    @classmethod
    def second_order(cls, dim: int) -> "ConeBlock":
        return cls(BlockKind.SECOND_ORDER, dim)

    @classmethod
    def psd(cls, d: int) -> "ConeBlock":
        if d < 1:
            raise DimensionError(f"psd block needs d >= 1, got {d}")
        return cls(BlockKind.PSD, d * (d + 1) // 2, order=d)

    @property
    def orthant_equivalent(self) -> bool:
        """True for orthants and polyhedral blocks whose rows are all unit vectors."""
        if self.kind is BlockKind.ORTHANT:
            return True
        if self.kind is BlockKind.POLYHEDRAL:
            return all(sorted(row) == [0] * (self.dim - 1) + [1] for row in self.matrix)
        return False


@dataclass(frozen=True)
class ConeSpec:
    """Ordered product of cone blocks; total_dim is the sum of block dims."""

    blocks: Tuple[ConeBlock, ...]
    total_dim: int = field(init=False)

    def __post_init__(self):
        if not self.blocks:
            raise DimensionError("cone needs at least one block")
        object.__setattr__(self, "total_dim", sum(b.dim for b in self.blocks))

    @classmethod
    def orthant(cls, dim: int) -> "ConeSpec":
        return cls((ConeBlock.orthant(dim),))

    def split(self, v: Sequence) -> List[Tuple[ConeBlock, Sequence]]:
        """Pair each block with its slice of v."""
        if len(v) != self.total_dim:
            raise DimensionError(f"vector has length {len(v)}, cone dimension is {self.total_dim}")
        parts = []
        start = 0
        for block in self.blocks:
            parts.append((block, v[start:start + block.dim]))
            start += block.dim
        return parts

    @property
    def polyhedral_only(self) -> bool:
        return all(b.kind in (BlockKind.ORTHANT, BlockKind.POLYHEDRAL) for b in self.blocks)

    @property
    def orthant_equivalent(self) -> bool:
        return all(b.orthant_equivalent for b in self.blocks)


def unpack_symmetric(packed: Sequence[Rational], d: int) -> List[List[Rational]]:
    """Upper-triangular row-major entries -> full symmetric d x d matrix."""
    mat = [[0] * d for _ in range(d)]
    pos = 0
    for i in range(d):
        for j in range(i, d):
            mat[i][j] = mat[j][i] = packed[pos]
            pos += 1
    return mat


def is_psd(mat: Sequence[Sequence[Rational]]) -> bool:
    """
    Exact PSD test by symmetric elimination with rational pivots.

    A negative pivot fails. A zero pivot requires the rest of its row (and by
    symmetry column) to be zero, after which elimination continues on the
    complement.
    """
    d = len(mat)
    work = [[Fraction(v) for v in row] for row in mat]
    for i in range(d):
        p = work[i][i]
        if p < 0:
            return False
        if p == 0:
            if any(work[i][j] != 0 for j in range(i + 1, d)):
                return False
            continue
        for r in range(i + 1, d):
            f = work[r][i] / p
            if f:
                for c in range(i + 1, d):
                    work[r][c] -= f * work[i][c]
    return True


def _block_contains(block: ConeBlock, v: Sequence[Rational]) -> bool:
    if block.kind is BlockKind.ORTHANT:
        return all(x >= 0 for x in v)
    if block.kind is BlockKind.POLYHEDRAL:
        return all(sum(a * x for a, x in zip(row, v)) >= 0 for row in block.matrix)
    if block.kind is BlockKind.SECOND_ORDER:
        t = v[-1]
        return t >= 0 and t * t >= sum(x * x for x in v[:-1])
    return is_psd(unpack_symmetric(v, block.order))


def contains(cone: ConeSpec, v: Sequence[Rational]) -> bool:
    """
    Decide v in K exactly.

    Args:
        cone: Product cone
        v: Integer (or rational) vector of length cone.total_dim

    Returns:
        bool: membership in every block

    Raises:
        DimensionError: length mismatch
    """
    return all(_block_contains(block, part) for block, part in cone.split(v))


def leq(cone: ConeSpec, b1: Sequence[int], b2: Sequence[int]) -> bool:
    """b1 <=_K b2, i.e. b2 - b1 in K."""
    if len(b1) != len(b2):
        raise DimensionError(f"cannot compare vectors of length {len(b1)} and {len(b2)}")
    return contains(cone, vsub(b2, b1))


def dual_contains(cone: ConeSpec, u: Sequence[Rational]) -> bool:
    """
    Decide u in K* exactly.

    Orthant, second-order and PSD blocks are self-dual. For a polyhedral
    block {x : Mx >= 0} the dual is {M^T lam : lam >= 0}, decided by an
    exact phase-1 LP.

    PSD packing carries no off-diagonal scaling, so the plain dot product
    u^T v is <U', V> with U' the unpacked u whose off-diagonals are halved;
    U' is what has to be PSD.
    """
    u = [Fraction(x) for x in u]
    for block, part in cone.split(u):
        if block.kind is BlockKind.POLYHEDRAL:
            m_transpose = [[row[c] for row in block.matrix] for c in range(block.dim)]
            if find_feasible_point(m_transpose, part) is None:
                return False
        elif block.kind is BlockKind.PSD:
            mat = unpack_symmetric(part, block.order)
            halved = [[v if i == j else v / 2 for j, v in enumerate(row)] for i, row in enumerate(mat)]
            if not is_psd(halved):
                return False
        elif not _block_contains(block, part):
            return False
    return True


def floor_to_integral(cone: ConeSpec, b: Sequence[Rational]) -> IntVector:
    """
    Componentwise floor of a rational right-hand side.

    For orthant-equivalent cones b - floor(b) is in K and the feasibility
    verdict is unchanged.

    Raises:
        UnsupportedCone: any second-order, PSD or general polyhedral block
        DimensionError: length mismatch
    """
    for block, _ in cone.split(b):
        if not block.orthant_equivalent:
            raise UnsupportedCone(
                f"no constructive integral rounding for a {block.kind.value} block")
    return tuple(math.floor(Fraction(x)) for x in b)
