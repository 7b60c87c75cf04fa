"""
Problem instances, right-hand-side sets and the JSON instance format.
"""

import itertools
import json
import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Annotated, Any, Dict, Iterator, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .config import DEFAULT_ENGINE, RHS_CARDINALITY_CAP
from .cone import ConeBlock, ConeSpec, floor_to_integral
from .errors import (DimensionError, IntegralityError, MalformedInstance, RhsCapExceeded)
from .rational import IntVector, as_integer, parse_rational

logger = logging.getLogger(__name__)


class VarSign(str, Enum):
    NONNEG = "nonneg"
    FREE = "free"


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Instance:
    """
    Feasibility instance {x : Ax <=_K beta, x integral, x_j >= 0 for nonneg j}.

    column_origin maps every column to (original variable index, sign); it is
    the identity until split_free_variables() replaces free columns by pairs.
    """

    A: Tuple[Tuple[int, ...], ...]
    cone: ConeSpec
    var_signs: Tuple[VarSign, ...]
    name: Optional[str] = None
    c: Optional[Tuple[Fraction, ...]] = None  # parsed, never used
    column_origin: Tuple[Tuple[int, int], ...] = ()
    original_n: int = 0

    def __post_init__(self):
        if not self.A or not self.A[0]:
            raise DimensionError("A must have at least one row and one column")
        n = len(self.A[0])
        for i, row in enumerate(self.A):
            if len(row) != n:
                raise DimensionError(f"A row {i} has {len(row)} entries, expected {n}")
            for v in row:
                if not isinstance(v, int) or isinstance(v, bool):
                    raise IntegralityError(f"A row {i} has non-integer entry {v!r}")
        if self.cone.total_dim != len(self.A):
            raise DimensionError(f"cone dimension {self.cone.total_dim} does not match "
                                 f"the {len(self.A)} rows of A")
        if len(self.var_signs) != n:
            raise DimensionError(f"{len(self.var_signs)} var_signs for {n} columns")
        if not self.column_origin:
            object.__setattr__(self, "column_origin", tuple((j, 1) for j in range(n)))
        if not self.original_n:
            object.__setattr__(self, "original_n", n)

    @property
    def m(self) -> int:
        return len(self.A)

    @property
    def n(self) -> int:
        return len(self.A[0])

    @property
    def columns(self) -> Tuple[IntVector, ...]:
        """Columns a^1..a^n as tuples."""
        return tuple(zip(*self.A))

    @property
    def has_free(self) -> bool:
        return any(s is VarSign.FREE for s in self.var_signs)

    @property
    def was_split(self) -> bool:
        return any(sign < 0 for _, sign in self.column_origin)

    def apply(self, x: Sequence[int]) -> IntVector:
        """A x."""
        return tuple(sum(a * xj for a, xj in zip(row, x)) for row in self.A)

    def to_original(self, x: Sequence[int]) -> IntVector:
        """Map a witness over these columns back to the original variables."""
        out = [0] * self.original_n
        for xj, (j, sign) in zip(x, self.column_origin):
            out[j] += sign * xj
        return tuple(out)


@dataclass(frozen=True)
class Box:
    lower: IntVector
    upper: IntVector

    @property
    def cardinality(self) -> int:
        return math.prod(u - l + 1 for l, u in zip(self.lower, self.upper))


@dataclass(frozen=True)
class Explicit:
    points: Tuple[IntVector, ...]
    floored_from: Dict[IntVector, Tuple[Fraction, ...]] = field(default_factory=dict, hash=False)

    @property
    def cardinality(self) -> int:
        return len(self.points)


RhsSet = Union[Box, Explicit]


@dataclass(frozen=True)
class SolverOptions:
    engine: str = DEFAULT_ENGINE
    kbar: Optional[int] = None
    dual_cert: Optional[Tuple[Fraction, ...]] = None
    floor_rhs: bool = False


@dataclass(frozen=True)
class ParsedInstance:
    instance: Instance
    rhs: RhsSet
    options: SolverOptions


# ---------------------------------------------------------------------------
# File schema
# ---------------------------------------------------------------------------

class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class OrthantBlockSpec(_Strict):
    type: Literal["orthant"]
    dim: int


class PolyhedralBlockSpec(_Strict):
    type: Literal["polyhedral"]
    M: List[List[Any]]


class SecondOrderBlockSpec(_Strict):
    type: Literal["soc"]
    dim: int


class PsdBlockSpec(_Strict):
    type: Literal["psd"]
    d: int


BlockSpec = Annotated[
    Union[OrthantBlockSpec, PolyhedralBlockSpec, SecondOrderBlockSpec, PsdBlockSpec],
    Field(discriminator="type"),
]


class ConeFileSpec(_Strict):
    blocks: List[BlockSpec]


class BoxSpec(_Strict):
    type: Literal["box"]
    lower: List[Any]
    upper: List[Any]


class ListSpec(_Strict):
    type: Literal["list"]
    points: List[List[Any]]


RhsSpec = Annotated[Union[BoxSpec, ListSpec], Field(discriminator="type")]


class OptionsSpec(_Strict):
    engine: Literal["f", "g"] = DEFAULT_ENGINE
    kbar: Optional[int] = Field(default=None, ge=0)
    dual_cert: Optional[List[Union[int, str]]] = None
    floor_rhs: bool = False


class InstanceFile(_Strict):
    """Top-level instance document."""

    name: Optional[str] = None
    m: int = Field(ge=1)
    n: int = Field(ge=1)
    A: List[List[Any]]
    c: Optional[List[Any]] = None
    var_signs: Optional[List[Literal["nonneg", "free"]]] = None
    cone: ConeFileSpec
    rhs: RhsSpec
    options: OptionsSpec = Field(default_factory=OptionsSpec)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def _integer(value: Any, where: str) -> int:
    try:
        return as_integer(value)
    except ValueError as e:
        raise IntegralityError(f"{where}: {e}") from e


def _rational(value: Any, where: str) -> Fraction:
    try:
        return parse_rational(value)
    except ValueError as e:
        raise MalformedInstance(f"{where}: {e}") from e


def _integer_vector(values: Sequence[Any], m: int, where: str) -> IntVector:
    if len(values) != m:
        raise DimensionError(f"{where}: expected {m} entries, got {len(values)}")
    return tuple(_integer(v, f"{where}[{i}]") for i, v in enumerate(values))


def _build_block(spec: BlockSpec, index: int) -> ConeBlock:
    if isinstance(spec, OrthantBlockSpec):
        return ConeBlock.orthant(spec.dim)
    if isinstance(spec, SecondOrderBlockSpec):
        return ConeBlock.second_order(spec.dim)
    if isinstance(spec, PsdBlockSpec):
        return ConeBlock.psd(spec.d)
    rows = [tuple(_integer(v, f"cone.blocks[{index}].M[{i}][{j}]") for j, v in enumerate(row))
            for i, row in enumerate(spec.M)]
    return ConeBlock.polyhedral(rows)


def _field_path(loc: Sequence[Any]) -> str:
    return ".".join(str(part) for part in loc)


def build_rhs(spec: RhsSpec, cone: ConeSpec, floor_rhs: bool,
              cap: int = RHS_CARDINALITY_CAP) -> RhsSet:
    """Validate an RHS spec into a Box or Explicit set."""
    m = cone.total_dim
    if isinstance(spec, BoxSpec):
        box = Box(_integer_vector(spec.lower, m, "rhs.lower"),
                  _integer_vector(spec.upper, m, "rhs.upper"))
        for i, (l, u) in enumerate(zip(box.lower, box.upper)):
            if l > u:
                raise DimensionError(f"rhs box: lower[{i}]={l} exceeds upper[{i}]={u}")
        if box.cardinality > cap:
            raise RhsCapExceeded(f"rhs box has {box.cardinality} points, cap is {cap}")
        return box

    points: List[IntVector] = []
    seen = set()
    floored: Dict[IntVector, Tuple[Fraction, ...]] = {}
    for i, raw in enumerate(spec.points):
        where = f"rhs.points[{i}]"
        if len(raw) != m:
            raise DimensionError(f"{where}: expected {m} entries, got {len(raw)}")
        exact = tuple(_rational(v, f"{where}[{j}]") for j, v in enumerate(raw))
        if all(q.denominator == 1 for q in exact):
            point = tuple(q.numerator for q in exact)
        elif floor_rhs:
            point = floor_to_integral(cone, exact)
            floored.setdefault(point, exact)
        else:
            raise IntegralityError(f"{where} is not integral: {raw} (set options.floor_rhs to round)")
        if point not in seen:
            seen.add(point)
            points.append(point)
    if len(points) > cap:
        raise RhsCapExceeded(f"rhs list has {len(points)} points, cap is {cap}")
    return Explicit(tuple(points), floored)


def parse_instance(text: Union[str, bytes], rhs_cap: int = RHS_CARDINALITY_CAP) -> ParsedInstance:
    """
    Parse and validate an instance document.

    Args:
        text: UTF-8 JSON (str or bytes)
        rhs_cap: Maximum number of right-hand sides

    Returns:
        ParsedInstance: instance, rhs set and solver options

    Raises:
        MalformedInstance, IntegralityError, DimensionError, PointednessError,
        UnsupportedCone, RhsCapExceeded
    """
    try:
        raw = json.loads(text)
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise MalformedInstance(f"invalid JSON: {e}") from e
    try:
        doc = InstanceFile.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        raise MalformedInstance(f"{_field_path(first['loc'])}: {first['msg']}") from e

    if len(doc.A) != doc.m:
        raise DimensionError(f"A has {len(doc.A)} rows but m={doc.m}")
    rows = []
    for i, row in enumerate(doc.A):
        if len(row) != doc.n:
            raise DimensionError(f"A row {i} has {len(row)} entries but n={doc.n}")
        rows.append(tuple(_integer(v, f"A[{i}][{j}]") for j, v in enumerate(row)))

    blocks = tuple(_build_block(spec, i) for i, spec in enumerate(doc.cone.blocks))
    cone = ConeSpec(blocks)
    if cone.total_dim != doc.m:
        raise DimensionError(f"cone dimension {cone.total_dim} does not match m={doc.m}")

    signs = doc.var_signs if doc.var_signs is not None else ["nonneg"] * doc.n
    c = None
    if doc.c is not None:
        if len(doc.c) != doc.n:
            raise DimensionError(f"c has {len(doc.c)} entries but n={doc.n}")
        c = tuple(_rational(v, f"c[{j}]") for j, v in enumerate(doc.c))

    instance = Instance(A=tuple(rows), cone=cone,
                        var_signs=tuple(VarSign(s) for s in signs), name=doc.name, c=c)
    rhs = build_rhs(doc.rhs, cone, doc.options.floor_rhs, rhs_cap)

    dual_cert = None
    if doc.options.dual_cert is not None:
        if len(doc.options.dual_cert) != doc.m:
            raise DimensionError(f"options.dual_cert has {len(doc.options.dual_cert)} entries but m={doc.m}")
        dual_cert = tuple(_rational(v, f"options.dual_cert[{i}]")
                          for i, v in enumerate(doc.options.dual_cert))
    options = SolverOptions(engine=doc.options.engine, kbar=doc.options.kbar,
                            dual_cert=dual_cert, floor_rhs=doc.options.floor_rhs)
    logger.info("parsed instance %s: m=%d n=%d |H|=%d", instance.name or "<unnamed>",
                instance.m, instance.n, rhs.cardinality)
    return ParsedInstance(instance, rhs, options)


def split_free_variables(inst: Instance) -> Instance:
    """
    Replace every free x_j by x_j+ - x_j- (columns a^j and -a^j).

    Nonnegative variables pass through; an instance without free variables
    is returned as is.
    """
    if not inst.has_free:
        return inst
    columns = inst.columns
    new_columns: List[IntVector] = []
    origin: List[Tuple[int, int]] = []
    for j, (col, sign) in enumerate(zip(columns, inst.var_signs)):
        new_columns.append(col)
        origin.append(inst.column_origin[j])
        if sign is VarSign.FREE:
            new_columns.append(tuple(-a for a in col))
            orig_j, orig_sign = inst.column_origin[j]
            origin.append((orig_j, -orig_sign))
    logger.debug("split %d free variables", len(new_columns) - len(columns))
    return replace(inst, A=tuple(zip(*new_columns)),
                   var_signs=(VarSign.NONNEG,) * len(new_columns),
                   column_origin=tuple(origin))


def enumerate_rhs(rhs: RhsSet, cap: int = RHS_CARDINALITY_CAP) -> List[IntVector]:
    """
    Right-hand sides in a deterministic order.

    Box sets come out in lexicographic order; explicit lists keep input order
    with duplicates dropped.
    """
    if rhs.cardinality > cap:
        raise RhsCapExceeded(f"rhs set has {rhs.cardinality} points, cap is {cap}")
    if isinstance(rhs, Box):
        return list(_box_points(rhs))
    seen = set()
    out = []
    for p in rhs.points:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def _box_points(box: Box) -> Iterator[IntVector]:
    return itertools.product(*(range(l, u + 1) for l, u in zip(box.lower, box.upper)))
