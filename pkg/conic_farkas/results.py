"""
Result and verification documents written by the command-line tool.
"""

import json
from fractions import Fraction
from typing import Dict, List, Literal, Optional, Sequence, Union

from pydantic import BaseModel

from .config import JSON_INDENT
from .doubling import GTable
from .engine import FEASIBLE, EngineState, Feasible, certificate_check, step
from .errors import InconsistentState
from .model import Instance
from .oracle import oracle_F
from .rational import IntVector, format_rational

Rational = Union[int, str]  # int, or "p/q"


class BetaRecord(BaseModel):
    beta: List[int]
    verdict: Literal["feasible", "infeasible"]
    first_feasible_k: Optional[int] = None
    witness: Optional[List[int]] = None  # original variables
    floored_from: Optional[List[Rational]] = None


class RunResult(BaseModel):
    name: Optional[str] = None
    engine: Literal["f", "g", "oracle"]
    kbar: int
    kbar_certified: bool
    bound: str
    dual_cert: Optional[List[Rational]] = None
    alternative: Literal["nonneg", "free"]
    records: List[BetaRecord]
    pool: Optional[List[List[int]]] = None  # F engine only
    trace: List[str] = []
    wall_time_ms: int = 0


class Violation(BaseModel):
    check: str
    beta: Optional[List[int]] = None
    detail: str


class VerifyReport(BaseModel):
    passed: bool
    checks: Dict[str, bool]
    violations: List[Violation] = []


def to_json(doc: BaseModel) -> str:
    """Stable serialization: sorted keys, fixed indent, trailing newline."""
    return json.dumps(doc.model_dump(mode="json"), sort_keys=True, indent=JSON_INDENT) + "\n"


def _floored(beta: IntVector, floored_from: Dict[IntVector, Sequence[Fraction]]) -> Optional[List[Rational]]:
    original = floored_from.get(beta)
    return [format_rational(q) for q in original] if original is not None else None


def _verdict(value: int) -> str:
    return "feasible" if value == FEASIBLE else "infeasible"


def records_from_engine(inst: Instance, state: EngineState, certified: bool,
                        floored_from: Dict[IntVector, Sequence[Fraction]]) -> List[BetaRecord]:
    """
    One record per beta in H from the F engine.

    With a certified kbar every record is backed by certificate_check; the
    branch it returns must agree with the table. Otherwise feasible records
    carry the pool witness of their first dominating element.
    """
    checked = state
    if certified and state.k == 0:
        checked = step(state)
    records = []
    for beta in state.rhs:
        verdict = state.table.verdict(beta)
        witness = None
        if certified:
            branch = certificate_check(inst, checked, beta, reextract=False)
            if isinstance(branch, Feasible) != (verdict == FEASIBLE):
                raise InconsistentState(f"beta={beta}: table says {_verdict(verdict)}, "
                                        f"certificate says {type(branch).__name__}")
            if isinstance(branch, Feasible):
                witness = branch.witness
        elif verdict == FEASIBLE:
            witness = state.pool.witnesses[state.pool.dominating(beta, inst.cone)]
        records.append(BetaRecord(
            beta=list(beta), verdict=_verdict(verdict),
            first_feasible_k=state.table.first_feasible_k.get(beta),
            witness=list(inst.to_original(witness)) if witness is not None else None,
            floored_from=_floored(beta, floored_from)))
    return records


def records_from_doubling(table: GTable,
                          floored_from: Dict[IntVector, Sequence[Fraction]]) -> List[BetaRecord]:
    return [BetaRecord(beta=list(beta), verdict=_verdict(table.verdicts[beta]),
                       first_feasible_k=table.first_feasible_k[beta],
                       floored_from=_floored(beta, floored_from))
            for beta in table.rhs]


def records_from_oracle(inst: Instance, rhs: Sequence[IntVector], k: int, budget: int,
                        floored_from: Dict[IntVector, Sequence[Fraction]]) -> List[BetaRecord]:
    records = []
    for beta in rhs:
        verdict, witness = oracle_F(inst, beta, k, budget)
        records.append(BetaRecord(
            beta=list(beta), verdict=_verdict(verdict),
            witness=list(inst.to_original(witness.x)) if witness is not None else None,
            floored_from=_floored(beta, floored_from)))
    return records


def format_certificate(u: Optional[Sequence[Fraction]]) -> Optional[List[Rational]]:
    return [format_rational(q) for q in u] if u is not None else None
