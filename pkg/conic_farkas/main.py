"""
Main application entry point for Conic Farkas.

    conic-farkas solve INSTANCE [--engine f|g] [--kbar N] [--out FILE] [--trace]
    conic-farkas oracle INSTANCE --k N
    conic-farkas verify INSTANCE RESULT

stdout carries the JSON document; progress and diagnostics go to stderr.
"""

import argparse
import logging
import sys
import time
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from pydantic import ValidationError

from .bound import DualCertificate, DualLPStatus, compute_kbar, solve_dual_lp, verify_certificate
from .config import (
    BOUND_CERTIFIED, BOUND_HEURISTIC, DEFAULT_THREADS, ENGINES, EXIT_BUDGET, EXIT_INTERNAL,
    EXIT_INVALID, EXIT_NO_BOUND, EXIT_OK, EXIT_VERIFY_FAILED,
    ORACLE_ENUMERATION_BUDGET, RHS_CARDINALITY_CAP
)
from .cone import leq
from .doubling import g_run, kmax_for
from .engine import run, step
from .errors import (
    BoundUnavailable, BudgetExceeded, ConicFarkasError, InconsistentState, InstanceError,
    MalformedInstance, UnsupportedCone
)
from .model import Explicit, Instance, ParsedInstance, enumerate_rhs, parse_instance, split_free_variables
from .oracle import oracle_represent
from .rational import IntVector
from .results import (
    RunResult, VerifyReport, Violation, format_certificate, records_from_doubling,
    records_from_engine, records_from_oracle, to_json
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundDecision:
    kbar: int
    certified: bool
    certificate: Optional[DualCertificate]


def load_instance(path: str, rhs_cap: int = RHS_CARDINALITY_CAP) -> ParsedInstance:
    try:
        with open(path, "rb") as f:
            text = f.read()
    except OSError as e:
        raise MalformedInstance(f"cannot read {path}: {e}") from e
    return parse_instance(text, rhs_cap)


def certified_bound(parsed: ParsedInstance, split: Instance,
                    rhs: Sequence[IntVector]) -> Tuple[Optional[int], Optional[DualCertificate]]:
    """
    kbar from the user's dual certificate if it verifies, else from the dual LP.

    Returns:
        tuple: (kbar or None, certificate or None)
    """
    certificate = None
    if parsed.options.dual_cert is not None:
        if verify_certificate(split, parsed.options.dual_cert):
            certificate = DualCertificate.of(parsed.options.dual_cert)
        else:
            logger.warning("options.dual_cert does not verify (needs u in K* and A^T u >= 1)")
    else:
        outcome = solve_dual_lp(split)
        if outcome.status is DualLPStatus.CERTIFIED:
            certificate = outcome.certificate
        else:
            logger.info("no dual certificate: %s", outcome.status.value)
    if certificate is None:
        return None, None
    return compute_kbar(certificate, rhs), certificate


def resolve_bound(parsed: ParsedInstance, split: Instance, rhs: Sequence[IntVector],
                  cli_kbar: Optional[int]) -> BoundDecision:
    """
    Pick kbar: --kbar, then options.kbar, then the certified value.

    Raises:
        BoundUnavailable: nothing to go on
    """
    certified_kbar, certificate = certified_bound(parsed, split, rhs)
    kbar = next((k for k in (cli_kbar, parsed.options.kbar, certified_kbar) if k is not None), None)
    if kbar is None:
        raise BoundUnavailable("no certified stopping bound for this instance; pass --kbar "
                               "or set options.kbar / options.dual_cert")
    certified = certified_kbar is not None and kbar >= certified_kbar
    if not certified:
        logger.warning("kbar=%d is not certified; verdicts may not have converged", kbar)
    return BoundDecision(kbar, certified, certificate)


def _floored_from(parsed: ParsedInstance) -> dict:
    return parsed.rhs.floored_from if isinstance(parsed.rhs, Explicit) else {}


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    start = time.perf_counter()
    parsed = load_instance(args.instance, args.rhs_cap)
    split = split_free_variables(parsed.instance)
    rhs = enumerate_rhs(parsed.rhs, args.rhs_cap)
    engine = args.engine or parsed.options.engine
    decision = resolve_bound(parsed, split, rhs, args.kbar)
    floored = _floored_from(parsed)

    if engine == "f":
        state = run(split, rhs, decision.kbar, args.threads)
        if decision.certified and state.k == 0:
            # certified kbar = 0 forces x = 0, so F^1 = F^0 on H; B^1 also dominates every column
            state = step(state, args.threads)
        records = records_from_engine(split, state, decision.certified, floored)
        pool = [list(b) for b in state.pool.elements]
        trace = [r.line for r in state.trace]
    else:
        table = g_run(split, rhs, kmax_for(decision.kbar), args.threads, memo_cap=args.budget)
        records = records_from_doubling(table, floored)
        pool = None
        trace = [r.line for r in table.trace]

    result = RunResult(
        name=parsed.instance.name, engine=engine, kbar=decision.kbar,
        kbar_certified=decision.certified,
        bound=BOUND_CERTIFIED if decision.certified else BOUND_HEURISTIC,
        dual_cert=format_certificate(decision.certificate.u if decision.certificate else None),
        alternative="free" if split.was_split else "nonneg",
        records=records, pool=pool, trace=trace,
        wall_time_ms=int((time.perf_counter() - start) * 1000))
    logger.info("%d of %d right-hand sides feasible",
                sum(1 for r in records if r.verdict == "feasible"), len(records))
    _emit(to_json(result), args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    start = time.perf_counter()
    parsed = load_instance(args.instance, args.rhs_cap)
    split = split_free_variables(parsed.instance)
    rhs = enumerate_rhs(parsed.rhs, args.rhs_cap)
    certified_kbar, certificate = certified_bound(parsed, split, rhs)
    certified = certified_kbar is not None and args.k >= certified_kbar
    records = records_from_oracle(split, rhs, args.k, args.budget, _floored_from(parsed))
    result = RunResult(
        name=parsed.instance.name, engine="oracle", kbar=args.k, kbar_certified=certified,
        bound=BOUND_CERTIFIED if certified else BOUND_HEURISTIC,
        dual_cert=format_certificate(certificate.u if certificate else None),
        alternative="free" if split.was_split else "nonneg",
        records=records, pool=None, trace=[],
        wall_time_ms=int((time.perf_counter() - start) * 1000))
    _emit(to_json(result), args.out)
    return EXIT_OK


def verify_result(inst: Instance, result: RunResult, budget: int = ORACLE_ENUMERATION_BUDGET) -> VerifyReport:
    """
    Re-validate a solve result against the (split) instance.

    Pool elements are checked with the oracle; verdicts and columns only
    against the pool, so a corrupted pool or verdict is reported rather than
    recomputed.
    """
    if result.pool is None:
        raise MalformedInstance(f"result from engine '{result.engine}' has no pool to verify")
    cone = inst.cone
    pool = [tuple(b) for b in result.pool]
    violations: List[Violation] = []

    def dominated(beta) -> bool:
        return any(leq(cone, bbar, beta) for bbar in pool)

    for b1 in pool:
        for b2 in pool:
            if b1 != b2 and leq(cone, b1, b2):
                violations.append(Violation(check="antichain", beta=list(b2),
                                            detail=f"pool element {list(b1)} <=_K {list(b2)}"))
    # a certified kbar = 0 is written with B^1
    level = max(result.kbar, 1)
    for bbar in pool:
        if oracle_represent(inst, bbar, level, budget) is None:
            violations.append(Violation(check="pool_witnesses", beta=list(bbar),
                                        detail=f"no x >= 0 with Ax = beta and 1^T x <= {level}"))
    for record in result.records:
        beta = tuple(record.beta)
        if record.verdict == "infeasible" and dominated(beta):
            violations.append(Violation(check="infeasible_undominated", beta=record.beta,
                                        detail="a pool element is <=_K beta"))
        if record.verdict == "feasible" and not dominated(beta):
            violations.append(Violation(check="feasible_dominated", beta=record.beta,
                                        detail="no pool element is <=_K beta"))
    for j, col in enumerate(inst.columns):
        if not dominated(col):
            violations.append(Violation(check="columns_dominated", beta=list(col),
                                        detail=f"F(a^{j + 1}) = -1 from the pool"))

    names = ("antichain", "pool_witnesses", "infeasible_undominated", "feasible_dominated",
             "columns_dominated")
    failed = {v.check for v in violations}
    return VerifyReport(passed=not violations, checks={name: name not in failed for name in names},
                        violations=violations)


def cmd_verify(args) -> int:
    parsed = load_instance(args.instance, args.rhs_cap)
    split = split_free_variables(parsed.instance)
    try:
        with open(args.result, "rb") as f:
            result = RunResult.model_validate_json(f.read())
    except OSError as e:
        raise MalformedInstance(f"cannot read {args.result}: {e}") from e
    except ValidationError as e:
        first = e.errors()[0]
        raise MalformedInstance(f"result {'.'.join(str(p) for p in first['loc'])}: {first['msg']}") from e
    report = verify_result(split, result, args.budget)
    for violation in report.violations:
        logger.error("%s failed at %s: %s", violation.check, violation.beta, violation.detail)
    _emit(to_json(report), args.out)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected an integer >= 0, got {text}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conic-farkas",
        description="Conic Farkas - feasibility and infeasibility certificates for conic integer programs")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="Write the JSON document here (default: stdout)")
    common.add_argument("--trace", action="store_true", help="Log per-iteration statistics to stderr")
    common.add_argument("--budget", type=_positive, default=ORACLE_ENUMERATION_BUDGET,
                        help=f"Oracle enumeration / doubling memo cap (default: {ORACLE_ENUMERATION_BUDGET:.0e})")
    common.add_argument("--rhs-cap", type=_positive, default=RHS_CARDINALITY_CAP,
                        help=f"Maximum number of right-hand sides (default: {RHS_CARDINALITY_CAP:.0e})")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", parents=[common], help="Run the F or G engine")
    solve.add_argument("instance", help="Instance JSON file")
    solve.add_argument("--engine", choices=ENGINES, default=None,
                       help="f = cardinality pools, g = doubling (default: options.engine)")
    solve.add_argument("--kbar", type=_non_negative, default=None,
                       help="Iterations to run; overrides options.kbar and the certified bound")
    solve.add_argument("--threads", type=_positive, default=DEFAULT_THREADS,
                       help=f"Worker threads per engine phase (default: {DEFAULT_THREADS})")
    solve.set_defaults(handler=cmd_solve)

    oracle = sub.add_parser("oracle", parents=[common], help="Brute-force verdicts with 1^T x <= k")
    oracle.add_argument("instance", help="Instance JSON file")
    oracle.add_argument("--k", type=_non_negative, required=True, help="Cardinality bound")
    oracle.set_defaults(handler=cmd_oracle)

    verify = sub.add_parser("verify", parents=[common], help="Re-validate a solve result")
    verify.add_argument("instance", help="Instance JSON file")
    verify.add_argument("result", help="RunResult JSON written by solve")
    verify.set_defaults(handler=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.trace else logging.WARNING,
                        format="%(message)s", stream=sys.stderr)
    try:
        return args.handler(args)
    except (InstanceError, UnsupportedCone) as e:
        logger.error("Error: %s", e)
        return EXIT_INVALID
    except BoundUnavailable as e:
        logger.error("Error: %s", e)
        return EXIT_NO_BOUND
    except BudgetExceeded as e:
        logger.error("Error: %s", e)
        return EXIT_BUDGET
    except InconsistentState as e:
        logger.error("Internal error: %s", e)
        return EXIT_INTERNAL
    except ConicFarkasError as e:
        logger.error("Error: %s", e)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
