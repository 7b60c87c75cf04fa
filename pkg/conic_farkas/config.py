"""
Configuration constants for the conic_farkas project.
"""


# Right-hand-side set limits
# |H| for a box is prod(upper_i - lower_i + 1); explicit lists count after dedup
RHS_CARDINALITY_CAP = 10**6

# Brute-force oracle limits
# Cardinality oracle enumerates C(k+n, n) points, doubling oracle (2^k+1)^n
ORACLE_ENUMERATION_BUDGET = 10**7

# Doubling engine memo limit (entries keyed by (k, beta))
G_MEMO_CAP = 10**7

# Engine Settings
DEFAULT_ENGINE = "f"  # "f" = cardinality pools, "g" = doubling sequence
ENGINES = ("f", "g")
DEFAULT_THREADS = 1  # 1 keeps runs reproducible and single-threaded

# CLI exit codes
EXIT_OK = 0
EXIT_INTERNAL = 1  # inconsistent engine state
EXIT_INVALID = 2  # parse / validation / unsupported cone
EXIT_NO_BOUND = 3  # no certified kbar and no --kbar given
EXIT_BUDGET = 4  # enumeration, memo or rhs cap exceeded
EXIT_VERIFY_FAILED = 5

# Result labels
BOUND_CERTIFIED = "certified"
BOUND_HEURISTIC = "heuristic — convergence not certified"

# JSON output
JSON_INDENT = 2
