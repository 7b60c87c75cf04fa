"""
Conic Farkas - feasibility verdicts and infeasibility certificates for conic
integer programs over a bounded set of integral right-hand sides.
"""

__version__ = "0.1.0"
