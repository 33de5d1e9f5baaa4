"""Greedy total dominating sets on random regular graphs and the ODE bounds they yield."""

from .graph import Pseudograph, TdsVerdict, brute_force_gamma_t, from_pairing, girth, verify_tds
from .heuristics import HeuristicConfig, RunTrace, run_algorithm_1c, run_algorithm_1l, run_baseline
from .ode import SolveResult, drift_expanded, drift_raw, integrate
from .pairing import PairingState

__all__ = [
    "HeuristicConfig",
    "PairingState",
    "Pseudograph",
    "RunTrace",
    "SolveResult",
    "TdsVerdict",
    "brute_force_gamma_t",
    "drift_expanded",
    "drift_raw",
    "from_pairing",
    "girth",
    "integrate",
    "run_algorithm_1c",
    "run_algorithm_1l",
    "run_baseline",
    "verify_tds",
]
