"""Unbounded liquid bridges by Chebyshev collocation.

Computes the height T(sigma) of the vertical point of a radially symmetric
unbounded liquid bridge, its derivative, and the sigma-variation of the top
portion of the profile.
"""

__version__ = "0.1.0"

from .config import AsymptoticConfig, SolverConfig  # noqa: E402
from .bridge_profile import ProfileSolution, solve_T, sweep_T, top_portion  # noqa: E402
from .tables import TSample, TTable  # noqa: E402
from .tprime import differentiate_T  # noqa: E402
from .variation import integrate_variation, sweep_variation  # noqa: E402

__all__ = ["AsymptoticConfig", "SolverConfig", "ProfileSolution", "solve_T", "sweep_T",
           "top_portion", "TSample", "TTable", "differentiate_T", "integrate_variation",
           "sweep_variation"]
