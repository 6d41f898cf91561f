"""Bell-inequality values and their monogamy as a test for symmetric extensions."""

__version__ = "0.1.0"

from .linalg import DensityMatrix, NumericalError, StateVector  # noqa: E402
from .chsh import chen_criterion, chsh_direct, chsh_value, nonextendibility_verdict_qubit  # noqa: E402
from .cglmp import AngleSet, cglmp_max, i3_value  # noqa: E402
from .dicke import DickeState, rdm_from_dicke, theorem1_check  # noqa: E402
from .monogamy import gamma_state, gamma_sweep, monogamy_scan, nonextendibility_verdict_qutrit  # noqa: E402

__all__ = [
    "AngleSet",
    "DensityMatrix",
    "DickeState",
    "NumericalError",
    "StateVector",
    "cglmp_max",
    "chen_criterion",
    "chsh_direct",
    "chsh_value",
    "gamma_state",
    "gamma_sweep",
    "i3_value",
    "monogamy_scan",
    "nonextendibility_verdict_qubit",
    "nonextendibility_verdict_qutrit",
    "rdm_from_dicke",
    "theorem1_check",
]
