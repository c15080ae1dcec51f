"""Built-in instances."""
from .prob_core import PriorInstance, validate_prior

EXAMPLE_P_S_GIVEN_T = [[1 / 2, 1 / 5], [1 / 2, 4 / 5]]
EXAMPLE_P_T_GIVEN_X = [[1 / 4, 2 / 5], [3 / 4, 3 / 5]]
EXAMPLE_P_X = [1 / 4, 3 / 4]
EXAMPLE_EPSILONS = [round(0.005 * k, 3) for k in range(1, 11)]
EXAMPLE_RATE = 0.2


def example_prior() -> PriorInstance:
    """The binary worked example (|S| = |T| = |X| = 2)."""
    return validate_prior(EXAMPLE_P_S_GIVEN_T, EXAMPLE_P_T_GIVEN_X, EXAMPLE_P_X)
