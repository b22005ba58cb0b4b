import math

from src.error import DomainError

LANCZOS_G = 7
LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

SQRT_TWO_PI = math.sqrt(2.0 * math.pi)

# Largest n with (n - 1)! below the double range.
MAX_FACTORIAL_ARGUMENT = 171
# Gamma overflows a double above this argument.
MAX_ARGUMENT = 171.62


def gamma_fn(x: float) -> float:
    """
    Euler gamma function for x > 0.

    Integer arguments return exact factorials; elsewhere the Lanczos series (g = 7, nine
    coefficients) is used, with reflection below 1/2.

    :param x: (float) positive argument
    :return: (float) Gamma(x)
    """
    if not (math.isfinite(x) and x > 0):
        raise DomainError('Gamma function needs a finite positive argument, got {}'.format(x))
    if x > MAX_ARGUMENT:
        raise DomainError('Gamma({}) overflows a double'.format(x))

    if x == int(x) and x <= MAX_FACTORIAL_ARGUMENT:
        return float(math.factorial(int(x) - 1))

    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma_fn(1.0 - x))

    z = x - 1.0
    series = LANCZOS_COEFFICIENTS[0]
    for index, coefficient in enumerate(LANCZOS_COEFFICIENTS[1:], start=1):
        series += coefficient / (z + index)
    t = z + LANCZOS_G + 0.5
    # t^(z + 1/2) alone overflows before Gamma does
    half_power = t ** ((z + 0.5) / 2.0)
    return SQRT_TWO_PI * half_power * (half_power * math.exp(-t)) * series
