"""Independent reference values, computed without borel_lab."""

import math

EULER_GAMMA = 0.57721566490153286061


def e1(x, terms=60):
    """E1(x) = -gamma - log x - sum (-x)^k / (k k!)."""
    s = 0.0
    for k in range(1, terms):
        s += (-x) ** k / (k * math.factorial(k))
    return -EULER_GAMMA - math.log(x) - s


def e2(x):
    """E2(x) = e^{-x} - x E1(x)."""
    return math.exp(-x) - x * e1(x)


def stirling2(n, k):
    """Stirling numbers of the second kind, exact."""
    return sum((-1) ** (k - j) * math.comb(k, j) * j**n for j in range(k + 1)) // math.factorial(k)


def complementary_bell(n):
    """sum_k (-1)^k S(n, k), exact integer."""
    return sum((-1) ** k * stirling2(n, k) for k in range(n + 1))


def geometric(z):
    return 1 / (1 - z)
