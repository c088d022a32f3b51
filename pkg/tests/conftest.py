"""Shared test oracles.

The Rodrigues-formula Hermite oracle evaluates the physicists' polynomials
through exact integer coefficient recurrences (H_{k+1} = 2x H_k - 2k H_{k-1})
at rational arguments, so it is independent of the package's recurrence
evaluation and accurate to the final rounding.
"""

from fractions import Fraction
import math

import pytest


def physicists_hermite_coeffs(n: int) -> list[int]:
    """Integer coefficients of H_n, lowest degree first."""
    coeffs = [[1], [0, 2]]
    while len(coeffs) <= n:
        k = len(coeffs) - 1
        prev, cur = coeffs[-2], coeffs[-1]
        nxt = [0] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= 2 * k * c
        coeffs.append(nxt)
    return coeffs[n]


def rodrigues_hermite(n: int, x: float) -> float:
    """Normalised h*_n(x) evaluated through exact rational arithmetic."""
    if n < 0:
        return 0.0
    xf = Fraction(x)
    acc = Fraction(0)
    for c in reversed(physicists_hermite_coeffs(n)):
        acc = acc * xf + c
    norm = math.sqrt(math.sqrt(math.pi) * math.factorial(n) * 2 ** n)
    return float(acc) / norm


@pytest.fixture(scope="session")
def hermite_oracle():
    return rodrigues_hermite
