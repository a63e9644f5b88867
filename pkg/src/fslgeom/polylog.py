"""Complex dilogarithm and the Bloch-Wigner function.

li2 is the principal-branch dilogarithm

    Li2(z) = -integral_0^z log(1-u)/u du,

with branch cut along (1, oo); real arguments above 1 take the limit from the
upper half-plane. bloch_wigner is

    D(z) = Im Li2(z) + Arg(1-z) log|z|,

the volume of the ideal hyperbolic tetrahedron with cross-ratio z. D is
real-analytic on C minus {0, 1}, vanishes on the real line, and is invariant
under the shape relabelings z -> 1/(1-z) -> 1-1/z.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

from .errors import DegenerateShape

_PI2_6 = math.pi * math.pi / 6.0
_SHAPE_TOL = 1e-14


def _even_bernoulli(n_max: int) -> list[float]:
    """B_0, B_2, B_4, ..., B_{n_max} by the defining recurrence, exactly."""
    full = [Fraction(1)]
    for n in range(1, n_max + 1):
        acc = Fraction(0)
        for k in range(n):
            acc += math.comb(n + 1, k) * full[k]
        full.append(-acc / (n + 1))
    return [float(full[i]) for i in range(0, n_max + 1, 2)]


_B_EVEN = _even_bernoulli(70)


def _li2_taylor(z: complex) -> complex:
    # sum z^n / n^2; used for |z| <= 0.5 where ~50 terms reach 1e-17
    total = 0j
    power = complex(1.0, 0.0)
    for n in range(1, 200):
        power *= z
        term = power / (n * n)
        total += term
        if abs(term) <= 1e-17 * (1.0 + abs(total)):
            return total
    raise RuntimeError("dilogarithm series did not converge")


def _li2_log_series(z: complex) -> complex:
    # expansion in u = -log(1-z): Li2 = u - u^2/4 + sum B_{2k} u^{2k+1}/(2k+1)!
    # converges for |u| < 2 pi; the caller only routes here with |u| < 3.4
    u = -cmath.log(1.0 - z)
    u2 = u * u
    total = u - 0.25 * u2
    # odd powers only; factorial carried incrementally
    upow = u * u2
    fact = 6.0
    for k in range(1, len(_B_EVEN)):
        term = _B_EVEN[k] * upow / fact
        total += term
        if abs(term) <= 1e-17 * (1.0 + abs(total)):
            return total
        upow *= u2
        fact *= (2 * k + 2) * (2 * k + 3)
    raise RuntimeError("dilogarithm log-series did not converge")


def li2(z: complex) -> complex:
    """Principal-branch dilogarithm, relative error <= 1e-13.

    Evaluated by Taylor series inside |z| <= 0.5 and mapped there by the
    inversion and reflection identities; the annulus around the unit circle
    where neither map lands in the disk uses the series in -log(1-z).
    """
    z = complex(z)
    if z.imag == 0.0:
        # force +0.0 so the (1, oo) cut consistently takes the upper limit
        z = complex(z.real, 0.0)
    if z == 0:
        return 0j
    if z == 1:
        return complex(_PI2_6, 0.0)
    a = abs(z)
    if a <= 0.5:
        return _li2_taylor(z)
    if a >= 2.0:
        # Li2(z) + Li2(1/z) = -pi^2/6 - log^2(-z)/2
        lg = cmath.log(-z)
        return -_PI2_6 - 0.5 * lg * lg - li2(1.0 / z)
    if z.imag == 0.0 and z.real > 1.0:
        # 1 < x < 2 on the cut: invert first; -z carries imag -0.0, so
        # log(-z) = ln x - i pi and the result is the upper-half-plane limit
        lg = cmath.log(-z)
        return -_PI2_6 - 0.5 * lg * lg - li2(1.0 / z)
    if abs(1.0 - z) <= 0.5:
        # Li2(z) + Li2(1-z) = pi^2/6 - log(z) log(1-z)
        return _PI2_6 - cmath.log(z) * cmath.log(1.0 - z) - li2(1.0 - z)
    return _li2_log_series(z)


def bloch_wigner(z: complex) -> float:
    """Bloch-Wigner function D(z); the ideal tetrahedron volume for Im z > 0.

    Raises DegenerateShape when z is within 1e-14 of 0 or 1.
    """
    z = complex(z)
    if abs(z) <= _SHAPE_TOL or abs(z - 1.0) <= _SHAPE_TOL:
        raise DegenerateShape(f"shape {z} is degenerate for the Bloch-Wigner function")
    if z.imag == 0.0:
        # flat tetrahedron: the two terms cancel in the limit from either side
        return 0.0
    return li2(z).imag + cmath.phase(1.0 - z) * math.log(abs(z))
