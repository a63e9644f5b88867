"""Dilogarithm and Bloch-Wigner tests against the mpmath oracle."""

import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fslgeom.errors import DegenerateShape
from fslgeom.polylog import bloch_wigner, li2

mpmath.mp.dps = 30

CATALAN = 0.9159655941772190150546035149324


def mp_li2(z):
    return complex(mpmath.polylog(2, mpmath.mpc(z)))


def mp_bw(z):
    z = complex(z)
    v = mp_li2(z)
    return v.imag + cmath.phase(1.0 - z) * math.log(abs(z))


def test_special_values():
    assert li2(1.0) == pytest.approx(math.pi**2 / 6.0, abs=1e-15)
    assert li2(-1.0) == pytest.approx(-(math.pi**2) / 12.0, abs=1e-15)
    assert li2(0.5) == pytest.approx(
        math.pi**2 / 12.0 - math.log(2.0) ** 2 / 2.0, abs=1e-15
    )
    assert li2(0.0) == 0.0


def test_matches_mpmath_off_the_cut():
    # one draw per routing region: small disk, inversion region, reflection
    # disk, and the log-series annulus
    rng = np.random.default_rng(11)
    points = []
    for _ in range(40):
        points.append(0.45 * np.exp(2j * np.pi * rng.uniform()) * rng.uniform())
        points.append((2.2 + 3.0 * rng.uniform()) * np.exp(2j * np.pi * rng.uniform()))
        points.append(1.0 + 0.45 * np.exp(2j * np.pi * rng.uniform()) * rng.uniform())
        w = (0.6 + 0.9 * rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        if abs(w - 1.0) > 0.05:
            points.append(w)
    for z in points:
        z = complex(z)
        if abs(z.imag) < 1e-3 and z.real > 1.0:
            continue
        assert li2(z) == pytest.approx(mp_li2(z), rel=1e-13, abs=1e-13), z


def test_cut_continues_from_above():
    # on (1, inf) the value is the limit from the upper half plane, the
    # conjugate of mpmath's lower-limit convention
    for x in (1.5, 2.0, 3.7, 12.0):
        mine = li2(float(x))
        assert mine == pytest.approx(mp_li2(x).conjugate(), rel=1e-13)
        assert mine.imag > 0.0


def test_li2_two_at_quarter_pi_squared():
    v = li2(2.0)
    assert v.real == pytest.approx(math.pi**2 / 4.0, abs=1e-14)
    assert v.imag == pytest.approx(math.pi * math.log(2.0), abs=1e-14)


def test_signed_zero_is_normalized():
    for x in (3.0, 1.5, -2.0):
        assert li2(complex(x, -0.0)) == li2(complex(x, 0.0))


def test_bloch_wigner_at_i_is_catalan():
    assert bloch_wigner(1j) == pytest.approx(CATALAN, abs=1e-15)


def test_bloch_wigner_vanishes_on_reals():
    for x in (-3.0, -0.5, 0.25, 0.75, 2.0, 17.0):
        assert bloch_wigner(x) == 0.0


def test_bloch_wigner_degenerate_inputs():
    for z in (0.0, 1.0, 1e-16, 1.0 + 1e-16, complex(1.0, 1e-16)):
        with pytest.raises(DegenerateShape):
            bloch_wigner(z)


complex_pts = st.builds(
    complex,
    st.floats(min_value=-4.0, max_value=4.0),
    st.floats(min_value=-4.0, max_value=4.0),
).filter(lambda z: abs(z) > 1e-2 and abs(z - 1.0) > 1e-2)


@settings(max_examples=80, deadline=None)
@given(complex_pts)
def test_bloch_wigner_antisymmetry(z):
    assert bloch_wigner(z.conjugate()) == pytest.approx(-bloch_wigner(z), abs=1e-12)


@settings(max_examples=80, deadline=None)
@given(complex_pts)
def test_bloch_wigner_threefold_symmetry(z):
    d = bloch_wigner(z)
    assert bloch_wigner(1.0 - 1.0 / z) == pytest.approx(d, abs=1e-11)
    assert bloch_wigner(1.0 / (1.0 - z)) == pytest.approx(d, abs=1e-11)


@settings(max_examples=80, deadline=None)
@given(complex_pts.filter(lambda z: abs(z.imag) > 1e-2))
def test_li2_reflection(z):
    lhs = li2(z) + li2(1.0 - z)
    rhs = math.pi**2 / 6.0 - cmath.log(z) * cmath.log(1.0 - z)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


@settings(max_examples=80, deadline=None)
@given(complex_pts.filter(lambda z: abs(z.imag) > 1e-2))
def test_li2_inversion(z):
    lhs = li2(1.0 / z) + li2(z)
    rhs = -(math.pi**2) / 6.0 - cmath.log(-z) ** 2 / 2.0
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)
