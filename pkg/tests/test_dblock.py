"""Block gluing system: explicit solution, Gram data, determinant identity."""

import cmath

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import UNITS, imaginary_holonomies, random_holonomies
from fslgeom import dblock, nz
from fslgeom.errors import DegenerateShape

mpmath.mp.dps = 30


def test_matrix_shapes_and_flattening_totals():
    for mat in (dblock.BLOCK_G, dblock.BLOCK_GP, dblock.BLOCK_GPP):
        assert mat.shape == (8, 8)
        assert mat.dtype == np.int64
    # doubled flattenings: column totals 2, edge rows 4, curve rows 0,
    # all in exact integer arithmetic
    for flat2 in (dblock.FLAT_SYM2, dblock.FLAT_ASYM2):
        assert [int(v) for v in flat2.sum(axis=0)] == [2] * 8
        rows = (
            dblock.BLOCK_G @ flat2[0]
            + dblock.BLOCK_GP @ flat2[1]
            + dblock.BLOCK_GPP @ flat2[2]
        )
        assert [int(v) for v in rows[:2]] == [4, 4]
        assert [int(v) for v in rows[2:]] == [0] * 6


def test_gram_matrix_structure():
    rng = np.random.default_rng(1)
    h = random_holonomies(rng)
    g = dblock.gram_matrix(h)
    assert g.shape == (4, 4)
    assert np.allclose(g, g.T)
    assert np.allclose(np.diag(g), 1.0)
    off = sorted(g[i, j] for i in range(4) for j in range(i + 1, 4))
    want = sorted(-np.cosh(h / 2.0))
    assert np.allclose(off, want, atol=1e-14)


def test_gram_det_anchor():
    assert dblock.gram_det(np.zeros(6)) == pytest.approx(-16.0, abs=1e-12)


def test_quadratic_coeffs_at_zero():
    a, b, c = dblock.quadratic_coeffs(np.zeros(6))
    assert a == pytest.approx(-8.0, abs=1e-12)
    assert b == pytest.approx(0.0, abs=1e-12)
    assert c == pytest.approx(-8.0, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(min_value=-0.4, max_value=0.4), min_size=12, max_size=12))
def test_discriminant_is_sixteen_gram_det(vals):
    h = np.array(vals[:6]) + 1j * np.array(vals[6:])
    a, b, c = dblock.quadratic_coeffs(h)
    lhs = b * b - 4.0 * a * c
    rhs = 16.0 * dblock.gram_det(h)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


def test_explicit_solution_residual_and_root():
    rng = np.random.default_rng(2)
    for _ in range(30):
        h = random_holonomies(rng)
        sol = dblock.solve_block_explicit(h)
        res = np.linalg.norm(dblock.block_system(h, sol.shapes))
        assert res < 1e-12
        a, b, c = dblock.quadratic_coeffs(h)
        assert abs(a * sol.zstar**2 + b * sol.zstar + c) < 1e-10
        assert dblock.zstar_from_shapes(sol.shapes, h) == pytest.approx(
            sol.zstar, rel=1e-9
        )


def test_complete_structure_is_all_i():
    sol = dblock.solve_block_explicit(np.zeros(6))
    assert np.allclose(sol.shapes, np.full(8, 1j), atol=1e-12)


def test_branch_arbitration_on_the_cut():
    # real holonomies put the discriminant on the negative real axis, where
    # the principal square root is unstable; the solver must land on the
    # geometric sheet regardless of the sign of the vanishing imaginary part
    rng = np.random.default_rng(3)
    for _ in range(10):
        h = rng.uniform(-0.3, 0.3, 6).astype(complex)
        res = np.linalg.norm(dblock.block_system(h, dblock.solve_block_explicit(h).shapes))
        assert res < 1e-10
        up = dblock.solve_block_explicit(h + 1e-12j).shapes
        dn = dblock.solve_block_explicit(h - 1e-12j).shapes
        assert np.allclose(up, dn, atol=1e-6)


def test_jacobian_matches_finite_differences():
    rng = np.random.default_rng(4)
    for _ in range(5):
        h = random_holonomies(rng)
        z = dblock.solve_block_explicit(h).shapes
        jac = dblock.block_jacobian(z)
        step = 1e-7
        fd = np.empty((8, 8), dtype=complex)
        for j in range(8):
            dz = np.zeros(8, dtype=complex)
            dz[j] = step
            fd[:, j] = (
                dblock.block_system(h, z + dz) - dblock.block_system(h, z - dz)
            ) / (2.0 * step)
        assert np.allclose(jac, fd, rtol=1e-6, atol=1e-6)


def test_jacobian_determinant_anchor():
    det = np.linalg.det(dblock.block_jacobian(np.full(8, 1j)))
    assert det == pytest.approx(-32j, abs=1e-12)


def test_block_shapes_refinement_agrees():
    rng = np.random.default_rng(5)
    for _ in range(10):
        h = random_holonomies(rng)
        raw = dblock.block_shapes(h, refine=False)
        polished = dblock.block_shapes(h, refine=True)
        assert np.allclose(raw, polished, atol=1e-10)


def test_block_volume_anchor_and_oracle():
    catalan = float(mpmath.catalan)
    assert dblock.block_volume(np.zeros(6)) == pytest.approx(8.0 * catalan, abs=1e-12)
    # independent Bloch-Wigner evaluation through mpmath on the same shapes
    rng = np.random.default_rng(6)
    for _ in range(8):
        h = random_holonomies(rng)
        shapes = dblock.block_shapes(h)
        want = sum(
            float(mpmath.polylog(2, mpmath.mpc(z)).imag)
            + cmath.phase(1.0 - z) * float(np.log(abs(z)))
            for z in shapes
        )
        assert dblock.block_volume(h) == pytest.approx(want, abs=1e-12)


def test_volume_orientation_asymmetry():
    # the geometric solution's volume is not even in h: the two meridian
    # orientations of a cone structure carry genuinely different volumes,
    # which is why the doubled complex reads them on separate blocks
    theta = np.full(6, 0.25)
    plus = dblock.block_volume(2j * theta)
    minus = dblock.block_volume(-2j * theta)
    assert plus > 0.0 and minus > 0.0
    assert abs(plus - minus) > 1e-4


def test_oneloop_identity_anchor():
    lhs, rhs = dblock.block_oneloop_identity(np.zeros(6))
    assert abs(lhs) == pytest.approx(128.0, rel=1e-12)
    assert abs(rhs) == pytest.approx(128.0, rel=1e-12)
    assert min(abs(lhs / rhs - u) for u in UNITS) < 1e-12


def test_oneloop_identity_random():
    rng = np.random.default_rng(8)
    for draw in (imaginary_holonomies, random_holonomies):
        for _ in range(15):
            h = draw(rng)
            lhs, rhs = dblock.block_oneloop_identity(h)
            assert abs(lhs) == pytest.approx(abs(rhs), rel=1e-9)
            assert min(abs(lhs / rhs - u) for u in UNITS) < 1e-9


def test_block_datum_reads_holonomies():
    rng = np.random.default_rng(9)
    h = random_holonomies(rng)
    d = dblock.block_datum(h)
    nz.validate(d)
    vals = nz.row_values(d)
    assert np.allclose(vals[:2], 2j * np.pi, atol=1e-12)
    assert np.allclose(vals[2:], h, atol=1e-12)


def test_extreme_holonomies_still_solve():
    h = np.full(6, 8.0, dtype=complex)
    sol = dblock.solve_block_explicit(h)
    assert np.linalg.norm(dblock.block_system(h, sol.shapes)) < 1e-10


def test_degenerate_shape_rejected():
    with pytest.raises(DegenerateShape):
        nz.shape_triple(1.0)
