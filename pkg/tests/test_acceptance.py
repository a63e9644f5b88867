"""Acceptance criteria, one test per criterion.

Each test prints a single pass/fail line naming its criterion; a line is
printed on the way out only if every assertion of that criterion held, and
pytest reports the failure otherwise. Tolerances are part of the criteria
and are not loosened for convenience.
"""

import cmath
import math

import numpy as np
import pytest

from conftest import (
    UNITS,
    doubled_complex,
    imaginary_holonomies,
    random_holonomies,
    self_glued_complex,
    unit_gap,
)
from fslgeom import dblock, fsl, nz, polylog, solver

CATALAN = 0.9159655941772190150546035149324


def report(num, text):
    print(f"criterion {num:2d} ({text}): PASS")


@pytest.fixture(scope="module")
def sample_holonomies():
    rng = np.random.default_rng(100)
    return [random_holonomies(rng) for _ in range(200)]


@pytest.fixture(scope="module")
def explicit_solutions(sample_holonomies):
    return [dblock.solve_block_explicit(h) for h in sample_holonomies]


def test_criterion_01_explicit_residual(sample_holonomies, explicit_solutions):
    worst = 0.0
    for h, sol in zip(sample_holonomies, explicit_solutions):
        res = np.max(np.abs(dblock.block_system(h, sol.shapes)))
        worst = max(worst, res)
    assert worst < 1e-10
    report(1, f"explicit residual on 200 samples, worst {worst:.2e}")


def test_criterion_02_newton_matches_explicit(sample_holonomies, explicit_solutions):
    worst = 0.0
    for h, sol in zip(sample_holonomies, explicit_solutions):
        newton = solver.newton_block(h).shapes
        worst = max(worst, float(np.max(np.abs(newton - sol.shapes))))
    assert worst < 1e-9
    report(2, f"newton vs explicit on 200 samples, worst {worst:.2e}")


def test_criterion_03_discriminant_identity():
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(1000):
        h = random_holonomies(rng, radius=0.5)
        a, b, c = dblock.quadratic_coeffs(h)
        lhs = b * b - 4.0 * a * c
        rhs = 16.0 * dblock.gram_det(h)
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    assert worst < 1e-12
    report(3, f"discriminant = 16 det Gram on 1000 samples, worst {worst:.2e}")


def test_criterion_04_complete_structure_anchors():
    det = complex(np.linalg.det(dblock.block_jacobian(np.full(8, 1j))))
    assert abs(det - (-32j)) < 1e-12
    gram = complex(dblock.gram_det(np.zeros(6)))
    assert abs(gram - (-16.0)) < 1e-12
    report(4, "jacobian det -32i and Gram det -16 at the complete structure")


def test_criterion_05_block_oneloop_identity():
    rng = np.random.default_rng(102)
    worst_mod, worst_unit = 0.0, 0.0
    for draw in (imaginary_holonomies, random_holonomies):
        for _ in range(100):
            h = draw(rng)
            lhs, rhs = dblock.block_oneloop_identity(h)
            worst_mod = max(worst_mod, abs(abs(lhs) - abs(rhs)) / abs(rhs))
            worst_unit = max(worst_unit, min(abs(lhs / rhs - u) for u in UNITS))
    assert worst_mod < 1e-9
    assert worst_unit < 1e-9
    report(5, f"block one-loop identity on 200 samples, worst {worst_mod:.2e}")


def test_criterion_06_oneloop_conjecture_for_links():
    rng = np.random.default_rng(103)
    worst = 0.0
    for _ in range(50):
        x = doubled_complex(random_holonomies(rng, radius=0.25).tolist())
        worst = max(worst, unit_gap(fsl.fsl_oneloop(x), fsl.fsl_torsion(x)))
        y = self_glued_complex(random_holonomies(rng, 3, radius=0.25).tolist())
        worst = max(worst, unit_gap(fsl.fsl_oneloop(y), fsl.fsl_torsion(y)))
    assert worst < 1e-9
    assert abs(fsl.fsl_torsion(self_glued_complex([0] * 3))) == pytest.approx(
        32.0, rel=1e-9
    )
    assert abs(fsl.fsl_torsion(doubled_complex([0] * 6))) == pytest.approx(
        1024.0, rel=1e-9
    )
    report(6, f"one-loop = torsion mod units on 2x50 samples, worst {worst:.2e}")


def test_criterion_07_volume_anchors():
    assert dblock.block_volume(np.zeros(6)) == pytest.approx(
        7.3277247534, abs=1e-9
    )
    assert fsl.hyperideal_volume(np.zeros(6)) == pytest.approx(
        3.6638623767, abs=1e-9
    )
    rng = np.random.default_rng(104)
    worst = 0.0
    for _ in range(20):
        theta = rng.uniform(0.0, 0.3, 6)
        x = doubled_complex((2j * theta).tolist())
        worst = max(
            worst, abs(fsl.total_volume(x) - 4.0 * fsl.hyperideal_volume(theta))
        )
    assert worst < 1e-9
    report(7, f"volume anchors and doubled cone identity, worst {worst:.2e}")


def test_criterion_08_determinant_formulas_equivalent():
    rng = np.random.default_rng(105)
    base = dblock.block_datum(random_holonomies(rng))
    worst = 0.0
    for _ in range(100):
        d = nz.perturbed_datum(base, rng)
        a, b = nz.one_loop(d), nz.one_loop_symmetric(d)
        worst = max(worst, abs(a - b) / abs(b))
    assert worst < 1e-10
    report(8, f"one_loop = one_loop_symmetric on 100 data, worst {worst:.2e}")


def test_criterion_09_pachner_invariance():
    rng = np.random.default_rng(106)
    worst = 0.0
    for _ in range(50):
        d = nz.perturbed_datum(dblock.block_datum(random_holonomies(rng)), rng)
        row = int(rng.integers(0, d.n_edges))
        whole = np.stack([d.G[row], d.Gp[row], d.Gpp[row]])
        s1 = rng.integers(-2, 3, size=(3, d.n))
        crossings = {
            r: (int(rng.integers(-2, 3)), int(rng.integers(1, 3)))
            for r in range(d.n)
            if r != row and rng.random() < 0.4
        }
        d2 = nz.pachner_02(d, row, (s1, whole - s1), crossings)
        rep = nz.validate_flattening(d2)
        assert rep["valid"] and rep["failures"] == []
        worst = max(worst, unit_gap(nz.one_loop(d2), nz.one_loop(d)))
    assert worst < 1e-9
    report(9, f"pachner invariance on 50 parameterizations, worst {worst:.2e}")


def test_criterion_10_surgery_formula():
    rng = np.random.default_rng(107)
    worst, worst_lemma = 0.0, 0.0
    for _ in range(50):
        d = dblock.block_datum(random_holonomies(rng))
        big, fr, gr, ar, t1, t2 = nz._synthetic_unfill(
            d, int(rng.integers(0, d.n_edges)), rng
        )
        folded, gamma = nz.fill_fold(big, fr, gr, ar, t1, t2)
        weight = 4.0 * np.sinh(gamma / 2.0) ** 2
        gap = min(
            abs(s * nz.one_loop(folded) * weight - nz.one_loop(big)) for s in (1, -1)
        ) / abs(nz.one_loop(big))
        worst = max(worst, gap)
        z1, z2 = big.shapes[t1], big.shapes[t2]
        worst_lemma = max(worst_lemma, abs(weight + (z1 + z2 + 2.0)))
        m11, m12 = 1.0 / (z1 * (z1 - 1.0)), 1.0 / (z2 * (z2 - 1.0))
        minor = m11 * (m12 - 1.0 / (1.0 - z2)) - m12 * (1.0 / (1.0 - z1) - m11)
        worst_lemma = max(
            worst_lemma, abs(minor - (z1 + z2 + 2.0) / ((z1 - 1.0) * (z2 - 1.0)))
        )
    assert worst < 1e-9
    assert worst_lemma < 1e-12
    report(10, f"surgery formula on 50 synthetic data, worst {worst:.2e}")


def test_criterion_11_change_of_curves():
    rng = np.random.default_rng(108)
    worst = 0.0
    for trial in range(20):
        if trial % 2 == 0:
            x = doubled_complex(random_holonomies(rng, radius=0.15).tolist())
        else:
            x = self_glued_complex(random_holonomies(rng, 3, radius=0.15).tolist())
        d0, designated = fsl._meridian_datum(x)
        pq, descs = [], []
        for _i in range(len(designated)):
            pq.append((int(rng.integers(1, 3)), int(rng.integers(-2, 3))))
            dd = rng.integers(-1, 2, (3, d0.n))
            dd[0, 0] -= dd[0].sum() + dd[2].sum()
            descs.append(dd)
        dal = fsl._replace_designated(d0, designated, pq, descs)
        factor = fsl.change_of_curves_factor(x, pq, descs)
        ratio = nz.one_loop_symmetric(dal) / nz.one_loop_symmetric(d0)
        worst = max(worst, unit_gap(ratio, factor))
    assert worst < 1e-6
    report(11, f"change of curves on 20 descriptors, worst {worst:.2e}")


def test_criterion_12_flattening_exactness():
    rng = np.random.default_rng(109)
    h = random_holonomies(rng)
    for kind in ("sym", "asym"):
        d = dblock.block_datum(h, kind)
        flat2 = d.flattening2
        cols = d.G @ flat2[0] + d.Gp @ flat2[1] + d.Gpp @ flat2[2]
        assert [int(v) for v in flat2.sum(axis=0)] == [2] * 8
        assert [int(v) for v in cols[:2]] == [4, 4]
        assert [int(v) for v in cols[2:]] == [0] * 6
        rep = nz.validate_flattening(d)
        assert rep["valid"] and rep["failures"] == []
    report(12, "both flattenings validate by exact integer arithmetic")


def test_criterion_13_dilogarithm_suite():
    assert abs(polylog.li2(1.0) - math.pi**2 / 6.0) < 1e-12
    rng = np.random.default_rng(110)
    worst = 0.0
    for _ in range(50):
        z = complex(rng.uniform(-3, 3), rng.uniform(0.05, 3))
        d = polylog.bloch_wigner(z)
        worst = max(worst, abs(polylog.bloch_wigner(z.conjugate()) + d))
        worst = max(worst, abs(polylog.bloch_wigner(1.0 - 1.0 / z) - d))
        worst = max(worst, abs(polylog.bloch_wigner(1.0 / (1.0 - z)) - d))
    assert worst < 1e-12
    report(13, f"dilogarithm identities on 50 samples, worst {worst:.2e}")
