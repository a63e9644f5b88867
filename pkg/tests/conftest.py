"""Shared builders for the canonical complexes and random holonomy draws."""

import numpy as np

from fslgeom import dblock, fsl

UNITS = (1.0, -1.0, 1j, -1j)


def unit_gap(a, b):
    """Relative distance from a to the nearest unit multiple of b."""
    return min(abs(u * complex(a) - complex(b)) for u in UNITS) / abs(complex(b))


def doubled_complex(holonomies):
    """Two blocks glued face to face with identity edge maps, 6 components."""
    gluings = [
        fsl.FaceGluing((0, f), (1, f), {e: e for e in dblock.FACE_EDGES[f]})
        for f in (1, 2, 3, 4)
    ]
    return fsl.FslComplex(2, gluings, list(holonomies))


def self_glued_complex(holonomies):
    """One block with its faces glued in pairs, 3 components."""
    gluings = [
        fsl.FaceGluing((0, 1), (0, 2), {1: 1, 6: 2, 5: 3}),
        fsl.FaceGluing((0, 3), (0, 4), {6: 5, 2: 3, 4: 4}),
    ]
    return fsl.FslComplex(1, gluings, list(holonomies))


def random_holonomies(rng, n=6, radius=0.3):
    """Uniform draw from the radius-r disk in each coordinate."""
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, n))
    phase = rng.uniform(0.0, 2.0 * np.pi, n)
    return r * np.exp(1j * phase)


def imaginary_holonomies(rng, n=6, radius=0.3):
    return 1j * rng.uniform(-radius, radius, n)
