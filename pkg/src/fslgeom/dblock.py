"""The doubled truncated tetrahedron block.

Doubling a truncated hyperbolic tetrahedron along its hexagonal faces and
removing the triangle edges gives the building block of fundamental shadow
link complements: a piece with six annular cusps, one per edge of the
tetrahedron, and four 3-punctured-sphere boundary spheres. It decomposes
into eight ideal tetrahedra whose shapes (z_1..z_4, zt_1..zt_4) solve an
8x8 log gluing system in the six cusp holonomies H_1..H_6: two interior
edge equations and six cusp curve equations.

The system reduces to one quadratic A t^2 + B t + C = 0 whose root zstar
parameterizes all eight shapes as Moebius functions of zstar and the
half-holonomy exponentials u_l = exp(H_l / 2). The discriminant ties the
triangulation to the synthetic geometry of the underlying truncated
tetrahedron: B^2 - 4AC = 16 det(Gram matrix).

Edge labels follow the tetrahedron, with (1,4), (2,5), (3,6) the pairs of
opposite edges; face l meets the edges listed in FACE_EDGES.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import nz
from .errors import DegenerateQuadratic, DegenerateShape, NoConvergence
from .polylog import bloch_wigner

# faces 1..4 against the edges 1..6 they meet
FACE_EDGES = {1: (1, 6, 5), 2: (1, 2, 3), 3: (6, 2, 4), 4: (5, 3, 4)}

# gluing rows: two interior edges, then the six annular cusp curves;
# columns are the eight tetrahedra z_1..z_4, zt_1..zt_4
BLOCK_G = np.array(
    [
        [1, 1, 1, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 1, 1, 1],
        [0, 0, 0, 1, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0],
    ],
    dtype=np.int64,
)

BLOCK_GP = np.array(
    [
        [0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0],
        [-1, 0, 0, 0, 0, 0, -1, 0],
        [-1, 0, 0, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, -1, 0, 0],
        [0, -1, 0, 0, 0, 0, 0, -1],
        [0, 1, -1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, -1, 1],
    ],
    dtype=np.int64,
)

BLOCK_GPP = np.array(
    [
        [0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, -1, 0, -1, 0, 0, 0],
        [0, 0, 0, 0, -1, 0, 0, 1],
        [1, -1, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, -1, 0, -1, 0, 0],
        [0, 0, 0, 0, 0, 1, -1, 0],
        [0, 0, -1, 1, 0, 0, 0, 0],
    ],
    dtype=np.int64,
)

# doubled flattenings; the symmetric one puts (1/2, 0, 1/2) at every
# tetrahedron, the lopsided one concentrates weight on z_4 and zt_4 and
# is integral
FLAT_SYM2 = np.array(
    [
        [1, 1, 1, 1, 1, 1, 1, 1],
        [0, 0, 0, 0, 0, 0, 0, 0],
        [1, 1, 1, 1, 1, 1, 1, 1],
    ],
    dtype=np.int64,
)

FLAT_ASYM2 = np.array(
    [
        [2, 2, 2, -2, 0, 0, 0, 4],
        [0, 0, 0, -2, 2, 2, 2, -4],
        [0, 0, 0, 6, 0, 0, 0, 2],
    ],
    dtype=np.int64,
)

_ALL_I = np.full(8, 1j)
_DEG_TOL = 1e-12


@dataclass
class BlockSolution:
    """Shapes (z_1..z_4, zt_1..zt_4) of the eight tetrahedra and the
    quadratic root zstar they came from."""

    shapes: np.ndarray
    zstar: complex

    def __post_init__(self) -> None:
        self.shapes = np.asarray(self.shapes, dtype=complex)
        self.zstar = complex(self.zstar)

    def triples(self) -> list[tuple[complex, complex, complex]]:
        return [nz.shape_triple(z) for z in self.shapes]


def _half_exponentials(h) -> tuple[complex, ...]:
    h = np.asarray(h, dtype=complex)
    if h.shape != (6,):
        raise ValueError("expected six cusp holonomies")
    return tuple(np.exp(v / 2.0) for v in h)


def gram_matrix(h) -> np.ndarray:
    """Gram matrix of the truncated tetrahedron with cusp holonomies h."""
    h1, h2, h3, h4, h5, h6 = (complex(v) for v in h)
    g = np.eye(4, dtype=complex)
    pairs = {
        (0, 1): h1, (0, 2): h6, (0, 3): h5,
        (1, 2): h2, (1, 3): h3, (2, 3): h4,
    }
    for (i, j), hl in pairs.items():
        g[i, j] = g[j, i] = -np.cosh(hl / 2.0)
    return g


def gram_det(h) -> complex:
    return complex(np.linalg.det(gram_matrix(h)))


def quadratic_coeffs(h) -> tuple[complex, complex, complex]:
    """Coefficients (A, B, C) of the quadratic satisfied by zstar.

    B^2 - 4AC equals 16 gram_det(h); at h = 0 the triple is (-8, 0, -8).
    C(u) = A(1/u) and B(1/u) = B(u), reflecting the doubling symmetry.
    """
    u1, u2, u3, u4, u5, u6 = _half_exponentials(h)
    a = (
        -u1 / u4
        - u1 * u3 / u2
        - u1 / (u2 * u3)
        - u1 / (u2 * u2 * u4)
        - u5 / u2
        - u6 / (u2 * u4)
        - 1.0 / (u2 * u4 * u6)
        - 1.0 / (u2 * u5)
    )
    b = (
        -u1 * u4
        + u1 / u4
        + u4 / u1
        - 1.0 / (u1 * u4)
        + u2 * u5
        + u2 / u5
        + u5 / u2
        + 1.0 / (u2 * u5)
        - u3 * u6
        - u3 / u6
        - u6 / u3
        - 1.0 / (u3 * u6)
    )
    c = (
        -u4 / u1
        - u2 / (u1 * u3)
        - u2 * u3 / u1
        - u2 * u2 * u4 / u1
        - u2 / u5
        - u2 * u4 / u6
        - u2 * u4 * u6
        - u2 * u5
    )
    return complex(a), complex(b), complex(c)


def _shape_fractions(zstar: complex, h):
    """(numerator, denominator) pairs of the eight shape formulas."""
    u1, u2, u3, u4, u5, u6 = _half_exponentials(h)
    z = zstar
    return [
        (z - u2 * u2, z + u2 * u3 * u4),
        (z * u1 * u3 * u5 - u2 * u3 * u4, z * u1 * u3 * u5 + u1 * u2 * u4 * u5),
        (z * u1 * u6 - u2 * u4 * u5 * u6, z * u1 * u6 + u2),
        (z * u1 - u1, z * u1 + u2 * u6),
        (-(z * u2 + u2 * u2 * u3 * u4), z * u3 * u4 - u2 * u2 * u3 * u4),
        (-(z * u3 + u2 * u4), z * u1 * u5 - u2 * u4),
        (-(z * u1 * u4 * u5 * u6 + u2 * u4 * u5), z * u1 - u2 * u4 * u5),
        (-(z * u1 + u2 * u6), z * u2 * u6 - u2 * u6),
    ]


def _explicit_shapes(zstar: complex, h, strict: bool) -> np.ndarray:
    out = np.empty(8, dtype=complex)
    for i, (num, den) in enumerate(_shape_fractions(zstar, h)):
        if strict and abs(den) <= _DEG_TOL:
            raise DegenerateShape(f"denominator of shape {i} vanishes")
        out[i] = num / den
    if strict and (np.min(np.abs(out)) <= _DEG_TOL or np.min(np.abs(out - 1.0)) <= _DEG_TOL):
        raise DegenerateShape("explicit solution hit a shape in {0, 1}")
    return out


def zstar_from_shapes(shapes, h) -> complex:
    """Invert the z_4 shape formula; recovers zstar from any block solution."""
    u1, u2, _, _, _, u6 = _half_exponentials(h)
    z4 = complex(shapes[3])
    if abs(z4 - 1.0) <= _DEG_TOL:
        raise DegenerateShape("z_4 = 1 leaves zstar undetermined")
    return (u1 + z4 * u2 * u6) / (u1 * (1.0 - z4))


def solve_block_explicit(h) -> BlockSolution:
    """Closed-form solution of the block gluing system.

    zstar = (-B - sqrt(B^2 - 4AC)) / 2A, which at h = 0 is the complete
    structure (all shapes i).  The discriminant 16 * gram_det sits on the
    negative real axis at h = 0, so the principal square root is unstable
    there: which literal sign continues the geometric branch flips with the
    sign of Im(discriminant).  Both candidate roots are therefore formed and
    the one actually solving the gluing system (residual at winding zero) is
    returned.  The wrong sheet misses the 2*pi*i edge targets by a full
    winding, so the arbitration is a clean order-1 gap, not a tie-break.
    """
    h = np.asarray(h, dtype=complex)
    a, b, c = quadratic_coeffs(h)
    if abs(a) <= _DEG_TOL:
        raise DegenerateQuadratic(f"leading quadratic coefficient {a} vanishes")
    disc = np.sqrt(complex(b * b - 4.0 * a * c))
    best = None
    first_err = None
    for zstar in ((-b - disc) / (2.0 * a), (-b + disc) / (2.0 * a)):
        try:
            shapes = _explicit_shapes(zstar, h, strict=True)
        except DegenerateShape as err:
            if first_err is None:
                first_err = err
            continue
        res = np.linalg.norm(block_system(h, shapes))
        if best is None or res < best[0]:
            best = (res, BlockSolution(shapes=shapes, zstar=zstar))
        if res < 1e-8:
            break
    if best is None:
        raise first_err
    return best[1]


def block_targets(h) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    return np.concatenate([[2j * np.pi, 2j * np.pi], h])


def block_system(h, shapes) -> np.ndarray:
    """Residual of the eight gluing equations at a candidate solution."""
    fun, _ = nz.make_system(BLOCK_G, BLOCK_GP, BLOCK_GPP, block_targets(h))
    return fun(np.asarray(shapes, dtype=complex))


def block_jacobian(shapes) -> np.ndarray:
    """Derivative of the block system with respect to the eight shapes."""
    _, jac = nz.make_system(BLOCK_G, BLOCK_GP, BLOCK_GPP, np.zeros(8))
    return jac(np.asarray(shapes, dtype=complex))


def block_shapes(h, refine: bool = True) -> np.ndarray:
    """Shapes at h, explicit formula first, optionally polished by Newton.

    Delegates sheet selection to solve_block_explicit and falls back to
    Newton continuation from all-i when the explicit solution is off the
    geometric branch entirely.
    """
    from .solver import NewtonConfig, newton

    h = np.asarray(h, dtype=complex)
    try:
        shapes = solve_block_explicit(h).shapes
        res = np.linalg.norm(block_system(h, shapes))
    except (DegenerateShape, DegenerateQuadratic):
        shapes = _ALL_I.copy()
        res = np.inf
    if not refine:
        if not np.isfinite(res):
            raise NoConvergence("explicit solution degenerate and refine disabled")
        return shapes
    if res > 1e-4:
        # far off the geometric branch: continue from the complete structure
        shapes = _ALL_I.copy()
    fun, jac = nz.make_system(BLOCK_G, BLOCK_GP, BLOCK_GPP, block_targets(h))
    return newton(fun, jac, shapes, NewtonConfig())


def block_datum(h, flattening: str = "sym") -> nz.NzDatum:
    """The block as an NzDatum: 2 edge rows, then 6 cusp curve rows."""
    if flattening == "sym":
        flat2 = FLAT_SYM2
    elif flattening == "asym":
        flat2 = FLAT_ASYM2
    else:
        raise ValueError(f"flattening {flattening!r} not in ('sym', 'asym')")
    d = nz.NzDatum(BLOCK_G, BLOCK_GP, BLOCK_GPP, 2, block_shapes(h), flat2)
    nz.validate(d)
    return d


def block_volume(h) -> float:
    """Hyperbolic volume of the block at cusp holonomies h."""
    return float(sum(bloch_wigner(z) for z in block_shapes(h)))


def _flattening_product(shapes, flat2) -> complex:
    xi, xip, xipp = (1.0 / shapes, 1.0 / (1.0 - shapes), 1.0 / (shapes * (shapes - 1.0)))
    f2 = flat2.astype(float)
    return complex(
        np.exp(0.5 * (f2[0] * np.log(xi) + f2[1] * np.log(xip) + f2[2] * np.log(xipp))).prod()
    )


def block_oneloop_identity(h) -> tuple[complex, complex]:
    """Both sides of the block determinant identity.

    lhs = det(block Jacobian at the solution) / flattening product with the
    symmetric flattening; rhs = 2^5 sqrt(gram_det), principal root. They
    agree up to a factor in {1, -1, i, -i}; at h = 0 both are +-128i.
    """
    shapes = block_shapes(h)
    lhs = complex(np.linalg.det(block_jacobian(shapes))) / _flattening_product(shapes, FLAT_SYM2)
    rhs = 32.0 * np.sqrt(complex(gram_det(h)))
    return lhs, complex(rhs)
