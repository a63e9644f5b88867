"""Neumann-Zagier style gluing data and one-loop determinants.

An NzDatum packages what the one-loop invariant of a triangulated cusped
manifold consumes: three integer matrices recording how each gluing row meets
the three shape parameters of each tetrahedron, a solution of the log gluing
equations, and a combinatorial flattening. Rows split into edge rows, whose
log sums land in 2 pi i Z, and curve rows, whose log sums are the cusp
holonomies. Flattening entries are half-integers and are stored doubled so
all combinatorial checks stay in exact integer arithmetic.

The module also implements two moves used to compare the invariant across
retriangulations: insertion of a trivial tetrahedron pair along an edge
(pachner_02) and the inverse of a Dehn filling pattern (fill_fold).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateFill,
    DegenerateShape,
    FlatteningBroken,
    InputError,
    InvalidSplit,
    NoConvergence,
    PatternMismatch,
)

TWO_PI = 2.0 * np.pi
_SHAPE_TOL = 1e-10


def shape_triple(z: complex) -> tuple[complex, complex, complex]:
    """The three cross-ratio parameters (z, 1/(1-z), 1-1/z) of one tetrahedron."""
    z = complex(z)
    if min(abs(z), abs(z - 1.0)) < _SHAPE_TOL:
        raise DegenerateShape(f"shape {z} is degenerate")
    return z, 1.0 / (1.0 - z), 1.0 - 1.0 / z


def _triples(shapes: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    z = np.asarray(shapes, dtype=complex)
    return z, 1.0 / (1.0 - z), 1.0 - 1.0 / z


def _logs(shapes: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    z, zp, zpp = _triples(shapes)
    return np.log(z), np.log(zp), np.log(zpp)


def _xis(shapes: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # derivatives of the three logs with respect to z; they sum to zero
    z = np.asarray(shapes, dtype=complex)
    return 1.0 / z, 1.0 / (1.0 - z), 1.0 / (z * (z - 1.0))


@dataclass
class NzDatum:
    """Gluing rows, shapes, and a flattening for one triangulation.

    G, Gp, Gpp: (n, n) integer matrices; row r pairs with (log z, log z',
    log z'') of each tetrahedron. Rows 0..n_edges-1 are edge rows, the rest
    are curve rows. flattening2 is a (3, n) integer matrix holding twice
    (f, f', f'').
    """

    G: np.ndarray
    Gp: np.ndarray
    Gpp: np.ndarray
    n_edges: int
    shapes: np.ndarray
    flattening2: np.ndarray

    def __post_init__(self) -> None:
        self.G = np.array(self.G, dtype=np.int64)
        self.Gp = np.array(self.Gp, dtype=np.int64)
        self.Gpp = np.array(self.Gpp, dtype=np.int64)
        self.shapes = np.array(self.shapes, dtype=complex)
        self.flattening2 = np.array(self.flattening2, dtype=np.int64)
        n = self.shapes.shape[0]
        for m in (self.G, self.Gp, self.Gpp):
            if m.shape != (n, n):
                raise InputError(f"gluing matrix shape {m.shape}, expected {(n, n)}")
        if self.flattening2.shape != (3, n):
            raise InputError(f"flattening shape {self.flattening2.shape}, expected {(3, n)}")
        if not 0 <= self.n_edges <= n:
            raise InputError(f"n_edges {self.n_edges} out of range for n {n}")

    @property
    def n(self) -> int:
        return self.shapes.shape[0]

    @property
    def n_curves(self) -> int:
        return self.n - self.n_edges

    @property
    def k(self) -> int:
        # cusp count: one curve row per cusp
        return self.n_curves

    @property
    def winding(self) -> np.ndarray:
        """Log-branch integers making the residual identity exact.

        Derived from the stored shapes rather than stored: the invariants
        computed here (determinant, flattening checks) do not depend on the
        branch bookkeeping.
        """
        return winding(self)

    def copy(self) -> "NzDatum":
        return NzDatum(self.G, self.Gp, self.Gpp, self.n_edges, self.shapes, self.flattening2)

    def to_json(self) -> dict:
        return {
            "G": self.G.tolist(),
            "Gp": self.Gp.tolist(),
            "Gpp": self.Gpp.tolist(),
            "n_edges": self.n_edges,
            "shapes": [[z.real, z.imag] for z in self.shapes],
            "flattening2": self.flattening2.tolist(),
        }

    @staticmethod
    def from_json(obj: dict) -> "NzDatum":
        try:
            shapes = [complex(re, im) for re, im in obj["shapes"]]
            return NzDatum(obj["G"], obj["Gp"], obj["Gpp"], int(obj["n_edges"]),
                           shapes, obj["flattening2"])
        except (KeyError, TypeError, ValueError) as err:
            raise InputError(f"malformed datum document: {err}") from err


def row_values(d: NzDatum) -> np.ndarray:
    """Value of every gluing row at the stored shapes, principal logs."""
    lz, lzp, lzpp = _logs(d.shapes)
    return d.G @ lz + d.Gp @ lzp + d.Gpp @ lzpp


def curve_holonomies(d: NzDatum) -> np.ndarray:
    return row_values(d)[d.n_edges:]


def edge_windings(d: NzDatum, tol: float = 1e-9) -> np.ndarray:
    """Integer w with edge row value 2 pi i w; InputError when off by > tol."""
    vals = row_values(d)[: d.n_edges]
    w = np.round(vals.imag / TWO_PI).astype(np.int64)
    err = np.abs(vals - 2j * np.pi * w)
    if vals.size and err.max() > tol:
        r = int(np.argmax(err))
        raise InputError(f"edge row {r} evaluates to {vals[r]}, not a multiple of 2 pi i")
    return w


def winding(d: NzDatum, tol: float = 1e-9) -> np.ndarray:
    """Integer log-branch offsets making the gluing identity exact.

    The residual convention is row value minus target minus 2 pi i times the
    winding, with edge targets 2 pi i and curve targets read back from the
    rows themselves.  Edge rows therefore carry their multiple in excess of
    the single target turn and curve rows carry 0; a datum whose edges each
    close up by exactly one full turn has winding zero everywhere.
    """
    w = np.zeros(d.n, dtype=np.int64)
    w[: d.n_edges] = edge_windings(d, tol=tol) - 1
    return w


def flattening_check(d: NzDatum) -> None:
    """Exact integer flattening conditions; raises FlatteningBroken."""
    col = d.flattening2.sum(axis=0)
    if np.any(col != 2):
        raise FlatteningBroken(f"flattening column sums {col.tolist()} != 2")
    f2, fp2, fpp2 = d.flattening2
    rowsum = d.G @ f2 + d.Gp @ fp2 + d.Gpp @ fpp2
    if np.any(rowsum[: d.n_edges] != 4):
        raise FlatteningBroken(f"edge flattening sums {rowsum[: d.n_edges].tolist()} != 4")
    if np.any(rowsum[d.n_edges:] != 0):
        raise FlatteningBroken(f"curve flattening sums {rowsum[d.n_edges:].tolist()} != 0")


def validate_flattening(d: NzDatum) -> dict:
    """Report on the flattening conditions, exact integer arithmetic.

    Keys: column_sums_ok (f + f' + f'' = 1 per tetrahedron), edge_rows_ok
    (weighted sum 2 per edge row), curve_rows_ok (0 per curve row), valid,
    and failures, a list of human-readable violations.
    """
    failures: list[str] = []
    col = d.flattening2.sum(axis=0)
    col_ok = bool(np.all(col == 2))
    if not col_ok:
        bad = np.nonzero(col != 2)[0]
        failures.append(f"columns {bad.tolist()} have f + f' + f'' != 1")
    f2, fp2, fpp2 = d.flattening2
    rowsum = d.G @ f2 + d.Gp @ fp2 + d.Gpp @ fpp2
    edge_ok = bool(np.all(rowsum[: d.n_edges] == 4))
    if not edge_ok:
        bad = np.nonzero(rowsum[: d.n_edges] != 4)[0]
        failures.append(f"edge rows {bad.tolist()} sum to {rowsum[bad].tolist()}, not 2")
    curve_ok = bool(np.all(rowsum[d.n_edges :] == 0))
    if not curve_ok:
        bad = np.nonzero(rowsum[d.n_edges :] != 0)[0]
        failures.append(
            f"curve rows {bad.tolist()} sum to {rowsum[d.n_edges:][bad].tolist()}, not 0"
        )
    return {
        "column_sums_ok": col_ok,
        "edge_rows_ok": edge_ok,
        "curve_rows_ok": curve_ok,
        "valid": col_ok and edge_ok and curve_ok,
        "failures": failures,
    }


def validate(d: NzDatum, tol: float = 1e-9) -> None:
    """Shapes nondegenerate, edge rows in 2 pi i Z, flattening conditions exact."""
    z = d.shapes
    if np.min(np.abs(z)) <= _SHAPE_TOL or np.min(np.abs(z - 1.0)) <= _SHAPE_TOL:
        raise DegenerateShape("datum carries a shape at 0 or 1")
    flattening_check(d)
    edge_windings(d, tol=tol)


def jacobian(d: NzDatum) -> np.ndarray:
    """Derivative of the row values with respect to the shapes."""
    xi, xip, xipp = _xis(d.shapes)
    return d.G * xi[None, :] + d.Gp * xip[None, :] + d.Gpp * xipp[None, :]


def make_system(G, Gp, Gpp, targets):
    """fun, jac callables for the log gluing system with the given targets."""
    G = np.asarray(G, dtype=np.int64)
    Gp = np.asarray(Gp, dtype=np.int64)
    Gpp = np.asarray(Gpp, dtype=np.int64)
    targets = np.asarray(targets, dtype=complex)

    def fun(z: np.ndarray) -> np.ndarray:
        lz, lzp, lzpp = _logs(z)
        return G @ lz + Gp @ lzp + Gpp @ lzpp - targets

    def jac(z: np.ndarray) -> np.ndarray:
        xi, xip, xipp = _xis(z)
        return G * xi[None, :] + Gp * xip[None, :] + Gpp * xipp[None, :]

    return fun, jac


def one_loop(d: NzDatum) -> complex:
    """One-loop determinant in the (z, z'') gauge, defined up to sign.

    Returns (1/2) det((G - G') diag(z'') + (G'' - G') diag(1/z)) times the
    monomial prod z^f'' (z'')^(-f).
    """
    z, _, zpp = _triples(d.shapes)
    mat = (d.G - d.Gp) * zpp[None, :] + (d.Gpp - d.Gp) * (1.0 / z)[None, :]
    f2 = d.flattening2[0].astype(float)
    fpp2 = d.flattening2[2].astype(float)
    mono = np.exp(0.5 * (fpp2 * np.log(z) - f2 * np.log(zpp))).prod()
    return 0.5 * complex(np.linalg.det(mat)) * complex(mono)


def one_loop_symmetric(d: NzDatum) -> complex:
    """One-loop determinant written symmetrically in the three shape logs.

    Returns (1/2) det(G diag(xi) + G' diag(xi') + G'' diag(xi'')) divided by
    prod xi^f xi'^f' xi''^f'', with xi the log derivatives. Agrees with
    one_loop up to sign on any flattened datum.
    """
    xi, xip, xipp = _xis(d.shapes)
    f2 = d.flattening2.astype(float)
    mono = np.exp(0.5 * (f2[0] * np.log(xi) + f2[1] * np.log(xip) + f2[2] * np.log(xipp))).prod()
    return 0.5 * complex(np.linalg.det(jacobian(d))) / complex(mono)


def _as_row_triple(rows, n: int) -> np.ndarray:
    arr = np.array(rows, dtype=np.int64)
    if arr.shape != (3, n):
        raise InvalidSplit(f"split part has shape {arr.shape}, expected {(3, n)}")
    return arr


def pachner_02(
    d: NzDatum,
    edge_row: int,
    split,
    crossings: dict[int, tuple[int, int]] | None = None,
    new_shapes: tuple[complex, complex] | None = None,
    side_sums: tuple[float, float] | None = None,
) -> NzDatum:
    """Insert a trivial pair of tetrahedra along an edge row.

    split is a pair of (3, n) integer row triples (coefficients against
    log z, log z', log z'') summing exactly to the chosen edge row. The edge
    row is replaced by the two split halves, each completed by one new
    tetrahedron, and a new edge row z_{n+1} z_{n+2} = 1 is appended. The new
    shapes are determined by the first split half; passing new_shapes
    overrides them after a product check. crossings maps another row index to
    (k, pattern) where pattern 1 threads the row k times through (z'_{n+1},
    z''_{n+2}) and pattern 2 through (z''_{n+1}, z'_{n+2}); either insertion
    leaves the row value and its flattening sum unchanged. side_sums are the
    flattening weights (S_1, S_2) of the two split halves, S_1 + S_2 = 2; by
    default they are read off the split and the stored flattening.

    The one-loop determinant of the result agrees with the input up to sign.
    """
    n = d.n
    if not 0 <= edge_row < d.n_edges:
        raise InvalidSplit(f"row {edge_row} is not an edge row")
    s1 = _as_row_triple(split[0], n)
    s2 = _as_row_triple(split[1], n)
    whole = np.stack([d.G[edge_row], d.Gp[edge_row], d.Gpp[edge_row]])
    if np.any(s1 + s2 != whole):
        raise InvalidSplit("split halves do not sum to the edge row")

    f2 = d.flattening2
    if side_sums is None:
        s1_flat = int((s1 * f2).sum())
        s2_flat = 4 - s1_flat
    else:
        s1_flat = round(2.0 * side_sums[0])
        s2_flat = round(2.0 * side_sums[1])
        if s1_flat + s2_flat != 4:
            raise InvalidSplit(f"side sums {side_sums} do not add to 2")

    lz, lzp, lzpp = _logs(d.shapes)
    h1 = complex(s1[0] @ lz + s1[1] @ lzp + s1[2] @ lzpp)
    if new_shapes is None:
        w1 = np.exp(-h1)
        w2 = 1.0 / w1
    else:
        w1, w2 = complex(new_shapes[0]), complex(new_shapes[1])
        if abs(w1 * w2 - 1.0) > 1e-9:
            raise InvalidSplit(f"supplied shapes have product {w1 * w2}, expected 1")

    if crossings is None:
        crossings = {}
    for r in crossings:
        if r == edge_row:
            raise InvalidSplit("a crossing cannot target the split edge row")
        if not 0 <= r < n:
            raise InvalidSplit(f"crossing row {r} out of range")

    def new_index(r: int) -> int:
        if r < edge_row:
            return r
        if r < d.n_edges:
            return r + 1
        return r + 2

    m = n + 2
    G2 = np.zeros((m, m), dtype=np.int64)
    Gp2 = np.zeros((m, m), dtype=np.int64)
    Gpp2 = np.zeros((m, m), dtype=np.int64)
    for r in range(n):
        if r == edge_row:
            continue
        i = new_index(r)
        G2[i, :n] = d.G[r]
        Gp2[i, :n] = d.Gp[r]
        Gpp2[i, :n] = d.Gpp[r]
    G2[edge_row, :n], Gp2[edge_row, :n], Gpp2[edge_row, :n] = s1
    G2[edge_row, n] = 1
    G2[edge_row + 1, :n], Gp2[edge_row + 1, :n], Gpp2[edge_row + 1, :n] = s2
    G2[edge_row + 1, n + 1] = 1
    # relation z_{n+1} z_{n+2} = 1, appended as the last edge row
    G2[d.n_edges + 1, n] = 1
    G2[d.n_edges + 1, n + 1] = 1

    for r, (k, pattern) in crossings.items():
        i = new_index(r)
        if pattern == 1:
            Gp2[i, n] += k
            Gpp2[i, n + 1] += k
        elif pattern == 2:
            Gpp2[i, n] += k
            Gp2[i, n + 1] += k
        else:
            raise InvalidSplit(f"crossing pattern {pattern} not in (1, 2)")

    flat2 = np.zeros((3, m), dtype=np.int64)
    flat2[:, :n] = f2
    flat2[:, n] = (s2_flat, 0, 2 - s2_flat)
    flat2[:, n + 1] = (s1_flat, 2 - s1_flat, 0)

    shapes2 = np.concatenate([d.shapes, [w1, w2]])
    out = NzDatum(G2, Gp2, Gpp2, d.n_edges + 2, shapes2, flat2)
    validate(out)
    return out


def fill_fold(
    d: NzDatum, f_row: int, g_row: int, alpha_row: int, t1: int, t2: int
) -> tuple[NzDatum, complex]:
    """Collapse a Dehn filling pattern: remove the tetrahedron pair (t1, t2),
    fold the two edge rows f_row and g_row into one, and drop the filled
    curve row alpha_row.

    Returns the folded datum together with gamma = log z'_{t1} - log z'_{t2},
    the log holonomy of the core curve. The one-loop determinant of the input
    equals, up to sign, that of the folded datum times 4 sinh^2(gamma / 2).
    """
    n = d.n
    idx = (f_row, g_row, alpha_row)
    if len(set(idx)) != 3:
        raise PatternMismatch("f_row, g_row, alpha_row must be distinct")
    if not (0 <= f_row < d.n_edges and 0 <= g_row < d.n_edges):
        raise PatternMismatch("f_row and g_row must be edge rows")
    if not d.n_edges <= alpha_row < n:
        raise PatternMismatch("alpha_row must be a curve row")
    if t1 == t2 or not (0 <= t1 < n and 0 <= t2 < n):
        raise PatternMismatch("t1, t2 must be distinct column indices")

    for t in (t1, t2):
        if np.any(d.G[:, t] != 0):
            raise PatternMismatch(f"column {t} meets a row through log z")
        if tuple(d.flattening2[:, t]) != (0, 1, 1):
            raise PatternMismatch(f"column {t} flattening is not (0, 1/2, 1/2)")
    for r in range(n):
        p1, p2 = d.Gp[r, t1], d.Gp[r, t2]
        q1, q2 = d.Gpp[r, t1], d.Gpp[r, t2]
        if r == f_row:
            want = (1, 1, 0, 0)
        elif r == g_row:
            want = (0, 0, 1, 1)
        elif r == alpha_row:
            want = (1, -1, -1, 1)
        else:
            want = (0, 0, 0, 0)
        if (p1, p2, q1, q2) != want:
            raise PatternMismatch(f"row {r} meets the filled pair as {(p1, p2, q1, q2)}")
    alpha_other = [c for c in range(n) if c not in (t1, t2)]
    for mat in (d.G, d.Gp, d.Gpp):
        if np.any(mat[alpha_row, alpha_other] != 0):
            raise PatternMismatch("filled curve row meets tetrahedra outside the pair")

    z1, z2 = d.shapes[t1], d.shapes[t2]
    if abs(z1 * z2 - 1.0) > 1e-9:
        raise PatternMismatch(f"filled pair shapes have product {z1 * z2}, expected 1")

    gamma = complex(np.log(1.0 / (1.0 - z1)) - np.log(1.0 / (1.0 - z2)))
    weight = 4.0 * np.sinh(gamma / 2.0) ** 2
    if abs(weight) < 1e-12:
        raise DegenerateFill(f"core holonomy weight {weight} vanishes")

    keep_cols = np.array(alpha_other)
    lo, hi = min(f_row, g_row), max(f_row, g_row)
    keep_rows = [r for r in range(n) if r not in (hi, alpha_row)]

    def shrink(mat: np.ndarray) -> np.ndarray:
        out = mat.copy()
        out[lo] = mat[f_row] + mat[g_row]
        return out[np.ix_(keep_rows, keep_cols)]

    out = NzDatum(
        shrink(d.G),
        shrink(d.Gp),
        shrink(d.Gpp),
        d.n_edges - 1,
        d.shapes[keep_cols],
        d.flattening2[:, keep_cols],
    )
    validate(out)
    return out, gamma


def surgery_factor(gamma_holonomies) -> complex:
    """Dehn-surgery scaling of the one-loop determinant.

    Product of 1 / (4 sinh^2(H(gamma)/2)) over the filled core curves. The
    equivalent normalization 2^(-2m) prod 1/sinh^2 gives the same number, m
    being the number of curves. Raises DegenerateFill when a factor blows up.
    """
    out = complex(1.0)
    for hg in gamma_holonomies:
        w = 4.0 * np.sinh(complex(hg) / 2.0) ** 2
        if abs(w) < 1e-12:
            raise DegenerateFill(f"core holonomy {hg} has sinh(H/2) = 0")
        out /= w
    return out


def direct_sum(data: list[NzDatum]) -> NzDatum:
    """Disjoint union of gluing data, edge rows gathered before curve rows."""
    if not data:
        raise InputError("direct_sum of no data")
    n = sum(d.n for d in data)
    G = np.zeros((n, n), dtype=np.int64)
    Gp = np.zeros((n, n), dtype=np.int64)
    Gpp = np.zeros((n, n), dtype=np.int64)
    shapes = np.concatenate([d.shapes for d in data])
    flat2 = np.concatenate([d.flattening2 for d in data], axis=1)
    n_edges = sum(d.n_edges for d in data)
    r_edge, r_curve, col = 0, n_edges, 0
    for d in data:
        for big, small in ((G, d.G), (Gp, d.Gp), (Gpp, d.Gpp)):
            big[r_edge : r_edge + d.n_edges, col : col + d.n] = small[: d.n_edges]
            big[r_curve : r_curve + d.n_curves, col : col + d.n] = small[d.n_edges :]
        r_edge += d.n_edges
        r_curve += d.n_curves
        col += d.n
    return NzDatum(G, Gp, Gpp, n_edges, shapes, flat2)


def _quad_rotate(d: NzDatum, col: int) -> None:
    # relabel z -> 1/(1-z) at one tetrahedron; coefficients and flattening
    # rotate with it and every row keeps its value
    z = d.shapes[col]
    d.shapes[col] = 1.0 / (1.0 - z)
    g, gp, gpp = d.G[:, col].copy(), d.Gp[:, col].copy(), d.Gpp[:, col].copy()
    d.G[:, col], d.Gp[:, col], d.Gpp[:, col] = gp, gpp, g
    f, fp, fpp = d.flattening2[:, col]
    d.flattening2[:, col] = (fp, fpp, f)


def _random_move(d: NzDatum, rng: np.random.Generator) -> None:
    ne, nc, n = d.n_edges, d.n_curves, d.n
    kind = rng.integers(0, 5)
    if kind == 0 and ne >= 3:
        # edge += edge - edge keeps the winding integral and the sum 4
        i, j, k = rng.choice(ne, size=3, replace=False)
        for mat in (d.G, d.Gp, d.Gpp):
            mat[i] += mat[j] - mat[k]
    elif kind == 1 and nc >= 1 and ne >= 2:
        i = ne + rng.integers(0, nc)
        j, k = rng.choice(ne, size=2, replace=False)
        for mat in (d.G, d.Gp, d.Gpp):
            mat[i] += mat[j] - mat[k]
    elif kind == 2 and nc >= 2:
        i, j = ne + rng.choice(nc, size=2, replace=False)
        for mat in (d.G, d.Gp, d.Gpp):
            mat[i] += mat[j]
    elif kind == 3 and nc >= 1:
        i = ne + rng.integers(0, nc)
        for mat in (d.G, d.Gp, d.Gpp):
            mat[i] *= -1
    else:
        # quad rotation is deliberately not on this menu: it keeps the
        # symmetric determinant but flips the plain one's sign, so data
        # reached here satisfy one_loop == one_loop_symmetric on the nose
        sigma = rng.permutation(n)
        d.G, d.Gp, d.Gpp = d.G[:, sigma], d.Gp[:, sigma], d.Gpp[:, sigma]
        d.shapes = d.shapes[sigma]
        d.flattening2 = d.flattening2[:, sigma]


def perturbed_datum(
    base: NzDatum, rng: np.random.Generator, n_moves: int = 12
) -> NzDatum:
    """Random valid datum produced from base by validity-preserving moves.

    Moves: integer row operations with flattening-neutral coefficients,
    curve negations, and column permutations. The result passes validate
    and has a one-loop determinant bounded away from zero; curve targets
    generally differ from base.
    """
    for _ in range(32):
        d = base.copy()
        for _ in range(n_moves):
            _random_move(d, rng)
        try:
            validate(d)
        except (InputError, FlatteningBroken, DegenerateShape):
            continue
        if abs(one_loop(d)) > 1e-6:
            return d
    raise NoConvergence("could not reach a nondegenerate random datum")


def _synthetic_unfill(
    d: NzDatum, edge_row: int, rng: np.random.Generator
) -> tuple[NzDatum, int, int, int, int, int]:
    """Inverse of fill_fold for exercising the surgery relation.

    Splits the chosen edge row into two halves f + g (the f half drawn at
    random with flattening side weight exactly 1), appends two tetrahedra
    with z1 z2 = 1 completing each half to an edge row, and adds the core
    curve row. z1 is pinned by requiring the f row to close up:
    (1 - z1)(1 - z2) = exp(value of the f half), so z1 + z2 = 2 - exp(h_f).
    Folding the result along the new columns returns d exactly.

    Returns (datum, f_row, g_row, alpha_row, t1, t2) ready for fill_fold.
    """
    if not 0 <= edge_row < d.n_edges:
        raise InvalidSplit(f"row {edge_row} is not an edge row")
    whole = np.stack([d.G[edge_row], d.Gp[edge_row], d.Gpp[edge_row]])
    for _ in range(200):
        sf = rng.integers(-2, 3, size=(3, d.n))
        if int((sf * d.flattening2).sum()) == 2:
            break
    else:
        raise NoConvergence("no flattening-balanced split found")
    sg = whole - sf
    logs = _logs(d.shapes)
    hf = complex(sf[0] @ logs[0] + sf[1] @ logs[1] + sf[2] @ logs[2])
    s = 2.0 - np.exp(hf)
    z1 = (s + np.sqrt(complex(s * s - 4.0))) / 2.0
    z2 = 1.0 / z1
    n, ne = d.n, d.n_edges
    m = n + 2
    G = np.zeros((m, m), dtype=np.int64)
    Gp = np.zeros((m, m), dtype=np.int64)
    Gpp = np.zeros((m, m), dtype=np.int64)
    for r in range(ne):
        src = sf if r == edge_row else (d.G[r], d.Gp[r], d.Gpp[r])
        G[r, :n], Gp[r, :n], Gpp[r, :n] = src
    G[ne, :n], Gp[ne, :n], Gpp[ne, :n] = sg
    Gp[edge_row, n] = Gp[edge_row, n + 1] = 1
    Gpp[ne, n] = Gpp[ne, n + 1] = 1
    for r in range(ne, n):
        G[r + 1, :n], Gp[r + 1, :n], Gpp[r + 1, :n] = d.G[r], d.Gp[r], d.Gpp[r]
    a = m - 1
    Gp[a, n], Gpp[a, n], Gp[a, n + 1], Gpp[a, n + 1] = 1, -1, -1, 1
    flat2 = np.zeros((3, m), dtype=np.int64)
    flat2[:, :n] = d.flattening2
    flat2[:, n] = flat2[:, n + 1] = (0, 1, 1)
    shapes = np.concatenate([d.shapes, [z1, z2]])
    big = NzDatum(G, Gp, Gpp, ne + 1, shapes, flat2)
    validate(big)
    return big, edge_row, ne, a, n, n + 1
