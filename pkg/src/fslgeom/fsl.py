"""Fundamental shadow link complexes built from blocks and face gluings.

A complex is c blocks with all 4c boundary spheres glued in pairs, marked
points to marked points. Gluing identifies block edges, and the identified
classes are the link components; each component carries one logarithmic
meridian holonomy, pulled back to the six edges of every block it visits
with a per-block orientation sign (two blocks glued along a face are mirror
images and read a shared meridian in opposite directions).

Once the pullback is done the gluing equations decouple into the c block
systems, so volume, one-loop determinant, and torsion are all products or
sums of per-block quantities; the only global input is the component
structure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import dblock, nz
from .errors import InputError, MalformedGluing, SingularGram, SingularJacobian

Face = tuple[int, int]  # (block index 0-based, face index 1..4)


@dataclass(frozen=True)
class FaceGluing:
    """One face pairing: src face to dst face, with the induced bijection of
    the three incident edges (keys are src edges, values dst edges)."""

    src: Face
    dst: Face
    edge_map: dict[int, int]


def _check_face(face, c: int) -> Face:
    try:
        b, f = int(face[0]), int(face[1])
    except (TypeError, ValueError, IndexError) as exc:
        raise MalformedGluing(f"face {face!r} is not a (block, face) pair") from exc
    if not 0 <= b < c:
        raise MalformedGluing(f"block {b} out of range 0..{c - 1}")
    if f not in (1, 2, 3, 4):
        raise MalformedGluing(f"face {f} out of range 1..4")
    return b, f


def derive_components(c: int, gluings) -> list[list[tuple[int, int]]]:
    """Partition the 6c (block, edge) pairs into link components.

    Every face must occur in exactly one gluing and every edge_map must carry
    the three edges incident to the source face onto those of the target
    face; MalformedGluing otherwise. Components come back as sorted lists,
    ordered by their smallest member.
    """
    if c < 1:
        raise MalformedGluing(f"block count {c} must be positive")
    seen: set[Face] = set()
    parent: dict[tuple[int, int], tuple[int, int]] = {
        (b, e): (b, e) for b in range(c) for e in range(1, 7)
    }

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for g in gluings:
        src = _check_face(g.src, c)
        dst = _check_face(g.dst, c)
        for face in (src, dst):
            if face in seen:
                raise MalformedGluing(f"face {face} glued more than once")
            seen.add(face)
        if src == dst:
            raise MalformedGluing(f"face {src} glued to itself")
        src_edges = set(dblock.FACE_EDGES[src[1]])
        dst_edges = set(dblock.FACE_EDGES[dst[1]])
        emap = {int(k): int(v) for k, v in g.edge_map.items()}
        if set(emap.keys()) != src_edges or set(emap.values()) != dst_edges:
            raise MalformedGluing(
                f"edge_map {emap} is not a bijection {sorted(src_edges)} -> {sorted(dst_edges)}"
            )
        for e_src, e_dst in emap.items():
            union((src[0], e_src), (dst[0], e_dst))

    missing = {(b, f) for b in range(c) for f in (1, 2, 3, 4)} - seen
    if missing:
        raise MalformedGluing(f"faces {sorted(missing)} left unglued")

    classes: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for pair in parent:
        classes.setdefault(find(pair), []).append(pair)
    components = [sorted(v) for v in classes.values()]
    components.sort(key=lambda comp: comp[0])
    return components


def derive_block_signs(c: int, gluings) -> list[int]:
    """Per-block orientation sign of the holonomy pullback.

    Blocks identified along a face are mirror images, so they traverse a
    shared component's meridian in opposite directions: the sign flips
    across every gluing.  A consistent alternating assignment exists exactly
    when the gluing graph on blocks is bipartite; it is then normalized so
    the first block of each connected piece reads positively.  A doubled
    block is the canonical bipartite case, its two copies reading opposite
    signs.  When a chain of gluings returns to a block after an odd number
    of steps (a block glued to itself, in the smallest case) no alternating
    assignment closes up and every block reads positively.
    """
    adj: list[list[int]] = [[] for _ in range(c)]
    for g in gluings:
        adj[g.src[0]].append(g.dst[0])
        adj[g.dst[0]].append(g.src[0])
    sign = [0] * c
    for start in range(c):
        if sign[start]:
            continue
        sign[start] = 1
        stack = [start]
        while stack:
            b = stack.pop()
            for nb in adj[b]:
                if sign[nb] == 0:
                    sign[nb] = -sign[b]
                    stack.append(nb)
                elif sign[nb] == sign[b]:
                    return [1] * c
    return sign


@dataclass
class FslComplex:
    """c glued blocks with one meridian holonomy per link component."""

    c: int
    gluings: list[FaceGluing]
    holonomies: list[complex]
    components: list[list[tuple[int, int]]] = field(init=False)
    block_signs: list[int] = field(init=False)

    def __post_init__(self) -> None:
        self.holonomies = [complex(v) for v in self.holonomies]
        self.components = derive_components(self.c, self.gluings)
        if len(self.holonomies) != len(self.components):
            raise InputError(
                f"{len(self.holonomies)} holonomies for {len(self.components)} components"
            )
        self.block_signs = derive_block_signs(self.c, self.gluings)
        self._comp_of = {
            pair: i for i, comp in enumerate(self.components) for pair in comp
        }

    def with_holonomies(self, holonomies) -> "FslComplex":
        return FslComplex(self.c, self.gluings, list(holonomies))

    def block_holonomies(self, b: int) -> np.ndarray:
        """Pulled-back 6-vector: edge l of block b reads its component,
        oriented by the block's sign."""
        s = self.block_signs[b]
        return np.array(
            [s * self.holonomies[self._comp_of[(b, e)]] for e in range(1, 7)],
            dtype=complex,
        )


@dataclass
class FslSolution:
    blocks: list[dblock.BlockSolution]

    @property
    def shapes(self) -> np.ndarray:
        return np.concatenate([s.shapes for s in self.blocks])


def assemble_solution(x: FslComplex) -> FslSolution:
    """Explicit solution of every block system with pulled-back holonomies."""
    blocks = []
    for b in range(x.c):
        try:
            blocks.append(dblock.solve_block_explicit(x.block_holonomies(b)))
        except Exception as exc:
            exc.args = (f"block {b}: {exc.args[0] if exc.args else exc}",)
            raise
    return FslSolution(blocks)


def total_volume(x: FslComplex) -> float:
    """Hyperbolic volume: sum of the block volumes."""
    return float(sum(dblock.block_volume(x.block_holonomies(b)) for b in range(x.c)))


def hyperideal_volume(theta) -> float:
    """Volume of the truncated tetrahedron with real dihedral angles theta.

    One quarter of the sum of the doubled-block volumes at holonomies
    +-2 i theta; the average over both signs keeps the value real.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (6,):
        raise InputError("theta must have six entries")
    return 0.25 * (dblock.block_volume(2j * theta) + dblock.block_volume(-2j * theta))


def fsl_oneloop(x: FslComplex) -> complex:
    """One-loop determinant of the complex, defined up to {1, -1, i, -i}.

    The gluing equations decouple into the block systems, so the invariant
    is 2^(-2c) times the product over blocks of the block Jacobian
    determinant divided by the flattening monomial.
    """
    total = complex(1.0)
    for b in range(x.c):
        shapes = dblock.block_shapes(x.block_holonomies(b))
        det = complex(np.linalg.det(dblock.block_jacobian(shapes)))
        total *= det / dblock._flattening_product(shapes, dblock.FLAT_SYM2)
    return 4.0 ** (-x.c) * total


def fsl_torsion(x: FslComplex) -> complex:
    """Adjoint twisted torsion: 2^(3c) times the product of principal square
    roots of the block Gram determinants, defined up to {1, -1, i, -i}."""
    out = complex(8.0**x.c)
    for b in range(x.c):
        dg = dblock.gram_det(x.block_holonomies(b))
        if abs(dg) < 1e-12:
            raise SingularGram(f"block {b} Gram determinant {dg} vanishes")
        out *= np.sqrt(dg)
    return out


def _global_log_shapes(x: FslComplex, holonomies) -> np.ndarray:
    y = x.with_holonomies(holonomies)
    shapes = assemble_solution(y).shapes
    return np.concatenate([np.log(shapes), np.log(1.0 / (1.0 - shapes)), np.log(1.0 - 1.0 / shapes)])


def curve_holonomy_map(x: FslComplex, pq, descriptors):
    """The map h -> H(alpha') for the transformed curve system.

    Component i's new curve is p_i times its meridian plus q_i times a
    descriptor curve, where descriptor i is a (3, 8c) integer matrix of
    coefficients against the global (log z, log z', log z'') vectors at the
    assembled solution.
    """
    m = len(x.components)
    if len(pq) != m or len(descriptors) != m:
        raise InputError(f"need {m} (p, q) pairs and descriptors")
    desc = [np.asarray(dd, dtype=float).reshape(3, 8 * x.c) for dd in descriptors]

    def evaluate(holonomies) -> np.ndarray:
        logs = _global_log_shapes(x, holonomies).reshape(3, 8 * x.c)
        out = np.empty(m, dtype=complex)
        for i, (p, q) in enumerate(pq):
            out[i] = p * complex(holonomies[i]) + q * complex((desc[i] * logs).sum())
        return out

    return evaluate


def change_of_curves_factor(x: FslComplex, pq, descriptors, step: float = 1e-6) -> complex:
    """det of the Jacobian of the new curve holonomies in the meridian ones.

    Central finite differences through the assembled solution; this is the
    factor relating the one-loop determinant in the two curve systems.
    """
    m = len(x.components)
    evaluate = curve_holonomy_map(x, pq, descriptors)
    base = np.asarray(x.holonomies, dtype=complex)
    jac = np.empty((m, m), dtype=complex)
    for j in range(m):
        bump = np.zeros(m, dtype=complex)
        bump[j] = step
        jac[:, j] = (evaluate(base + bump) - evaluate(base - bump)) / (2.0 * step)
    det = complex(np.linalg.det(jac))
    if abs(det) < 1e-12:
        raise SingularJacobian(f"curve system Jacobian determinant {det} vanishes")
    return det


def _meridian_datum(x: FslComplex) -> tuple[nz.NzDatum, list[int]]:
    """Global datum in curve normal form, plus its designated curve rows.

    Direct sum of the per-block data, with every duplicate meridian row of a
    component replaced by (duplicate - relative sign * first member), the
    relative sign accounting for the blocks' pullback orientations. The
    difference rows have target 0, so exactly one row per component carries
    its holonomy, normalized to read it positively; those designated rows
    are where a change of curve system acts.
    """
    data = [dblock.block_datum(x.block_holonomies(b)) for b in range(x.c)]
    d = nz.direct_sum(data)
    ne = d.n_edges

    def curve_row(b: int, l: int) -> int:
        return ne + 6 * b + (l - 1)

    base = (d.G.copy(), d.Gp.copy(), d.Gpp.copy())
    designated = []
    for comp in x.components:
        b0, l0 = comp[0]
        r0 = curve_row(b0, l0)
        designated.append(r0)
        for b, l in comp[1:]:
            r = curve_row(b, l)
            s = x.block_signs[b] * x.block_signs[b0]
            for mat, mat0 in zip((d.G, d.Gp, d.Gpp), base):
                mat[r] = mat0[r] - s * mat0[r0]
        if x.block_signs[b0] < 0:
            for mat in (d.G, d.Gp, d.Gpp):
                mat[r0] = -mat[r0]
    nz.validate(d)
    return d, designated


def _replace_designated(
    d: nz.NzDatum, designated: list[int], pq, descriptors
) -> nz.NzDatum:
    """Swap the designated curve rows for p*(old row) + q*(descriptor).

    Descriptors are (3, n) integer functionals of the log-shapes; they must
    carry zero flattening weight so the flattening conditions survive.
    """
    out = d.copy()
    for i, r in enumerate(designated):
        p, q = pq[i]
        dd = np.asarray(descriptors[i], dtype=np.int64).reshape(3, d.n)
        out.G[r] = p * d.G[r] + q * dd[0]
        out.Gp[r] = p * d.Gp[r] + q * dd[1]
        out.Gpp[r] = p * d.Gpp[r] + q * dd[2]
    nz.flattening_check(out)
    return out
