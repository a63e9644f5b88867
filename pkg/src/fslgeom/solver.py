"""Damped Newton iteration for holomorphic gluing systems.

Serves as the independent oracle for the explicit block solution: it only
needs the system and its Jacobian, so agreement is meaningful evidence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateShape, NoConvergence, SingularJacobian


@dataclass
class NewtonConfig:
    max_iters: int = 100
    residual_tol: float = 1e-12
    step_damping: float = 1.0
    max_halvings: int = 20
    shape_tol: float = 1e-10
    det_tol: float = 1e-14


def _check_shapes(z: np.ndarray, tol: float) -> None:
    # gluing systems blow up at 0 and 1; refuse to step onto them
    if np.min(np.abs(z)) <= tol or np.min(np.abs(z - 1.0)) <= tol:
        raise DegenerateShape("iterate hit a degenerate shape")


def newton(
    fun: Callable[[np.ndarray], np.ndarray],
    jac: Callable[[np.ndarray], np.ndarray],
    start: np.ndarray,
    cfg: NewtonConfig | None = None,
) -> np.ndarray:
    """Solve fun(z) = 0 from start, halving steps that increase the residual."""
    cfg = cfg or NewtonConfig()
    z = np.asarray(start, dtype=complex).copy()
    _check_shapes(z, cfg.shape_tol)
    fz = fun(z)
    norm = np.linalg.norm(fz)
    for _ in range(cfg.max_iters):
        if norm <= cfg.residual_tol:
            return z
        J = jac(z)
        det = np.linalg.det(J)
        if abs(det) < cfg.det_tol:
            raise SingularJacobian(f"Jacobian determinant {det} below {cfg.det_tol}")
        step = np.linalg.solve(J, fz)
        scale = cfg.step_damping
        for _ in range(cfg.max_halvings):
            trial = z - scale * step
            try:
                _check_shapes(trial, cfg.shape_tol)
                f_trial = fun(trial)
            except DegenerateShape:
                scale *= 0.5
                continue
            trial_norm = np.linalg.norm(f_trial)
            if trial_norm < norm or trial_norm <= cfg.residual_tol:
                z, fz, norm = trial, f_trial, trial_norm
                break
            scale *= 0.5
        else:
            raise NoConvergence("step halving stalled without residual decrease")
    if norm <= cfg.residual_tol:
        return z
    raise NoConvergence(f"residual {norm} after {cfg.max_iters} iterations")


def newton_generic(G, Gp, Gpp, targets, start, cfg: NewtonConfig | None = None) -> np.ndarray:
    """Newton on the log gluing system of arbitrary integer matrices."""
    from . import nz

    fun, jac = nz.make_system(G, Gp, Gpp, targets)
    return newton(fun, jac, start, cfg)


def newton_block(h, start=None, cfg: NewtonConfig | None = None):
    """Solve the block gluing system at cusp holonomies h, default start all-i.

    Returns a BlockSolution; zstar is read back from the shape of z_4, which
    determines the quadratic root when the solve came from the explicit
    formula. Used to arbitrate the square-root branch of that formula.
    """
    from . import dblock

    if start is None:
        start = np.full(8, 1j)
    shapes = newton_generic(
        dblock.BLOCK_G, dblock.BLOCK_GP, dblock.BLOCK_GPP,
        dblock.block_targets(h), start, cfg,
    )
    return dblock.BlockSolution(shapes=shapes, zstar=dblock.zstar_from_shapes(shapes, h))
