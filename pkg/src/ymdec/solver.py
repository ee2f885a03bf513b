"""Gradient-descent minimization of the Yang-Mills action and of the
self-dual residual over su(2)-valued connections.

Iterates are stored as real coefficient arrays in the su(2) basis, shape
(charts, k-extents, 4 axes, 3), so every update stays exactly in the
algebra.  The objective gradient is assembled in one adjoint sweep over
the curvature stencil (no per-coefficient probing); finite differences
verify it in the test suite.

Plain steepest descent with Armijo backtracking; the line search is
warm-started from a two-point curvature estimate, which handles the stiff
conditioning near the flat-connection manifold without momentum or matrix
state.  The optimizer is a harness for the calculus, not a performance
contribution.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import algebra as alg
from . import gauge
from .calculus import norm_sq, shift_minus, shift_plus
from .cochain import Cochain, interior
from .complex4 import FULL_MASK, MASKS_BY_DEGREE, PERM_SIGN, Domain

OBJECTIVES = ("action", "sd_residual")

_PAIR_INDEX = {pair: n for n, pair in enumerate(gauge.DIR_PAIRS)}


class SolverAbort(RuntimeError):
    """Objective became non-finite or the configuration is unusable."""


@dataclass
class SolverConfig:
    max_iters: int = 5000
    grad_tol: float = 1e-6
    armijo_c: float = 1e-4
    backtrack_factor: float = 0.5
    initial_step: float = 1.0
    objective: str = "action"
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.armijo_c < 1:
            raise ValueError("armijo_c must be in (0, 1)")
        if not 0 < self.backtrack_factor < 1:
            raise ValueError("backtrack_factor must be in (0, 1)")
        if self.initial_step <= 0:
            raise ValueError("initial_step must be positive")
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}")


@dataclass
class SolverReport:
    objective_name: str
    iterations: list = field(default_factory=list)  # (objective, grad max-norm, step)
    converged: bool = False
    reason: str = ""
    final: Cochain | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def n_iters(self) -> int:
        return max(len(self.iterations) - 1, 0)

    def to_dict(self) -> dict:
        return {
            "objective": self.objective_name,
            "converged": self.converged,
            "reason": self.reason,
            "iterations": self.n_iters,
            "trace": [[float(o), float(g), float(s)] for o, g, s in self.iterations],
            "diagnostics": {k: v for k, v in self.diagnostics.items()},
        }


def connection_vectors(A: Cochain) -> np.ndarray:
    """su(2) coefficient array of a connection, shape (..., 4, 3)."""
    if A.degree != 1:
        raise ValueError("needs a degree-1 form")
    return alg.project_su2(A.values)


def vectors_to_connection(domain: Domain, vecs: np.ndarray) -> Cochain:
    return Cochain(domain, 1, alg.embed_su2(vecs))


def action(A: Cochain) -> float:
    """S = |F|^2 over interior cells, via the assembled curvature."""
    return norm_sq(gauge.curvature(A))


def _dual2_values(vals: np.ndarray) -> np.ndarray:
    """Dual map on stacked degree-2 components (stays on the same copy)."""
    out = np.empty_like(vals)
    masks = MASKS_BY_DEGREE[2]
    for d, mask in enumerate(masks):
        out[..., masks.index(FULL_MASK ^ mask), :, :] = PERM_SIGN[mask] * vals[..., d, :, :]
    return out


class _Kernel:
    """Array-level objective/gradient evaluations for one domain."""

    def __init__(self, domain: Domain, objective: str, anti: bool = False):
        self.domain = domain
        self.objective_name = objective
        self.anti = anti
        mask = np.zeros((domain.ncharts, *domain.extents), dtype=np.float64)
        mask[interior(domain)[:5]] = 1.0
        self.mask_dirs = mask[..., None, None, None]   # broadcasts over (dir, 2, 2)
        self.mask_cells = mask[..., None, None]        # broadcasts over (2, 2)

    def curvature(self, mats: np.ndarray) -> np.ndarray:
        """Stacked curvature components from the connection matrices."""
        shape = mats.shape[:-3] + (6, 2, 2)
        F = np.empty(shape, dtype=np.complex128)
        for d, (i, j) in enumerate(gauge.DIR_PAIRS):
            ai = mats[..., i - 1, :, :]
            aj = mats[..., j - 1, :, :]
            aj_i = shift_plus(self.domain, aj, i)
            ai_j = shift_plus(self.domain, ai, j)
            F[..., d, :, :] = (aj_i - aj) - (ai_j - ai) + ai @ aj_i - aj @ ai_j
        return F

    def _residual(self, F: np.ndarray) -> np.ndarray:
        d = _dual2_values(F)
        return F + d if self.anti else F - d

    def objective(self, vecs: np.ndarray) -> float:
        # overflow is legitimate on wild line-search trials; the descent
        # loop checks finiteness and aborts with a diagnostic
        with np.errstate(over="ignore", invalid="ignore"):
            F = self.curvature(alg.embed_su2(vecs))
            if self.objective_name == "sd_residual":
                F = self._residual(F)
            return float(np.sum(np.abs(self.mask_dirs * F) ** 2))

    def gradient(self, vecs: np.ndarray) -> np.ndarray:
        """d(objective)/d(coefficients), one adjoint sweep over the stencil.

        For a weight 2-form W the pairing 2 Re (dF(delta), W) collects, per
        axis i, the matrix
          M_i(n) = sum_{j != i} [W^{ij H}_n + A^j_{tau_i n} W^{ij H}_n]
                               - [W^{ij H} + W^{ij H} A^j](sigma_j n)
        restricted to interior cells; the gradient components are
        2 Re tr(lam_a M_i).  W = F for the action, W = 2 (F -+ dual F) for
        the (anti-)self-dual residual.
        """
        mats = alg.embed_su2(vecs)
        F = self.curvature(mats)
        if self.objective_name == "sd_residual":
            W = 2.0 * self._residual(F)
        else:
            W = F
        Wd = alg.conj_transpose(W)
        M = np.zeros(mats.shape, dtype=np.complex128)
        for i in (1, 2, 3, 4):
            acc = None
            for j in (1, 2, 3, 4):
                if j == i:
                    continue
                d = _PAIR_INDEX[(min(i, j), max(i, j))]
                wij = Wd[..., d, :, :] if i < j else -Wd[..., d, :, :]
                aj = mats[..., j - 1, :, :]
                t1 = self.mask_cells * (wij + shift_plus(self.domain, aj, i) @ wij)
                t2 = self.mask_cells * (wij + wij @ aj)
                term = t1 - shift_minus(self.domain, t2, j)
                acc = term if acc is None else acc + term
            M[..., i - 1, :, :] = acc
        return 2.0 * np.real(np.einsum("ars,...sr->...a", alg.LAMBDA, M))


def action_gradient(A: Cochain) -> np.ndarray:
    """Gradient of the action in the su(2) coefficient basis, shape (..., 4, 3).

    Defining property: for every elementary coefficient direction E,
    grad . E = 2 Re (dE + A u E + E u A, F).
    """
    kern = _Kernel(A.domain, "action")
    return kern.gradient(connection_vectors(A))


def grad_max_norm(grad: np.ndarray) -> float:
    """Max over (chart, cell, axis) of the Euclidean norm of the 3-vector.

    Invariant under constant gauge transforms, which rotate the basis
    coefficients by the adjoint action.
    """
    return float(np.sqrt((grad**2).sum(axis=-1)).max()) if grad.size else 0.0


def _descend(domain: Domain, vecs: np.ndarray, cfg: SolverConfig, kern: _Kernel) -> SolverReport:
    report = SolverReport(objective_name=kern.objective_name)
    obj = kern.objective(vecs)
    if not np.isfinite(obj):
        raise SolverAbort(f"objective not finite at start: {obj}")
    grad = kern.gradient(vecs)
    gmax = grad_max_norm(grad)
    report.iterations.append((obj, gmax, 0.0))
    step = cfg.initial_step
    prev_vecs = prev_grad = None
    for _ in range(cfg.max_iters):
        if gmax <= cfg.grad_tol:
            break
        gsq = float((grad**2).sum())
        # two-point curvature estimate warm-starts the line search; the
        # descent direction stays the raw gradient and every accepted step
        # still passes the Armijo test below
        if prev_vecs is not None:
            dv = (vecs - prev_vecs).ravel()
            dg = (grad - prev_grad).ravel()
            denom = float(dv @ dg)
            step = float(dv @ dv) / denom if denom > 0 else min(step / cfg.backtrack_factor, 1e12)
        while True:
            trial = vecs - step * grad
            trial_obj = kern.objective(trial)
            if not np.isfinite(trial_obj):
                raise SolverAbort(f"objective not finite at step {step}: {trial_obj}")
            if trial_obj <= obj - cfg.armijo_c * step * gsq:
                break
            step *= cfg.backtrack_factor
            if step < 1e-18:
                report.reason = "line search stalled"
                break
        if report.reason:
            break
        prev_vecs, prev_grad = vecs, grad
        vecs, obj = trial, trial_obj
        grad = kern.gradient(vecs)
        gmax = grad_max_norm(grad)
        report.iterations.append((obj, gmax, step))
    if not report.reason:
        if gmax <= cfg.grad_tol:
            report.converged = True
            report.reason = "gradient below tolerance"
        else:
            report.reason = "iteration limit reached"
    final = vectors_to_connection(domain, vecs)
    report.final = final
    F = gauge.curvature(final)
    report.diagnostics = {
        "action": norm_sq(F),
        "ym_residual_norm": gauge.yang_mills_residual_norm(final),
        "sd_residual": gauge.sd_residual(F),
        "bianchi_defect": gauge.bianchi_residual(final),
    }
    return report


def minimize(A0: Cochain, cfg: SolverConfig) -> SolverReport:
    """Projected gradient descent with Armijo backtracking.

    Iterates are coefficient vectors, hence exactly su(2)-valued; stops at
    cfg.grad_tol on the gradient max-norm or at the iteration cap.
    """
    kern = _Kernel(A0.domain, cfg.objective)
    return _descend(A0.domain, connection_vectors(A0), cfg, kern)


def solve_self_dual(A0: Cochain, cfg: SolverConfig, anti: bool = False) -> SolverReport:
    """Minimize |F -+ dual F|^2; reports the three componentwise defects.

    anti=True flips the sign, targeting the anti-self-dual equations.
    """
    kern = _Kernel(A0.domain, "sd_residual", anti=anti)
    report = _descend(A0.domain, connection_vectors(A0), cfg, kern)
    defects = gauge.sd_component_defects(gauge.curvature(report.final), anti=anti)
    report.diagnostics["sd_component_defects"] = [float(x) for x in defects]
    return report
