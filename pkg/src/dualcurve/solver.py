"""Solver for the dual Minkowski problem with discrete even data.

Given an even measure mu with atom pairs on the sphere and an index
q in (0, n], find a symmetric polytope whose index-q dual curvature
measure is mu.  The solution maximizes

    Phi(K) = -(1/|mu|) sum gamma_i log h_K(v_i) + log Vbar_q(K)

over Wulff shapes on mu's support directions, by gradient ascent in the
log offsets with Armijo backtracking, after a subspace-mass feasibility
check.  The functional is scale invariant; the maximizer is rescaled at
the end so the measure totals match.
"""

import itertools
import math

import numpy as np

from .body_core import GeometryError, HPolytope, SmoothBody, wulff_shape
from .measures import (DiscreteSphericalMeasure, _atoms_2d_arc,
                       _atoms_3d_radial, dual_curvature,
                       dual_quermassintegral, measure_l1)
from .quadrature import unit_ball_volume


class SubspaceQuery:
    """A linear subspace spanned by atom directions, with its dimension."""

    def __init__(self, basis):
        basis = np.atleast_2d(np.asarray(basis, float))
        q, _ = np.linalg.qr(basis.T)
        self.basis = q.T.copy()
        self.dim = self.basis.shape[0]

    def contains(self, v, tol=1e-9):
        v = np.asarray(v, float)
        resid = v - self.basis.T @ (self.basis @ v)
        return np.linalg.norm(resid) <= tol

    def __repr__(self):
        return f"SubspaceQuery(dim={self.dim})"


class FeasibilityResult:
    def __init__(self, feasible, ratio=0.0, bound=1.0, worst=None):
        self.feasible = bool(feasible)
        self.ratio = float(ratio)
        self.bound = float(bound)
        self.worst = worst

    def __bool__(self):
        return self.feasible

    def __repr__(self):
        return (f"FeasibilityResult(feasible={self.feasible}, ratio={self.ratio:.6g}, "
                f"bound={self.bound:.6g}, worst={self.worst})")


class SolverConfig:
    """Knobs for the ascent: tolerance on the L1 gradient (= the measure
    residual at the optimum), iteration cap, and backtracking parameters."""

    def __init__(self, q, tol=1e-6, max_iter=10000, step_init=1.0,
                 step_shrink=0.5, armijo=1e-4, h0=None,
                 degree=8, subdiv=1):
        if tol <= 0:
            raise GeometryError("tol must be positive")
        if q <= 0:
            raise GeometryError("q must be positive")
        self.q = float(q)
        self.tol = float(tol)
        self.max_iter = int(max_iter)
        self.step_init = float(step_init)
        self.step_shrink = float(step_shrink)
        self.armijo = float(armijo)
        self.h0 = None if h0 is None else np.asarray(h0, float)
        self.degree = int(degree)
        self.subdiv = int(subdiv)


class SolverReport:
    def __init__(self, body, residual, phi_trace, iterations, feasible,
                 converged, message="", residual_trace=None, step_trace=None):
        self.body = body
        self.residual = residual
        self.phi_trace = phi_trace
        self.iterations = iterations
        self.feasible = feasible
        self.converged = converged
        self.message = message
        self.residual_trace = residual_trace or []
        self.step_trace = step_trace or []

    def __repr__(self):
        return (f"SolverReport(feasible={self.feasible}, converged={self.converged}, "
                f"iterations={self.iterations}, residual={self.residual!r})")


def check_subspace_mass(mu, q):
    """Strict subspace mass bounds for even measures and q in (0, n].

    For q in [1, n] every proper subspace of dimension d may hold at most
    (strictly less than) 1 - (n-d)/((n-1) q') of the total mass, where
    q' = q/(q-1); for q in (0, 1) only full concentration on a proper
    subspace is excluded.  The supremum over subspaces is attained on
    spans of atom directions, so subsets of size <= n-1 are enumerated
    exhaustively (fine at desk scale).
    """
    if not isinstance(mu, DiscreteSphericalMeasure):
        raise GeometryError("expected a DiscreteSphericalMeasure")
    if not mu.even:
        raise GeometryError("measure must be even")
    total = mu.total
    if total <= 0:
        raise GeometryError("measure must have positive total mass")
    n = mu.dim
    if q <= 0 or q > n:
        raise GeometryError("q must lie in (0, n]")
    reps = _pair_representatives(mu)
    worst = FeasibilityResult(True, 0.0, 1.0, None)
    for d in range(1, n):
        bound = _mass_bound(n, d, q)
        for subset in itertools.combinations(reps, d):
            basis = mu.dirs[list(subset)]
            if np.linalg.matrix_rank(basis, tol=1e-10) < d:
                continue
            sub = SubspaceQuery(basis)
            mass = sum(w for v, w in zip(mu.dirs, mu.weights) if sub.contains(v))
            ratio = mass / total
            margin = bound - ratio
            if margin < worst.bound - worst.ratio:
                worst = FeasibilityResult(ratio < bound - 1e-12, ratio, bound, sub)
    return worst


def _mass_bound(n, d, q):
    if q < 1.0:
        # only hyperplane concentration is excluded below q = 1
        return 1.0 if d == n - 1 else math.inf
    if q == 1.0:
        return 1.0
    qp = q / (q - 1.0)
    return 1.0 - (n - d) / ((n - 1.0) * qp)


def _pair_representatives(mu, tol=1e-9):
    reps = []
    seen = np.zeros(len(mu.dirs), dtype=bool)
    for i in range(len(mu.dirs)):
        if seen[i]:
            continue
        d = np.linalg.norm(mu.dirs + mu.dirs[i], axis=1)
        j = int(np.argmin(d))
        if d[j] > tol:
            raise GeometryError("measure must be even")
        seen[i] = seen[j] = True
        reps.append(i)
    return reps


def phi_mu(K, mu, q):
    """The maximized functional: minus the mu-mean of log support plus the
    log normalized dual volume.  Scale invariant."""
    total = mu.total
    if total <= 0:
        raise GeometryError("measure must have positive total mass")
    if isinstance(K, (HPolytope, SmoothBody)):
        hs = np.array([K.support(v) for v in mu.dirs])
    else:
        raise GeometryError("phi is defined for polytopes and smooth bodies")
    vbar = dual_quermassintegral(K, q).normalized
    return float(-(mu.weights @ np.log(hs)) / total + math.log(vbar))


def phi_gradient(K, mu, q, degree=8, subdiv=1):
    """Exact gradient of phi in the log offsets, one component per atom
    direction: c_i / W - gamma_i / |mu| with W the sum of the atoms.

    Components of inactive facets carry c_i = 0, which pushes their
    offsets back inward.
    """
    K = _as_wulff_on(K, mu)
    atoms = _atoms_on_dirs(K, q, degree, subdiv)
    w_total = float(atoms.sum())
    return atoms / w_total - mu.weights / mu.total


def _as_wulff_on(K, mu, tol=1e-9):
    """Restrict K to a Wulff shape on mu's support directions."""
    if isinstance(K, HPolytope) and len(K.normals) == len(mu.dirs):
        d = np.linalg.norm(K.normals - mu.dirs, axis=1)
        if (d <= tol).all():
            return K
    hs = np.array([K.support(v) for v in mu.dirs])
    return wulff_shape(mu.dirs, hs)


def _atoms_on_dirs(K, q, degree, subdiv):
    # near-exact evaluators; they keep the atom/objective pair consistent so
    # the gradient residual can actually reach the tolerance
    if K.dim == 3:
        return _atoms_3d_radial(K, q)
    if K.dim == 2:
        return _atoms_2d_arc(K, q)
    meas = dual_curvature(K, q, degree=degree, subdiv=subdiv)
    return meas.weights.copy()


def solve_dual_minkowski(mu, cfg):
    """Gradient ascent for the dual Minkowski problem.

    Returns a SolverReport; report.body carries the rescaled solution with
    its dual curvature measure matching mu within report.residual (L1,
    normalized by |mu|).  Infeasible data short-circuits with
    feasible=False and no iterations.
    """
    if not isinstance(cfg, SolverConfig):
        cfg = SolverConfig(q=float(cfg))
    q = cfg.q
    n = mu.dim
    if n not in (2, 3):
        raise GeometryError("solver supports n in {2, 3}")
    if q > n:
        raise GeometryError("q must lie in (0, n]")
    feas = check_subspace_mass(mu, q)
    if not feas.feasible:
        return SolverReport(None, math.inf, [], 0, False, False,
                            message="subspace mass bound violated")

    reps = _pair_representatives(mu)
    partner = _pair_partners(mu, reps)
    dirs = mu.dirs
    total = mu.total
    gamma = mu.weights
    omega = unit_ball_volume(n)

    base = wulff_shape(dirs, np.ones(len(dirs)))
    if cfg.h0 is not None:
        base = base.with_offsets(np.asarray(cfg.h0, float))

    def atoms_of(body):
        return _atoms_on_dirs(body, q, cfg.degree, cfg.subdiv)

    def phi_from_atoms(x_full, atoms):
        w = float(atoms.sum())
        if not (w > 0 and math.isfinite(w)):
            return -math.inf  # degenerate trial body; line search rejects it
        return float(-(gamma @ x_full) / total + (math.log(w) - math.log(omega)) / q)

    x = np.log(base.offsets)
    body = base.with_offsets(np.exp(x))
    atoms = atoms_of(body)
    phi = phi_from_atoms(x, atoms)
    phi_trace = [phi]
    residual_trace = []
    step_trace = []
    converged = False
    message = ""
    it = 0
    last_step = cfg.step_init
    for it in range(1, cfg.max_iter + 1):
        grad = atoms / atoms.sum() - gamma / total
        res = float(np.abs(grad).sum())
        residual_trace.append(res)
        if res <= cfg.tol:
            converged = True
            step_trace.append(0.0)
            break
        # log-mismatch ascent direction: Newton-like scaling for small atoms,
        # and grad . d >= 0 because a - b and log a - log b share signs
        with np.errstate(divide="ignore"):
            d = np.log(np.maximum(atoms / atoms.sum(), 1e-300)) - np.log(gamma / total)
        d = np.clip(d, -50.0, 50.0)  # keeps exp(x + step*d) finite
        # symmetrize over atom pairs so iterates stay origin-symmetric
        for i in reps:
            avg = 0.5 * (d[i] + d[partner[i]])
            d[i] = d[partner[i]] = avg
        slope = float(grad @ d)
        # warm start: retry near the last accepted step instead of step_init
        step = min(cfg.step_init, last_step / cfg.step_shrink)
        accepted = False
        while step > 1e-18:
            x_new = x + step * d
            body_new = base.with_offsets(np.exp(x_new))
            atoms_new = atoms_of(body_new)
            phi_new = phi_from_atoms(x_new, atoms_new)
            if phi_new >= phi + cfg.armijo * step * slope:
                accepted = True
                break
            step *= cfg.step_shrink
        if not accepted:
            message = "line search stalled"
            step_trace.append(0.0)
            break
        x, body, atoms, phi = x_new, body_new, atoms_new, phi_new
        phi_trace.append(phi)
        step_trace.append(step)
        last_step = step
    else:
        message = "max_iter exceeded"

    # rescale so the measure totals match: the atoms scale with degree q
    lam = (total / float(atoms.sum())) ** (1.0 / q)
    final = body.with_offsets(body.offsets * lam)
    final_atoms = atoms_of(final)
    residual = float(np.abs(final_atoms - gamma).sum()) / total
    return SolverReport(final, residual, phi_trace, it, True, converged,
                        message=message, residual_trace=residual_trace,
                        step_trace=step_trace)


def _pair_partners(mu, reps, tol=1e-9):
    partner = {}
    for i in range(len(mu.dirs)):
        d = np.linalg.norm(mu.dirs + mu.dirs[i], axis=1)
        j = int(np.argmin(d))
        partner[i] = j
    return partner
