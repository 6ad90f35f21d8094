"""Geometric measures of convex bodies.

Dual curvature measures (any real index q), dual area, cone-volume,
surface area and its L_p family, dual quermassintegrals with their
normalized dual volumes, the dual Steiner polynomial, the smooth-body
density, and the valuation identity check.

Polytope atoms for q != 0 are computed on facets, where the integrand is
|x|^(q-n) against facet Lebesgue measure; the sphere-side cone integrals
serve as the independent cross-check path.  The q = 0 atoms are closed-form
solid angles.
"""

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _backend, _threads
from .body_core import (Ball, Ellipsoid, GeometryError, HPolytope, SmoothBody,
                        VPolytope, _any_orthonormal, _cross3, as_direction)
from .gauss_maps import ConeCell, cone_partition
from .quadrature import (arc_rule, sphere_rule, spherical_polygon_rule,
                         triangles_to_quadrature, unit_ball_volume)

DEFAULT_DEGREE = 10
DEFAULT_SUBDIV = 3
SMOOTH_LEVELS = {2: 10, 3: 6}
MC_LEVEL = 16


class DiscreteSphericalMeasure:
    """Finite Borel measure on the sphere given by weighted unit-vector atoms."""

    def __init__(self, dirs, weights, even=None):
        dirs = np.atleast_2d(np.asarray(dirs, float)).copy()
        weights = np.asarray(weights, float).copy()
        if len(dirs) != len(weights):
            raise GeometryError("atom directions and weights disagree in length")
        norms = np.linalg.norm(dirs, axis=1)
        if (np.abs(norms - 1.0) > 1e-9).any():
            raise GeometryError("atom directions must be unit vectors")
        fix = np.abs(norms - 1.0) > 1e-12
        if fix.any():
            dirs[fix] /= norms[fix, None]
        if (weights < 0).any():
            raise GeometryError("weights must be nonnegative")
        if len(dirs) > 1:
            gap = np.linalg.norm(dirs[:, None, :] - dirs[None, :, :], axis=2)
            np.fill_diagonal(gap, np.inf)
            if gap.min() <= 1e-9:
                raise GeometryError("atom directions must be pairwise distinct")
        detected = self._detect_even(dirs, weights)
        if even is None:
            even = detected
        elif even and not detected:
            raise GeometryError("measure marked even but atoms are not origin-symmetric")
        self.dim = dirs.shape[1]
        self.dirs = dirs
        self.weights = weights
        self.even = bool(even)
        dirs.flags.writeable = False
        weights.flags.writeable = False

    @staticmethod
    def _detect_even(dirs, weights, tol=1e-9):
        scale = max(1.0, float(weights.max()) if len(weights) else 1.0)
        d = np.linalg.norm(dirs[None, :, :] + dirs[:, None, :], axis=2)
        j = d.argmin(axis=1)
        if (d[np.arange(len(dirs)), j] > tol).any():
            return False
        return bool((np.abs(weights[j] - weights) <= tol * scale).all())

    @property
    def total(self):
        return float(self.weights.sum())

    def weight_at(self, v, tol=1e-9):
        """Atom weight at direction v (0 if no atom lies within tol)."""
        v = as_direction(v)
        d = np.linalg.norm(self.dirs - v, axis=1)
        j = int(np.argmin(d))
        return float(self.weights[j]) if d[j] <= tol else 0.0

    def scaled(self, c):
        return DiscreteSphericalMeasure(self.dirs, self.weights * c, even=self.even)

    def to_dict(self):
        return {
            "dim": self.dim,
            "even": self.even,
            "atoms": [
                {"dir": [float(x) for x in d], "weight": float(w)}
                for d, w in zip(self.dirs, self.weights)
            ],
        }

    @classmethod
    def from_dict(cls, d):
        atoms = d.get("atoms")
        if atoms is None:
            raise GeometryError("expected a measure record with atoms")
        dirs = np.asarray([a["dir"] for a in atoms], float)
        weights = np.asarray([a["weight"] for a in atoms], float)
        if dirs.ndim != 2 or dirs.shape[1] != int(d["dim"]):
            raise GeometryError("atom directions do not match dim")
        return cls(dirs, weights, even=d.get("even"))

    def __len__(self):
        return len(self.weights)

    def __repr__(self):
        return f"DiscreteSphericalMeasure(dim={self.dim}, atoms={len(self)}, total={self.total:.6g})"


def measure_max_discrepancy(mu_a, mu_b, tol=1e-9):
    """Max atom difference over the merged direction set."""
    worst = 0.0
    for d, w in zip(mu_a.dirs, mu_a.weights):
        worst = max(worst, abs(w - mu_b.weight_at(d, tol)))
    for d, w in zip(mu_b.dirs, mu_b.weights):
        worst = max(worst, abs(w - mu_a.weight_at(d, tol)))
    return worst


def measure_l1(mu_a, mu_b, tol=1e-9):
    """L1 distance over the merged direction set."""
    seen = []
    total = 0.0
    for d, w in zip(mu_a.dirs, mu_a.weights):
        total += abs(w - mu_b.weight_at(d, tol))
        seen.append(d)
    for d, w in zip(mu_b.dirs, mu_b.weights):
        if any(np.linalg.norm(d - s) <= tol for s in seen):
            continue
        total += abs(w - mu_a.weight_at(d, tol))
    return total


# -- polytope paths --------------------------------------------------------


def _facet_fan_quadrature(P, degree, subdiv):
    """Stacked facet quadrature points for all active facets of a 3-polytope.

    Returns (points, weights, facet_ids); weights carry facet H^2 measure.
    """
    tris = []
    owner = []
    for i in np.flatnonzero(P.active):
        verts = P.facet_vertices(i)
        for j in range(1, len(verts) - 1):
            tris.append([verts[0], verts[j], verts[j + 1]])
            owner.append(i)
    if not tris:
        raise GeometryError("no active facets")
    pts, wts, tri_idx = triangles_to_quadrature(np.array(tris), degree, subdiv)
    return pts, wts, np.asarray(owner, dtype=np.int64)[tri_idx]


def _edge_angles(P, i):
    """Signed angular span [lo, hi] of edge i's cone about its normal (n=2)."""
    verts = P.facet_vertices(i)
    v = P.normals[i]
    ang = []
    for r in verts:
        ru = r / np.linalg.norm(r)
        ang.append(math.atan2(v[0] * ru[1] - v[1] * ru[0], float(v @ ru)))
    return min(ang), max(ang)


def _atoms_2d(P, q, npts=64):
    """Arc-path atoms: (1/2) h_i^q * integral of sec^q over the edge's arc."""
    atoms = np.zeros(len(P.normals))
    act = P.active
    for i in range(len(P.normals)):
        if not act[i]:
            continue
        lo, hi = _edge_angles(P, i)
        th, w = arc_rule(lo, hi, npts)
        atoms[i] = 0.5 * P.offsets[i] ** q * float(w @ np.cos(th) ** (-q))
    return atoms


def _atoms_3d(P, q, degree, subdiv):
    """Facet-path atoms: (h_i/3) * integral of |x|^(q-3) over the facet."""
    pts, wts, ids = _facet_fan_quadrature(P, degree, subdiv)
    m = len(P.normals)
    workers = _threads.worker_count()
    if workers > 1 and len(pts) > 4096:
        chunks = np.array_split(np.arange(len(pts)), workers)
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = ex.map(
                lambda sel: _backend.facet_power_sums(pts[sel], wts[sel], ids[sel], m, q - 3.0),
                chunks,
            )
        sums = np.sum(list(parts), axis=0)
    else:
        sums = _backend.facet_power_sums(pts, wts, ids, m, q - 3.0)
    return P.offsets * sums / 3.0


_GL_CACHE = {}


def _gauss_nodes(n):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def _atoms_3d_radial(P, q, n_nodes=16, n_panels=8):
    """Facet-path atoms with the radial direction integrated in closed form.

    On facet i the integrand |x|^(q-3) depends on the in-plane radius r
    about the foot of the perpendicular through h_i v_i only via
    (h_i^2 + r^2); integrating r out leaves a 1-d integral over the wedge
    angle phi of each polygon edge.  Substituting w = asinh(tan phi) makes
    the integrand analytic with poles pi/2 off the real axis, so a few
    Gauss panels reach near machine accuracy even for skinny wedges.  Far
    more accurate than the 2-d fan rule, and cheap enough for solver loops.
    """
    gl_x, gl_w = _gauss_nodes(n_nodes)
    h = P.offsets
    atoms = np.zeros(len(P.normals))
    incidence = P._incidence()
    edge_m, edge_wa, edge_wb, edge_h, edge_id = [], [], [], [], []
    for i in range(len(P.normals)):
        ids = incidence[i]
        if len(ids) < 3:
            continue
        verts = P.vertices[ids]
        v = P.normals[i]
        t1 = _any_orthonormal(v)
        t2 = _cross3(v, t1)
        rel = verts - h[i] * v
        xy = np.stack([rel @ t1, rel @ t2], axis=1)
        a = xy
        b = np.roll(xy, -1, axis=0)
        cross = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
        elen = np.linalg.norm(b - a, axis=1)
        good = (elen > 1e-14) & (np.abs(cross) > 1e-14 * np.maximum(elen, 1.0))
        if not good.any():
            continue
        a, b, cross, elen = a[good], b[good], cross[good], elen[good]
        # perpendicular from the foot to each edge line; |m| its distance
        m = cross / elen
        perp = np.stack([b[:, 1] - a[:, 1], a[:, 0] - b[:, 0]], axis=1) / elen[:, None]
        sgn = np.sign(m)
        m = np.abs(m)
        perp *= sgn[:, None]
        # signed ccw angles of the endpoints about the perpendicular; the
        # sweep sign carries the in/out orientation of the wedge
        pha = np.arctan2(perp[:, 0] * a[:, 1] - perp[:, 1] * a[:, 0],
                         np.einsum("ej,ej->e", a, perp))
        phb = np.arctan2(perp[:, 0] * b[:, 1] - perp[:, 1] * b[:, 0],
                         np.einsum("ej,ej->e", b, perp))
        edge_m.append(m)
        edge_wa.append(np.arcsinh(np.tan(pha)))
        edge_wb.append(np.arcsinh(np.tan(phb)))
        edge_h.append(np.full(len(m), h[i]))
        edge_id.append(np.full(len(m), i))
    if not edge_m:
        return atoms
    m = np.concatenate(edge_m)
    wa = np.concatenate(edge_wa)
    wb = np.concatenate(edge_wb)
    hh = np.concatenate(edge_h)
    fid = np.concatenate(edge_id)
    # n_panels equal panels per edge, Gauss nodes in each
    offs = (np.arange(n_panels)[:, None] + 0.5 * (gl_x[None, :] + 1.0)).ravel() / n_panels
    nodes = wa[:, None] + (wb - wa)[:, None] * offs[None, :]
    wts = (wb - wa)[:, None] * np.tile(gl_w, n_panels)[None, :] / (2.0 * n_panels)
    u = np.sinh(nodes)
    s2 = 1.0 + u * u
    r2 = (m[:, None] ** 2) * s2
    h2 = (hh**2)[:, None]
    if q == 1.0:
        inner = 0.5 * np.log1p(r2 / h2)
    else:
        inner = ((h2 + r2) ** (0.5 * (q - 1.0)) - h2 ** (0.5 * (q - 1.0))) / (q - 1.0)
    vals = (wts * inner * np.cosh(nodes) / s2).sum(axis=1)
    np.add.at(atoms, fid, hh * vals / 3.0)
    return atoms


def _atoms_2d_arc(P, q, n_nodes=16, n_panels=4):
    """Edge-path atoms in the plane, one Gauss sweep over all edges.

    The arc integral (h^q/2) int sec^q(theta) d(theta) over the wedge of
    edge i becomes (h^q/2) int cosh(w)^(q-1) dw under w = asinh(tan theta),
    which is analytic and panel-friendly; exact for q in {1, 2}.
    """
    gl_x, gl_w = _gauss_nodes(n_nodes)
    h = P.offsets
    atoms = np.zeros(len(P.normals))
    incidence = P._incidence()
    rows = [i for i in range(len(P.normals)) if len(incidence[i]) == 2]
    if not rows:
        return atoms
    rows = np.asarray(rows)
    v = P.normals[rows]
    t = np.stack([-v[:, 1], v[:, 0]], axis=1)
    ends = np.stack([P.vertices[incidence[i]] for i in rows])  # (k, 2, 2)
    s = np.einsum("kej,kj->ke", ends, t) / h[rows, None]  # tan(theta) at ends
    w = np.arcsinh(s)
    lo, hi = w.min(axis=1), w.max(axis=1)
    offs = (np.arange(n_panels)[:, None] + 0.5 * (gl_x[None, :] + 1.0)).ravel() / n_panels
    nodes = lo[:, None] + (hi - lo)[:, None] * offs[None, :]
    wts = (hi - lo)[:, None] * np.tile(gl_w, n_panels)[None, :] / (2.0 * n_panels)
    vals = (wts * np.cosh(nodes) ** (q - 1.0)).sum(axis=1)
    atoms[rows] = 0.5 * h[rows] ** q * vals
    return atoms


def _atoms_mc(P, q, level, seed=0):
    """Monte Carlo cone atoms for n >= 4 (reduced accuracy mode)."""
    rule = sphere_rule(P.dim, level, seed=seed)
    rho, idx, _ = _backend.radial_batch(P.normals, P.offsets, rule.nodes, 1e-10)
    vals = rule.weights * rho**q / P.dim
    out = np.zeros(len(P.normals))
    np.add.at(out, idx, vals)
    return out


def _solid_angles(P):
    if P.dim in (2, 3):
        return np.array([c.solid_angle() if not c.empty else 0.0 for c in cone_partition(P)])
    rule = sphere_rule(P.dim, MC_LEVEL)
    _, idx, _ = _backend.radial_batch(P.normals, P.offsets, rule.nodes, 1e-10)
    out = np.zeros(len(P.normals))
    np.add.at(out, idx, rule.weights)
    return out


def _require_hpolytope(body):
    if isinstance(body, VPolytope):
        return body.to_hpolytope()
    if not isinstance(body, HPolytope):
        raise GeometryError("expected a polytope")
    return body


def _symmetrize(dirs, atoms, tol=1e-9):
    """Average atom weights over mirror pairs.

    A symmetric body has an exactly even measure; averaging removes the
    quadrature noise that differs between a facet and its mirror image.
    """
    d = np.linalg.norm(dirs[None, :, :] + dirs[:, None, :], axis=2)
    j = d.argmin(axis=1)
    ok = d[np.arange(len(dirs)), j] <= tol
    out = atoms.copy()
    out[ok] = 0.5 * (atoms[ok] + atoms[j[ok]])
    return out


def dual_curvature(P, q, degree=DEFAULT_DEGREE, subdiv=DEFAULT_SUBDIV):
    """Dual curvature measure of index q: one atom per facet normal.

    The atom of facet i is (1/n) * integral of rho^q over the facet's
    spherical cone, evaluated on the facet itself where the integrand is
    h_i |x|^(q-n) / n.  Inactive halfspaces get weight 0.
    """
    P = _require_hpolytope(P)
    if q == 0:
        return dual_curvature_q0(P)
    if P.dim == 2:
        atoms = _atoms_2d(P, q)
    elif P.dim == 3:
        atoms = _atoms_3d(P, q, degree, subdiv)
    else:
        atoms = _atoms_mc(P, q, MC_LEVEL)
    if P.symmetric:
        atoms = _symmetrize(P.normals, atoms)
    return DiscreteSphericalMeasure(P.normals, atoms, even=P.symmetric or None)


def dual_curvature_q0(P):
    """Index-0 dual curvature: (1/n) times the solid angle of each cone cell.

    Totals the unit-ball volume; equals 1/n times the integral curvature of
    the polar body.
    """
    P = _require_hpolytope(P)
    atoms = _solid_angles(P) / P.dim
    if P.symmetric:
        atoms = _symmetrize(P.normals, atoms)
    return DiscreteSphericalMeasure(P.normals, atoms, even=P.symmetric or None)


def cone_volume_measure(P):
    """Atom i is the volume of the cone over facet i: h_i area_i / n."""
    P = _require_hpolytope(P)
    atoms = P.offsets * P.facet_areas / P.dim
    return DiscreteSphericalMeasure(P.normals, atoms, even=P.symmetric or None)


def surface_area_measure(P):
    """Atom i is the facet's (n-1)-dimensional area."""
    P = _require_hpolytope(P)
    return DiscreteSphericalMeasure(P.normals, P.facet_areas.copy(), even=None)


def lp_surface_area_measure(P, p):
    """Atom i is h_i^(1-p) area_i; p=1 is surface area, p=0 is n times cone volume."""
    P = _require_hpolytope(P)
    atoms = P.offsets ** (1.0 - p) * P.facet_areas
    return DiscreteSphericalMeasure(P.normals, atoms, even=None)


# -- sphere-side integrals -------------------------------------------------


def _cone_nodes(P, degree=DEFAULT_DEGREE, subdiv=DEFAULT_SUBDIV, npts=64):
    """Spherical nodes/weights over all active cone cells with rho values.

    The independent sphere-side path: for n=3 fan-transport rules on each
    cell, for n=2 Gauss panels on each arc.  Returns (u, w, rho, cell_id).
    """
    P = _require_hpolytope(P)
    us, ws, rhos, ids = [], [], [], []
    act = P.active
    if P.dim == 2:
        for i in np.flatnonzero(act):
            lo, hi = _edge_angles(P, i)
            th, w = arc_rule(lo, hi, npts)
            v = P.normals[i]
            ct, st = np.cos(th), np.sin(th)
            u = np.column_stack([v[0] * ct - v[1] * st, v[1] * ct + v[0] * st])
            us.append(u)
            ws.append(w)
            rhos.append(P.offsets[i] / ct)
            ids.append(np.full(len(w), i))
    elif P.dim == 3:
        for i in np.flatnonzero(act):
            verts = P.facet_vertices(i)
            rays = verts / np.linalg.norm(verts, axis=1)[:, None]
            rule = spherical_polygon_rule(rays, degree=degree, subdiv=subdiv)
            us.append(rule.nodes)
            ws.append(rule.weights)
            rhos.append(P.offsets[i] / (rule.nodes @ P.normals[i]))
            ids.append(np.full(len(rule.weights), i))
    else:
        rule = sphere_rule(P.dim, MC_LEVEL)
        rho, idx, _ = _backend.radial_batch(P.normals, P.offsets, rule.nodes, 1e-10)
        return rule.nodes, rule.weights, rho, idx
    return (np.vstack(us), np.concatenate(ws), np.concatenate(rhos),
            np.concatenate(ids).astype(np.int64))


def _rho_batch(body, dirs):
    if isinstance(body, Ball):
        return np.full(len(dirs), body.radius)
    if isinstance(body, Ellipsoid):
        return 1.0 / np.sqrt(np.sum((dirs / body.axes) ** 2, axis=1))
    raise GeometryError("no closed-form radial function")


class DualQuermassResult:
    """A dual quermassintegral value with its normalized dual volume."""

    def __init__(self, q, value, normalized):
        self.q = float(q)
        self.value = float(value)
        self.normalized = float(normalized)

    def __repr__(self):
        return f"DualQuermassResult(q={self.q}, value={self.value!r}, normalized={self.normalized!r})"


def dual_quermassintegral(K, q, degree=DEFAULT_DEGREE, subdiv=DEFAULT_SUBDIV, level=None):
    """(1/n) integral of rho^q over the sphere, with the normalized dual volume.

    Polytopes integrate cone-wise on the sphere side (independent of the
    facet-path atoms); smooth bodies use a global sphere rule.  q may be
    any real for polytopes; the normalization at q=0 is the exponential of
    the mean of log rho.
    """
    if isinstance(K, SmoothBody):
        if level is None:
            level = SMOOTH_LEVELS.get(K.dim, 14)
        rule = sphere_rule(K.dim, level)
        rho = _rho_batch(K, rule.nodes)
        w = rule.weights
        n = K.dim
    else:
        P = _require_hpolytope(K)
        _, w, rho, _ = _cone_nodes(P, degree, subdiv)
        n = P.dim
    omega = unit_ball_volume(n)
    if q == 0:
        value = float(w.sum()) / n
        normalized = math.exp(float(w @ np.log(rho)) / (n * omega))
    else:
        value = float(w @ rho**q) / n
        normalized = (value / omega) ** (1.0 / q)
    return DualQuermassResult(q, value, normalized)


def dual_area(K, q, region=None, degree=DEFAULT_DEGREE, subdiv=DEFAULT_SUBDIV, npts=64):
    """(1/n) integral of rho^q over a spherical region.

    region=None is the whole sphere; otherwise a ConeCell or list of them
    (from this body's cone partition).  Over the cell of facet i this is
    the dual curvature atom of facet i.
    """
    if region is None:
        return dual_quermassintegral(K, q, degree=degree, subdiv=subdiv).value
    if isinstance(region, ConeCell):
        region = [region]
    n = K.dim
    total = 0.0
    for cell in region:
        if cell.empty:
            continue
        if n == 2:
            a, b = cell.apex_rays
            v = cell.normal
            lo = math.atan2(v[0] * a[1] - v[1] * a[0], float(v @ a))
            hi = math.atan2(v[0] * b[1] - v[1] * b[0], float(v @ b))
            lo, hi = min(lo, hi), max(lo, hi)
            th, w = arc_rule(lo, hi, npts)
            total += 0.5 * cell.offset**q * float(w @ np.cos(th) ** (-q))
        elif n == 3:
            rule = spherical_polygon_rule(cell.apex_rays, degree=degree, subdiv=subdiv)
            rho = cell.offset / (rule.nodes @ cell.normal)
            total += float(rule.weights @ rho**q) / 3.0
        else:
            raise GeometryError("cell regions implemented for n in {2, 3}")
    return total


def dual_steiner_check(K, t_samples, degree=DEFAULT_DEGREE, subdiv=DEFAULT_SUBDIV):
    """Fit the polynomial expansion of the radial-sum volume V(K + tB).

    Computes V at each t by direct quadrature of (rho+t)^n / n and solves
    the least-squares system against binom(n,i) t^(n-i); returns the fitted
    coefficient for each power, index i holding the value whose direct
    counterpart is dual_quermassintegral(K, q=i).
    """
    t_samples = np.asarray(t_samples, float)
    if isinstance(K, SmoothBody):
        rule = sphere_rule(K.dim, SMOOTH_LEVELS.get(K.dim, 14))
        u, w = rule.nodes, rule.weights
        rho = _rho_batch(K, u)
        n = K.dim
    else:
        P = _require_hpolytope(K)
        _, w, rho, _ = _cone_nodes(P, degree, subdiv)
        n = P.dim
    if len(t_samples) < n + 1:
        raise GeometryError("need at least n+1 sample values of t")
    vols = np.array([float(w @ (rho + t) ** n) / n for t in t_samples])
    design = np.array([[math.comb(n, i) * t ** (n - i) for i in range(n + 1)] for t in t_samples])
    coef, *_ = np.linalg.lstsq(design, vols, rcond=None)
    return coef


def dual_curvature_density_smooth(K, q, v):
    """Pointwise density of the index-q dual curvature of a smooth body.

    (1/n) h(v) |grad h(v)|^(q-n) det(h_ij + h delta_ij) from closed forms.
    """
    if not isinstance(K, SmoothBody):
        raise GeometryError("density is defined for smooth bodies")
    if q < 0:
        raise GeometryError("smooth density restricted to q >= 0")
    v = np.asarray(v, float)
    if v.ndim == 2:
        return np.array([dual_curvature_density_smooth(K, q, row) for row in v])
    v = as_direction(v)
    h = K.support(v)
    g = np.linalg.norm(K.grad_support(v))
    return h * g ** (q - K.dim) * K.curvature_det(v) / K.dim


# -- set operations and the valuation identity ------------------------------


def intersect_hpolytopes(K, L, tol=1e-9):
    """Halfspace intersection; duplicate directions keep the smaller offset."""
    normals = [row for row in K.normals]
    offsets = [h for h in K.offsets]
    for v, h in zip(L.normals, L.offsets):
        dup = None
        for j, w in enumerate(normals):
            if np.linalg.norm(w - v) <= tol:
                dup = j
                break
        if dup is None:
            normals.append(v)
            offsets.append(h)
        else:
            offsets[dup] = min(offsets[dup], h)
    return HPolytope(np.array(normals), np.array(offsets), validate=False)


def hull_of_union(K, L):
    return VPolytope(np.vstack([K.vertices, L.vertices]), validate=False).to_hpolytope()


def valuation_check(K, L, q, degree=DEFAULT_DEGREE, subdiv=DEFAULT_SUBDIV, tol=1e-9):
    """Max atom discrepancy in the inclusion-exclusion identity for index q.

    Requires the union to be convex, verified by the volume identity
    V(conv(K u L)) = V(K) + V(L) - V(K n L).
    """
    K = _require_hpolytope(K)
    L = _require_hpolytope(L)
    inter = intersect_hpolytopes(K, L)
    hull = hull_of_union(K, L)
    v_lhs = hull.volume()
    v_rhs = K.volume() + L.volume() - inter.volume()
    if abs(v_lhs - v_rhs) > 1e-9 * max(1.0, v_lhs):
        raise GeometryError("union is not convex")

    def atoms(P):
        return dual_curvature(P, q, degree=degree, subdiv=subdiv)

    mk, ml = atoms(K), atoms(L)
    mi, mh = atoms(inter), atoms(hull)
    dirs = [d for d in mk.dirs]
    for m in (ml, mi, mh):
        for d in m.dirs:
            if not any(np.linalg.norm(d - s) <= tol for s in dirs):
                dirs.append(d)
    worst = 0.0
    for d in dirs:
        lhs = mk.weight_at(d, tol) + ml.weight_at(d, tol)
        rhs = mi.weight_at(d, tol) + mh.weight_at(d, tol)
        worst = max(worst, abs(lhs - rhs))
    return worst
