"""Convex bodies with the origin in the interior.

Three representations: halfspace intersections (HPolytope), vertex hulls
(VPolytope), and two closed-form smooth families (ball, ellipsoid).  On top
of them: support and radial functions, polar duality, Wulff shapes, convex
hulls of radial graphs, and radial sums with balls.
"""

import itertools

import numpy as np
from scipy.optimize import linprog

RANK_TOL = 1e-10
MERGE_TOL = 1e-9
FEAS_TOL = 1e-9


class GeometryError(ValueError):
    pass


def unit(v):
    v = np.asarray(v, float)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise GeometryError("zero vector has no direction")
    return v / n


def as_direction(v, tol=1e-9):
    """Validate a unit vector; renormalize only if it is visibly off."""
    v = np.asarray(v, float)
    n = np.linalg.norm(v)
    if abs(n - 1.0) > tol:
        raise GeometryError(f"direction has norm {n!r}, expected 1")
    if abs(n - 1.0) > 1e-12:
        v = v / n
    return v


def _interior_gap(points):
    """Max eps with 0 = sum(lam_i p_i), sum(lam)=1, lam_i >= eps.

    Positive iff the origin is strictly inside conv(points); for unit
    vectors this is the not-in-a-closed-hemisphere test.
    """
    pts = np.asarray(points, float)
    k, n = pts.shape
    # variables: lam_1..lam_k, eps ; maximize eps
    c = np.zeros(k + 1)
    c[-1] = -1.0
    a_eq = np.zeros((n + 1, k + 1))
    a_eq[:n, :k] = pts.T
    a_eq[n, :k] = 1.0
    b_eq = np.zeros(n + 1)
    b_eq[n] = 1.0
    a_ub = np.zeros((k, k + 1))
    a_ub[:, :k] = -np.eye(k)
    a_ub[:, -1] = 1.0
    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(k), A_eq=a_eq, b_eq=b_eq,
                  bounds=[(0, None)] * k + [(0, None)], method="highs")
    if not res.success:
        return 0.0
    return float(res.x[-1])


def _positively_spans(normals):
    normals = np.asarray(normals, float)
    # symmetric direction sets of full rank always positively span
    if _is_negation_closed(normals):
        return np.linalg.matrix_rank(normals, tol=RANK_TOL) == normals.shape[1]
    return _interior_gap(normals) > 1e-12


def _is_negation_closed(dirs, tol=1e-9):
    dirs = np.asarray(dirs, float)
    d = np.linalg.norm(dirs[:, None, :] + dirs[None, :, :], axis=2)
    return bool((d.min(axis=1) <= tol).all())


def _require_distinct(dirs, tol=1e-9):
    if len(dirs) < 2:
        return
    gap = np.linalg.norm(dirs[:, None, :] - dirs[None, :, :], axis=2)
    np.fill_diagonal(gap, np.inf)
    if gap.min() <= tol:
        raise GeometryError("directions must be pairwise distinct")


def _merge_points(points, tol=MERGE_TOL):
    """Greedy dedupe of nearby points; returns representatives."""
    pts = np.asarray(points, float)
    if len(pts) == 0:
        return np.zeros((0, pts.shape[1]))
    close = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2) <= tol
    keep = []
    absorbed = np.zeros(len(pts), dtype=bool)
    for i in range(len(pts)):
        if absorbed[i]:
            continue
        keep.append(i)
        absorbed |= close[i]
    return pts[keep].copy()


class _VertexEnumerator:
    """Cached n-subset solves for a fixed normal matrix.

    Offsets vary across solver iterates while the normals stay put, so the
    inverses of all nondegenerate n-by-n normal submatrices are computed
    once.
    """

    def __init__(self, normals, rank_tol=RANK_TOL):
        normals = np.asarray(normals, float)
        m, n = normals.shape
        if m < n:
            raise GeometryError("unbounded body: fewer halfspaces than dimensions")
        combos = np.array(list(itertools.combinations(range(m), n)), dtype=np.int64)
        mats = normals[combos]
        dets = np.abs(np.linalg.det(mats))
        good = dets > rank_tol
        self.normals = normals
        self.combos = combos[good]
        self.inv = np.linalg.inv(mats[good])

    def vertices(self, offsets, feas_tol=FEAS_TOL, merge_tol=MERGE_TOL):
        offsets = np.asarray(offsets, float)
        scale = max(1.0, float(np.max(np.abs(offsets))))
        cand = np.einsum("sij,sj->si", self.inv, offsets[self.combos])
        feas = (cand @ self.normals.T <= offsets + feas_tol * scale).all(axis=1)
        pts = cand[feas]
        if len(pts) == 0:
            raise GeometryError("empty or degenerate body")
        return _merge_points(pts, merge_tol * scale)


class HPolytope:
    """Intersection of halfspaces {x : x.v_i <= h_i} with unit normals v_i.

    Immutable after construction.  Vertex enumeration, facet polygons,
    areas and activity flags are computed lazily and cached.  Halfspaces
    whose facet is empty are kept and flagged inactive rather than dropped.
    """

    def __init__(self, normals, offsets, symmetric=None, validate=True):
        normals = np.atleast_2d(np.asarray(normals, float)).copy()
        offsets = np.asarray(offsets, float).copy()
        if normals.ndim != 2 or normals.shape[0] != offsets.shape[0]:
            raise GeometryError("normals and offsets disagree in length")
        m, n = normals.shape
        if n < 2:
            raise GeometryError("dimension must be >= 2")
        norms = np.linalg.norm(normals, axis=1)
        if (np.abs(norms - 1.0) > 1e-9).any():
            raise GeometryError("facet normals must be unit vectors")
        fix = np.abs(norms - 1.0) > 1e-12
        if fix.any():
            normals[fix] /= norms[fix, None]
        if (offsets <= 0).any():
            raise GeometryError("offsets must be strictly positive (origin interior)")
        if validate:
            _require_distinct(normals)
            if not _positively_spans(normals):
                raise GeometryError("unbounded body: normals lie in a closed hemisphere")
        if symmetric is None:
            symmetric = self._detect_symmetric(normals, offsets)
        elif symmetric and not self._detect_symmetric(normals, offsets):
            raise GeometryError("symmetric flag set but halfspaces are not origin-symmetric")
        self.dim = n
        self.normals = normals
        self.offsets = offsets
        self.symmetric = bool(symmetric)
        normals.flags.writeable = False
        offsets.flags.writeable = False
        self._enum = None
        self._vertices = None
        self._facet_ids = None
        self._areas = None

    @staticmethod
    def _detect_symmetric(normals, offsets, tol=1e-9):
        d = np.linalg.norm(normals[None, :, :] + normals[:, None, :], axis=2)
        j = d.argmin(axis=1)
        if (d[np.arange(len(normals)), j] > tol).any():
            return False
        return bool((np.abs(offsets[j] - offsets) <= tol * np.maximum(1.0, offsets)).all())

    # -- lazy geometry ---------------------------------------------------

    @property
    def enumerator(self):
        if self._enum is None:
            self._enum = _VertexEnumerator(self.normals)
        return self._enum

    @property
    def vertices(self):
        if self._vertices is None:
            self._vertices = self.enumerator.vertices(self.offsets)
            self._vertices.flags.writeable = False
        return self._vertices

    def _incidence(self):
        """facet -> ordered vertex ids; [] for empty (inactive) facets."""
        if self._facet_ids is not None:
            return self._facet_ids
        verts = self.vertices
        scale = max(1.0, float(np.max(np.abs(self.offsets))))
        slack = self.offsets[None, :] - verts @ self.normals.T
        on = slack <= 10 * FEAS_TOL * scale
        ids = []
        for i in range(len(self.normals)):
            sel = np.where(on[:, i])[0]
            if len(sel) < self.dim:
                ids.append(np.zeros(0, dtype=int))
                continue
            ids.append(self._order_facet(sel, i))
        self._facet_ids = ids
        return ids

    def _order_facet(self, sel, i):
        """Order the facet's vertices around its centroid (n = 2, 3)."""
        verts = self.vertices[sel]
        if self.dim == 2:
            t = np.array([-self.normals[i][1], self.normals[i][0]])
            order = np.argsort(verts @ t)
            return sel[order]
        if self.dim == 3:
            v = self.normals[i]
            t1 = _any_orthonormal(v)
            t2 = _cross3(v, t1)
            c = verts.mean(axis=0)
            ang = np.arctan2((verts - c) @ t2, (verts - c) @ t1)
            return sel[np.argsort(ang)]
        return sel  # n >= 4: unordered

    def facet_vertices(self, i):
        ids = self._incidence()[i]
        return self.vertices[ids]

    @property
    def active(self):
        """True where the facet is nonempty with positive area."""
        return self.facet_areas > 1e-12 * max(1.0, float(np.max(np.abs(self.offsets)))) ** (self.dim - 1)

    @property
    def facet_areas(self):
        if self._areas is None:
            areas = np.zeros(len(self.normals))
            for i, ids in enumerate(self._incidence()):
                if len(ids) >= self.dim:
                    areas[i] = _polygon_area(self.vertices[ids], self.dim)
            self._areas = areas
            self._areas.flags.writeable = False
        return self._areas

    def volume(self):
        return float(np.sum(self.offsets * self.facet_areas) / self.dim)

    # -- evaluation ------------------------------------------------------

    def support(self, v):
        v = as_direction(v)
        return float(np.max(self.vertices @ v))

    def radial(self, u):
        u = as_direction(u)
        dots = self.normals @ u
        pos = dots > 0
        if not pos.any():
            raise GeometryError("unbounded body")
        return float(np.min(self.offsets[pos] / dots[pos]))

    def scale(self, lam):
        if lam <= 0:
            raise GeometryError("scale factor must be positive")
        return self.with_offsets(self.offsets * lam)

    def with_offsets(self, offsets):
        """Same normal set, new offsets; shares the cached enumerator."""
        p = HPolytope(self.normals, offsets, symmetric=None, validate=False)
        p._enum = self.enumerator
        return p

    # -- io ----------------------------------------------------------------

    def to_dict(self):
        return {
            "type": "hpolytope",
            "dim": self.dim,
            "normals": [list(map(float, row)) for row in self.normals],
            "offsets": [float(h) for h in self.offsets],
        }

    @classmethod
    def from_dict(cls, d):
        if d.get("type") != "hpolytope":
            raise GeometryError("expected a hpolytope record")
        normals = np.asarray(d["normals"], float)
        if normals.ndim != 2 or normals.shape[1] != int(d["dim"]):
            raise GeometryError("normals do not match dim")
        return cls(normals, np.asarray(d["offsets"], float))

    def __repr__(self):
        return f"HPolytope(dim={self.dim}, facets={len(self.normals)}, symmetric={self.symmetric})"


def _any_orthonormal(v):
    k = int(np.argmin(np.abs(v)))
    e = np.zeros(len(v))
    e[k] = 1.0
    return unit(e - np.dot(e, v) * v)


def _cross3(a, b):
    return np.array([a[1] * b[2] - a[2] * b[1],
                     a[2] * b[0] - a[0] * b[2],
                     a[0] * b[1] - a[1] * b[0]])


def _polygon_area(verts, n):
    if n == 2:
        return float(np.linalg.norm(verts[-1] - verts[0]))
    if n == 3:
        if len(verts) < 3:
            return 0.0
        e1 = verts[1:-1] - verts[0]
        e2 = verts[2:] - verts[0]
        cx = e1[:, 1] * e2[:, 2] - e1[:, 2] * e2[:, 1]
        cy = e1[:, 2] * e2[:, 0] - e1[:, 0] * e2[:, 2]
        cz = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
        return float(0.5 * np.sqrt(cx * cx + cy * cy + cz * cz).sum())
    # n >= 4: (n-1)-volume via QR of edge vectors is not needed at desk scale
    raise GeometryError("facet areas implemented for n in {2, 3} only")


class VPolytope:
    """Convex hull of a finite point set containing the origin inside.

    The stored vertex list is irredundant: points inside the hull of the
    others are pruned at construction.
    """

    def __init__(self, vertices, validate=True, assume_extreme=False):
        vertices = np.atleast_2d(np.asarray(vertices, float)).copy()
        k, n = vertices.shape
        if n < 2:
            raise GeometryError("dimension must be >= 2")
        scale = max(1.0, float(np.max(np.abs(vertices))))
        vertices = _merge_points(vertices, MERGE_TOL * scale)
        if validate and _interior_gap(vertices) <= 1e-12:
            raise GeometryError("origin not interior")
        if not assume_extreme:
            vertices = _prune_redundant(vertices)
        self.dim = n
        self.vertices = vertices
        self.vertices.flags.writeable = False
        self._hrep = None

    def support(self, v):
        v = as_direction(v)
        return float(np.max(self.vertices @ v))

    def radial(self, u):
        return self.to_hpolytope().radial(u)

    def to_hpolytope(self):
        """Facet enumeration by exhaustive n-subset plane fitting."""
        if self._hrep is None:
            normals, offsets = _facet_enumeration(self.vertices)
            self._hrep = HPolytope(normals, offsets, validate=False)
        return self._hrep

    def volume(self):
        return self.to_hpolytope().volume()

    def to_dict(self):
        return {
            "type": "vpolytope",
            "dim": self.dim,
            "vertices": [list(map(float, row)) for row in self.vertices],
        }

    @classmethod
    def from_dict(cls, d):
        if d.get("type") != "vpolytope":
            raise GeometryError("expected a vpolytope record")
        verts = np.asarray(d["vertices"], float)
        if verts.ndim != 2 or verts.shape[1] != int(d["dim"]):
            raise GeometryError("vertices do not match dim")
        return cls(verts)

    def __repr__(self):
        return f"VPolytope(dim={self.dim}, vertices={len(self.vertices)})"


def _prune_redundant(points):
    pts = np.asarray(points, float)
    if len(pts) <= pts.shape[1] + 1:
        return pts
    if pts.shape[1] == 2:
        return _hull_2d(pts)
    keep = []
    for j in range(len(pts)):
        others = np.delete(pts, j, axis=0)
        if not _in_hull(pts[j], others):
            keep.append(j)
    return pts[keep]


def _in_hull(x, points, tol=1e-9):
    """Is x in conv(points)?  LP feasibility."""
    k, n = points.shape
    a_eq = np.vstack([points.T, np.ones(k)])
    b_eq = np.concatenate([x, [1.0]])
    res = linprog(np.zeros(k), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * k,
                  method="highs")
    if not res.success:
        return False
    return float(np.abs(points.T @ res.x - x).max()) <= tol


def _hull_2d(points, tol=1e-12):
    """Andrew's monotone chain; drops interior and mid-segment points."""
    pts = points[np.lexsort((points[:, 1], points[:, 0]))]
    scale = max(1.0, float(np.max(np.abs(pts)))) ** 2

    def cross2(a, b):
        return a[0] * b[1] - a[1] * b[0]

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and cross2(out[-1] - out[-2], p - out[-2]) <= tol * scale:
                out.pop()
            out.append(p)
        return out

    lo = half(pts)
    hi = half(pts[::-1])
    return np.array(lo[:-1] + hi[:-1])


def _facet_enumeration(points, rank_tol=RANK_TOL, side_tol=FEAS_TOL):
    pts = np.asarray(points, float)
    k, n = pts.shape
    scale = max(1.0, float(np.max(np.abs(pts))))
    found = []
    for combo in itertools.combinations(range(k), n):
        sub = pts[list(combo)]
        base = sub[1:] - sub[0]
        if n == 2:
            nu = np.array([-base[0][1], base[0][0]])
        elif n == 3:
            nu = np.cross(base[0], base[1])
        else:
            # null space of the edge matrix
            _, s, vt = np.linalg.svd(base)
            if s[-1] <= rank_tol * scale:
                continue
            nu = vt[-1]
        ln = np.linalg.norm(nu)
        if ln <= rank_tol * scale ** (n - 1):
            continue
        nu = nu / ln
        d = float(nu @ sub[0])
        sides = pts @ nu - d
        if (sides <= side_tol * scale).all():
            pass
        elif (sides >= -side_tol * scale).all():
            nu, d = -nu, -d
        else:
            continue
        if d <= 0:
            continue  # origin must be strictly inside
        found.append((nu, d))
    if not found:
        raise GeometryError("facet enumeration failed (degenerate hull)")
    normals, offsets = [], []
    for nu, d in found:
        dup = False
        for j, w in enumerate(normals):
            if np.linalg.norm(w - nu) <= 1e-9:
                dup = True
                break
        if not dup:
            normals.append(nu)
            offsets.append(d)
    return np.array(normals), np.array(offsets)


# -- smooth bodies --------------------------------------------------------


class SmoothBody:
    kind = "smooth"


class Ball(SmoothBody):
    kind = "ball"

    def __init__(self, radius, dim=3):
        if radius <= 0:
            raise GeometryError("radius must be positive")
        self.radius = float(radius)
        self.dim = int(dim)

    def support(self, v):
        as_direction(v)
        return self.radius

    def radial(self, u):
        as_direction(u)
        return self.radius

    def grad_support(self, v):
        return self.radius * as_direction(v)

    def hess_tangent(self, v):
        """Covariant Hessian h_ij in an orthonormal tangent frame at v."""
        return np.zeros((self.dim - 1, self.dim - 1))

    def curvature_det(self, v):
        """det(h_ij + h delta_ij) at v."""
        return self.radius ** (self.dim - 1)

    def __repr__(self):
        return f"Ball(radius={self.radius}, dim={self.dim})"


class Ellipsoid(SmoothBody):
    """Axis-aligned ellipsoid sum_i x_i^2/a_i^2 <= 1."""

    kind = "ellipsoid"

    def __init__(self, axes):
        axes = np.asarray(axes, float)
        if (axes <= 0).any():
            raise GeometryError("axes must be positive")
        self.axes = axes
        self.axes.flags.writeable = False
        self.dim = len(axes)

    def support(self, v):
        v = as_direction(v)
        return float(np.sqrt(np.sum((self.axes * v) ** 2)))

    def radial(self, u):
        u = as_direction(u)
        return float(1.0 / np.sqrt(np.sum((u / self.axes) ** 2)))

    def grad_support(self, v):
        v = as_direction(v)
        return self.axes**2 * v / self.support(v)

    def _tangent_frame(self, v):
        frame = []
        w = as_direction(v)
        for k in range(self.dim):
            e = np.zeros(self.dim)
            e[k] = 1.0
            t = e - (e @ w) * w
            for f in frame:
                t = t - (t @ f) * f
            n = np.linalg.norm(t)
            if n > 1e-8:
                frame.append(t / n)
            if len(frame) == self.dim - 1:
                break
        return np.array(frame)

    def hess_tangent(self, v):
        v = as_direction(v)
        h = self.support(v)
        a2 = self.axes**2
        g = a2 * v
        # Euclidean Hessian of the 1-homogeneous extension at |x| = 1
        d2 = np.diag(a2) / h - np.outer(g, g) / h**3
        p = self._tangent_frame(v)
        return p @ d2 @ p.T - h * np.eye(self.dim - 1)

    def curvature_det(self, v):
        v = as_direction(v)
        h = self.support(v)
        return float(np.prod(self.axes) ** 2 / h ** (self.dim + 1))

    def __repr__(self):
        return f"Ellipsoid(axes={list(self.axes)})"


# -- generic operations ---------------------------------------------------


def support(body, v):
    """Largest x.v over the body; positive since the origin is interior."""
    return body.support(v)


def radial(body, u):
    """Largest t with t*u in the body."""
    return body.radial(u)


def polar(body):
    """Polar dual: rho of the body is 1/support of the polar and vice versa."""
    if isinstance(body, HPolytope):
        act = body.active
        if not act.any():
            raise GeometryError("polar undefined")
        pts = body.normals[act] / body.offsets[act, None]
        return VPolytope(pts, validate=False, assume_extreme=True)
    if isinstance(body, VPolytope):
        normals = np.array([unit(x) for x in body.vertices])
        offsets = 1.0 / np.linalg.norm(body.vertices, axis=1)
        return HPolytope(normals, offsets, validate=False)
    if isinstance(body, Ball):
        return Ball(1.0 / body.radius, body.dim)
    if isinstance(body, Ellipsoid):
        return Ellipsoid(1.0 / body.axes)
    raise GeometryError("polar undefined")


def wulff_shape(dirs, h):
    """Intersection of {x.v <= h(v)} over the direction list."""
    dirs = np.atleast_2d(np.asarray(dirs, float))
    h = np.asarray(h, float)
    _require_distinct(dirs)
    if not _positively_spans(dirs):
        raise GeometryError("unbounded Wulff shape")
    return HPolytope(dirs, h, validate=False)


def convex_hull_of_radial(dirs, rho):
    """Convex hull of the radial graph {rho(u) u}."""
    dirs = np.atleast_2d(np.asarray(dirs, float))
    rho = np.asarray(rho, float)
    if (rho <= 0).any():
        raise GeometryError("radial values must be positive")
    if not _positively_spans(dirs):
        raise GeometryError("origin not interior")
    return VPolytope(dirs * rho[:, None], validate=False)


def wulff_polar_identity_check(dirs, h, tol=1e-9):
    """Compare the polar of a Wulff shape with the hull of the reciprocal radial graph.

    Returns (ok, max vertex discrepancy): the two vertex sets must agree
    within a symmetric Hausdorff distance of tol.
    """
    w = wulff_shape(dirs, h)
    lhs = polar(w).vertices
    rhs = convex_hull_of_radial(dirs, 1.0 / np.asarray(h, float)).vertices
    disc = _hausdorff(lhs, rhs)
    return disc <= tol, disc


def _hausdorff(a, b):
    d = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def radial_sum_ball(body, t, u):
    """Radial function of the radial sum of the body with a ball of radius t."""
    if t < 0:
        raise GeometryError("t must be nonnegative")
    return radial(body, u) + t


def body_from_dict(d):
    kind = d.get("type")
    if kind == "hpolytope":
        return HPolytope.from_dict(d)
    if kind == "vpolytope":
        return VPolytope.from_dict(d)
    raise GeometryError(f"unknown body type {kind!r}")
