"""Radial Gauss map of polytopes and the cone decomposition of the sphere.

For a polytope, each facet owns the spherical cone of directions whose
boundary ray exits through it; the map from direction to facet normal is
single-valued off the cone boundaries and flagged non-unique on them.
"""

import math

import numpy as np

from . import _backend
from .body_core import GeometryError, HPolytope, SmoothBody, as_direction, unit
from .quadrature import (sphere_area, spherical_polygon_rule,
                         spherical_triangle_excess)

TIE_TOL = 1e-10


class ConeCell:
    """Spherical cone of one facet: all unit u with rho(u) u on that facet."""

    def __init__(self, facet_index, normal, apex_rays, facet_vertices, offset):
        self.facet_index = int(facet_index)
        self.normal = np.asarray(normal, float)
        self.apex_rays = np.asarray(apex_rays, float)
        self.facet_vertices = np.asarray(facet_vertices, float)
        self.offset = float(offset)

    @property
    def empty(self):
        return len(self.apex_rays) == 0

    def solid_angle(self):
        """Spherical measure of the cell.

        n=2: arc width between the two vertex rays.  n=3: sum of l'Huilier
        excesses over fan triangles from the centroid ray.  Exact up to
        rounding; no quadrature involved.
        """
        if self.empty:
            return 0.0
        n = len(self.normal)
        if n == 2:
            a, b = self.apex_rays
            return math.atan2(abs(a[0] * b[1] - a[1] * b[0]), float(a @ b))
        if n == 3:
            hub = unit(self.apex_rays.sum(axis=0))
            total = 0.0
            k = len(self.apex_rays)
            for j in range(k):
                total += spherical_triangle_excess(hub, self.apex_rays[j], self.apex_rays[(j + 1) % k])
            return total
        raise GeometryError("closed-form solid angles implemented for n in {2, 3}")

    def contains(self, u, tol=1e-9):
        """Does the boundary point in direction u lie on this facet?"""
        u = as_direction(u)
        d = float(u @ self.normal)
        if d <= 0:
            return False
        return False if self.empty else abs(self._rho(u) * d - self.offset) <= tol * max(1.0, self.offset)

    def _rho(self, u):
        raise GeometryError("cell is not attached to a body")

    def to_dict(self):
        return {
            "facet_index": self.facet_index,
            "normal": [float(x) for x in self.normal],
            "apex_rays": [[float(x) for x in r] for r in self.apex_rays],
            "solid_angle": self.solid_angle() if len(self.normal) <= 3 and not self.empty else None,
        }


def radial_gauss(P, u, tie_tol=TIE_TOL):
    """Outer unit normal at the boundary point rho(u) u, or None on a tie.

    Ties within relative tie_tol mean u points at a lower-dimensional face
    (the measure-zero cone-boundary set); no arbitrary tie-breaking.
    """
    i = radial_gauss_index(P, u, tie_tol)
    return None if i is None else P.normals[i]


def radial_gauss_index(P, u, tie_tol=TIE_TOL):
    u = as_direction(u)
    rho, idx, tie = _backend.radial_batch(P.normals, P.offsets, u[None, :], tie_tol)
    if bool(tie[0]):
        return None
    return int(idx[0])


def radial_gauss_batch(P, dirs, tie_tol=TIE_TOL):
    """Vectorized radial_gauss: returns (rho, facet index, tie flag) arrays."""
    return _backend.radial_batch(P.normals, P.offsets, dirs, tie_tol)


def cone_partition(P):
    """One ConeCell per halfspace; inactive halfspaces yield empty cells.

    Cells cover the sphere and overlap only on boundaries.  Apex rays are
    the unit vectors toward the facet's vertices, in facet cycle order for
    n = 3.
    """
    cells = []
    act = P.active
    for i in range(len(P.normals)):
        if not act[i]:
            cells.append(ConeCell(i, P.normals[i], np.zeros((0, P.dim)), np.zeros((0, P.dim)), P.offsets[i]))
            continue
        verts = P.facet_vertices(i)
        rays = np.array([unit(v) for v in verts])
        cell = ConeCell(i, P.normals[i], rays, verts, P.offsets[i])
        cell._rho = lambda u, _P=P: _P.radial(u)
        cells.append(cell)
    return cells


def cell_quadrature(cell, degree=8, subdiv=2, n_mc=None, seed=0):
    """Spherical quadrature over one cone cell.

    n=3 cells use the fan-transport rule; weights sum to the solid angle.
    n>=4 cells are sampled by Monte Carlo over the whole sphere restricted
    to the cell (reduced accuracy).  n=2 callers should use arcs directly.
    """
    if cell.empty:
        raise GeometryError("empty cell has no quadrature")
    n = len(cell.normal)
    if n == 3:
        return spherical_polygon_rule(cell.apex_rays, degree=degree, subdiv=subdiv)
    raise GeometryError("cell quadrature implemented for n=3; use measure routines for other n")


def cell_solid_angles_mc(P, level=16, seed=0):
    """Monte Carlo cell measures: 2**level uniform directions in any dimension.

    Reduced accuracy; the closed forms in ConeCell.solid_angle are exact for
    n in {2, 3}.  Totals sphere_area(n) by construction.
    """
    rng = np.random.default_rng(seed)
    m = 2**level
    dirs = rng.normal(size=(m, P.dim))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    _, idx, _ = _backend.radial_batch(P.normals, P.offsets, dirs, TIE_TOL)
    out = np.zeros(len(P.normals))
    np.add.at(out, idx, sphere_area(P.dim) / m)
    return out


def reverse_radial_gauss_smooth(K, v):
    """Unit direction of the boundary point whose outer normal is v."""
    if not isinstance(K, SmoothBody):
        raise GeometryError("reverse map needs a smooth body; polytopes use cone_partition")
    g = K.grad_support(v)
    return unit(g)
