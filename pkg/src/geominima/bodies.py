"""Convex body representations with exact support functions and polar duality.

Every body is immutable after construction and strictly contains the origin.
Five serializable representations are supported (half-space and vertex
polytopes, centered ellipsoids, cosine/sine support expansions in the plane,
and shifted Euclidean balls), plus derived representations produced by
``polar``, ``translate`` and ``linear_map`` on smooth bodies.

Polytope facet data (normals, offsets, facet areas, vertices) is computed
once at construction, exactly, for n in {2, 3}; every polytope quantity
downstream (volume, surface measure, mixed volumes) is a finite exact sum.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import (
    ConvergenceError,
    DomainError,
    GenerationError,
    InputError,
    UnsupportedError,
)
from .grids import unit_ball_volume

_UNIT_TOL = 1e-9
_BOUNDARY_RATIO = 1e-8   # reject bodies whose min support is this fraction of the max
_DEDUP_TOL = 1e-9


def _directions(u, dim):
    """Validate a direction argument: one unit vector or a row matrix of them.

    Returns (matrix, was_single).
    """
    arr = np.asarray(u, dtype=float)
    single = arr.ndim == 1
    mat = np.atleast_2d(arr)
    if mat.ndim != 2 or mat.shape[1] != dim:
        raise InputError(f"expected direction(s) of dimension {dim}, got shape {arr.shape}")
    norms = np.linalg.norm(mat, axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-12):
        raise InputError("directions must be unit vectors (|u| = 1 within 1e-12)")
    return mat, single


def _ret(values, single):
    values = np.asarray(values, dtype=float)
    return float(values[0]) if single else values


def _check_transform(T, dim):
    T = np.asarray(T, dtype=float)
    if T.shape != (dim, dim):
        raise InputError(f"transform must be {dim}x{dim}, got {T.shape}")
    if abs(np.linalg.det(T)) <= 1e-12:
        raise InputError("transform is singular (|det| <= 1e-12)")
    return T


class ConvexBody:
    """Base class.  Subclasses are immutable value objects."""

    dim: int

    def support(self, u):
        """h(u) = max over the body of <x, u>, for unit u (single or batch)."""
        raise NotImplementedError

    def radial(self, u):
        """rho(u) = max {t >= 0 : t*u in the body}."""
        raise NotImplementedError

    def polar(self):
        """The polar dual {y : <x, y> <= 1 for all x in the body}."""
        raise NotImplementedError

    def volume(self):
        raise NotImplementedError

    def linear_map(self, T):
        """Image of the body under an invertible linear transform."""
        raise NotImplementedError

    def translate(self, z):
        """The body minus the vector z.  Support drops by <z, u>."""
        raise NotImplementedError

    def centroid(self):
        raise NotImplementedError

    def to_json(self):
        raise UnsupportedError(f"{type(self).__name__} has no JSON form")

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim})"


# ---------------------------------------------------------------------------
# polytopes
# ---------------------------------------------------------------------------

def _dedupe_rows(points, tol):
    """Drop near-duplicate rows, keeping first occurrences (O(m^2), small m)."""
    kept = []
    for row in points:
        if not any(np.linalg.norm(row - k) <= tol for k in kept):
            kept.append(row)
    return np.array(kept)


def _halfspace_vertices(normals, offsets):
    """Vertices of the intersection of <x, u_i> <= h_i, origin interior.

    Works through the dual hull: vertices of the primal correspond to the
    facet planes of conv{u_i / h_i}.  Redundant half-spaces drop out because
    their dual points are not hull vertices.
    """
    dual_pts = normals / offsets[:, None]
    try:
        hull = ConvexHull(dual_pts)
    except QhullError as exc:
        raise InputError(f"degenerate half-space family: {exc}") from exc
    w = hull.equations[:, :-1]
    b = -hull.equations[:, -1]
    if np.any(b <= 1e-12):
        raise InputError("half-space family does not bound a body (normals must positively span)")
    verts = w / b[:, None]
    scale = np.max(np.linalg.norm(verts, axis=1))
    return _dedupe_rows(verts, _DEDUP_TOL * max(scale, 1.0))


def _facet_table(vertices):
    """Hull vertices plus exact facet (normal, offset, area) data, n in {2,3}."""
    vertices = np.asarray(vertices, dtype=float)
    dim = vertices.shape[1]
    try:
        hull = ConvexHull(vertices)
    except QhullError as exc:
        raise InputError(f"degenerate vertex set: {exc}") from exc
    if dim == 2:
        vs = vertices[hull.vertices]            # counterclockwise
        edges = np.roll(vs, -1, axis=0) - vs
        lengths = np.linalg.norm(edges, axis=1)
        if np.any(lengths <= 0):
            raise InputError("repeated vertices in polygon")
        normals = np.column_stack([edges[:, 1], -edges[:, 0]]) / lengths[:, None]
        offsets = np.einsum("ij,ij->i", normals, vs)
        return vs, normals, offsets, lengths
    if dim == 3:
        vs = vertices[hull.vertices]
        reps, offs, areas = [], [], []
        for simplex, eq in zip(hull.simplices, hull.equations):
            normal = eq[:3]
            offset = -eq[3]
            a, b, c = vertices[simplex]
            area = 0.5 * np.linalg.norm(np.cross(b - a, c - a))
            for i, rep in enumerate(reps):
                if np.dot(rep, normal) >= 1.0 - 1e-10 and abs(offs[i] - offset) <= 1e-9 * (1 + abs(offset)):
                    areas[i] += area
                    break
            else:
                reps.append(normal)
                offs.append(offset)
                areas.append(area)
        return vs, np.array(reps), np.array(offs), np.array(areas)
    raise UnsupportedError("exact facet data is limited to dimensions 2 and 3")


class _Polytope(ConvexBody):
    """Shared exact kernel for both polytope representations."""

    _verts: np.ndarray
    _fnormals: np.ndarray
    _foffsets: np.ndarray
    _fareas: np.ndarray

    def _install_facets(self, vertices):
        if self.dim in (2, 3):
            vs, normals, offsets, areas = _facet_table(vertices)
        else:
            try:
                hull = ConvexHull(vertices)
            except QhullError as exc:
                raise InputError(f"degenerate vertex set: {exc}") from exc
            vs = np.asarray(vertices, dtype=float)[hull.vertices]
            normals = hull.equations[:, :-1]
            offsets = -hull.equations[:, -1]
            areas = None
        scale = np.max(np.linalg.norm(vs, axis=1))
        if np.min(offsets) <= _BOUNDARY_RATIO * scale:
            raise DomainError("origin too close to the boundary (or outside)")
        self._verts = vs
        self._fnormals = normals
        self._foffsets = offsets
        self._fareas = areas

    @property
    def vertices(self):
        return self._verts

    def facet_data(self):
        """(unit outward normals, offsets, facet areas); exact for n in {2,3}."""
        if self._fareas is None:
            raise UnsupportedError("exact facet areas require dimension 2 or 3")
        return self._fnormals, self._foffsets, self._fareas

    def support(self, u):
        mat, single = _directions(u, self.dim)
        return _ret(np.max(mat @ self._verts.T, axis=1), single)

    def radial(self, u):
        mat, single = _directions(u, self.dim)
        dots = mat @ self._fnormals.T
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            ratios = np.where(dots > 1e-15, self._foffsets[None, :] / dots, np.inf)
        return _ret(np.min(ratios, axis=1), single)

    def volume(self, monte_carlo_samples=None, seed=0):
        if self._fareas is not None:
            return float(np.dot(self._foffsets, self._fareas)) / self.dim
        if monte_carlo_samples is None:
            raise UnsupportedError(
                "exact polytope volume requires dimension 2 or 3; "
                "pass monte_carlo_samples to opt into an estimate"
            )
        rng = np.random.default_rng(seed)
        lo, hi = self._verts.min(axis=0), self._verts.max(axis=0)
        pts = rng.uniform(lo, hi, size=(int(monte_carlo_samples), self.dim))
        inside = np.all(pts @ self._fnormals.T <= self._foffsets[None, :], axis=1)
        return float(np.prod(hi - lo) * inside.mean())

    def centroid(self):
        vs = self._verts
        if self.dim == 2:
            x, y = vs[:, 0], vs[:, 1]
            xn, yn = np.roll(x, -1), np.roll(y, -1)
            cross = x * yn - xn * y
            area = 0.5 * np.sum(cross)
            cx = np.sum((x + xn) * cross) / (6.0 * area)
            cy = np.sum((y + yn) * cross) / (6.0 * area)
            return np.array([cx, cy])
        if self.dim == 3:
            hull = ConvexHull(vs)
            total = 0.0
            acc = np.zeros(3)
            for simplex in hull.simplices:
                a, b, c = vs[simplex]
                vol = np.linalg.det(np.stack([a, b, c])) / 6.0
                if vol < 0:
                    b, c = c, b
                    vol = -vol
                total += vol
                acc += vol * (a + b + c) / 4.0
            return acc / total
        raise UnsupportedError("exact centroid requires dimension 2 or 3")


class HPolytope(_Polytope):
    """Intersection of half-spaces <x, u_i> <= h_i with unit normals u_i and
    positive offsets h_i.  Duplicate normals (angular distance below 1e-10)
    are merged, keeping the smallest offset."""

    def __init__(self, normals, offsets):
        normals = np.asarray(normals, dtype=float)
        offsets = np.asarray(offsets, dtype=float)
        if normals.ndim != 2 or normals.shape[0] != offsets.shape[0]:
            raise InputError("normals must be (m, n) with matching offsets (m,)")
        if normals.shape[1] < 2:
            raise InputError("dimension must be at least 2")
        norms = np.linalg.norm(normals, axis=1)
        if np.any(np.abs(norms - 1.0) > _UNIT_TOL):
            raise InputError("half-space normals must be unit vectors")
        if np.any(offsets <= 0):
            raise InputError("half-space offsets must be positive")
        keep_n, keep_h = [], []
        for u, h in zip(normals, offsets):
            for i, v in enumerate(keep_n):
                if np.dot(u, v) >= 1.0 - 1e-12:
                    keep_h[i] = min(keep_h[i], h)
                    break
            else:
                keep_n.append(u)
                keep_h.append(h)
        self.normals = np.array(keep_n)
        self.offsets = np.array(keep_h)
        self.dim = self.normals.shape[1]
        vertices = _halfspace_vertices(self.normals, self.offsets)
        self._install_facets(vertices)

    def polar(self):
        return VPolytope(self.normals / self.offsets[:, None])

    def linear_map(self, T):
        T = _check_transform(T, self.dim)
        w = np.linalg.solve(T.T, self.normals.T).T
        lens = np.linalg.norm(w, axis=1)
        return HPolytope(w / lens[:, None], self.offsets / lens)

    def translate(self, z):
        z = np.asarray(z, dtype=float)
        offsets = self.offsets - self.normals @ z
        if np.any(offsets <= 0):
            raise DomainError("translation moves the origin outside the body")
        return HPolytope(self.normals, offsets)

    def to_json(self):
        return {
            "dim": self.dim,
            "repr": {
                "type": "h-polytope",
                "normals": self.normals.tolist(),
                "offsets": self.offsets.tolist(),
            },
        }


class VPolytope(_Polytope):
    """Convex hull of a finite point set containing the origin strictly."""

    def __init__(self, vertices):
        vertices = np.asarray(vertices, dtype=float)
        if vertices.ndim != 2 or vertices.shape[1] < 2:
            raise InputError("vertices must be an (m, n) array with n >= 2")
        self.dim = vertices.shape[1]
        self._install_facets(vertices)

    def polar(self):
        lens = np.linalg.norm(self._verts, axis=1)
        return HPolytope(self._verts / lens[:, None], 1.0 / lens)

    def linear_map(self, T):
        T = _check_transform(T, self.dim)
        return VPolytope(self._verts @ T.T)

    def translate(self, z):
        z = np.asarray(z, dtype=float)
        return VPolytope(self._verts - z[None, :])

    def to_json(self):
        return {
            "dim": self.dim,
            "repr": {"type": "v-polytope", "vertices": self._verts.tolist()},
        }


# ---------------------------------------------------------------------------
# quadric bodies
# ---------------------------------------------------------------------------

class Ellipsoid(ConvexBody):
    """Linear image A * B of the unit ball; support h(u) = |A^T u|."""

    def __init__(self, matrix):
        A = np.asarray(matrix, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise InputError("ellipsoid matrix must be square")
        if A.shape[0] < 2:
            raise InputError("dimension must be at least 2")
        det = np.linalg.det(A)
        if abs(det) <= 1e-12:
            raise InputError("ellipsoid matrix is singular")
        self.matrix = A
        self.dim = A.shape[0]
        self._det = abs(det)
        self._inv = np.linalg.inv(A)

    def support(self, u):
        mat, single = _directions(u, self.dim)
        return _ret(np.linalg.norm(mat @ self.matrix, axis=1), single)

    def radial(self, u):
        mat, single = _directions(u, self.dim)
        return _ret(1.0 / np.linalg.norm(mat @ self._inv.T, axis=1), single)

    def polar(self):
        return Ellipsoid(self._inv.T)

    def volume(self):
        return self._det * unit_ball_volume(self.dim)

    def linear_map(self, T):
        T = _check_transform(T, self.dim)
        return Ellipsoid(T @ self.matrix)

    def translate(self, z):
        z = np.asarray(z, dtype=float)
        if np.linalg.norm(z) == 0.0:
            return self
        M = self.matrix @ self.matrix.T
        r2 = M[0, 0]
        if np.allclose(M, r2 * np.eye(self.dim), rtol=0, atol=1e-14 * abs(r2)):
            return ShiftedBall(-z, math.sqrt(r2))
        return ShiftedEllipsoid(self.matrix, -z)

    def centroid(self):
        return np.zeros(self.dim)

    def curvature_values(self, u):
        """f(u) = det(A)^2 / |A^T u|^{n+1}, the surface-area density."""
        mat, single = _directions(u, self.dim)
        h = np.linalg.norm(mat @ self.matrix, axis=1)
        return _ret(self._det ** 2 / h ** (self.dim + 1), single)

    def to_json(self):
        return {"dim": self.dim, "repr": {"type": "ellipsoid", "matrix": self.matrix.tolist()}}


def ball(n: int) -> Ellipsoid:
    """The unit Euclidean ball as an ellipsoid with identity matrix."""
    return Ellipsoid(np.eye(n))


class ShiftedEllipsoid(ConvexBody):
    """c + A * B, an ellipsoid centered away from the origin.

    Produced by translating ellipsoids and by polarizing shifted balls; both
    the polar and the radial function stay in closed form.
    """

    def __init__(self, matrix, center):
        A = np.asarray(matrix, dtype=float)
        c = np.asarray(center, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or c.shape != (A.shape[0],):
            raise InputError("need a square matrix and a matching center vector")
        det = np.linalg.det(A)
        if abs(det) <= 1e-12:
            raise InputError("ellipsoid matrix is singular")
        self.matrix = A
        self.center = c
        self.dim = A.shape[0]
        self._det = abs(det)
        self._inv = np.linalg.inv(A)
        q = self._inv @ c
        if np.linalg.norm(q) >= 1.0 - _BOUNDARY_RATIO:
            raise DomainError("origin too close to the boundary (or outside)")
        self._q = q

    def support(self, u):
        mat, single = _directions(u, self.dim)
        return _ret(mat @ self.center + np.linalg.norm(mat @ self.matrix, axis=1), single)

    def radial(self, u):
        mat, single = _directions(u, self.dim)
        w = mat @ self._inv.T
        wq = w @ self._q
        w2 = np.einsum("ij,ij->i", w, w)
        disc = wq ** 2 - w2 * (self._q @ self._q - 1.0)
        return _ret((wq + np.sqrt(disc)) / w2, single)

    def polar(self):
        # {y : y^T M y + 2<c,y> <= 1} with M = AA^T - cc^T; completing the
        # square gives the ellipsoid sqrt(s) M^{-1/2} B centered at -M^{-1}c
        A, c = self.matrix, self.center
        M = A @ A.T - np.outer(c, c)
        Minv = np.linalg.inv(M)
        s = 1.0 + c @ Minv @ c
        evals, evecs = np.linalg.eigh(M)
        if np.any(evals <= 0):
            raise DomainError("polar dual degenerates; origin not strictly interior")
        inv_root = evecs @ np.diag(1.0 / np.sqrt(evals)) @ evecs.T
        return ShiftedEllipsoid(math.sqrt(s) * inv_root, -Minv @ c)

    def volume(self):
        return self._det * unit_ball_volume(self.dim)

    def linear_map(self, T):
        T = _check_transform(T, self.dim)
        return ShiftedEllipsoid(T @ self.matrix, T @ self.center)

    def translate(self, z):
        return ShiftedEllipsoid(self.matrix, self.center - np.asarray(z, dtype=float))

    def centroid(self):
        return self.center.copy()

    def curvature_values(self, u):
        # the surface-area measure is translation invariant
        mat, single = _directions(u, self.dim)
        h = np.linalg.norm(mat @ self.matrix, axis=1)
        return _ret(self._det ** 2 / h ** (self.dim + 1), single)

    def to_json(self):
        return {
            "dim": self.dim,
            "repr": {
                "type": "shifted-ellipsoid",
                "matrix": self.matrix.tolist(),
                "center": self.center.tolist(),
            },
        }


class ShiftedBall(ConvexBody):
    """The ball z0 + r * B with |z0| < r; support h(u) = r + <z0, u>."""

    def __init__(self, center, radius):
        c = np.asarray(center, dtype=float)
        r = float(radius)
        if c.ndim != 1 or c.shape[0] < 2:
            raise InputError("center must be a vector of dimension >= 2")
        if r <= 0:
            raise InputError("radius must be positive")
        if r - np.linalg.norm(c) <= _BOUNDARY_RATIO * (r + np.linalg.norm(c)):
            raise DomainError("origin too close to the boundary (|center| must be < radius)")
        self.center = c
        self.radius = r
        self.dim = c.shape[0]

    def support(self, u):
        mat, single = _directions(u, self.dim)
        return _ret(self.radius + mat @ self.center, single)

    def radial(self, u):
        mat, single = _directions(u, self.dim)
        s = mat @ self.center
        return _ret(s + np.sqrt(s ** 2 + self.radius ** 2 - self.center @ self.center), single)

    def polar(self):
        return ShiftedEllipsoid(self.radius * np.eye(self.dim), self.center).polar()

    def volume(self):
        return unit_ball_volume(self.dim) * self.radius ** self.dim

    def linear_map(self, T):
        T = _check_transform(T, self.dim)
        return ShiftedEllipsoid(self.radius * T, T @ self.center)

    def translate(self, z):
        return ShiftedBall(self.center - np.asarray(z, dtype=float), self.radius)

    def centroid(self):
        return self.center.copy()

    def curvature_values(self, u):
        mat, single = _directions(u, self.dim)
        return _ret(np.full(mat.shape[0], self.radius ** (self.dim - 1)), single)

    def to_json(self):
        return {
            "dim": self.dim,
            "repr": {
                "type": "shifted-ball",
                "center": self.center.tolist(),
                "radius": self.radius,
            },
        }


# ---------------------------------------------------------------------------
# smooth planar bodies
# ---------------------------------------------------------------------------

class FourierBody2D(ConvexBody):
    """Planar body given by a trigonometric support expansion
    h(t) = sum_k a_k cos(kt) + b_k sin(kt).

    Convexity means h + h'' >= 0; the constructor verifies this on a dense
    angle grid.  All derivatives come exactly from the coefficients.
    """

    _CHECK_N = 2048

    def __init__(self, a, b=None):
        a = np.atleast_1d(np.asarray(a, dtype=float))
        if b is None:
            b = np.zeros_like(a)
        b = np.atleast_1d(np.asarray(b, dtype=float))
        if a.shape != b.shape or a.ndim != 1:
            raise InputError("coefficient arrays a and b must be equal-length vectors")
        b = b.copy()
        b[0] = 0.0
        self.a = a
        self.b = b
        self.dim = 2
        self._k = np.arange(a.shape[0], dtype=float)
        thetas = 2.0 * math.pi * np.arange(self._CHECK_N) / self._CHECK_N
        h = self._trig(thetas, 0)
        if np.min(h) <= 0 or np.min(h) <= _BOUNDARY_RATIO * np.max(h):
            raise DomainError("origin too close to the boundary (support nearly vanishes)")
        fk = h + self._trig(thetas, 2)
        if np.min(fk) < -1e-9 * np.max(np.abs(h)):
            raise InputError("coefficients do not describe a convex body (h + h'' < 0)")

    def _trig(self, theta, order):
        theta = np.asarray(theta, dtype=float)
        ang = np.multiply.outer(theta, self._k)
        ct, st = np.cos(ang), np.sin(ang)
        if order == 0:
            return ct @ self.a + st @ self.b
        if order == 1:
            return (-st * self._k) @ self.a + (ct * self._k) @ self.b
        if order == 2:
            k2 = self._k ** 2
            return -(ct * k2) @ self.a - (st * k2) @ self.b
        raise ValueError(order)

    def support_angle(self, theta, order=0):
        """Support value (or derivative) at angle(s) theta."""
        out = self._trig(theta, order)
        return float(out) if np.isscalar(theta) else out

    def support(self, u):
        mat, single = _directions(u, 2)
        return _ret(self._trig(np.arctan2(mat[:, 1], mat[:, 0]), 0), single)

    def radial(self, u):
        mat, single = _directions(u, 2)
        return _ret(self.radial_angle(np.arctan2(mat[:, 1], mat[:, 0])), single)

    def radial_angle(self, phi):
        """Radial function at polar angle(s) phi.

        Solves for the boundary parameter t with x(t) = h u(t) + h' u'(t)
        pointing along phi; the polar angle of x(t) is monotone in t, so
        bisection is guaranteed.
        """
        scalar = np.ndim(phi) == 0
        phi = np.atleast_1d(np.asarray(phi, dtype=float))
        lo = phi - math.pi / 2 + 1e-12
        hi = phi + math.pi / 2 - 1e-12
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            g = mid + np.arctan2(self._trig(mid, 1), self._trig(mid, 0)) - phi
            pos = g > 0
            hi = np.where(pos, mid, hi)
            lo = np.where(pos, lo, mid)
        mid = 0.5 * (lo + hi)
        h = self._trig(mid, 0)
        hp = self._trig(mid, 1)
        out = np.sqrt(h ** 2 + hp ** 2)
        return float(out[0]) if scalar else out

    def polar(self, resolution=4096):
        thetas = 2.0 * math.pi * np.arange(resolution) / resolution
        rho = np.atleast_1d(self.radial_angle(thetas))
        h = self._trig(thetas, 0)
        return SampledBody2D(1.0 / rho, 1.0 / h)

    def volume(self):
        # Parseval: area = pi*a0^2 + (pi/2) * sum_k (1 - k^2)(a_k^2 + b_k^2)
        k = self._k[1:]
        tail = np.sum((1.0 - k ** 2) * (self.a[1:] ** 2 + self.b[1:] ** 2))
        return math.pi * self.a[0] ** 2 + 0.5 * math.pi * tail

    def linear_map(self, T):
        T = _check_transform(T, 2)
        return LinearImage(T, self)

    def translate(self, z):
        z = np.asarray(z, dtype=float)
        a, b = self.a.copy(), self.b.copy()
        if a.shape[0] < 2:
            a = np.append(a, 0.0)
            b = np.append(b, 0.0)
        a[1] -= z[0]
        b[1] -= z[1]
        return FourierBody2D(a, b)

    def centroid(self, resolution=4096):
        thetas = 2.0 * math.pi * np.arange(resolution) / resolution
        h = self._trig(thetas, 0)
        hp = self._trig(thetas, 1)
        fk = h + self._trig(thetas, 2)
        u = np.column_stack([np.cos(thetas), np.sin(thetas)])
        up = np.column_stack([-np.sin(thetas), np.cos(thetas)])
        x = h[:, None] * u + hp[:, None] * up
        w = 2.0 * math.pi / resolution
        area = 0.5 * w * np.sum(h * fk)
        moment = (w / 3.0) * (x * (h * fk)[:, None]).sum(axis=0)
        return moment / area

    def curvature_values(self, u):
        mat, single = _directions(u, 2)
        theta = np.arctan2(mat[:, 1], mat[:, 0])
        return _ret(self._trig(theta, 0) + self._trig(theta, 2), single)

    def to_json(self):
        return {"dim": 2, "repr": {"type": "fourier2d", "a": self.a.tolist(), "b": self.b.tolist()}}


class SampledBody2D(ConvexBody):
    """Planar convex body known through support and radial samples on the
    uniform angle grid.  Arises as the polar dual of smooth planar bodies.

    Values are exact at the nodes; between nodes both functions are
    interpolated periodically (piecewise linear)."""

    def __init__(self, support_values, radial_values):
        h = np.asarray(support_values, dtype=float)
        rho = np.asarray(radial_values, dtype=float)
        if h.shape != rho.shape or h.ndim != 1 or h.shape[0] < 8:
            raise InputError("need matching support/radial sample vectors (>= 8 nodes)")
        if np.any(h <= 0) or np.any(rho <= 0):
            raise DomainError("support and radial samples must be positive")
        self.dim = 2
        self.h_values = h
        self.rho_values = rho
        self.n_nodes = h.shape[0]
        self.thetas = 2.0 * math.pi * np.arange(self.n_nodes) / self.n_nodes

    def _interp(self, phi, values):
        phi = np.mod(phi, 2.0 * math.pi)
        xs = np.append(self.thetas, 2.0 * math.pi)
        ys = np.append(values, values[0])
        return np.interp(phi, xs, ys)

    def support(self, u):
        mat, single = _directions(u, 2)
        return _ret(self._interp(np.arctan2(mat[:, 1], mat[:, 0]), self.h_values), single)

    def radial(self, u):
        mat, single = _directions(u, 2)
        return _ret(self._interp(np.arctan2(mat[:, 1], mat[:, 0]), self.rho_values), single)

    def polar(self):
        return SampledBody2D(1.0 / self.rho_values, 1.0 / self.h_values)

    def volume(self):
        w = 2.0 * math.pi / self.n_nodes
        return 0.5 * w * np.sum(self.rho_values ** 2)

    def centroid(self):
        w = 2.0 * math.pi / self.n_nodes
        u = np.column_stack([np.cos(self.thetas), np.sin(self.thetas)])
        return (w / 3.0) * (u * (self.rho_values ** 3)[:, None]).sum(axis=0) / self.volume()

    def linear_map(self, T):
        raise UnsupportedError("apply linear maps before polarizing a smooth body")

    def translate(self, z):
        raise UnsupportedError("translate before polarizing a smooth body")

    def to_json(self):
        return {
            "dim": 2,
            "repr": {
                "type": "sampled2d",
                "support": self.h_values.tolist(),
                "radial": self.rho_values.tolist(),
            },
        }


class LinearImage(ConvexBody):
    """Lazy linear image T * K of a smooth base body.

    Support: h(v) = |T^T v| * h_base(T^T v / |T^T v|).  Used where the image
    has no closed coefficient form (e.g. sheared planar bodies)."""

    def __init__(self, T, base):
        self.T = _check_transform(T, base.dim)
        self.base = base
        self.dim = base.dim
        self._inv = np.linalg.inv(self.T)

    def support(self, u):
        mat, single = _directions(u, self.dim)
        w = mat @ self.T          # rows are T^T u
        lens = np.linalg.norm(w, axis=1)
        return _ret(lens * self.base.support(w / lens[:, None]), single)

    def radial(self, u):
        mat, single = _directions(u, self.dim)
        w = mat @ self._inv.T     # rows are T^{-1} u
        lens = np.linalg.norm(w, axis=1)
        return _ret(self.base.radial(w / lens[:, None]) / lens, single)

    def volume(self):
        return abs(np.linalg.det(self.T)) * self.base.volume()

    def polar(self):
        return LinearImage(self._inv.T, self.base.polar())

    def linear_map(self, T):
        T = _check_transform(T, self.dim)
        return LinearImage(T @ self.T, self.base)

    def translate(self, z):
        raise UnsupportedError("translate the base body before mapping")

    def centroid(self):
        return self.T @ self.base.centroid()


# ---------------------------------------------------------------------------
# derived operations
# ---------------------------------------------------------------------------

def polar(K: ConvexBody) -> ConvexBody:
    return K.polar()


def volume(K: ConvexBody) -> float:
    return K.volume()


def support(K: ConvexBody, u):
    return K.support(u)


def radial(K, u):
    return K.radial(u)


def linear_map(K: ConvexBody, T) -> ConvexBody:
    return K.linear_map(T)


def translate(K: ConvexBody, z) -> ConvexBody:
    return K.translate(z)


def centroid(K: ConvexBody):
    return K.centroid()


def _dense_directions(dim, count=512, seed=1234):
    if dim == 2:
        t = 2.0 * math.pi * np.arange(count) / count
        return np.column_stack([np.cos(t), np.sin(t)])
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((count, dim))
    return g / np.linalg.norm(g, axis=1)[:, None]


def _interior_step_bound(K, z, direction):
    """Largest t with z + t*direction still interior, from support slack."""
    if isinstance(K, _Polytope):
        U = K._fnormals
        slack = K._foffsets - U @ z
    else:
        U = _dense_directions(K.dim, 1024)
        slack = K.support(U) - U @ z
    comp = U @ direction
    with np.errstate(divide="ignore"):
        pos = np.where(comp > 1e-14, slack / comp, np.inf)
        neg = np.where(comp < -1e-14, slack / comp, -np.inf)
    return float(np.max(neg)), float(np.min(pos))


def _golden_section(f, lo, hi, tol=1e-10, max_iter=200):
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a < tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def santalo_point(K: ConvexBody, objective_tol=1e-8, gradient_tol=1e-6, max_sweeps=200):
    """The translation z* minimizing the polar volume of K - z.

    Solved by damped coordinate descent with golden-section line searches;
    returns z* once the finite-difference gradient norm is below
    ``gradient_tol``.  For centrally symmetric representations the center is
    returned directly.
    """
    if isinstance(K, Ellipsoid):
        return np.zeros(K.dim)
    if isinstance(K, (ShiftedBall, ShiftedEllipsoid)):
        return K.centroid()
    if isinstance(K, _Polytope) and K.dim not in (2, 3):
        raise UnsupportedError("Santalo point solve requires dimension 2 or 3")

    def objective(z):
        return K.translate(z).polar().volume()

    z = K.centroid()
    scale = max(1.0, float(np.max(np.abs(z))) + 1.0)
    f_cur = objective(z)
    for _ in range(max_sweeps):
        f_prev = f_cur
        for k in range(K.dim):
            e = np.zeros(K.dim)
            e[k] = 1.0
            t_lo, t_hi = _interior_step_bound(K, z, e)
            t_lo *= 0.95
            t_hi *= 0.95
            t_best = _golden_section(lambda t: objective(z + t * e), t_lo, t_hi)
            z = z + t_best * e
        f_cur = objective(z)
        if abs(f_prev - f_cur) <= objective_tol * abs(f_cur):
            step = 1e-6 * scale
            grad = np.zeros(K.dim)
            for k in range(K.dim):
                e = np.zeros(K.dim)
                e[k] = step
                grad[k] = (objective(z + e) - objective(z - e)) / (2 * step)
            if np.linalg.norm(grad) <= gradient_tol:
                return z
    raise ConvergenceError("Santalo point solve did not certify a stationary point", best=z)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BodyClassTag:
    """Membership flags for the standard body classes."""

    in_K0: bool        # origin strictly interior
    in_Kc: bool        # centroid at the origin (tolerance-checked)
    in_Ks: bool        # Santalo point at the origin (tolerance-checked)
    in_F0plus: bool    # positive continuous curvature function available


def has_curvature(K: ConvexBody) -> bool:
    return isinstance(K, (Ellipsoid, ShiftedEllipsoid, ShiftedBall, FourierBody2D))


def classify(K: ConvexBody, tol=1e-8, check_santalo=True) -> BodyClassTag:
    dirs = _dense_directions(K.dim)
    h = K.support(dirs)
    in_k0 = bool(np.min(h) > 0)
    scale = float(np.max(h))
    in_kc = in_k0 and bool(np.linalg.norm(K.centroid()) <= tol * scale)
    in_ks = False
    if in_k0 and check_santalo:
        try:
            in_ks = bool(np.linalg.norm(santalo_point(K)) <= 1e-6 * scale)
        except (UnsupportedError, ConvergenceError):
            in_ks = False
    return BodyClassTag(in_K0=in_k0, in_Kc=in_kc, in_Ks=in_ks, in_F0plus=has_curvature(K))


# ---------------------------------------------------------------------------
# random generation
# ---------------------------------------------------------------------------

def _random_polytope(n, size, rng):
    for _ in range(100):
        g = rng.standard_normal((size, n))
        dirs = g / np.linalg.norm(g, axis=1)[:, None]
        radii = rng.uniform(0.5, 1.5, size)
        pts = dirs * radii[:, None]
        try:
            body = VPolytope(pts)
            return VPolytope(body.vertices - body.centroid()[None, :])
        except (InputError, DomainError):
            continue
    raise GenerationError("could not build a valid random polytope")


def _random_ellipsoid(n, rng):
    g = rng.standard_normal((n, n))
    q, _ = np.linalg.qr(g)
    lams = rng.uniform(0.5, 2.0, n)   # condition number at most 4
    return Ellipsoid(q @ np.diag(lams) @ q.T)


def _random_fourier(n, size, rng):
    if n != 2:
        raise InputError("fourier2d bodies exist only in the plane")
    kmax = max(2, min(int(size), 10))
    a = np.zeros(kmax + 1)
    b = np.zeros(kmax + 1)
    a[0] = 1.0
    a[1] = rng.normal(0.0, 0.05)
    b[1] = rng.normal(0.0, 0.05)
    for k in range(2, kmax + 1):
        a[k] = rng.normal(0.0, 0.15 / k ** 2)
        b[k] = rng.normal(0.0, 0.15 / k ** 2)
    thetas = 2.0 * math.pi * np.arange(2048) / 2048
    k_arr = np.arange(kmax + 1, dtype=float)
    for _ in range(100):
        ang = np.multiply.outer(thetas, k_arr)
        h = np.cos(ang) @ a + np.sin(ang) @ b
        fk = h - (np.cos(ang) * k_arr ** 2) @ a - (np.sin(ang) * k_arr ** 2) @ b
        if np.min(h) > 0 and np.min(fk) >= 0.01 * np.min(h):
            return FourierBody2D(a, b)
        a[2:] *= 0.8
        b[2:] *= 0.8
    raise GenerationError("convexity projection failed for fourier2d body")


def _random_shifted_ball(n, rng):
    r = rng.uniform(0.6, 1.6)
    g = rng.standard_normal(n)
    direction = g / np.linalg.norm(g)
    return ShiftedBall(direction * rng.uniform(0.0, 0.7) * r, r)


def random_body(kind: str, n: int, size: int = 12, seed: int = 0, rng=None) -> ConvexBody:
    """Seeded random body generator.

    kind is one of ``polytope-hull``, ``ellipsoid``, ``fourier2d``,
    ``shifted-ball``.  The same (kind, n, size, seed) always produces the
    same body.
    """
    if rng is None:
        rng = np.random.default_rng(seed)
    if kind == "polytope-hull":
        return _random_polytope(n, size, rng)
    if kind == "ellipsoid":
        return _random_ellipsoid(n, rng)
    if kind == "fourier2d":
        return _random_fourier(n, size, rng)
    if kind == "shifted-ball":
        return _random_shifted_ball(n, rng)
    raise InputError(f"unknown body kind {kind!r}")


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------

def body_to_json(K: ConvexBody) -> dict:
    return K.to_json()


def body_from_json(data: dict) -> ConvexBody:
    try:
        rep = data["repr"]
        kind = rep["type"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed body JSON: {exc}") from exc
    if kind == "h-polytope":
        return HPolytope(rep["normals"], rep["offsets"])
    if kind == "v-polytope":
        return VPolytope(rep["vertices"])
    if kind == "ellipsoid":
        return Ellipsoid(rep["matrix"])
    if kind == "fourier2d":
        return FourierBody2D(rep["a"], rep.get("b"))
    if kind == "shifted-ball":
        return ShiftedBall(rep["center"], rep["radius"])
    if kind == "shifted-ellipsoid":
        return ShiftedEllipsoid(rep["matrix"], rep["center"])
    if kind == "sampled2d":
        return SampledBody2D(rep["support"], rep["radial"])
    raise InputError(f"unknown body type {kind!r}")
