"""Triangle meshes of helicoid patches and tube boundaries in upper half-space.

Vertices are ``(x, y, t)`` with ``z = x + iy`` and ``t > 0``. Each grid quad
``(i, j)`` is split into ``(i,j)->(i+1,j)->(i+1,j+1)`` and
``(i,j)->(i+1,j+1)->(i,j+1)``.

OBJ output is plain Wavefront ``v``/``f`` text. The per-vertex ``u_distance``
attribute (hyperbolic distance to the t-axis) is carried in a trailing
comment block, one ``#a <value>`` line per vertex, which ordinary viewers
ignore.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geometry as geo
from .errors import DomainError, ParseError
from .geometry import ComplexLength


@dataclass(frozen=True)
class HelicoidPatch:
    a: float
    u_range: tuple[float, float]
    v_range: tuple[float, float]
    nu: int = 64
    nv: int = 64

    def __post_init__(self):
        if self.nu < 2 or self.nv < 2:
            raise DomainError(f"grid needs nu, nv >= 2, got {self.nu} x {self.nv}")
        for name, (lo, hi) in (("u_range", self.u_range), ("v_range", self.v_range)):
            if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
                raise DomainError(f"{name} must be a finite interval lo < hi, got {(lo, hi)}")
        if not math.isfinite(self.a):
            raise DomainError(f"a must be finite, got {self.a!r}")

    @classmethod
    def for_curve(cls, cl: ComplexLength, v_max: float | None = None, nu: int = 64, nv: int = 64):
        """The annulus patch ``|u| <= r0``, ``0 <= v <= v_max`` (default one period ``ell``)."""
        r0 = geo.tube_radius(cl.ell)
        return cls(cl.a, (-r0, r0), (0.0, cl.ell if v_max is None else v_max), nu, nv)


@dataclass
class TriangleMesh:
    vertices: np.ndarray     # (n, 3) float: x, y, t
    triangles: np.ndarray    # (m, 3) int, 0-based
    u_distance: np.ndarray   # (n,) float

    @classmethod
    def empty(cls) -> "TriangleMesh":
        return cls(np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64), np.zeros(0))

    def euclidean_areas(self) -> np.ndarray:
        p = self.vertices[self.triangles]
        return 0.5 * np.linalg.norm(np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]), axis=1)

    def hyperbolic_area(self) -> float:
        """Sum of Euclidean triangle areas scaled by ``1/t^2`` at each centroid."""
        if len(self.triangles) == 0:
            return 0.0
        t_bar = self.vertices[self.triangles][:, :, 2].mean(axis=1)
        return float(np.sum(self.euclidean_areas() / t_bar**2))

    def axis_distance(self) -> np.ndarray:
        """Hyperbolic distance of each vertex to the t-axis, from coordinates alone."""
        x, y, t = self.vertices.T
        return np.arcsinh(np.hypot(x, y) / t)


def _grid_triangles(n_i: int, n_j: int, wrap_i: bool = False) -> np.ndarray:
    rows = n_i if wrap_i else n_i - 1
    i, j = np.meshgrid(np.arange(rows), np.arange(n_j - 1), indexing="ij")
    i, j = i.ravel(), j.ravel()
    i1 = (i + 1) % n_i
    a = i * n_j + j
    b = i1 * n_j + j
    c = i1 * n_j + j + 1
    d = i * n_j + j + 1
    tris = np.empty((2 * len(a), 3), dtype=np.int64)
    tris[0::2] = np.stack([a, b, c], axis=1)
    tris[1::2] = np.stack([a, c, d], axis=1)
    return tris


def sample_helicoid(patch: HelicoidPatch) -> TriangleMesh:
    u = np.linspace(*patch.u_range, patch.nu)
    v = np.linspace(*patch.v_range, patch.nv)
    uu, vv = np.meshgrid(u, v, indexing="ij")
    # same formula as geometry.helicoid_point, vectorized
    z = np.exp(vv + 1j * patch.a * vv) * np.tanh(uu)
    t = np.exp(vv) / np.cosh(uu)
    verts = np.stack([z.real.ravel(), z.imag.ravel(), t.ravel()], axis=1)
    return TriangleMesh(verts, _grid_triangles(patch.nu, patch.nv), np.abs(uu).ravel())


def sample_tube_boundary(cl: ComplexLength, n_circ: int, n_len: int,
                         v_max: float | None = None) -> TriangleMesh:
    """Equidistant surface at the maximal tube radius around the t-axis.

    Covers ``0 <= v <= v_max`` (default one period ``ell``); the azimuth turns
    by ``theta`` per period, so the end circles match under
    ``z -> exp(ell + i theta) z``.
    """
    if n_circ < 3 or n_len < 2:
        raise DomainError(f"need n_circ >= 3 and n_len >= 2, got {n_circ}, {n_len}")
    cosh_r0, sinh_r0 = geo.tube_cosh_sinh(cl.ell)
    r0 = math.asinh(sinh_r0)
    v_max = cl.ell if v_max is None else float(v_max)
    if not (math.isfinite(v_max) and v_max > 0.0):
        raise DomainError(f"v_max must be positive, got {v_max!r}")
    phi = 2.0 * np.pi * np.arange(n_circ) / n_circ
    v = np.linspace(0.0, v_max, n_len)
    pp, vv = np.meshgrid(phi, v, indexing="ij")
    az = pp + cl.theta * vv / cl.ell
    rho = np.exp(vv) * (sinh_r0 / cosh_r0)
    t = np.exp(vv) / cosh_r0
    verts = np.stack([(rho * np.cos(az)).ravel(), (rho * np.sin(az)).ravel(), t.ravel()], axis=1)
    return TriangleMesh(verts, _grid_triangles(n_circ, n_len, wrap_i=True), np.full(n_circ * n_len, r0))


# --------------------------------------------------------------------------
# OBJ text
# --------------------------------------------------------------------------

def write_obj(mesh: TriangleMesh) -> bytes:
    n, m = len(mesh.vertices), len(mesh.triangles)
    lines = [f"# helitube mesh: {n} vertices, {m} triangles, upper half-space (x, y, t)"]
    lines += [f"v {x:.9g} {y:.9g} {t:.9g}" for x, y, t in mesh.vertices]
    lines += [f"f {i + 1} {j + 1} {k + 1}" for i, j, k in mesh.triangles]
    if n:
        lines.append("# attribute u_distance: one '#a' line per vertex, in vertex order")
        lines += [f"#a {d:.9g}" for d in mesh.u_distance]
    return ("\n".join(lines) + "\n").encode("ascii")


def read_obj(data: bytes | str) -> TriangleMesh:
    """Parse the OBJ subset emitted by :func:`write_obj`."""
    text = data.decode("ascii") if isinstance(data, bytes) else data
    verts, faces, attr = [], [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        fields = line.split()
        if not fields:
            continue
        if fields[0] in ("v", "f") and len(fields) < 4:
            raise ParseError(f"{fields[0]!r} record needs three entries", lineno)
        try:
            if fields[0] == "v":
                verts.append([float(x) for x in fields[1:4]])
            elif fields[0] == "f":
                faces.append([int(x.split("/")[0]) - 1 for x in fields[1:4]])
            elif fields[0] == "#a":
                attr.append(float(fields[1]))
        except (ValueError, IndexError):
            raise ParseError(f"malformed OBJ record {fields[0]!r}", lineno) from None
    mesh = TriangleMesh(
        np.array(verts, dtype=float).reshape(-1, 3),
        np.array(faces, dtype=np.int64).reshape(-1, 3),
        np.array(attr if attr else [math.nan] * len(verts), dtype=float),
    )
    if len(mesh.u_distance) != len(verts):
        raise ParseError(f"{len(attr)} '#a' attribute lines for {len(verts)} vertices")
    if len(mesh.triangles) and (mesh.triangles.min() < 0 or mesh.triangles.max() >= len(verts)):
        raise ParseError("face index out of range")
    return mesh
