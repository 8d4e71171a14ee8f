"""Parametrized interfaces, surface quadrature, and surface functionals.

Supported shapes (all with analytic frames, curvatures and signed distance):
flat periodic patch in R^2/R^3, circle in R^2, sphere in R^3, straight
filament segment in R^3 (periodic), circular filament in R^3.

Quadrature is product Gauss-Legendre in non-periodic chart directions and
uniform (trapezoidal) in periodic ones; the sphere uses a latitude-longitude
Gauss grid whose nodes avoid the poles.  All reductions run through the
deterministic pairwise summation.
"""

from __future__ import annotations

import csv

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DimensionMismatch, TubeTooNarrow, UnsupportedBoundary
from .fields import ScalarField, VectorField
from .jets import Jet, jet_exp, jet_norm
from .sums import pairwise_dot


def gauss_rule(lo: float, hi: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights on [lo, hi]."""
    x, w = leggauss(n)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def uniform_rule(lo: float, hi: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Midpoint rule on [lo, hi]; spectrally accurate for periodic integrands."""
    h = (hi - lo) / n
    return lo + h * (np.arange(n) + 0.5), np.full(n, h)


class _Interface:
    """Shared storage for parametrized interfaces of any codimension."""

    codim = 1

    def __init__(self, dim, nodes, weights, tangents, curvatures, closed, measure,
                 focal_width, config):
        self.dim = int(dim)
        self.nodes = nodes
        self.weights = weights
        self.tangents = tangents  # (M, dim - codim, dim)
        self.curvatures = curvatures  # (M, dim - codim)
        self.closed = bool(closed)
        self.measure = float(measure)  # closed-form H^{dim-codim}(Gamma)
        self.focal_width = float(focal_width)
        self.config = dict(config)

    @property
    def n_nodes(self) -> int:
        return self.nodes.shape[0]

    def dump_quadrature_csv(self, path) -> None:
        """Debug dump: node coordinates, weight, frame data, curvatures."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            coords = [f"x{i+1}" for i in range(self.dim)]
            if self.codim == 1:
                frame = [f"n{i+1}" for i in range(self.dim)]
            else:
                frame = [f"p{i+1}" for i in range(self.dim)] + [f"q{i+1}" for i in range(self.dim)]
            kappas = [f"kappa{i+1}" for i in range(self.tangents.shape[1])]
            writer.writerow(coords + ["weight"] + frame + kappas)
            for k in range(self.n_nodes):
                row = list(self.nodes[k]) + [self.weights[k]]
                if self.codim == 1:
                    row += list(self.normals[k])
                else:
                    row += list(self.frame_p[k]) + list(self.frame_q[k])
                row += list(self.curvatures[k])
                writer.writerow([format(v, ".17g") for v in row])


class Hypersurface(_Interface):
    """Codimension-one interface with outward unit normal."""

    codim = 1

    def __init__(self, dim, nodes, weights, normals, tangents, curvatures, closed,
                 measure, focal_width, config):
        super().__init__(dim, nodes, weights, tangents, curvatures, closed, measure,
                         focal_width, config)
        self.normals = normals

    # shape-specific callables are attached by the constructors below
    def signed_distance(self, x):
        raise NotImplementedError

    def closest_point(self, x):
        raise NotImplementedError

    def normal_at(self, x):
        raise NotImplementedError

    def distance_jet(self, xb) -> Jet:
        raise NotImplementedError


class Filament(_Interface):
    """Codimension-two interface (curve in R^3) with orthonormal normal pair."""

    codim = 2

    def __init__(self, dim, nodes, weights, frame_p, frame_q, tangents, curvatures,
                 closed, measure, focal_width, config):
        super().__init__(dim, nodes, weights, tangents, curvatures, closed, measure,
                         focal_width, config)
        self.frame_p = frame_p
        self.frame_q = frame_q

    @property
    def normal_complex(self) -> np.ndarray:
        """Complexified normal p + iq at the quadrature nodes."""
        return self.frame_p + 1j * self.frame_q

    def transverse_jets(self, xb) -> tuple[Jet, Jet]:
        """Jets of the two signed transverse coordinates in the (p, q) frame."""
        raise NotImplementedError

    def tube_jacobian(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Volume element of the normal exponential map at offsets (a, b)."""
        raise NotImplementedError


# ---------------------------------------------------------------------------
# shape constructors
# ---------------------------------------------------------------------------


def circle(radius: float, center=(0.0, 0.0), n_nodes: int = 256) -> Hypersurface:
    r = float(radius)
    c = np.asarray(center, dtype=float)
    theta, w = uniform_rule(0.0, 2.0 * np.pi, n_nodes)
    ct, st = np.cos(theta), np.sin(theta)
    nodes = c + r * np.stack([ct, st], axis=1)
    normals = np.stack([ct, st], axis=1)
    tangents = np.stack([-st, ct], axis=1)[:, None, :]
    curvatures = np.full((n_nodes, 1), 1.0 / r)
    g = Hypersurface(2, nodes, r * w, normals, tangents, curvatures, True,
                     2.0 * np.pi * r, r,
                     {"type": "circle", "radius": r, "center": list(c), "nodes": n_nodes})

    def signed_distance(x):
        xb = np.atleast_2d(np.asarray(x, dtype=float))
        d = np.linalg.norm(xb - c, axis=1) - r
        return d if np.ndim(x) == 2 else float(d[0])

    def closest_point(x):
        xb = np.atleast_2d(np.asarray(x, dtype=float))
        dx = xb - c
        out = c + r * dx / np.linalg.norm(dx, axis=1)[:, None]
        return out if np.ndim(x) == 2 else out[0]

    def normal_at(x):
        xb = np.atleast_2d(np.asarray(x, dtype=float))
        dx = xb - c
        out = dx / np.linalg.norm(dx, axis=1)[:, None]
        return out if np.ndim(x) == 2 else out[0]

    def distance_jet(xb):
        shifted = xb - c
        return jet_norm(shifted) - r

    g.signed_distance = signed_distance
    g.closest_point = closest_point
    g.normal_at = normal_at
    g.distance_jet = distance_jet
    return g


def sphere(radius: float, center=(0.0, 0.0, 0.0), n_polar: int = 32,
           n_azimuth: int = 64) -> Hypersurface:
    r = float(radius)
    c = np.asarray(center, dtype=float)
    mu, wmu = leggauss(n_polar)  # mu = cos(polar angle), nodes avoid the poles
    phi, wphi = uniform_rule(0.0, 2.0 * np.pi, n_azimuth)
    mu_g, phi_g = np.meshgrid(mu, phi, indexing="ij")
    w_g = np.outer(wmu, wphi).ravel()
    mu_f, phi_f = mu_g.ravel(), phi_g.ravel()
    sin_t = np.sqrt(1.0 - mu_f**2)
    nx = sin_t * np.cos(phi_f)
    ny = sin_t * np.sin(phi_f)
    nz = mu_f
    normals = np.stack([nx, ny, nz], axis=1)
    nodes = c + r * normals
    tau_phi = np.stack([-np.sin(phi_f), np.cos(phi_f), np.zeros_like(phi_f)], axis=1)
    tau_theta = np.stack([mu_f * np.cos(phi_f), mu_f * np.sin(phi_f), -sin_t], axis=1)
    tangents = np.stack([tau_theta, tau_phi], axis=1)
    m = nodes.shape[0]
    curvatures = np.full((m, 2), 1.0 / r)
    g = Hypersurface(3, nodes, r * r * w_g, normals, tangents, curvatures, True,
                     4.0 * np.pi * r * r, r,
                     {"type": "sphere", "radius": r, "center": list(c),
                      "n_polar": n_polar, "n_azimuth": n_azimuth})

    def signed_distance(x):
        xb = np.atleast_2d(np.asarray(x, dtype=float))
        d = np.linalg.norm(xb - c, axis=1) - r
        return d if np.ndim(x) == 2 else float(d[0])

    def closest_point(x):
        xb = np.atleast_2d(np.asarray(x, dtype=float))
        dx = xb - c
        out = c + r * dx / np.linalg.norm(dx, axis=1)[:, None]
        return out if np.ndim(x) == 2 else out[0]

    def normal_at(x):
        xb = np.atleast_2d(np.asarray(x, dtype=float))
        dx = xb - c
        out = dx / np.linalg.norm(dx, axis=1)[:, None]
        return out if np.ndim(x) == 2 else out[0]

    def distance_jet(xb):
        return jet_norm(xb - c) - r

    g.signed_distance = signed_distance
    g.closest_point = closest_point
    g.normal_at = normal_at
    g.distance_jet = distance_jet
    return g


def flat_patch(dim: int, axis: int = 0, offset: float = 0.0, extents=None,
               n_per_axis: int = 48, periodic: bool = True) -> Hypersurface:
    """Flat interface {x_axis = offset} over a rectangular patch.

    With ``periodic=True`` (default) the patch is treated as periodically
    identified (no boundary), which is the regime every shipped experiment
    uses: test fields either vanish near the patch edges or are periodic
    across them.  ``periodic=False`` marks the patch as having a boundary,
    which closed-interface functionals must refuse.
    """
    dim = int(dim)
    axis = int(axis)
    chart_axes = [i for i in range(dim) if i != axis]
    if extents is None:
        extents = [[-1.0, 1.0] for _ in chart_axes]
    extents = [tuple(map(float, e)) for e in extents]
    rules = [gauss_rule(lo, hi, n_per_axis) for lo, hi in extents]
    if dim == 2:
        y, wy = rules[0]
        chart = y[:, None]
        w = wy
    elif dim == 3:
        (y1, w1), (y2, w2) = rules
        a, b = np.meshgrid(y1, y2, indexing="ij")
        chart = np.stack([a.ravel(), b.ravel()], axis=1)
        w = np.outer(w1, w2).ravel()
    else:
        raise DimensionMismatch("flat_patch supports ambient dimension 2 or 3")
    m = chart.shape[0]
    nodes = np.empty((m, dim))
    nodes[:, axis] = offset
    for k, ca in enumerate(chart_axes):
        nodes[:, ca] = chart[:, k]
    normals = np.zeros((m, dim))
    normals[:, axis] = 1.0
    tangents = np.zeros((m, dim - 1, dim))
    for k, ca in enumerate(chart_axes):
        tangents[:, k, ca] = 1.0
    curvatures = np.zeros((m, dim - 1))
    measure = float(np.prod([hi - lo for lo, hi in extents]))
    g = Hypersurface(dim, nodes, w, normals, tangents, curvatures, bool(periodic),
                     measure, np.inf,
                     {"type": "flat_patch", "dim": dim, "axis": axis, "offset": offset,
                      "extents": [list(e) for e in extents], "n_per_axis": n_per_axis})

    def signed_distance(x):
        xb = np.atleast_2d(np.asarray(x, dtype=float))
        d = xb[:, axis] - offset
        return d if np.ndim(x) == 2 else float(d[0])

    def closest_point(x):
        xb = np.atleast_2d(np.asarray(x, dtype=float)).copy()
        xb[:, axis] = offset
        return xb if np.ndim(x) == 2 else xb[0]

    def normal_at(x):
        xb = np.atleast_2d(np.asarray(x, dtype=float))
        out = np.zeros_like(xb)
        out[:, axis] = 1.0
        return out if np.ndim(x) == 2 else out[0]

    def distance_jet(xb):
        return Jet.coordinate(xb, axis) - offset

    g.signed_distance = signed_distance
    g.closest_point = closest_point
    g.normal_at = normal_at
    g.distance_jet = distance_jet
    return g


def straight_filament(length: float = 1.0, n_nodes: int = 24) -> Filament:
    """Periodic straight filament along e1 through the origin in R^3.

    Longitudinal quadrature is Gauss-Legendre: exact for polynomial densities
    and spectral for the periodic ones the vortex experiments use.
    """
    ell = float(length)
    s, w = gauss_rule(0.0, ell, n_nodes)
    nodes = np.stack([s, np.zeros_like(s), np.zeros_like(s)], axis=1)
    tangents = np.zeros((n_nodes, 1, 3))
    tangents[:, 0, 0] = 1.0
    p = np.zeros((n_nodes, 3))
    p[:, 1] = 1.0
    q = np.zeros((n_nodes, 3))
    q[:, 2] = 1.0
    curvatures = np.zeros((n_nodes, 1))
    g = Filament(3, nodes, w, p, q, tangents, curvatures, True, ell, np.inf,
                 {"type": "straight_filament", "length": ell, "nodes": n_nodes})

    def transverse_jets(xb):
        return Jet.coordinate(xb, 1), Jet.coordinate(xb, 2)

    def tube_jacobian(a, b):
        return np.ones_like(a)

    def distance(x):
        xb = np.atleast_2d(np.asarray(x, dtype=float))
        d = np.hypot(xb[:, 1], xb[:, 2])
        return d if np.ndim(x) == 2 else float(d[0])

    g.transverse_jets = transverse_jets
    g.tube_jacobian = tube_jacobian
    g.distance = distance
    return g


def circular_filament(radius: float, n_nodes: int = 128) -> Filament:
    """Circle of the given radius in the x1-x2 plane of R^3.

    The normal frame (radial direction, e3) is parallel with respect to the
    normal connection, so the dbar form is computed in a smooth frame.
    """
    r = float(radius)
    alpha, w = uniform_rule(0.0, 2.0 * np.pi, n_nodes)
    ca, sa = np.cos(alpha), np.sin(alpha)
    nodes = np.stack([r * ca, r * sa, np.zeros_like(ca)], axis=1)
    tangents = np.stack([-sa, ca, np.zeros_like(ca)], axis=1)[:, None, :]
    p = np.stack([ca, sa, np.zeros_like(ca)], axis=1)
    q = np.zeros((n_nodes, 3))
    q[:, 2] = 1.0
    curvatures = np.full((n_nodes, 1), 1.0 / r)
    g = Filament(3, nodes, r * w, p, q, tangents, curvatures, True, 2.0 * np.pi * r, r,
                 {"type": "circular_filament", "radius": r, "nodes": n_nodes})

    def transverse_jets(xb):
        r_xy = jet_norm(xb[:, :2])
        # embed the 2-d jet into ambient R^3 derivatives
        m = xb.shape[0]
        grad = np.zeros((m, 3))
        grad[:, :2] = r_xy.grad
        hess = np.zeros((m, 3, 3))
        hess[:, :2, :2] = r_xy.hess
        a = Jet(r_xy.val - r, grad, hess)
        b = Jet.coordinate(xb, 2)
        return a, b

    def tube_jacobian(a, b):
        return 1.0 + a / r

    def distance(x):
        xb = np.atleast_2d(np.asarray(x, dtype=float))
        d = np.hypot(np.hypot(xb[:, 0], xb[:, 1]) - r, xb[:, 2])
        return d if np.ndim(x) == 2 else float(d[0])

    g.transverse_jets = transverse_jets
    g.tube_jacobian = tube_jacobian
    g.distance = distance
    return g


def shape_from_config(spec: dict):
    from .errors import ConfigError

    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError("shape descriptor must be a dict with a 'type' key")
    kind = spec["type"]
    known = {
        "circle": {"type", "radius", "center", "nodes"},
        "sphere": {"type", "radius", "center", "n_polar", "n_azimuth"},
        "flat_patch": {"type", "dim", "axis", "offset", "extents", "n_per_axis"},
        "straight_filament": {"type", "length", "nodes"},
        "circular_filament": {"type", "radius", "nodes"},
    }
    if kind not in known:
        raise ConfigError(f"unknown shape: {kind!r}")
    extra = set(spec) - known[kind]
    if extra:
        raise ConfigError(f"unknown keys for shape {kind!r}: {sorted(extra)}")
    if kind == "circle":
        return circle(float(spec["radius"]), spec.get("center", (0.0, 0.0)),
                      int(spec.get("nodes", 256)))
    if kind == "sphere":
        return sphere(float(spec["radius"]), spec.get("center", (0.0, 0.0, 0.0)),
                      int(spec.get("n_polar", 32)), int(spec.get("n_azimuth", 64)))
    if kind == "flat_patch":
        return flat_patch(int(spec["dim"]), int(spec.get("axis", 0)),
                          float(spec.get("offset", 0.0)), spec.get("extents"),
                          int(spec.get("n_per_axis", 48)))
    if kind == "straight_filament":
        return straight_filament(float(spec.get("length", 1.0)), int(spec.get("nodes", 24)))
    return circular_filament(float(spec["radius"]), int(spec.get("nodes", 128)))


# ---------------------------------------------------------------------------
# surface functions
# ---------------------------------------------------------------------------


class SurfaceFunction:
    """Function on Gamma, realized as the restriction of an ambient field."""

    def __init__(self, surface, ambient: ScalarField, label=""):
        if ambient.state_dim != 1:
            raise DimensionMismatch("surface functions are real scalar valued")
        self.surface = surface
        self.ambient = ambient
        self.label = label

    def values(self) -> np.ndarray:
        return self.ambient.eval(self.surface.nodes)

    def surface_gradient(self) -> np.ndarray:
        """Tangential gradient at the quadrature nodes (ambient gradient projected)."""
        g = self.ambient.gradient(self.surface.nodes)
        if self.surface.codim == 1:
            n = self.surface.normals
            return g - np.einsum("mi,mi->m", g, n)[:, None] * n
        p, q = self.surface.frame_p, self.surface.frame_q
        g = g - np.einsum("mi,mi->m", g, p)[:, None] * p
        return g - np.einsum("mi,mi->m", g, q)[:, None] * q


# ---------------------------------------------------------------------------
# surface functionals
# ---------------------------------------------------------------------------


def _node_values(g, f) -> np.ndarray:
    if isinstance(f, SurfaceFunction):
        return f.values()
    if isinstance(f, ScalarField):
        return f.eval(g.nodes)
    if callable(f):
        return np.asarray(f(g.nodes), dtype=float)
    vals = np.asarray(f, dtype=float)
    if vals.shape != (g.n_nodes,):
        raise DimensionMismatch("node value array has wrong length")
    return vals


def surface_integral(g, f) -> float:
    """Quadrature of f over the interface."""
    return pairwise_dot(g.weights, _node_values(g, f))


def area_second_inner_variation(g, eta: VectorField, zeta: VectorField) -> float:
    """Second derivative of the deformed surface measure at t = 0.

    Integrand: div_G zeta + (div_G eta)^2 + sum_i |(D_tau_i eta)^perp|^2
               - sum_ij (tau_i . D_tau_j eta)(tau_j . D_tau_i eta).
    """
    x = g.nodes
    taus = g.tangents
    je = eta.jacobian(x)
    jz = zeta.jacobian(x)
    d_eta = np.einsum("mij,mkj->mki", je, taus)  # D_{tau_k} eta
    d_zeta = np.einsum("mij,mkj->mki", jz, taus)
    a = np.einsum("mji,mki->mjk", taus, d_eta)  # a[j,k] = tau_j . D_{tau_k} eta
    div_eta = np.einsum("mkk->m", a)
    div_zeta = np.einsum("mki,mki->m", taus, d_zeta)
    perp = d_eta - np.einsum("mjk,mji->mki", a, taus)
    term_perp = np.einsum("mki,mki->m", perp, perp)
    term_mix = np.einsum("mjk,mkj->m", a, a)
    integrand = div_zeta + div_eta**2 + term_perp - term_mix
    return pairwise_dot(g.weights, integrand)


def pushforward_area(g, eta: VectorField, zeta: VectorField, t: float) -> float:
    """Surface measure of Phi_t(Gamma) via the tangential Gram determinant."""
    x = g.nodes
    m = x.shape[0]
    mat = np.eye(g.dim)[None] + t * eta.jacobian(x) + 0.5 * t * t * zeta.jacobian(x)
    v = np.einsum("mij,mkj->mki", mat, g.tangents)
    gram = np.einsum("mki,mli->mkl", v, v)
    if gram.shape[1] == 1:
        factor = np.sqrt(gram[:, 0, 0])
    else:
        factor = np.sqrt(np.linalg.det(gram))
    return pairwise_dot(g.weights, factor)


def ac_discrepancy(g: Hypersurface, eta: VectorField) -> float:
    """Integral of (n, n . grad eta)^2 over Gamma (without any p-dependent factor)."""
    x = g.nodes
    je = eta.jacobian(x)
    n = g.normals
    val = np.einsum("mi,mij,mj->m", n, je, n)
    return pairwise_dot(g.weights, val**2)


def gl_discrepancy_densities(g: Filament, eta: VectorField) -> tuple[np.ndarray, np.ndarray]:
    """Pointwise discrepancy densities at the filament nodes, two routes.

    First: |D_perp eta_perp|^2 - 2 Jac_perp(eta_perp) from the transverse
    derivative matrix in the (p, q) frame; second: 4 |dbar f|^2 for the
    complexified transverse component f, via complex arithmetic.  The two are
    the same quantity and must agree to rounding.
    """
    if g.codim != 2:
        raise DimensionMismatch("gl_discrepancy needs a codimension-two interface")
    x = g.nodes
    je = eta.jacobian(x)
    p, q = g.frame_p, g.frame_q
    a = np.einsum("mi,mij,mj->m", p, je, p)
    b = np.einsum("mi,mij,mj->m", p, je, q)
    c = np.einsum("mi,mij,mj->m", q, je, p)
    d = np.einsum("mi,mij,mj->m", q, je, q)
    real_density = a * a + b * b + c * c + d * d - 2.0 * (a * d - b * c)
    dbar = 0.5 * ((a + 1j * c) + 1j * (b + 1j * d))
    dbar_density = 4.0 * np.abs(dbar) ** 2
    return real_density, dbar_density


def gl_discrepancy(g: Filament, eta: VectorField) -> tuple[float, float]:
    """Transverse discrepancy integrals of a filament deformation, both routes."""
    real_density, dbar_density = gl_discrepancy_densities(g, eta)
    return pairwise_dot(g.weights, real_density), pairwise_dot(g.weights, dbar_density)


def jacobi_form(g: Hypersurface, xi) -> float:
    """Stability form J(xi) = int_G (|grad_G xi|^2 - |A_G|^2 xi^2).

    Only closed interfaces are supported; the boundary contribution that
    would appear for interfaces meeting the container wall is out of scope.
    """
    if g.codim != 1:
        raise DimensionMismatch("jacobi_form is defined on hypersurfaces")
    if not g.closed:
        raise UnsupportedBoundary("jacobi_form requires a closed interface")
    if isinstance(xi, ScalarField):
        xi = SurfaceFunction(g, xi)
    vals = xi.values()
    grad = xi.surface_gradient()
    a2 = np.einsum("mk,mk->m", g.curvatures, g.curvatures)
    density = np.einsum("mi,mi->m", grad, grad) - a2 * vals**2
    return pairwise_dot(g.weights, density)


def quadratic_form_limit(g: Hypersurface, xi) -> float:
    """Limit quadratic form of the rescaled phase-field Hessians (same as jacobi_form
    on closed interfaces)."""
    return jacobi_form(g, xi)


def _smooth_step_jet(s: Jet, s0: float, s1: float) -> Jet:
    """C-infinity transition 1 -> 0 as s goes from s0 to s1 (jets, masked).

    The masks are placed where exp(-1/t) already underflows, so the clipped
    pieces are exactly the double-precision values of the smooth function.
    """
    m = s.val.shape[0]
    n = s.grad.shape[1]
    margin = (s1 - s0) / 700.0
    out = Jet(np.zeros(m), np.zeros((m, n)), np.zeros((m, n, n)))
    ones = s.val <= s0 + margin
    out.val[ones] = 1.0
    mid = (s.val > s0 + margin) & (s.val < s1 - margin)
    if np.any(mid):
        sub = Jet(s.val[mid], s.grad[mid], s.hess[mid])
        g1 = jet_exp(-((s1 - sub).reciprocal()))
        g2 = jet_exp(-((sub - s0).reciprocal()))
        res = g1 * (g1 + g2).reciprocal()
        out.val[mid] = res.val
        out.grad[mid] = res.grad
        out.hess[mid] = res.hess
    return out


def normal_extension(g: Hypersurface, xi, cutoff_width: float) -> VectorField:
    """Extend xi * n off Gamma, constant along normal lines, with a smooth cutoff.

    The resulting field satisfies (n, n . grad eta) = 0 on Gamma because both
    the transported value and the transported normal are constant in the
    normal direction and the cutoff has vanishing slope on Gamma.
    """
    if g.codim != 1:
        raise DimensionMismatch("normal_extension is defined for hypersurfaces")
    w = float(cutoff_width)
    if w > g.focal_width:
        raise TubeTooNarrow(
            f"cutoff width {w:g} exceeds the focal distance {g.focal_width:g}"
        )
    if isinstance(xi, SurfaceFunction):
        ambient = xi.ambient
    elif isinstance(xi, ScalarField):
        ambient = xi
    else:
        raise DimensionMismatch("xi must be a SurfaceFunction or ScalarField")
    kind = g.config["type"]
    s0, s1 = (0.5 * w) ** 2, w * w

    def compose_ambient(pj: list[Jet]) -> Jet:
        pts = np.stack([j.val for j in pj], axis=1)
        v = ambient._values(pts)[:, 0]
        gr = ambient._gradients(pts)[:, 0]
        hs = ambient._hessians(pts)[:, 0]
        jp = np.stack([j.grad for j in pj], axis=1)  # (M, N, N)
        hp = np.stack([j.hess for j in pj], axis=1)
        val = v
        grad = np.einsum("mk,mki->mi", gr, jp)
        hess = (
            np.einsum("mkl,mki,mlj->mij", hs, jp, jp)
            + np.einsum("mk,mkij->mij", gr, hp)
        )
        return Jet(val, grad, hess)

    if kind in ("circle", "sphere"):
        center = np.asarray(g.config["center"], dtype=float)
        radius = float(g.config["radius"])

        def jets_fn(xb):
            shifted = xb - center
            r = jet_norm(shifted)
            d = r - radius
            inv_r = r.reciprocal()
            coords = Jet.variables(xb)
            hats = [(coords[i] - center[i]) * inv_r for i in range(g.dim)]
            proj = [hats[i] * radius + center[i] for i in range(g.dim)]
            xi_at = compose_ambient(proj)
            chi = _smooth_step_jet(d * d, s0, s1)
            amp = xi_at * chi
            return [amp * hats[i] for i in range(g.dim)]

    elif kind == "flat_patch":
        axis = int(g.config["axis"])
        offset = float(g.config["offset"])

        def jets_fn(xb):
            coords = Jet.variables(xb)
            d = coords[axis] - offset
            proj = [Jet.constant(offset, xb) if i == axis else coords[i] for i in range(g.dim)]
            xi_at = compose_ambient(proj)
            chi = _smooth_step_jet(d * d, s0, s1)
            amp = xi_at * chi
            zero = Jet.constant(0.0, xb)
            return [amp if i == axis else zero for i in range(g.dim)]

    else:
        raise DimensionMismatch(f"normal_extension not available for shape {kind!r}")

    return VectorField.from_jets(g.dim, jets_fn, compactly_supported=False,
                                 label=f"normal_ext[{getattr(xi, 'label', '')}]")


# ---------------------------------------------------------------------------
# enclosed-region quadrature for volume functionals
# ---------------------------------------------------------------------------


def enclosed_region_quadrature(g: Hypersurface, n_radial: int = 48):
    """Nodes/weights over the region enclosed by a circle or a sphere."""
    kind = g.config["type"]
    center = np.asarray(g.config["center"], dtype=float)
    radius = float(g.config["radius"])
    r, wr = gauss_rule(0.0, radius, n_radial)
    if kind == "circle":
        theta, wt = uniform_rule(0.0, 2.0 * np.pi, max(64, g.n_nodes // 2))
        rr, tt = np.meshgrid(r, theta, indexing="ij")
        ww = np.outer(wr * r, wt).ravel()
        nodes = center + np.stack([(rr * np.cos(tt)).ravel(), (rr * np.sin(tt)).ravel()], axis=1)
        return nodes, ww
    if kind == "sphere":
        n_pol = int(g.config.get("n_polar", 32))
        n_az = int(g.config.get("n_azimuth", 64))
        mu, wmu = leggauss(n_pol)
        phi, wphi = uniform_rule(0.0, 2.0 * np.pi, n_az)
        rr, mm, pp = np.meshgrid(r, mu, phi, indexing="ij")
        ww = np.einsum("i,j,k->ijk", wr * r * r, wmu, wphi).ravel()
        sin_t = np.sqrt(1.0 - mm.ravel() ** 2)
        nodes = center + np.stack(
            [
                rr.ravel() * sin_t * np.cos(pp.ravel()),
                rr.ravel() * sin_t * np.sin(pp.ravel()),
                rr.ravel() * mm.ravel(),
            ],
            axis=1,
        )
        return nodes, ww
    raise DimensionMismatch(f"no enclosed region rule for shape {kind!r}")
