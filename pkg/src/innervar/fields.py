"""Scalar/vector fields on R^N and the quadratic deformation map.

Conventions used throughout the package:

* a vector field ``V`` has Jacobian ``J[i, j] = dV^i/dx_j``;
* the second-derivative tensor is ``S[i, j, k] = d^2 V^i / dx_j dx_k``,
  symmetrized in its last two indices;
* scalar fields may carry ``state_dim = 2`` (complex order parameters stored
  as two real components), in which case gradients have shape ``(2, N)``.

Fields built through the constructors in this module carry analytic
derivative callbacks (assembled with :mod:`innervar.jets`); fields built from
bare callables fall back to central finite differences with step
``eps_machine**(1/3) * max(1, |x|)``, which keeps every operation total.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NonInvertible
from .jets import Jet, jet_cos, jet_exp, jet_polynomial, jet_sin

_FD_STEP = float(np.finfo(float).eps) ** (1.0 / 3.0)


def _as_batch(x: np.ndarray, dim: int) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        if x.shape[0] != dim:
            raise DimensionMismatch(f"point has dim {x.shape[0]}, field has dim {dim}")
        return x[None, :], True
    if x.ndim != 2 or x.shape[1] != dim:
        raise DimensionMismatch(f"expected points of shape (M, {dim}), got {x.shape}")
    return x, False


def _fd_steps(x: np.ndarray) -> np.ndarray:
    return _FD_STEP * np.maximum(1.0, np.max(np.abs(x), axis=1))


class ScalarField:
    """Smooth map R^N -> R^state_dim with derivatives up to second order."""

    def __init__(self, dim, fn, grad=None, hess=None, state_dim=1, support=None, label=""):
        self.dim = int(dim)
        self.state_dim = int(state_dim)
        self._fn = fn
        self._grad = grad
        self._hess = hess
        self.support_hint = support
        self.label = label

    # batched internals: values (M, d), gradients (M, d, N), hessians (M, d, N, N)

    def _values(self, xb: np.ndarray) -> np.ndarray:
        v = np.asarray(self._fn(xb), dtype=float)
        if self.state_dim == 1:
            return v.reshape(xb.shape[0], 1)
        return v.reshape(xb.shape[0], self.state_dim)

    def _gradients(self, xb: np.ndarray) -> np.ndarray:
        m, n = xb.shape
        if self._grad is not None:
            g = np.asarray(self._grad(xb), dtype=float)
            return g.reshape(m, self.state_dim, n)
        h = _fd_steps(xb)
        out = np.empty((m, self.state_dim, n))
        for j in range(n):
            dx = np.zeros((m, n))
            dx[:, j] = h
            out[:, :, j] = (self._values(xb + dx) - self._values(xb - dx)) / (2.0 * h)[:, None]
        return out

    def _hessians(self, xb: np.ndarray) -> np.ndarray:
        m, n = xb.shape
        if self._hess is not None:
            hh = np.asarray(self._hess(xb), dtype=float)
            return hh.reshape(m, self.state_dim, n, n)
        h = _fd_steps(xb)
        out = np.empty((m, self.state_dim, n, n))
        if self._grad is not None:
            # differentiate the analytic gradient: O(h^2) with tiny constants
            for j in range(n):
                dx = np.zeros((m, n))
                dx[:, j] = h
                out[:, :, :, j] = (self._gradients(xb + dx) - self._gradients(xb - dx)) / (
                    2.0 * h
                )[:, None, None]
        else:
            f0 = self._values(xb)
            for i in range(n):
                dxi = np.zeros((m, n))
                dxi[:, i] = h
                out[:, :, i, i] = (self._values(xb + dxi) - 2.0 * f0 + self._values(xb - dxi)) / (
                    h * h
                )[:, None]
                for j in range(i + 1, n):
                    dxj = np.zeros((m, n))
                    dxj[:, j] = h
                    cross = (
                        self._values(xb + dxi + dxj)
                        - self._values(xb + dxi - dxj)
                        - self._values(xb - dxi + dxj)
                        + self._values(xb - dxi - dxj)
                    ) / (4.0 * h * h)[:, None]
                    out[:, :, i, j] = cross
                    out[:, :, j, i] = cross
        return 0.5 * (out + np.swapaxes(out, 2, 3))

    # public API accepts single points or batches

    def eval(self, x):
        xb, single = _as_batch(x, self.dim)
        v = self._values(xb)
        if self.state_dim == 1:
            v = v[:, 0]
        return v[0] if single else v

    def gradient(self, x):
        xb, single = _as_batch(x, self.dim)
        g = self._gradients(xb)
        if self.state_dim == 1:
            g = g[:, 0, :]
        return g[0] if single else g

    def hessian(self, x):
        xb, single = _as_batch(x, self.dim)
        hh = self._hessians(xb)
        if self.state_dim == 1:
            hh = hh[:, 0, :, :]
        return hh[0] if single else hh

    @staticmethod
    def from_jet(dim, jet_fn, state_dim=1, support=None, label=""):
        """Build a field from a function x(batch) -> Jet or list of Jets."""

        def fn(xb):
            out = jet_fn(xb)
            if state_dim == 1:
                return out.val
            return np.stack([j.val for j in out], axis=1)

        def grad(xb):
            out = jet_fn(xb)
            if state_dim == 1:
                return out.grad
            return np.stack([j.grad for j in out], axis=1)

        def hess(xb):
            out = jet_fn(xb)
            if state_dim == 1:
                return out.hess
            return np.stack([j.hess for j in out], axis=1)

        return ScalarField(dim, fn, grad, hess, state_dim=state_dim, support=support, label=label)


class VectorField:
    """Smooth map R^N -> R^N with Jacobian and second derivatives."""

    def __init__(self, dim, fn, jacobian=None, second=None, compactly_supported=False,
                 support=None, label=""):
        self.dim = int(dim)
        self._fn = fn
        self._jac = jacobian
        self._second = second
        self.compactly_supported = bool(compactly_supported)
        self.support_hint = support
        self.label = label

    def _values(self, xb):
        return np.asarray(self._fn(xb), dtype=float).reshape(xb.shape[0], self.dim)

    def _jacobians(self, xb):
        m, n = xb.shape
        if self._jac is not None:
            return np.asarray(self._jac(xb), dtype=float).reshape(m, n, n)
        h = _fd_steps(xb)
        out = np.empty((m, n, n))
        for j in range(n):
            dx = np.zeros((m, n))
            dx[:, j] = h
            out[:, :, j] = (self._values(xb + dx) - self._values(xb - dx)) / (2.0 * h)[:, None]
        return out

    def _seconds(self, xb):
        m, n = xb.shape
        if self._second is not None:
            s = np.asarray(self._second(xb), dtype=float).reshape(m, n, n, n)
        else:
            s = np.empty((m, n, n, n))
            h = _fd_steps(xb)
            if self._jac is not None:
                for k in range(n):
                    dx = np.zeros((m, n))
                    dx[:, k] = h
                    s[:, :, :, k] = (self._jacobians(xb + dx) - self._jacobians(xb - dx)) / (
                        2.0 * h
                    )[:, None, None]
            else:
                f0 = self._values(xb)
                for i in range(n):
                    dxi = np.zeros((m, n))
                    dxi[:, i] = h
                    s[:, :, i, i] = (self._values(xb + dxi) - 2.0 * f0 + self._values(xb - dxi)) / (
                        h * h
                    )[:, None]
                    for j in range(i + 1, n):
                        dxj = np.zeros((m, n))
                        dxj[:, j] = h
                        cross = (
                            self._values(xb + dxi + dxj)
                            - self._values(xb + dxi - dxj)
                            - self._values(xb - dxi + dxj)
                            + self._values(xb - dxi - dxj)
                        ) / (4.0 * h * h)[:, None]
                        s[:, :, i, j] = cross
                        s[:, :, j, i] = cross
        # symmetry in the last two indices enforced by averaging
        return 0.5 * (s + np.swapaxes(s, 2, 3))

    def eval(self, x):
        xb, single = _as_batch(x, self.dim)
        v = self._values(xb)
        return v[0] if single else v

    def jacobian(self, x):
        xb, single = _as_batch(x, self.dim)
        j = self._jacobians(xb)
        return j[0] if single else j

    def second_derivatives(self, x):
        xb, single = _as_batch(x, self.dim)
        s = self._seconds(xb)
        return s[0] if single else s

    # small field algebra, enough for eta + h*phi style combinations

    def __add__(self, other: "VectorField") -> "VectorField":
        if self.dim != other.dim:
            raise DimensionMismatch("cannot add fields of different dimension")
        a, b = self, other
        return VectorField(
            self.dim,
            lambda xb: a._values(xb) + b._values(xb),
            lambda xb: a._jacobians(xb) + b._jacobians(xb),
            lambda xb: a._seconds(xb) + b._seconds(xb),
            compactly_supported=a.compactly_supported and b.compactly_supported,
            label=f"({a.label}+{b.label})",
        )

    def __mul__(self, c: float) -> "VectorField":
        c = float(c)
        return VectorField(
            self.dim,
            lambda xb: c * self._values(xb),
            lambda xb: c * self._jacobians(xb),
            lambda xb: c * self._seconds(xb),
            compactly_supported=self.compactly_supported,
            support=self.support_hint,
            label=f"{c}*{self.label}",
        )

    __rmul__ = __mul__

    @staticmethod
    def from_jets(dim, jets_fn, compactly_supported=False, support=None, label=""):
        """Build from x(batch) -> list of N component Jets."""

        def fn(xb):
            return np.stack([j.val for j in jets_fn(xb)], axis=1)

        def jac(xb):
            return np.stack([j.grad for j in jets_fn(xb)], axis=1)

        def second(xb):
            return np.stack([j.hess for j in jets_fn(xb)], axis=1)

        return VectorField(dim, fn, jac, second, compactly_supported=compactly_supported,
                           support=support, label=label)


# ---------------------------------------------------------------------------
# built-in constructors
# ---------------------------------------------------------------------------


def linear_field(matrix, offset=None) -> VectorField:
    """V(x) = A x + b."""
    a = np.asarray(matrix, dtype=float)
    n = a.shape[0]
    b = np.zeros(n) if offset is None else np.asarray(offset, dtype=float)

    return VectorField(
        n,
        lambda xb: xb @ a.T + b,
        lambda xb: np.broadcast_to(a, (xb.shape[0], n, n)).copy(),
        lambda xb: np.zeros((xb.shape[0], n, n, n)),
        label="linear",
    )


def dilation_field(dim: int, rate: float = 1.0) -> VectorField:
    return linear_field(rate * np.eye(dim))


def constant_field(vector) -> VectorField:
    v = np.asarray(vector, dtype=float)
    n = v.shape[0]
    return VectorField(
        n,
        lambda xb: np.broadcast_to(v, (xb.shape[0], n)).copy(),
        lambda xb: np.zeros((xb.shape[0], n, n)),
        lambda xb: np.zeros((xb.shape[0], n, n, n)),
        label="constant",
    )


def rotation_field(omega) -> VectorField:
    """V(x) = omega x x in R^3, or rate * (x2, -x1) in R^2 for scalar input."""
    if np.ndim(omega) == 0:
        a = float(omega)
        mat = np.array([[0.0, a], [-a, 0.0]])
        return linear_field(mat)
    w = np.asarray(omega, dtype=float)
    mat = np.array([[0.0, -w[2], w[1]], [w[2], 0.0, -w[0]], [-w[1], w[0], 0.0]])
    return linear_field(mat)


def polynomial_scalar_field(dim, terms, label="poly") -> ScalarField:
    """Scalar field sum_k c_k prod x_i^e_i from a coefficient table."""
    terms = [(float(c), tuple(int(e) for e in p)) for c, p in terms]
    return ScalarField.from_jet(dim, lambda xb: jet_polynomial(xb, terms), label=label)


def polynomial_vector_field(dim, components, label="poly") -> VectorField:
    """Vector field whose components are monomial sums (coefficient tables)."""
    comps = [[(float(c), tuple(int(e) for e in p)) for c, p in comp] for comp in components]
    if len(comps) != dim:
        raise DimensionMismatch("need one component table per coordinate")
    return VectorField.from_jets(
        dim, lambda xb: [jet_polynomial(xb, comp) for comp in comps], label=label
    )


def trig_scalar_field(dim, terms, label="trig") -> ScalarField:
    """Scalar field sum_k a_k * sin/cos(k . x + phase), analytic derivatives."""
    parsed = [(float(a), np.asarray(k, dtype=float), float(ph), kind) for a, k, ph, kind in terms]

    def build(xb):
        coords = Jet.variables(xb)
        total = Jet.constant(0.0, xb)
        for amp, kvec, phase, kind in parsed:
            arg = Jet.constant(phase, xb)
            for i, ki in enumerate(kvec):
                if ki != 0.0:
                    arg = arg + coords[i] * ki
            wave = jet_sin(arg) if kind == "sin" else jet_cos(arg)
            total = total + wave * amp
        return total

    return ScalarField.from_jet(dim, build, label=label)


def _bump_jet(xb: np.ndarray, center: np.ndarray, radius: float, order: int = 8) -> Jet:
    """Radial bump (1 - s^2)^order, s = |x-c|/r, zero outside; as a jet.

    A polynomial bump (C^{order-1} at the support edge) keeps Gauss quadrature
    of bump-weighted integrands accurate to ~n^{-order+1}, which the identity
    suites need; an exp-type mollifier would slow convergence to
    sub-geometric.  ``order=None`` selects the classical C-infinity shape
    exp(1 - 1/(1 - s^2)) instead.
    """
    m, n = xb.shape
    coords = Jet.variables(xb)
    s2 = Jet.constant(0.0, xb)
    for i in range(n):
        d = coords[i] - center[i]
        s2 = s2 + d * d * (1.0 / radius**2)
    out = Jet(np.zeros(m), np.zeros((m, n)), np.zeros((m, n, n)))
    if order is None:
        s2_cut = 1.0 - 1.0 / 700.0  # exp(1 - 1/(1-t)) underflows past this
        inside = s2.val < s2_cut
        if np.any(inside):
            sub = Jet(s2.val[inside], s2.grad[inside], s2.hess[inside])
            g = jet_exp(1.0 - (1.0 - sub).reciprocal())
            out.val[inside] = g.val
            out.grad[inside] = g.grad
            out.hess[inside] = g.hess
        return out
    inside = s2.val < 1.0
    if np.any(inside):
        sub = Jet(s2.val[inside], s2.grad[inside], s2.hess[inside])
        g = (1.0 - sub) ** int(order)
        out.val[inside] = g.val
        out.grad[inside] = g.grad
        out.hess[inside] = g.hess
    return out


def bump_scalar_field(center, radius, amplitude=1.0, order=8) -> ScalarField:
    """Radial bump supported on |x - center| < radius (polynomial by default)."""
    c = np.asarray(center, dtype=float)
    n = c.shape[0]
    box = np.stack([c - radius, c + radius], axis=0)
    return ScalarField.from_jet(
        n,
        lambda xb: _bump_jet(xb, c, float(radius), order) * float(amplitude),
        support=box,
        label="radial_bump",
    )


def bump_polynomial_field(dim, components, center, radius, order=8,
                          label="bump_poly") -> VectorField:
    """Compactly supported field: polynomial components times a radial bump."""
    c = np.asarray(center, dtype=float)
    comps = [[(float(cc), tuple(int(e) for e in p)) for cc, p in comp] for comp in components]
    box = np.stack([c - radius, c + radius], axis=0)

    def build(xb):
        bump = _bump_jet(xb, c, float(radius), order)
        return [jet_polynomial(xb, comp) * bump for comp in comps]

    return VectorField.from_jets(dim, build, compactly_supported=True, support=box, label=label)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def divergence(v: VectorField, x):
    """trace of the Jacobian of v at x."""
    xb, single = _as_batch(x, v.dim)
    d = np.trace(v._jacobians(xb), axis1=1, axis2=2)
    return float(d[0]) if single else d


def zeta_eta(eta: VectorField) -> VectorField:
    """Acceleration field -(div eta) eta + (eta . grad) eta.

    Pairing this with velocity eta makes the quadratic deformation preserve
    enclosed volume to second order.  The Jacobian is exact; it consumes
    eta's second derivatives.
    """

    def fn(xb):
        v = eta._values(xb)
        j = eta._jacobians(xb)
        div = np.trace(j, axis1=1, axis2=2)
        return -div[:, None] * v + np.einsum("mij,mj->mi", j, v)

    def jac(xb):
        v = eta._values(xb)
        j = eta._jacobians(xb)
        s = eta._seconds(xb)
        div = np.trace(j, axis1=1, axis2=2)
        ddiv = np.einsum("mjjk->mk", s)  # gradient of div eta
        out = (
            -np.einsum("mk,mi->mik", ddiv, v)
            - div[:, None, None] * j
            + np.einsum("mijk,mj->mik", s, v)
            + np.einsum("mij,mjk->mik", j, j)
        )
        return out

    return VectorField(
        eta.dim,
        fn,
        jac,
        compactly_supported=eta.compactly_supported,
        support=eta.support_hint,
        label=f"zeta[{eta.label}]",
    )


def x0_field(u: ScalarField, eta: VectorField, zeta: VectorField) -> ScalarField:
    """Second-order term of u(Phi_t^{-1}(y)): (D^2u eta, eta) + (grad u, 2(grad eta)eta - zeta).

    The value is analytic in the supplied derivatives; the gradient falls back
    to finite differences (it would need third derivatives of u).
    """
    if u.dim != eta.dim or u.dim != zeta.dim:
        raise DimensionMismatch("field dimensions disagree")

    def fn(xb):
        hu = u._hessians(xb)  # (M, d, N, N)
        gu = u._gradients(xb)  # (M, d, N)
        ev = eta._values(xb)
        jv = eta._jacobians(xb)
        zv = zeta._values(xb)
        drift = 2.0 * np.einsum("mij,mj->mi", jv, ev) - zv
        val = np.einsum("mdij,mi,mj->md", hu, ev, ev) + np.einsum("mdi,mi->md", gu, drift)
        return val if u.state_dim > 1 else val[:, 0]

    return ScalarField(u.dim, fn, state_dim=u.state_dim, label="X0")


def det_expansion(eta: VectorField, zeta: VectorField, x):
    """Coefficients (c0, c1, c2) with det(grad Phi_t) = c0 + t c1 + (t^2/2) c2 + O(t^3).

    c0 = 1, c1 = div eta, c2 = div zeta + (div eta)^2 - trace((grad eta)^2).
    """
    xb, single = _as_batch(x, eta.dim)
    je = eta._jacobians(xb)
    jz = zeta._jacobians(xb)
    div_e = np.trace(je, axis1=1, axis2=2)
    div_z = np.trace(jz, axis1=1, axis2=2)
    tr_je2 = np.einsum("mij,mji->m", je, je)
    c0 = np.ones_like(div_e)
    c2 = div_z + div_e**2 - tr_je2
    if single:
        return float(c0[0]), float(div_e[0]), float(c2[0])
    return c0, div_e, c2


def good_identity_residual(eta: VectorField, x):
    """LHS - RHS of (div eta)^2 - trace((grad eta)^2) = div{(div eta)eta - (eta.grad)eta}.

    Both sides are evaluated independently (the right side consumes second
    derivatives), so the residual measures derivative consistency: ~1e-13 for
    analytic fields, <=1e-7 for finite-difference fallbacks.
    """
    xb, single = _as_batch(x, eta.dim)
    v = eta._values(xb)
    j = eta._jacobians(xb)
    s = eta._seconds(xb)
    div = np.trace(j, axis1=1, axis2=2)
    lhs = div**2 - np.einsum("mij,mji->m", j, j)
    ddiv = np.einsum("mjjk->mk", s)
    # div{(div eta) eta} = grad(div eta).eta + (div eta)^2
    t1 = np.einsum("mk,mk->m", ddiv, v) + div**2
    # div{(eta.grad) eta} = sum_i d_i [ J_ij eta^j ] = S[i,j,i] eta^j + J_ij J_ji
    t2 = np.einsum("miji,mj->m", s, v) + np.einsum("mij,mji->m", j, j)
    res = lhs - (t1 - t2)
    return float(res[0]) if single else res


class DeformationMap:
    """Phi_t(x) = x + t eta(x) + (t^2/2) zeta(x) for a fixed parameter t."""

    def __init__(self, velocity: VectorField, acceleration: VectorField, t: float):
        if velocity.dim != acceleration.dim:
            raise DimensionMismatch("velocity/acceleration dimensions disagree")
        self.velocity = velocity
        self.acceleration = acceleration
        self.t = float(t)
        self.dim = velocity.dim

    def apply(self, x):
        xb, single = _as_batch(x, self.dim)
        y = xb + self.t * self.velocity._values(xb) + 0.5 * self.t**2 * self.acceleration._values(xb)
        return y[0] if single else y

    def jacobian(self, x):
        xb, single = _as_batch(x, self.dim)
        eye = np.eye(self.dim)[None, :, :]
        j = eye + self.t * self.velocity._jacobians(xb) + 0.5 * self.t**2 * self.acceleration._jacobians(xb)
        return j[0] if single else j

    def det(self, x):
        xb, single = _as_batch(x, self.dim)
        d = np.linalg.det(self.jacobian(xb))
        return float(d[0]) if single else d

    def t_bound(self, sample_points) -> float:
        """Conservative |t| bound keeping det(grad Phi_t) > 0 on the samples.

        Uses the Frobenius norms of the derivative fields: the Jacobian stays
        within unit distance of I as long as t a + (t^2/2) b < 1/2.
        """
        xb, _ = _as_batch(np.atleast_2d(sample_points), self.dim)
        a = float(np.max(np.linalg.norm(self.velocity._jacobians(xb), axis=(1, 2))))
        b = float(np.max(np.linalg.norm(self.acceleration._jacobians(xb), axis=(1, 2))))
        if a == 0.0 and b == 0.0:
            return np.inf
        # solve t a + t^2 b / 2 = 1/2
        if b == 0.0:
            return 0.5 / a
        return float((-a + np.sqrt(a * a + b)) / b)

    def invert(self, y, tol: float = 1e-13, max_iter: int = 50):
        """Newton inversion of Phi_t with exact Jacobian and 1/2 damping."""
        yb, single = _as_batch(y, self.dim)
        x = yb - self.t * self.velocity._values(yb)
        res = self.apply(x) - yb
        rnorm = np.linalg.norm(res, axis=1)
        for _ in range(max_iter):
            if np.all(rnorm <= tol):
                break
            jac = self.jacobian(x)
            try:
                step = np.linalg.solve(jac, res[:, :, None])[:, :, 0]
            except np.linalg.LinAlgError as exc:
                raise NonInvertible("singular Jacobian during Newton inversion") from exc
            x_new = x - step
            res_new = self.apply(x_new) - yb
            rnorm_new = np.linalg.norm(res_new, axis=1)
            worse = rnorm_new >= rnorm
            if np.any(worse):
                x_half = x - 0.5 * step
                res_half = self.apply(x_half) - yb
                x_new[worse] = x_half[worse]
                res_new[worse] = res_half[worse]
                rnorm_new = np.linalg.norm(res_new, axis=1)
            x, res, rnorm = x_new, res_new, rnorm_new
        else:
            raise NonInvertible(
                f"Newton did not reach {tol:g} in {max_iter} iterations (t={self.t:g} too large?)"
            )
        return x[0] if single else x


def deform(dmap: DeformationMap, x):
    return dmap.apply(x)


def deform_jacobian(dmap: DeformationMap, x):
    return dmap.jacobian(x)


def invert(dmap: DeformationMap, y):
    return dmap.invert(y)


# ---------------------------------------------------------------------------
# seeded random fields (identity suites) and JSON descriptors
# ---------------------------------------------------------------------------


def _random_terms(rng, dim, degree, scale):
    terms = []
    for powers in _monomials(dim, degree):
        coef = scale * rng.uniform(-1.0, 1.0) / (1.0 + sum(powers))
        terms.append((coef, powers))
    return terms


def _monomials(dim, degree):
    if dim == 1:
        return [(e,) for e in range(degree + 1)]
    out = []
    for e in range(degree + 1):
        for rest in _monomials(dim - 1, degree - e):
            out.append((e,) + rest)
    return out


def random_polynomial_vector_field(rng, dim, degree=3, scale=1.0) -> VectorField:
    comps = [_random_terms(rng, dim, degree, scale) for _ in range(dim)]
    return polynomial_vector_field(dim, comps, label="random_poly")


def random_compact_vector_field(rng, dim, degree=2, scale=1.0, center=None, radius=0.8,
                                order=8) -> VectorField:
    c = np.zeros(dim) if center is None else np.asarray(center, dtype=float)
    comps = [_random_terms(rng, dim, degree, scale) for _ in range(dim)]
    return bump_polynomial_field(dim, comps, c, radius, order=order, label="random_bump_poly")


def random_polynomial_scalar_field(rng, dim, degree=3, scale=1.0) -> ScalarField:
    return polynomial_scalar_field(dim, _random_terms(rng, dim, degree, scale), label="random_poly")


def _cylindrical_bump_jet(xb, radius, order):
    """Bump (1 - rho^2/r^2)^order in the transverse radius rho = |(x2, x3)|."""
    m = xb.shape[0]
    x2 = Jet.coordinate(xb, 1)
    x3 = Jet.coordinate(xb, 2)
    s2 = (x2 * x2 + x3 * x3) * (1.0 / radius**2)
    out = Jet(np.zeros(m), np.zeros((m, 3)), np.zeros((m, 3, 3)))
    inside = s2.val < 1.0
    if np.any(inside):
        sub = Jet(s2.val[inside], s2.grad[inside], s2.hess[inside])
        g = (1.0 - sub) ** int(order)
        out.val[inside] = g.val
        out.grad[inside] = g.grad
        out.hess[inside] = g.hess
    return out


def filament_test_field(preset: str, amplitude: float = 1.0, frequency: int = 1,
                        radius: float = 0.45, order: int = 8) -> VectorField:
    """Deformation fields adapted to a periodic filament along e1 in R^3.

    Presets (all cut off smoothly at transverse radius ``radius``):
      * ``bend``            (0, A sin(2 pi k x1), 0): bends the filament, zero
                            transverse discrepancy (constant in the normal plane);
      * ``antiholomorphic`` A (0, x2, -x3): the conjugate-coordinate mode with
                            discrepancy density 4 A^2 on the filament;
      * ``dilation``        A (0, x2, x3): transverse dilation, holomorphic, no
                            discrepancy and no length change.
    """
    amp = float(amplitude)

    def build(xb):
        chi = _cylindrical_bump_jet(xb, float(radius), order)
        zero = Jet.constant(0.0, xb)
        x2 = Jet.coordinate(xb, 1)
        x3 = Jet.coordinate(xb, 2)
        if preset == "bend":
            wave = jet_sin(Jet.coordinate(xb, 0) * (2.0 * np.pi * int(frequency))) * amp
            return [zero, wave * chi, zero]
        if preset == "antiholomorphic":
            return [zero, x2 * chi * amp, x3 * chi * (-amp)]
        if preset == "dilation":
            return [zero, x2 * chi * amp, x3 * chi * amp]
        raise ValueError(f"unknown filament field preset {preset!r}")

    return VectorField.from_jets(3, build, compactly_supported=True,
                                 label=f"filament_{preset}")


def _req(spec: dict, key: str):
    from .errors import ConfigError

    if key not in spec:
        raise ConfigError(f"field builder {spec.get('type')!r} needs key {key!r}")
    return spec[key]


def vector_field_from_config(spec: dict) -> VectorField:
    """Build a vector field from a JSON-style descriptor (see configs/)."""
    from .errors import ConfigError

    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError("field descriptor must be a dict with a 'type' key")
    kind = spec["type"]
    known = {
        "linear": {"type", "matrix", "offset"},
        "rotation": {"type", "omega", "rate"},
        "constant": {"type", "vector"},
        "polynomial": {"type", "dim", "components"},
        "bump_polynomial": {"type", "dim", "components", "center", "radius", "order"},
        "random_bump_polynomial": {"type", "dim", "degree", "scale", "center", "radius", "seed"},
        "filament_preset": {"type", "preset", "amplitude", "frequency", "radius", "order"},
    }
    if kind not in known:
        raise ConfigError(f"unknown vector field builder: {kind!r}")
    extra = set(spec) - known[kind]
    if extra:
        raise ConfigError(f"unknown keys for field builder {kind!r}: {sorted(extra)}")
    if kind == "linear":
        return linear_field(_req(spec, "matrix"), spec.get("offset"))
    if kind == "rotation":
        if "omega" in spec:
            return rotation_field(spec["omega"])
        return rotation_field(float(spec.get("rate", 1.0)))
    if kind == "constant":
        return constant_field(_req(spec, "vector"))
    if kind == "polynomial":
        return polynomial_vector_field(int(_req(spec, "dim")), _req(spec, "components"))
    if kind == "bump_polynomial":
        return bump_polynomial_field(
            int(_req(spec, "dim")), _req(spec, "components"), _req(spec, "center"), float(_req(spec, "radius")),
            order=int(spec.get("order", 8)),
        )
    if kind == "filament_preset":
        return filament_test_field(
            _req(spec, "preset"), float(spec.get("amplitude", 1.0)),
            int(spec.get("frequency", 1)), float(spec.get("radius", 0.45)),
            int(spec.get("order", 8)),
        )
    rng = np.random.default_rng(int(spec.get("seed", 0)))
    return random_compact_vector_field(
        rng,
        int(_req(spec, "dim")),
        degree=int(spec.get("degree", 2)),
        scale=float(spec.get("scale", 1.0)),
        center=spec.get("center"),
        radius=float(spec.get("radius", 0.8)),
    )


def scalar_field_from_config(spec: dict) -> ScalarField:
    from .errors import ConfigError

    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError("field descriptor must be a dict with a 'type' key")
    kind = spec["type"]
    known = {
        "polynomial": {"type", "dim", "terms"},
        "radial_bump": {"type", "center", "radius", "amplitude", "order"},
        "trig": {"type", "dim", "terms"},
        "profile_composed": {"type", "shape", "p", "epsilon"},
    }
    if kind not in known:
        raise ConfigError(f"unknown scalar field builder: {kind!r}")
    extra = set(spec) - known[kind]
    if extra:
        raise ConfigError(f"unknown keys for field builder {kind!r}: {sorted(extra)}")
    if kind == "polynomial":
        return polynomial_scalar_field(int(_req(spec, "dim")), _req(spec, "terms"))
    if kind == "radial_bump":
        return bump_scalar_field(_req(spec, "center"), float(_req(spec, "radius")),
                                 float(spec.get("amplitude", 1.0)),
                                 order=spec.get("order", 8))
    if kind == "profile_composed":
        from .geometry import shape_from_config
        from .profiles import ansatz_field, optimal_profile

        shape = shape_from_config(_req(spec, "shape"))
        prof = optimal_profile(float(_req(spec, "p")))
        return ansatz_field(shape, float(_req(spec, "epsilon")), prof)
    return trig_scalar_field(int(_req(spec, "dim")), _req(spec, "terms"))
