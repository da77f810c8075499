"""Numeric flows of even real vector fields.

The state of the flow through a body point x0 is the tuple of Grassmann
numbers Θ_t♯(q_a) evaluated at x0: even coordinates are even elements of the
exterior algebra on the odd coordinates θ_1..θ_m, odd coordinates are odd
elements.  The flow equation ∂_t Θ♯(q_a) = Θ♯(X^a) is then an ODE on this
finite-dimensional state, integrated with classical RK4.  The body part is the
usual ODE; the coefficient of θ^I obeys the linear variational equations
sourced by lower orders.

Grassmann numbers are numpy complex arrays of length 2^m indexed by bitmask
(bit j set means θ_{j+1} present).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .fields import SuperVectorField, is_even_real_vf, vf_bracket
from .grassmann import GrassmannPoly

__all__ = [
    "FlowError",
    "GrassmannAlgebra",
    "CompiledPoly",
    "FlowResult",
    "flow",
    "integrate",
    "flow_residual",
    "group_law_residual",
    "LieDerivativeReport",
    "lie_derivative_check",
    "ESCAPE_NORM",
]

ESCAPE_NORM = 1e8


class FlowError(ValueError):
    pass


class GrassmannAlgebra:
    """Exterior algebra on m generators with dense complex coefficients."""

    def __init__(self, m: int):
        self.m = m
        self.size = 1 << m
        ia, ib, ic, sg = [], [], [], []
        for a in range(self.size):
            for b in range(self.size):
                if a & b:
                    continue
                # sign of θ^A θ^B: pairs (i in A, j in B) with i > j
                inv = 0
                for j in range(m):
                    if b >> j & 1:
                        inv += bin(a >> (j + 1)).count("1")
                ia.append(a)
                ib.append(b)
                ic.append(a | b)
                sg.append(-1.0 if inv & 1 else 1.0)
        self._ia = np.array(ia, dtype=np.intp)
        self._ib = np.array(ib, dtype=np.intp)
        self._ic = np.array(ic, dtype=np.intp)
        self._sg = np.array(sg)
        # dense structure constants: (a b)_k = Σ_ij T[i, j, k] a_i b_j
        self._T = np.zeros((self.size, self.size, self.size))
        self._T[self._ia, self._ib, self._ic] = self._sg
        self._T2 = self._T.reshape(self.size, self.size * self.size)
        self.parity = np.array([bin(k).count("1") & 1 for k in range(self.size)])

    def zero(self):
        return np.zeros(self.size, dtype=complex)

    def scalar(self, c):
        z = self.zero()
        z[0] = c
        return z

    def generator(self, j: int):
        z = self.zero()
        z[1 << j] = 1.0
        return z

    def mul(self, a, b):
        if self.m == 0:
            return a * b
        return b @ (a @ self._T2).reshape(self.size, self.size)

    def mask(self, I: Sequence[int]) -> int:
        k = 0
        for j in I:
            k |= 1 << j
        return k


class CompiledPoly:
    """A GrassmannPoly evaluated on Grassmann-valued points.

    Odd generator j of the poly is read from slot n + j of the point; the
    point may live in a larger algebra than the poly's own.
    """

    def __init__(self, f: GrassmannPoly):
        self.n, self.m = f.dims
        self.terms = [(complex(c), a, I) for (I, a), c in f.sorted_terms()]
        self.maxdeg = [max((a[i] for _, a, _ in self.terms), default=0) for i in range(self.n)]

    def __call__(self, alg: GrassmannAlgebra, point, powers=None):
        if powers is None:
            powers = _powers(alg, point, self.n, self.maxdeg)
        out = alg.zero()
        for c, a, I in self.terms:
            t = None
            for i, e in enumerate(a):
                if e:
                    t = powers[i][e] if t is None else alg.mul(t, powers[i][e])
            for j in I:
                t = point[self.n + j] if t is None else alg.mul(t, point[self.n + j])
            if t is None:
                out[0] += c
            else:
                out += c * t
        return out


def _powers(alg, point, n, maxdeg):
    pw = []
    for i in range(n):
        lst = [alg.scalar(1.0), point[i]]
        for _ in range(2, maxdeg[i] + 1):
            lst.append(alg.mul(lst[-1], point[i]))
        pw.append(lst)
    return pw


class _Rhs:
    def __init__(self, X: SuperVectorField, alg: GrassmannAlgebra):
        self.alg = alg
        self.n = X.n_even
        self.polys = [CompiledPoly(c) for c in X.coeffs]
        self.maxdeg = [max(p.maxdeg[i] for p in self.polys) for i in range(self.n)] if self.polys else []

    def __call__(self, state):
        pw = _powers(self.alg, state, self.n, self.maxdeg)
        return np.array([p(self.alg, state, pw) for p in self.polys])


def _rk4_step(f, y, h):
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    return y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def _advance(f, y, h, tol, min_step):
    """Advance by h with step doubling; subdivide until the two agree.

    Returns (y, escaped_at) where escaped_at is the elapsed time at escape.
    """
    stack = [h]
    elapsed = 0.0
    while stack:
        dt = stack.pop()
        with np.errstate(all="ignore"):
            full = _rk4_step(f, y, dt)
            half = _rk4_step(f, _rk4_step(f, y, dt / 2), dt / 2)
        bad = not np.all(np.isfinite(half)) or np.max(np.abs(half)) > ESCAPE_NORM
        err = np.inf if bad else np.max(np.abs(half - full)) / (1.0 + np.max(np.abs(half)))
        if err <= tol:
            y = half + (half - full) / 15.0
            elapsed += dt
            continue
        if abs(dt) / 2 < min_step:
            return y, elapsed + (dt if bad else 0.0)
        stack.extend([dt / 2, dt / 2])
    return y, None


def integrate(X: SuperVectorField, state, t: float, step: float = 1e-3, tol: float = 1e-12,
              alg: GrassmannAlgebra | None = None):
    """Flow a Grassmann-valued state for time t (negative allowed).

    Returns (state, escape_time or None).
    """
    alg = alg or GrassmannAlgebra(_algebra_size(state))
    rhs = _Rhs(X, alg) if not isinstance(X, _Rhs) else X
    y = np.array(state, dtype=complex)
    if t == 0:
        return y, None
    nsteps = max(1, int(np.ceil(abs(t) / step - 1e-9)))
    h = t / nsteps
    for s in range(nsteps):
        y, esc = _advance(rhs, y, h, tol, 1e-10)
        if esc is not None:
            return y, s * h + esc
    return y, None


def _algebra_size(state) -> int:
    return int(np.log2(len(state[0])))


def initial_state(alg: GrassmannAlgebra, x0: Sequence[float], n_odd: int, offset: int = 0):
    """Coordinates at x0: x_i = x0_i, θ_j = generator offset+j."""
    rows = [alg.scalar(float(v)) for v in x0]
    rows += [alg.generator(offset + j) for j in range(n_odd)]
    return np.array(rows)


@dataclass
class FlowResult:
    times: np.ndarray
    points: list
    states: list          # per point: array (T, n+m, 2^m), NaN after escape
    escape_times: list    # per point: float or None
    n_even: int
    n_odd: int
    step: float
    tol: float
    meta: dict = field(default_factory=dict)

    def body(self, p: int) -> np.ndarray:
        """Body trajectory (T, n) of point p (real part)."""
        return self.states[p][:, : self.n_even, 0].real

    def coefficient(self, p: int, I: Sequence[int]) -> np.ndarray:
        """Trajectory (T, n+m) of the θ^I coefficients of every coordinate."""
        k = 0
        for j in I:
            k |= 1 << j
        return self.states[p][:, :, k]

    def max_body_imag(self) -> float:
        out = 0.0
        for st in self.states:
            v = st[:, : self.n_even, 0].imag
            v = v[np.isfinite(v)]
            if v.size:
                out = max(out, float(np.max(np.abs(v))))
        return out


def flow(X: SuperVectorField, t_span: tuple[float, float], initial_bodies: Sequence[Sequence[float]],
         steps: int = 100, step: float = 1e-3, tol: float = 1e-12) -> FlowResult:
    """Integrate the flow of an even real field on a uniform time grid.

    ``steps`` is the number of grid intervals on [t0, t1]; ``step`` the RK4
    step inside each interval.  Escape (norm above ESCAPE_NORM or failure
    to resolve the step) is reported per point; states past it are NaN.
    """
    if not is_even_real_vf(X):
        raise FlowError("flows are defined for even real vector fields only")
    t0, t1 = map(float, t_span)
    if t0 > 0 or t1 < 0:
        raise FlowError("t_span must contain 0")
    n, m = X.dims
    alg = GrassmannAlgebra(m)
    rhs = _Rhs(X, alg)
    times = np.linspace(t0, t1, steps + 1)
    i0 = int(np.argmin(np.abs(times)))
    times[i0] = 0.0
    states, escapes = [], []
    for x0 in initial_bodies:
        if len(x0) != n:
            raise FlowError(f"initial point {x0} needs {n} coordinates")
        y0 = initial_state(alg, x0, m)
        traj = np.full((len(times),) + y0.shape, np.nan, dtype=complex)
        traj[i0] = y0
        esc = None
        for direction in (1, -1):
            y, t_prev = y0, 0.0
            idx = range(i0 + 1, len(times)) if direction > 0 else range(i0 - 1, -1, -1)
            for i in idx:
                y, e = integrate(rhs, y, times[i] - t_prev, step, tol, alg)
                if e is not None:
                    te = t_prev + e if direction > 0 else t_prev - e
                    if esc is None or abs(te) < abs(esc):
                        esc = te
                    break
                traj[i] = y
                t_prev = times[i]
        states.append(traj)
        escapes.append(esc)
    return FlowResult(times, [tuple(p) for p in initial_bodies], states, escapes, n, m, step, tol)


def _eval_field(rhs: _Rhs, state):
    return rhs(state)


def flow_residual(X: SuperVectorField, res: FlowResult, delta: float = 1e-3) -> float:
    """max over grid times of |∂_t Θ♯(q_a) - Θ♯(X^a)| / (1 + |Θ♯(X^a)|).

    The time derivative is a Richardson-extrapolated central difference of
    short re-integrations from the stored state.
    """
    alg = GrassmannAlgebra(res.n_odd)
    rhs = _Rhs(X, alg)
    worst = 0.0
    for st in res.states:
        for y in st:
            if not np.all(np.isfinite(y)):
                continue
            fx = rhs(y)
            ders = []
            for d in (delta, delta / 2):
                yp, e1 = integrate(rhs, y, d, d / 4, 1e-14, alg)
                ym, e2 = integrate(rhs, y, -d, d / 4, 1e-14, alg)
                if e1 is not None or e2 is not None:
                    break
                ders.append((yp - ym) / (2 * d))
            if len(ders) < 2:
                continue
            der = (4 * ders[1] - ders[0]) / 3
            r = np.max(np.abs(der - fx)) / (1.0 + np.max(np.abs(fx)))
            worst = max(worst, float(r))
    return worst


def group_law_residual(X: SuperVectorField, points: Sequence[Sequence[float]], t: float, s: float,
                       step: float = 1e-3) -> float:
    """max |Θ_{t+s} - Θ_t ∘ Θ_s| over the given body points."""
    n, m = X.dims
    alg = GrassmannAlgebra(m)
    rhs = _Rhs(X, alg)
    worst = 0.0
    for x0 in points:
        y0 = initial_state(alg, x0, m)
        direct, e1 = integrate(rhs, y0, t + s, step, 1e-13, alg)
        mid, e2 = integrate(rhs, y0, s, step, 1e-13, alg)
        if e1 is not None or e2 is not None:
            continue
        comp, e3 = integrate(rhs, mid, t, step, 1e-13, alg)
        if e3 is not None:
            continue
        worst = max(worst, float(np.max(np.abs(direct - comp)) / (1.0 + np.max(np.abs(direct)))))
    return worst


@dataclass
class LieDerivativeReport:
    bracket_residual: float
    commute_residual: float | None
    bracket_is_zero: bool


def _tau_point(alg: GrassmannAlgebra, Yrhs: _Rhs, point, tau):
    """P + τ Y(P) in the enlarged algebra."""
    yv = Yrhs(point)
    return point + np.array([alg.mul(tau, v) for v in yv])


def _tau_coefficient(alg: GrassmannAlgebra, state, tau_mask: int, n_tau: int):
    """Left τ-coefficient: entries θ^K with K containing the τ block, τ removed."""
    out = np.zeros((state.shape[0], 1 << (alg.m - n_tau)), dtype=complex)
    for k in range(alg.size):
        if k & tau_mask == tau_mask:
            out[:, k >> n_tau] = state[:, k]
    return out


def lie_derivative_check(X: SuperVectorField, Y: SuperVectorField, t_step: float = 1e-3,
                         points: Sequence[Sequence[float]] | None = None,
                         times: Sequence[float] = (0.25, 0.5), step: float | None = None) -> LieDerivativeReport:
    """Compare (Θ_t♯ ∘ Y ∘ Θ_{-t}♯ - Θ_{-t}♯ ∘ Y ∘ Θ_t♯)/2t with [X, Y].

    Y applied to a Grassmann-valued map G is read off as the τ-coefficient of
    G(P + τY(P)) for an extra odd generator τ (odd Y) or ε = τ_1τ_2 (even Y),
    placed before the θ's.  When [X, Y] = 0 we also check Θ_t♯(Y q) = Y(Θ_t♯ q)
    at the given times.
    """
    if not is_even_real_vf(X):
        raise FlowError("X must be an even real vector field")
    if X.dims != Y.dims:
        raise FlowError("X and Y live on different superdomains")
    n, m = X.dims
    if points is None:
        points = [tuple(0.3 * (i + 1) for i in range(n))]
    n_tau = 1 if Y.parity else 2
    big = GrassmannAlgebra(m + n_tau)
    small = GrassmannAlgebra(m)
    tau = big.generator(0) if n_tau == 1 else big.mul(big.generator(0), big.generator(1))
    tau_mask = (1 << n_tau) - 1

    Xr, Yr = _Rhs(X, big), _Rhs(Y, big)
    Zb = vf_bracket(X, Y)
    Zr = _Rhs(Zb, small)
    h = step or min(t_step / 4, 1e-3)

    def conj(P, t):
        # Y(Θ_{-t}♯ q)(Θ_t(P))
        Q, e1 = integrate(Xr, P, t, h, 1e-14, big)
        Qt = _tau_point(big, Yr, Q, tau)
        G, e2 = integrate(Xr, Qt, -t, h, 1e-14, big)
        if e1 is not None or e2 is not None:
            raise FlowError("flow escaped during the Lie derivative check")
        return _tau_coefficient(big, G, tau_mask, n_tau)

    worst = 0.0
    for x0 in points:
        P = initial_state(big, x0, m, offset=n_tau)
        lie = (conj(P, t_step) - conj(P, -t_step)) / (2 * t_step)
        exact = Zr(initial_state(small, x0, m))
        worst = max(worst, float(np.max(np.abs(lie - exact))))
    commute = None
    if Zb.is_zero():
        commute = 0.0
        Ysmall = _Rhs(Y, small)
        for x0 in points:
            for t in times:
                P = initial_state(big, x0, m, offset=n_tau)
                # Y(Θ_t♯ q)(P)
                G, _ = integrate(Xr, _tau_point(big, Yr, P, tau), t, h, 1e-14, big)
                lhs = _tau_coefficient(big, G, tau_mask, n_tau)
                # Θ_t♯(Y q)(P) = Y^a(Θ_t(P))
                S, _ = integrate(_Rhs(X, small), initial_state(small, x0, m), t, h, 1e-14, small)
                rhs = Ysmall(S)
                commute = max(commute, float(np.max(np.abs(lhs - rhs))))
    return LieDerivativeReport(worst, commute, Zb.is_zero())
