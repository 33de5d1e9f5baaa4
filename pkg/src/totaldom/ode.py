"""Drift functions and the initial value problem for the greedy heuristic.

State vector layout used throughout: ``z[0..d-1]`` are the normalized
counts of buckets with ``i`` paired points, ``q`` is the normalized size
of the dominating set. The drift of ``z_j`` is ``f_j`` and the drift of
``q`` is ``f_d``; both depend on ``z`` only (the system is autonomous).

Two evaluators are provided. :func:`drift_expanded` is the production
form; its only singularity is ``s_0 = 0``. :func:`drift_raw` composes the
per-branch effects literally (with the ``1 - r**(d-1)`` denominator) and
exists to cross-check the expanded algebra.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

# Below this s_1 is treated as exactly zero (removable singularity).
S1_ZERO = 1e-30


class DomainError(ValueError):
    """Raised when a drift is evaluated at a point with ``s_0 <= 0``."""


class StopReason(str, enum.Enum):
    Z0_CROSSED_EPS = "Z0_CROSSED_EPS"
    DOMAIN_EXIT = "DOMAIN_EXIT"
    MAX_X = "MAX_X"


def s_k(z, k: int) -> float:
    """Normalized count of unpaired points in buckets of degree >= k."""
    d = len(z)
    return float(sum((d - i) * z[i] for i in range(k, d)))


def phi(z, k: int) -> np.ndarray:
    """The vector ``phi_{j,d}^{k+}`` for j = 0..d-1.

    Entry j is the expected change of ``z_j`` per point paired into a
    bucket of degree at least ``k``, times ``s_k``.
    """
    z = np.asarray(z, dtype=float)
    d = len(z)
    out = np.zeros(d)
    j = np.arange(d)
    out[k] = -(d - k) * z[k]
    hi = j > k
    out[hi] = (d - j[hi] + 1) * z[j[hi] - 1] - (d - j[hi]) * z[j[hi]]
    return out


def _check(z):
    z = np.asarray(z, dtype=float)
    if z.ndim != 1 or len(z) < 3:
        raise ValueError("z must be a vector of length d >= 3")
    if not np.all(np.isfinite(z)):
        raise DomainError("non-finite component in z")
    d = len(z)
    s0 = float(np.dot(d - np.arange(d), z))
    if s0 <= 0:
        raise DomainError(f"s_0 = {s0!r} <= 0")
    return z, d, s0


def drift_raw(z) -> np.ndarray:
    """Drift ``(f_0, ..., f_{d-1}, f_d)`` from the per-branch effect terms.

    Sums the single-vertex branch over the degree ``i`` of ``u_t`` and the
    three pair branches weighted by their probabilities ``p_2, p_3, p_4``.
    When ``s_1 == 0`` every term carrying ``1/s_1`` is multiplied by a
    vanishing factor and is dropped.
    """
    z, d, s0 = _check(z)
    s1 = s0 - d * z[0]
    j = np.arange(d)
    delta0 = (j == 0).astype(float)
    delta1 = (j == 1).astype(float)
    phi0 = phi(z, 0)
    phi1 = phi(z, 1)
    s1_zero = abs(s1) < S1_ZERO
    r = 0.0 if s1_zero else s1 / s0
    R = r ** (d - 1)

    # branch: u_t has positive degree
    f = np.zeros(d)
    for i in range(1, d):
        b_i = (d - i) * z[i] / s0
        bp = -delta0 + delta1 - (j == i).astype(float) + (d - i - 1) * phi0 / s0
        f += b_i * bp

    # conditioned on at least one of d-1 points landing in a degree-0 bucket
    if s1_zero:
        h = (d - 1) * phi0 / s0
    else:
        h = ((d - 1) * phi0 / s0 - (d - 1) * phi1 / s1 * R) / (1.0 - R)

    c = d * z[0] / s0
    p2 = c * (1.0 - R)
    f += p2 * (-2 * delta0 + (d - 1) * phi0 / s0 + h)

    if not s1_zero:
        p3 = c * R * (1.0 - R)
        e3 = -2 * delta0 + (d - 1) * phi1 / s1 + h - delta1 + (d - 1) * phi0 / s0
        f += p3 * e3

        p4 = c * R * R
        e4 = -2 * delta0 + 2 * (d - 2) * phi1 / s1
        for m in range(1, d):
            w = (d - m) * z[m] / s1
            e4 = e4 + 2 * w * (-(j == m).astype(float) + (d - m - 1) * phi0 / s0)
        f += p4 * e4

    fd = r + 2 * c
    return np.append(f, fd)


def drift_expanded(z) -> np.ndarray:
    """Drift ``(f_0, ..., f_{d-1}, f_d)`` with every denominator a power of ``s_0``."""
    z, d, s0 = _check(z)
    s1 = s0 - d * z[0]
    j = np.arange(d)
    delta0 = (j == 0).astype(float)
    delta1 = (j == 1).astype(float)
    phi0 = phi(z, 0) / s0
    phi1 = phi(z, 1) / s0
    r = s1 / s0
    R = r ** (d - 1)
    R2 = r ** (d - 2)
    c = d * z[0] / s0

    # sum_{i>=1} (d-i)(d-i-1) z_i and the degree-j loss term
    deg = d - j
    A = float(np.dot(deg[1:] * (deg[1:] - 1), z[1:]))
    loss = np.where(j >= 1, deg * z, 0.0) / s0

    f = r * (-delta0 + delta1) - loss + phi0 * A / s0

    core = (d - 1) * phi0 - (d - 1) * phi1 * R2
    f += c * (1 - R) * (-2 * delta0 + (d - 1) * phi0) + c * core

    f += c * R * core
    f += c * R2 * (1 - R) * (d - 1) * phi1
    f += c * R * (1 - R) * (-2 * delta0 - delta1 + (d - 1) * phi0)

    r23 = r ** (2 * d - 3)
    f += c * R * R * (-2 * delta0)
    f += c * r23 * 2 * (-loss + phi0 * A / s0)
    f += c * r23 * 2 * (d - 2) * phi1

    fd = r + 2 * c
    return np.append(f, fd)


def initial_state(d: int) -> np.ndarray:
    """``(z_0, ..., z_{d-1}, q)`` at x = 0."""
    y = np.zeros(d + 1)
    y[0] = 1.0
    return y


@dataclass
class SolveResult:
    d: int
    eps_stop: float
    step: float
    x_star: float
    q_at_x_star: float
    stop_reason: StopReason
    xs: np.ndarray = field(repr=False)
    states: np.ndarray = field(repr=False)  # rows (z_0..z_{d-1}, q)

    @property
    def q_rounded_up(self) -> float:
        return round_up(self.q_at_x_star, 4)

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "eps_stop": self.eps_stop,
            "step": self.step,
            "x_star": self.x_star,
            "q_x_star": self.q_at_x_star,
            "q_rounded_up_4dp": self.q_rounded_up,
            "stop_reason": self.stop_reason.value,
        }

    def z_at(self, x):
        """Linear interpolation of ``z`` on the sampled trajectory."""
        x = np.asarray(x, dtype=float)
        cols = [np.interp(x, self.xs, self.states[:, k]) for k in range(self.d)]
        return np.stack(cols, axis=-1)


def round_up(value: float, decimals: int = 4) -> float:
    scale = 10**decimals
    # guard against representation noise pushing an exact value up
    return math.ceil(value * scale - 1e-9) / scale


def _rk4(fun, y, h):
    k1 = fun(y)
    k2 = fun(y + 0.5 * h * k1)
    k3 = fun(y + 0.5 * h * k2)
    k4 = fun(y + h * k3)
    return y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def integrate(
    d: int,
    eps_stop: float = 1e-6,
    step: float = 1e-5,
    stride: int = 100,
    max_x: float = 1.5,
    drift=None,
    domain_tol: float = 1e-9,
) -> SolveResult:
    """Integrate the IVP with fixed-step RK4 until ``z_0`` falls to ``eps_stop``.

    The crossing inside the final step is located by bisection on the step
    fraction, to 1e-12 in x. Every ``stride``-th step is kept in the
    returned trajectory, together with the start and the stopping point.
    """
    if d < 3:
        raise ValueError(f"d must be >= 3, got {d}")
    if not 0 < eps_stop <= 1e-3:
        raise ValueError("eps_stop must lie in (0, 1e-3]")
    if step <= 0:
        raise ValueError("step must be positive")
    fun = _fast_drift(d) if drift is None else (lambda y: drift(y[:d]))

    y = initial_state(d)
    x = 0.0
    xs, states = [x], [y.copy()]
    reason = StopReason.MAX_X
    n_steps = 0
    while x < max_x:
        y_new = _rk4(fun, y, step)
        n_steps += 1
        if y_new[0] <= eps_stop:
            lo, hi = 0.0, 1.0
            while (hi - lo) * step > 1e-12:
                mid = 0.5 * (lo + hi)
                if _rk4(fun, y, mid * step)[0] > eps_stop:
                    lo = mid
                else:
                    hi = mid
            theta = 0.5 * (lo + hi)
            y = _rk4(fun, y, theta * step)
            x += theta * step
            reason = StopReason.Z0_CROSSED_EPS
            break
        zs = y_new[:d]
        if np.any(zs < -domain_tol) or np.any(zs > 1 + domain_tol):
            reason = StopReason.DOMAIN_EXIT
            y, x = y_new, x + step
            break
        y, x = y_new, x + step
        if n_steps % stride == 0:
            xs.append(x)
            states.append(y.copy())
    if xs[-1] != x:
        xs.append(x)
        states.append(y.copy())
    return SolveResult(
        d=d,
        eps_stop=eps_stop,
        step=step,
        x_star=x,
        q_at_x_star=float(y[d]),
        stop_reason=reason,
        xs=np.array(xs),
        states=np.array(states),
    )


def _fast_drift(d: int):
    """Scalar-Python version of :func:`drift_expanded` acting on ``(z, q)``.

    Numpy dispatch dominates at d <= 8, so the integrator uses this
    closure. Tests pin it against :func:`drift_expanded`.
    """
    rng_j = range(d)
    deg = [d - i for i in rng_j]
    w_A = [0.0] + [deg[i] * (deg[i] - 1) for i in range(1, d)]

    def fun(y):
        z = y.tolist()
        s0 = 0.0
        A = 0.0
        for i in rng_j:
            s0 += deg[i] * z[i]
            A += w_A[i] * z[i]
        if s0 <= 0:
            raise DomainError(f"s_0 = {s0!r} <= 0")
        inv = 1.0 / s0
        s1 = s0 - d * z[0]
        r = s1 * inv
        R2 = r ** (d - 2)
        R = R2 * r
        r23 = R * R2
        c = d * z[0] * inv
        Ainv = A * inv
        out = [0.0] * (d + 1)
        for jj in rng_j:
            if jj == 0:
                p0 = -d * z[0] * inv
                p1 = 0.0
                loss = 0.0
            else:
                p0 = (deg[jj] + 1) * z[jj - 1] * inv - deg[jj] * z[jj] * inv
                p1 = -deg[1] * z[1] * inv if jj == 1 else p0
                loss = deg[jj] * z[jj] * inv
            d0 = 1.0 if jj == 0 else 0.0
            d1 = 1.0 if jj == 1 else 0.0
            core = (d - 1) * (p0 - p1 * R2)
            v = r * (d1 - d0) - loss + p0 * Ainv
            v += c * (1 - R) * (-2 * d0 + (d - 1) * p0) + c * core
            v += c * R * core
            v += c * R2 * (1 - R) * (d - 1) * p1
            v += c * R * (1 - R) * (-2 * d0 - d1 + (d - 1) * p0)
            v += c * R * R * (-2 * d0)
            v += 2 * c * r23 * (-loss + p0 * Ainv + (d - 2) * p1)
            out[jj] = v
        out[d] = r + 2 * c
        return np.array(out)

    return fun


def initial_derivative_check(d: int, x_lo: float = 1e-4, x_hi: float = 1e-3, step: float = 1e-6) -> dict:
    """Log-log slopes of ``z_j`` near x = 0 and the initial slope of ``z_1``.

    ``z_j`` should behave like ``c_j x**j`` with ``c_j > 0``.
    """
    fun = _fast_drift(d)
    y = initial_state(d)
    x = 0.0
    xs, ys = [], []
    n = int(round(x_hi / step))
    for _ in range(n):
        y = _rk4(fun, y, step)
        x += step
        if x >= x_lo * (1 - 1e-9):
            xs.append(x)
            ys.append(y.copy())
    xs = np.array(xs)
    ys = np.array(ys)
    slopes = {}
    positive = {}
    for jj in range(1, d):
        positive[jj] = bool(np.all(ys[:, jj] > 0))
        if positive[jj]:
            slopes[jj] = float(np.polyfit(np.log(xs), np.log(ys[:, jj]), 1)[0])
        else:
            slopes[jj] = float("nan")
    # z_1'(0) by a one-sided fourth-order difference on the first steps
    h = step
    pts = [initial_state(d)]
    for _ in range(4):
        pts.append(_rk4(fun, pts[-1], h))
    z1 = [p[1] for p in pts]
    dz1 = (-25 * z1[0] + 48 * z1[1] - 36 * z1[2] + 16 * z1[3] - 3 * z1[4]) / (12 * h)
    return {
        "d": d,
        "slopes": slopes,
        "positive": positive,
        "z1_prime_0": float(dz1),
        "z1_prime_0_expected": 2.0 * (d - 1),
    }
