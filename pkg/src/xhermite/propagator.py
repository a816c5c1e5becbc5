"""Propagators, potentials and Green functions of rational oscillator extensions.

Phase convention
----------------
``k_osc`` is the closed-form kernel

    K_osc(x, y; t) = exp(i[(x^2+y^2) cos t - 2xy] / (4 sin t)) / sqrt(4 pi i sin t)

with the principal square root.  It already contains the zero-point factor, so
its spectral expansion is ``sum_n psi_n(x) psi_n(y) exp(-i (n + 1/2) t)``.  Every
spectral routine here uses the same ``n + 1/2`` energies, and ``k_sigma`` is
``K_osc * sum_k Q_k lambda^k / sum_k Q_k`` with ``lambda = exp(-i t)``.

The extended Hamiltonian is ``-d^2/dx^2 + V(x)`` with
``V = x^2/4 - 2 (log W)'' + 2M``; its levels are ``n + 1/2`` for ``n`` outside
the deleted sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .connection import QTable, build_qtable
from .errors import NearPole, NotKreinAdler, SingularTime, TruncationTooSmall, WronskianZero
from .exactalg import ScaledPoly, poly_diff, to_text
from .hermite import normsq
from .kernels import hermite_functions, wronskian_ratios
from .report import VerificationReport
from .wronskian import LevelSequence, as_sequence, wronskian_of_levels, xhermite_normsq

SIN_T_MIN = 1e-12


def _arr(v):
    return np.asarray(v, dtype=np.complex128)


def _check_time(t):
    s = np.sin(_arr(t))
    if np.any(np.abs(s) <= SIN_T_MIN):
        raise SingularTime("|sin t| <= 1e-12: kernel is singular at this time")
    return s


def k_osc(x, y, t):
    """Closed-form oscillator propagator for H = -d^2/dx^2 + x^2/4."""
    x, y, t = _arr(x), _arr(y), _arr(t)
    s = _check_time(t)
    phase = 1j * ((x * x + y * y) * np.cos(t) - 2.0 * x * y) / (4.0 * s)
    out = np.exp(phase) / np.sqrt(4.0 * np.pi * 1j * s)
    return out[()] if out.ndim == 0 else out


def k_osc_spectral(x, y, t, n_trunc: int = 80):
    """Truncated ``sum_{n<=N} psi_n(x) psi_n(y) exp(-i (n+1/2) t)`` at scalar points."""
    px = hermite_functions([x], n_trunc)[:, 0]
    py = hermite_functions([y], n_trunc)[:, 0]
    n = np.arange(n_trunc + 1)
    return complex(np.sum(px * py * np.exp(-1j * (n + 0.5) * t)))


# -- propagator model --------------------------------------------------------


@dataclass(frozen=True)
class PropagatorModel:
    sigma: LevelSequence
    q: QTable
    w_hat: ScaledPoly

    @classmethod
    def from_sigma(cls, sigma) -> PropagatorModel:
        sigma = as_sequence(sigma)
        return cls(sigma, build_qtable(sigma), wronskian_of_levels(sigma))

    def q_values(self, x, y) -> np.ndarray:
        """Array ``[k, ...]`` of Q_k(x, y) in double precision."""
        x, y = np.broadcast_arrays(_arr(x), _arr(y))
        out = np.zeros((len(self.q),) + x.shape, dtype=np.complex128)
        for k, qk in enumerate(self.q):
            if not qk.is_zero():
                out[k] = qk(x, y)
        return out

    def ratio(self, x, y, t):
        """sum_k Q_k lambda^k / sum_k Q_k with lambda = exp(-i t)."""
        qv = self.q_values(x, y)
        lam = np.exp(-1j * _arr(t))
        num = np.zeros(np.broadcast_shapes(qv.shape[1:], lam.shape), dtype=np.complex128)
        for k in range(qv.shape[0] - 1, -1, -1):
            num = num * lam + qv[k]
        den = qv.sum(axis=0)
        if np.any(den == 0):
            raise WronskianZero("Wronskian vanishes at the evaluation point")
        return num / den


def k_sigma(model: PropagatorModel, x, y, t):
    """K^sigma(x, y; t) from the connection polynomials."""
    out = k_osc(x, y, t) * model.ratio(x, y, t)
    out = np.asarray(out)
    return out[()] if out.ndim == 0 else out


def closed_form_propagator(sigma, x, y, t):
    """Hand-simplified kernels for sigma = {1,2} and {2,3}."""
    levels = as_sequence(sigma).levels
    x, y, t = _arr(x), _arr(y), _arr(t)
    s, c = np.sin(t), np.cos(t)
    base = np.exp(-2j * t) * k_osc(x, y, t)
    if levels == (1, 2):
        corr = 4j * s * (x * y - np.exp(1j * t)) / ((1 + x * x) * (1 + y * y))
    elif levels == (2, 3):
        xy = x * y
        bracket = xy * (xy * xy - 3) - 3 * (x * x + y * y) * c - 3j * (xy * xy + 1) * s
        corr = 8j * s * bracket / ((3 + x**4) * (3 + y**4))
    else:
        raise ValueError(f"no closed form stored for sigma={levels}")
    return base * (1 - corr)


def xhermite_functions(sigma, x, ns) -> np.ndarray:
    """psi_n^sigma(x) for n in ``ns`` (rows), Krein-Adler sigma only."""
    sigma = as_sequence(sigma)
    sigma.require_krein_adler()
    ns = np.asarray(list(ns), dtype=np.int64)
    ratios = wronskian_ratios(x, np.asarray(sigma.levels, dtype=np.int64), ns)
    norms = np.array([math.sqrt(float(xhermite_normsq(sigma, int(n)))) if int(n) not in sigma else 0.0
                      for n in ns])
    return ratios * norms[:, None]


def xhermite_pair_values(sigma, x, y, ns) -> np.ndarray:
    """psi_n^sigma(x) psi_n^sigma(y) for any sigma, via N_n^2 (no square roots)."""
    sigma = as_sequence(sigma)
    ns = np.asarray(list(ns), dtype=np.int64)
    lv = np.asarray(sigma.levels, dtype=np.int64)
    rx = wronskian_ratios(x, lv, ns)
    ry = wronskian_ratios(y, lv, ns)
    c = np.array([float(xhermite_normsq(sigma, int(n))) for n in ns])
    return rx * ry * c[:, None]


def k_sigma_spectral(sigma, x, y, t, n_trunc: int = 80) -> complex:
    """Truncated eigenfunction expansion of K^sigma at a scalar point."""
    ns = np.arange(n_trunc + 1)
    pairs = xhermite_pair_values(sigma, [x], [y], ns)[:, 0]
    return complex(np.sum(pairs * np.exp(-1j * (ns + 0.5) * t)))


# -- potentials --------------------------------------------------------------


@dataclass(frozen=True)
class PotentialModel:
    """V(x) = x^2/4 + v_num(x) / v_den(x); ``shift`` is the constant 2M inside v_num."""

    sigma: LevelSequence
    v_num: ScaledPoly
    v_den: ScaledPoly
    shift: int

    def __call__(self, x):
        x = _arr(x)
        val = x * x / 4 + self.v_num(x) / self.v_den(x)
        return val.real if np.all(x.imag == 0) else val

    def derivative(self, x):
        """V'(x)."""
        x = _arr(x)
        num = poly_diff(self.v_num) * self.v_den - self.v_num * poly_diff(self.v_den)
        den = self.v_den * self.v_den
        val = x / 2 + num(x) / den(x)
        return val.real if np.all(x.imag == 0) else val

    def text(self) -> str:
        return f"x^2/4 + ({to_text(self.v_num)})/({to_text(self.v_den)})"


def delta_v(sigma) -> tuple[ScaledPoly, ScaledPoly]:
    """-2 (log W)'' + 2M as an exact (numerator, denominator) with denominator W^2."""
    sigma = as_sequence(sigma)
    w = wronskian_of_levels(sigma)
    w1 = poly_diff(w)
    w2 = poly_diff(w, "x", 2)
    num = (w2 * w - w1 * w1) * -2 + w * w * (2 * sigma.M)
    return num, w * w


def potential(sigma) -> PotentialModel:
    sigma = as_sequence(sigma)
    if not sigma.is_krein_adler and len(sigma):
        raise NotKreinAdler(f"{sigma} is not a Krein-Adler sequence")
    num, den = delta_v(sigma)
    return PotentialModel(sigma, num, den, 2 * sigma.M)


def verify_deltaV_identity(sigma) -> VerificationReport:
    """Exact check of -2 (log W)'' + 2M = sum_k k Q_k(x,x) / sum_j Q_j(x,x).

    The two rational functions are compared by cross multiplication.  The
    opposite sign on the right-hand side is also tested and recorded.
    """
    sigma = as_sequence(sigma)
    if len(sigma) and not sigma.is_krein_adler:
        raise NotKreinAdler(f"{sigma} is not a Krein-Adler sequence")
    q = build_qtable(sigma)
    num, den = delta_v(sigma)
    s = q.total().diagonal()
    t = q.weighted_total().diagonal()
    diff = num * s - den * t
    flipped = num * s + den * t
    return VerificationReport.exact(
        "deltaV_identity", sigma, diff.is_zero(),
        [{"difference": to_text(diff), "negated_rhs_holds": flipped.is_zero()}],
    )


def count_local_minima(model: PotentialModel, lo=-5.0, hi=5.0, npts=10001) -> list[float]:
    """Locations where V' changes sign from negative to positive on a uniform grid."""
    xs = np.linspace(lo, hi, npts)
    d = model.derivative(xs)
    idx = np.nonzero((d[:-1] < 0) & (d[1:] >= 0))[0]
    return [float(0.5 * (xs[i] + xs[i + 1])) for i in idx]


# -- finite-difference checks --------------------------------------------------


def second_derivative_5pt(f, x, h):
    """(-f(x+2h) + 16 f(x+h) - 30 f(x) + 16 f(x-h) - f(x-2h)) / (12 h^2)."""
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h)


def schrodinger_residual(model: PropagatorModel, pot: PotentialModel, x, y, t, h: float,
                         h_t: float | None = None):
    """|(i d/dt - H_x) K^sigma(x, y; t)| using central t and 5-point x differences.

    ``h`` is the spatial step; ``h_t`` (default ``h``) the time step.
    """
    x, y, t = _arr(x), _arr(y), _arr(t)
    ht = h if h_t is None else h_t
    dt = (k_sigma(model, x, y, t + ht) - k_sigma(model, x, y, t - ht)) / (2 * ht)
    dxx = second_derivative_5pt(lambda xx: k_sigma(model, xx, y, t), x, h)
    k = k_sigma(model, x, y, t)
    res = 1j * dt - (-dxx + pot(x) * k)
    return np.abs(res)


def verify_eigenfunctions(sigma, n_max: int = 6, h: float = 1e-3, half_width: float = 10.0,
                          gram_points: int = 8001, tol_residual: float = 1e-5,
                          tol_gram: float = 1e-6) -> VerificationReport:
    """Finite-difference residual of H psi_n = (n + 1/2) psi_n and the Gram matrix."""
    sigma = as_sequence(sigma)
    sigma.require_krein_adler()
    pot = potential(sigma)
    ns = [n for n in range(n_max + 1)]
    xs = np.arange(-half_width, half_width + h / 2, h)
    psi = xhermite_functions(sigma, xs, ns).real
    v = pot(xs)
    cases = []
    worst = 0.0
    for row, n in enumerate(ns):
        f = psi[row]
        if n in sigma:
            zero = not np.any(f)
            cases.append({"n": n, "deleted": True, "identically_zero": zero})
            if not zero:
                worst = math.inf
            continue
        lap = (-f[4:] + 16 * f[3:-1] - 30 * f[2:-2] + 16 * f[1:-3] - f[:-4]) / (12 * h * h)
        r = np.max(np.abs(-lap + v[2:-2] * f[2:-2] - (n + 0.5) * f[2:-2]))
        worst = max(worst, float(r))
        cases.append({"n": n, "residual": float(r)})
    L = max(12.0, sigma.last + 8.0)
    gx = np.linspace(-L, L, gram_points)
    kept = [n for n in ns if n not in sigma]
    g_psi = xhermite_functions(sigma, gx, kept).real
    from scipy.integrate import simpson

    gram = np.array([[simpson(a * b, x=gx) for b in g_psi] for a in g_psi])
    gdev = float(np.max(np.abs(gram - np.eye(len(kept))))) if kept else 0.0
    cases.append({"gram_deviation": gdev})
    ok_gram = gdev <= tol_gram
    rep = VerificationReport.numeric("eigenfunctions", sigma, worst, tol_residual, cases)
    if not ok_gram:
        rep.status = "fail"
    return rep


# -- Green functions ---------------------------------------------------------


def _check_energy(E, n_trunc):
    if n_trunc < 4 * abs(E):
        raise TruncationTooSmall(f"n_trunc={n_trunc} < 4|E|")
    nearest = round(E.real - 0.5)
    if abs(E - (nearest + 0.5)) < 1e-6 and nearest >= 0:
        raise NearPole(f"E={E} within 1e-6 of the level {nearest + 0.5}")


def g_osc_spectral(x, y, E, n_trunc: int, shift: int = 0) -> complex:
    """sum_{n <= n_trunc} psi_n(x) psi_n(y) / (n + 1/2 + shift - E)."""
    if n_trunc < 0:
        return 0j
    px = hermite_functions([x], n_trunc)[:, 0]
    py = hermite_functions([y], n_trunc)[:, 0]
    n = np.arange(n_trunc + 1)
    return complex(np.sum(px * py / (n + 0.5 + shift - E)))


def g_osc_exact(x: float, y: float, E: complex) -> complex:
    """Closed-form resolvent Gamma(1/2 - E) D_nu(max) D_nu(-min) / sqrt(2 pi), nu = E - 1/2."""
    import mpmath

    nu = mpmath.mpc(E) - mpmath.mpf(1) / 2
    hi, lo = (x, y) if x >= y else (y, x)
    val = mpmath.gamma(-nu) / mpmath.sqrt(2 * mpmath.pi) * mpmath.pcfd(nu, hi) * mpmath.pcfd(nu, -lo)
    return complex(val)


@dataclass(frozen=True)
class GreenResult:
    relation: complex
    direct: complex

    @property
    def difference(self) -> float:
        return abs(self.relation - self.direct)


def green_function(model: PropagatorModel, x: float, y: float, E: complex, n_trunc: int = 200) -> GreenResult:
    """G_sigma two ways.

    ``relation``: sum_k Q_k(x,y) G_osc(x,y; E-k) / sum_k Q_k(x,y), each G_osc a
    spectral sum over n <= n_trunc - k so that both routes contain exactly the
    levels m <= n_trunc.
    ``direct``: sum_{n <= n_trunc, n not in sigma} psi_n^s(x) psi_n^s(y) / (n + 1/2 - E).
    """
    E = complex(E)
    _check_energy(E, n_trunc)
    qv = model.q_values(x, y)
    px = hermite_functions([x], n_trunc)[:, 0]
    py = hermite_functions([y], n_trunc)[:, 0]
    pp = px * py
    n = np.arange(n_trunc + 1)
    rel = 0j
    for k in range(qv.shape[0]):
        m = n_trunc - k
        if m < 0:
            continue
        rel += qv[k] * np.sum(pp[: m + 1] / (n[: m + 1] + k + 0.5 - E))
    rel /= qv.sum()
    pairs = xhermite_pair_values(model.sigma, [x], [y], n)[:, 0]
    direct = complex(np.sum(pairs / (n + 0.5 - E)))
    return GreenResult(complex(rel), direct)


def green_function_exact(model: PropagatorModel, x: float, y: float, E: complex) -> complex:
    """Relation with closed-form G_osc (parabolic cylinder functions); no truncation."""
    qv = model.q_values(x, y)
    acc = sum(qv[k] * g_osc_exact(x, y, E - k) for k in range(qv.shape[0]))
    return complex(acc / qv.sum())


def wronskian_pair_values(sigma, x, y):
    """Wr[h_sigma](x) Wr[h_sigma](y) in double precision."""
    sigma = as_sequence(sigma)
    w = wronskian_of_levels(sigma)
    c = float(math.prod((normsq(s) for s in sigma.levels), start=Fraction(1)))
    return c * (2 * math.pi) ** (-len(sigma) / 2) * w(x) * w(y)


__all__ = [
    "GreenResult",
    "PotentialModel",
    "PropagatorModel",
    "closed_form_propagator",
    "count_local_minima",
    "delta_v",
    "g_osc_exact",
    "g_osc_spectral",
    "green_function",
    "green_function_exact",
    "k_osc",
    "k_osc_spectral",
    "k_sigma",
    "k_sigma_spectral",
    "potential",
    "schrodinger_residual",
    "verify_deltaV_identity",
    "verify_eigenfunctions",
    "xhermite_functions",
    "xhermite_pair_values",
]
