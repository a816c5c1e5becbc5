"""Verification suites bundling the exact and numerical checks into reports."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .connection import build_qtable, verify_connection_lemma, verify_parity, verify_sum_rule
from .errors import LambdaTooLarge, NotKreinAdler, XHermiteError
from .hermite import rescaled_hermite, umbral_compose
from .propagator import (
    PropagatorModel,
    closed_form_propagator,
    count_local_minima,
    green_function,
    k_sigma,
    k_sigma_spectral,
    potential,
    schrodinger_residual,
    verify_deltaV_identity,
    verify_eigenfunctions,
    xhermite_functions,
)
from .report import FAIL, PASS, VerificationReport
from .wronskian import LevelSequence, as_sequence, xhermite_pair_factors

LAMBDA_MAX = 0.9

DEFAULT_TOLERANCES = {
    "mehler": 1e-12,
    "xmehler": 1e-9,
    "closed_form": 1e-12,
    "schrodinger": 1e-5,
    "spectral_propagator": 1e-10,
    "propagator_symmetry": 1e-12,
    "green": 1e-8,
    "green_residue": 1e-2,
    "eigenfunctions": 1e-5,
    "gram": 1e-6,
}

CLOSED_FORMS = {(1, 2), (2, 3)}

SUITES = {
    "exact": ("sum_rule", "connection_lemma", "parity"),
    "potential": ("deltaV_identity", "eigenfunctions", "well_count"),
    "propagator": ("closed_form", "schrodinger", "spectral_propagator", "propagator_symmetry"),
    "mehler": ("mehler",),
    "xmehler": ("xmehler",),
    "green": ("green", "green_residue"),
    "umbral": ("umbral",),
}
SUITES["all"] = tuple(c for s in SUITES.values() for c in s)


@dataclass
class VerifyConfig:
    """Single source of truth for seeds, tolerances and truncation orders."""

    seed: int = 20240917
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    mehler_lambda: complex = 0.5
    mehler_trunc: int = 60
    xmehler_lambdas: tuple = (0.5, 0.6j)
    xmehler_trunc: int = 80
    grid_half_width: float = 2.0
    grid_side: int = 5
    m_max: int | None = None
    closed_form_points: int = 100
    schrodinger_points: int = 10
    fd_steps: tuple = (1e-2, 5e-3, 2.5e-3)
    # time step = fd_time_ratio * spatial step; the t stencil is only second order
    fd_time_ratio: float = 0.25
    spectral_trunc: int = 80
    green_trunc: int = 200
    green_energies: int = 5
    green_point: tuple = (0.4, -0.3)
    eigen_n_max: int = 6
    umbral_n_max: int = 12

    def tol(self, name: str) -> float:
        return float(self.tolerances[name])

    def rng(self, salt: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.seed, salt])

    def grid(self) -> list[tuple[float, float]]:
        g = np.linspace(-self.grid_half_width, self.grid_half_width, self.grid_side)
        return [(float(a), float(b)) for a in g for b in g]


def _check_lambda(lam):
    if abs(lam) > LAMBDA_MAX:
        raise LambdaTooLarge(f"|lambda| = {abs(lam)} exceeds {LAMBDA_MAX}")


def mehler_rhs(x, y, lam):
    """(1 - lam^2)^(-1/2) exp((-lam^2 (x^2+y^2) + 2 lam x y) / (2 (1 - lam^2)))."""
    d = 1 - lam * lam
    return np.exp((-lam * lam * (x * x + y * y) + 2 * lam * x * y) / (2 * d)) / np.sqrt(d)


def _scaled_hermite_rows(x, n_trunc):
    # He_n(x) / sqrt(n!) via the normalised three-term recurrence
    x = np.asarray(x, dtype=np.complex128)
    out = np.empty((n_trunc + 1,) + x.shape, dtype=np.complex128)
    out[0] = 1.0
    if n_trunc >= 1:
        out[1] = x
    for n in range(1, n_trunc):
        out[n + 1] = (x * out[n] - math.sqrt(n) * out[n - 1]) / math.sqrt(n + 1)
    return out


def mehler_lhs(x, y, lam, n_trunc):
    hx = _scaled_hermite_rows(x, n_trunc)
    hy = _scaled_hermite_rows(y, n_trunc)
    powers = lam ** np.arange(n_trunc + 1)
    return np.tensordot(powers, hx * hy, axes=1)


def verify_mehler(lam: complex, grid: Sequence[tuple[float, float]], n_trunc: int,
                  tolerance: float = DEFAULT_TOLERANCES["mehler"]) -> VerificationReport:
    """max over the grid of |sum_{n<=N} He_n(x) He_n(y) lam^n / n! - closed form|."""
    _check_lambda(lam)
    xs = np.array([p[0] for p in grid], dtype=np.complex128)
    ys = np.array([p[1] for p in grid], dtype=np.complex128)
    res = np.abs(mehler_lhs(xs, ys, lam, n_trunc) - mehler_rhs(xs, ys, lam))
    cases = [{"x": float(p[0].real), "y": float(p[1].real), "residual": float(r)}
             for p, r in zip(zip(xs, ys), res)]
    rep = VerificationReport.numeric("mehler", (), float(res.max()), tolerance, cases)
    rep.details.insert(0, {"lambda": complex(lam), "n_trunc": n_trunc})
    return rep


def xmehler_lhs(sigma, x: float, y: float, lam, n_trunc: int) -> complex:
    """sum_{n<=N} h_n^s(x) h_n^s(y) lam^n using the exact pair polynomials.

    Each pair is c W(x) W(y), so the two univariate factors are evaluated
    instead of expanding the bivariate product.
    """
    sigma = as_sequence(sigma)
    scale = (2 * math.pi) ** (-(len(sigma) + 1) / 2)
    acc = 0j
    for n in range(n_trunc + 1):
        c, w = xhermite_pair_factors(sigma, n)
        if c:
            acc += float(c) * w(x) * w(y) * lam**n
    return acc * scale


def xmehler_rhs(q, x, y, lam) -> complex:
    pref = mehler_rhs(x, y, lam) / math.sqrt(2 * math.pi)
    series = sum(qk(x, y) * lam**j for j, qk in enumerate(q) if not qk.is_zero())
    return complex(pref * series)


def verify_xmehler(sigma, lam: complex, grid: Sequence[tuple[float, float]], n_trunc: int,
                   tolerance: float = DEFAULT_TOLERANCES["xmehler"]) -> VerificationReport:
    sigma = as_sequence(sigma)
    _check_lambda(lam)
    if n_trunc < sigma.last + 20:
        raise ValueError(f"n_trunc must be at least {sigma.last + 20}")
    q = build_qtable(sigma)
    cases = []
    worst = 0.0
    for x, y in grid:
        r = abs(xmehler_lhs(sigma, x, y, lam, n_trunc) - xmehler_rhs(q, x, y, lam))
        worst = max(worst, r)
        cases.append({"x": x, "y": y, "residual": r})
    rep = VerificationReport.numeric("xmehler", sigma, worst, tolerance, cases)
    rep.details.insert(0, {"lambda": complex(lam), "n_trunc": n_trunc})
    return rep


# -- individual numeric checks used by run_all ---------------------------------


def random_complex_points(rng, n, radius=2.0):
    r = radius * np.sqrt(rng.uniform(0, 1, n))
    th = rng.uniform(0, 2 * np.pi, n)
    return r * np.exp(1j * th)


def check_closed_form(sigma, cfg: VerifyConfig) -> VerificationReport:
    """Relative gap between k_sigma and the hand-simplified closed form at random complex points.

    Points with |W(x)| or |W(y)| below 0.05 are redrawn to keep the comparison
    away from the complex zeros of the Wronskian.
    """
    sigma = as_sequence(sigma)
    model = PropagatorModel.from_sigma(sigma)
    rng = cfg.rng(1)
    xs, ys, ts = [], [], []
    while len(xs) < cfg.closed_form_points:
        x, y = random_complex_points(rng, 2)
        if min(abs(model.w_hat(x)), abs(model.w_hat(y))) < 0.05:
            continue
        t = rng.uniform(0.2, np.pi - 0.2) - 1j * rng.uniform(0.0, 0.5)
        xs.append(x), ys.append(y), ts.append(t)
    xs, ys, ts = map(np.array, (xs, ys, ts))
    a = k_sigma(model, xs, ys, ts)
    b = closed_form_propagator(sigma, xs, ys, ts)
    rel = np.abs(a - b) / np.abs(b)
    return VerificationReport.numeric(
        "closed_form", sigma, float(rel.max()), cfg.tol("closed_form"),
        [{"points": int(len(xs)), "median_relative": float(np.median(rel))}],
    )


def schrodinger_points(cfg: VerifyConfig):
    rng = cfg.rng(2)
    n = cfg.schrodinger_points
    # |sin t| >= 1/sqrt(2) keeps the points away from the caustics at t = k pi
    return (rng.uniform(-1.5, 1.5, n), rng.uniform(-1.5, 1.5, n),
            rng.uniform(np.pi / 4, 3 * np.pi / 4, n))


def check_schrodinger(sigma, cfg: VerifyConfig) -> VerificationReport:
    """Residual of (i d/dt - H) K at three step sizes; must fall with order ~2."""
    sigma = as_sequence(sigma)
    model = PropagatorModel.from_sigma(sigma)
    pot = potential(sigma)
    x, y, t = schrodinger_points(cfg)
    levels = [float(np.max(schrodinger_residual(model, pot, x, y, t, h, cfg.fd_time_ratio * h)))
              for h in cfg.fd_steps]
    orders = [math.log(levels[i] / levels[i + 1]) / math.log(cfg.fd_steps[i] / cfg.fd_steps[i + 1])
              for i in range(len(levels) - 1)]
    rep = VerificationReport.numeric(
        "schrodinger", sigma, levels[-1], cfg.tol("schrodinger"),
        [{"h": h, "h_t": cfg.fd_time_ratio * h, "residual": r} for h, r in zip(cfg.fd_steps, levels)]
        + [{"observed_orders": orders}],
    )
    second_order = all(1.5 <= o <= 2.5 for o in orders) and levels[-1] < levels[0]
    if not second_order:
        rep.status = FAIL
    return rep


def check_spectral_propagator(sigma, cfg: VerifyConfig) -> VerificationReport:
    """k_sigma against its eigenfunction expansion at lambda = e^-1 (t = -i)."""
    sigma = as_sequence(sigma)
    model = PropagatorModel.from_sigma(sigma)
    rng = cfg.rng(3)
    pts = rng.uniform(-1.5, 1.5, (5, 2))
    truncs = (cfg.spectral_trunc // 4, cfg.spectral_trunc // 2, cfg.spectral_trunc)
    levels = []
    for n in truncs:
        worst = 0.0
        for x, y in pts:
            exact = k_sigma(model, x, y, -1j)
            worst = max(worst, abs(k_sigma_spectral(sigma, x, y, -1j, n) - exact))
        levels.append(worst)
    return VerificationReport.numeric(
        "spectral_propagator", sigma, levels[-1], cfg.tol("spectral_propagator"),
        [{"n_trunc": n, "residual": r} for n, r in zip(truncs, levels)],
    )


def check_propagator_symmetry(sigma, cfg: VerifyConfig) -> VerificationReport:
    """K(x,y;t) = K(y,x;t) and |K(t + 2 pi)| = |K(t)| at random real points."""
    sigma = as_sequence(sigma)
    model = PropagatorModel.from_sigma(sigma)
    rng = cfg.rng(4)
    x, y = rng.uniform(-2, 2, 20), rng.uniform(-2, 2, 20)
    t = rng.uniform(0.3, 2.8, 20) - 1j * rng.uniform(0, 0.3, 20)
    k = k_sigma(model, x, y, t)
    sym = np.max(np.abs(k - k_sigma(model, y, x, t)) / np.abs(k))
    per = np.max(np.abs(np.abs(k_sigma(model, x, y, t + 2 * np.pi)) - np.abs(k)) / np.abs(k))
    return VerificationReport.numeric(
        "propagator_symmetry", sigma, float(max(sym, per)), cfg.tol("propagator_symmetry"),
        [{"symmetry": float(sym), "periodicity_modulus": float(per)}],
    )


def green_energies(cfg: VerifyConfig) -> np.ndarray:
    rng = cfg.rng(5)
    n = cfg.green_energies
    return rng.uniform(0.0, 4.0, n) + 1j * rng.uniform(0.1, 0.5, n)


def check_green(sigma, cfg: VerifyConfig) -> VerificationReport:
    """Relation-based and direct spectral Green functions, plus boundedness at deleted levels."""
    sigma = as_sequence(sigma)
    model = PropagatorModel.from_sigma(sigma)
    x, y = cfg.green_point
    cases = []
    worst = 0.0
    mags = []
    for E in green_energies(cfg):
        g = green_function(model, x, y, E, cfg.green_trunc)
        worst = max(worst, g.difference)
        mags.append(abs(g.direct))
        cases.append({"E": complex(E), "relation": g.relation, "direct": g.direct, "difference": g.difference})
    median = float(np.median(mags))
    bounded = True
    for n in sigma.levels:
        for theta in (0.25, 1.0, 2.0):
            E = n + 0.5 + 1e-3 * np.exp(1j * theta)
            g = green_function(model, x, y, E, cfg.green_trunc)
            ratio = max(abs(g.relation), abs(g.direct)) / median
            bounded &= ratio < 10
            worst = max(worst, g.difference)
            cases.append({"E": complex(E), "deleted_level": n, "ratio_to_median": ratio,
                          "difference": g.difference})
    rep = VerificationReport.numeric("green", sigma, worst, cfg.tol("green"), cases)
    if not bounded:
        rep.status = FAIL
    return rep


def check_green_residue(sigma, cfg: VerifyConfig) -> VerificationReport:
    """(E_0 - E) G(E) -> psi_0(x) psi_0(y) as E -> 1/2 (first kept level)."""
    sigma = as_sequence(sigma)
    model = PropagatorModel.from_sigma(sigma)
    x, y = cfg.green_point
    n0 = next(n for n in range(len(sigma) + 1) if n not in sigma)
    e0 = n0 + 0.5
    psi = xhermite_functions(sigma, [x, y], [n0])[0]
    target = complex(psi[0] * psi[1])
    cases = []
    worst = 0.0
    for theta in (0.3, 1.7, 3.0):
        E = e0 + 1e-3 * np.exp(1j * theta)
        g = green_function(model, x, y, E, cfg.green_trunc)
        r = abs((e0 - E) * g.relation - target) / abs(target)
        worst = max(worst, r)
        cases.append({"E": complex(E), "relative_error": r})
    return VerificationReport.numeric("green_residue", sigma, worst, cfg.tol("green_residue"), cases)


def check_eigenfunctions(sigma, cfg: VerifyConfig) -> VerificationReport:
    return verify_eigenfunctions(sigma, cfg.eigen_n_max, tol_residual=cfg.tol("eigenfunctions"),
                                 tol_gram=cfg.tol("gram"))


def check_well_count(sigma, cfg: VerifyConfig) -> VerificationReport:
    """V^{k,k+1} has k local minima near its bottom."""
    sigma = as_sequence(sigma)
    lv = sigma.levels
    if len(lv) != 2 or lv[1] != lv[0] + 1:
        return VerificationReport.skipped("well_count", sigma, "only defined for sigma = {k, k+1}")
    minima = count_local_minima(potential(sigma))
    return VerificationReport.exact("well_count", sigma, len(minima) == lv[0],
                                    [{"minima": minima, "expected": lv[0]}])


def check_umbral(n_max: int) -> VerificationReport:
    cases = []
    ok = True
    for n in range(n_max + 1):
        lhs = umbral_compose(rescaled_hermite(n, "alpha"), lambda k: rescaled_hermite(k, "beta"))
        good = lhs == rescaled_hermite(n, "alpha+beta")
        ok &= good
        cases.append({"n": n, "exact": good})
    return VerificationReport.exact("umbral", (), ok, cases)


_POTENTIAL_CHECKS = {"deltaV_identity", "eigenfunctions", "well_count", "closed_form", "schrodinger",
                     "spectral_propagator", "propagator_symmetry", "green", "green_residue"}


def _run_check(name: str, sigma: LevelSequence, cfg: VerifyConfig) -> list[VerificationReport]:
    if name in _POTENTIAL_CHECKS and len(sigma) and not sigma.is_krein_adler:
        return [VerificationReport.skipped(name, sigma, "skipped: non-Krein-Adler")]
    if name == "sum_rule":
        return [verify_sum_rule(build_qtable(sigma))]
    if name == "connection_lemma":
        return [verify_connection_lemma(build_qtable(sigma), cfg.m_max)]
    if name == "parity":
        return [verify_parity(build_qtable(sigma))]
    if name == "deltaV_identity":
        return [verify_deltaV_identity(sigma)]
    if name == "eigenfunctions":
        return [check_eigenfunctions(sigma, cfg)]
    if name == "well_count":
        return [check_well_count(sigma, cfg)]
    if name == "closed_form":
        if sigma.levels not in CLOSED_FORMS:
            return [VerificationReport.skipped(name, sigma, "no closed form for this sigma")]
        return [check_closed_form(sigma, cfg)]
    if name == "schrodinger":
        return [check_schrodinger(sigma, cfg)]
    if name == "spectral_propagator":
        return [check_spectral_propagator(sigma, cfg)]
    if name == "propagator_symmetry":
        return [check_propagator_symmetry(sigma, cfg)]
    if name == "green":
        return [check_green(sigma, cfg)]
    if name == "green_residue":
        return [check_green_residue(sigma, cfg)]
    if name == "xmehler":
        n_trunc = max(cfg.xmehler_trunc, sigma.last + 20)
        return [verify_xmehler(sigma, lam, cfg.grid(), n_trunc, cfg.tol("xmehler"))
                for lam in cfg.xmehler_lambdas]
    raise KeyError(name)


def run_all(sigma_list: Iterable, config: VerifyConfig | None = None,
            suite: str = "all") -> list[VerificationReport]:
    """Run the selected suite for each sigma; errors become failed reports.

    Sigma-independent checks (Mehler, umbral) run once, ahead of the per-sigma
    checks, and only when ``sigma_list`` is nonempty.
    """
    cfg = config or VerifyConfig()
    sigmas = [as_sequence(s) for s in sigma_list]
    names = SUITES[suite]
    reports: list[VerificationReport] = []
    if not sigmas:
        return reports
    if "mehler" in names:
        reports.append(_guard("mehler", (), lambda: [verify_mehler(
            cfg.mehler_lambda, cfg.grid() + [(0.0, 0.0), (0.7, -0.2)], cfg.mehler_trunc, cfg.tol("mehler"))]))
    if "umbral" in names:
        reports.append(_guard("umbral", (), lambda: [check_umbral(cfg.umbral_n_max)]))
    for sigma in sigmas:
        for name in names:
            if name in ("mehler", "umbral"):
                continue
            reports.extend(_guard_many(name, sigma, lambda: _run_check(name, sigma, cfg)))
    return reports


def _guard(name, sigma, fn) -> VerificationReport:
    return _guard_many(name, sigma, fn)[0]


def _guard_many(name, sigma, fn) -> list[VerificationReport]:
    try:
        return fn()
    except LambdaTooLarge:
        raise
    except NotKreinAdler as exc:
        return [VerificationReport.skipped(name, sigma, f"skipped: {exc}")]
    except (XHermiteError, ArithmeticError, ValueError) as exc:
        return [VerificationReport(name, tuple(getattr(sigma, "levels", sigma)), FAIL, math.inf, 0.0,
                                   [{"error": f"{type(exc).__name__}: {exc}"}])]


def all_passed(reports: Iterable[VerificationReport]) -> bool:
    return not any(r.status == FAIL for r in reports)


__all__ = [
    "DEFAULT_TOLERANCES",
    "SUITES",
    "VerificationReport",
    "VerifyConfig",
    "all_passed",
    "run_all",
    "verify_mehler",
    "verify_xmehler",
    "PASS",
]
