"""Exact polynomials over the rationals in one or two variables.

Every polynomial carries an integer ``scale_exp`` ``e`` standing for a global
factor ``(2*pi)**(-e/2)``.  Products of normalisation constants of Hermite
functions are rational multiples of such powers, so tracking ``e`` keeps the
whole pipeline exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .errors import (
    ArityMismatch,
    IrrationalScaleMismatch,
    MissingVariable,
    NonSquare,
    XHermiteError,
)

Monomial = tuple[int, int]

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _coerce(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, float):
        return Fraction(c)
    return Fraction(c)


class ScaledPoly:
    """Immutable sparse polynomial ``(2*pi)**(-scale_exp/2) * sum c[i,j] x^i y^j``."""

    __slots__ = ("_coeffs", "_scale_exp", "_arity", "_hash", "_dense")

    def __init__(
        self,
        coeffs: Mapping[Monomial, object] | None = None,
        scale_exp: int = 0,
        arity: int = 1,
    ):
        if arity not in (1, 2):
            raise ValueError(f"arity must be 1 or 2, got {arity}")
        clean: dict[Monomial, Fraction] = {}
        for (i, j), c in (coeffs or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent in monomial {(i, j)}")
            if arity == 1 and j != 0:
                raise ArityMismatch("univariate polynomial with a y-power")
            c = _coerce(c)
            if c:
                clean[(i, j)] = c
        self._coeffs = clean
        # canonical zero has e = 0
        self._scale_exp = int(scale_exp) if clean else 0
        self._arity = arity
        self._hash = None
        self._dense = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, c, scale_exp: int = 0, arity: int = 1) -> ScaledPoly:
        return cls({(0, 0): c}, scale_exp, arity)

    @classmethod
    def x(cls, arity: int = 1) -> ScaledPoly:
        return cls({(1, 0): 1}, 0, arity)

    @classmethod
    def y(cls) -> ScaledPoly:
        return cls({(0, 1): 1}, 0, 2)

    @classmethod
    def zero(cls, arity: int = 1) -> ScaledPoly:
        return cls({}, 0, arity)

    @classmethod
    def from_univariate(cls, coeffs: Iterable, scale_exp: int = 0) -> ScaledPoly:
        """Build from ascending coefficients ``[c0, c1, ...]``."""
        return cls({(i, 0): c for i, c in enumerate(coeffs)}, scale_exp, 1)

    # -- accessors ----------------------------------------------------------

    @property
    def coeffs(self) -> dict[Monomial, Fraction]:
        return dict(self._coeffs)

    @property
    def scale_exp(self) -> int:
        return self._scale_exp

    @property
    def arity(self) -> int:
        return self._arity

    def items(self):
        return self._coeffs.items()

    def __getitem__(self, mono: Monomial) -> Fraction:
        return self._coeffs.get(mono, Fraction(0))

    def __len__(self) -> int:
        return len(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def degree(self, var: str | None = None) -> int:
        """Total degree, or the degree in ``var``; -1 for the zero polynomial."""
        if not self._coeffs:
            return -1
        if var is None:
            return max(i + j for i, j in self._coeffs)
        if var == "x":
            return max(i for i, _ in self._coeffs)
        if var == "y":
            return max(j for _, j in self._coeffs)
        raise ValueError(f"unknown variable {var!r}")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, ScaledPoly):
            other = ScaledPoly.constant(other, self._scale_exp, self._arity)
        return poly_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return ScaledPoly({m: -c for m, c in self._coeffs.items()}, self._scale_exp, self._arity)

    def __sub__(self, other):
        if not isinstance(other, ScaledPoly):
            other = ScaledPoly.constant(other, self._scale_exp, self._arity)
        return poly_add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ScaledPoly):
            return poly_mul(self, other)
        c = _coerce(other)
        return ScaledPoly({m: v * c for m, v in self._coeffs.items()}, self._scale_exp, self._arity)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ScaledPoly):
            raise TypeError("use poly_divexact for polynomial division")
        c = _coerce(other)
        return ScaledPoly({m: v / c for m, v in self._coeffs.items()}, self._scale_exp, self._arity)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = ScaledPoly.constant(1, 0, self._arity)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScaledPoly):
            if isinstance(other, (int, Fraction)):
                return self == ScaledPoly.constant(other, 0, self._arity)
            return NotImplemented
        if not self._coeffs and not other._coeffs:
            return True
        return self._scale_exp == other._scale_exp and self._coeffs == other._coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._scale_exp, frozenset(self._coeffs.items())))
        return self._hash

    def __repr__(self):
        return f"ScaledPoly({to_text(self)!r}, scale_exp={self._scale_exp}, arity={self._arity})"

    # -- structural transforms ----------------------------------------------

    def with_scale(self, scale_exp: int) -> ScaledPoly:
        """Same coefficients, different scale tag."""
        return ScaledPoly(self._coeffs, scale_exp, self._arity)

    def as_bivariate(self) -> ScaledPoly:
        return ScaledPoly(self._coeffs, self._scale_exp, 2)

    def in_y(self) -> ScaledPoly:
        """Re-express a univariate polynomial in the variable y."""
        if self._arity != 1:
            raise ArityMismatch("in_y expects a univariate polynomial")
        return ScaledPoly({(0, i): c for (i, _), c in self._coeffs.items()}, self._scale_exp, 2)

    def swap(self) -> ScaledPoly:
        """x <-> y."""
        if self._arity == 1:
            return self.in_y()
        return ScaledPoly({(j, i): c for (i, j), c in self._coeffs.items()}, self._scale_exp, 2)

    def reflect(self, x: bool = True, y: bool = False) -> ScaledPoly:
        """Substitute x -> -x and/or y -> -y."""
        out = {}
        for (i, j), c in self._coeffs.items():
            s = (-1) ** ((i if x else 0) + (j if y else 0))
            out[(i, j)] = c * s
        return ScaledPoly(out, self._scale_exp, self._arity)

    def diagonal(self) -> ScaledPoly:
        """Restrict a bivariate polynomial to y = x."""
        out: dict[Monomial, Fraction] = {}
        for (i, j), c in self._coeffs.items():
            out[(i + j, 0)] = out.get((i + j, 0), Fraction(0)) + c
        return ScaledPoly(out, self._scale_exp, 1)

    def outer(self, other: ScaledPoly) -> ScaledPoly:
        """``self(x) * other(y)`` for two univariate polynomials."""
        if self._arity != 1 or other._arity != 1:
            raise ArityMismatch("outer expects univariate polynomials")
        return poly_mul(self.as_bivariate(), other.in_y())

    def content(self) -> Fraction:
        """Positive rational g such that self/g has coprime integer coefficients."""
        if not self._coeffs:
            return Fraction(0)
        num = 0
        den = 1
        for c in self._coeffs.values():
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def eval_exact(self, x, y=None) -> Fraction:
        """Exact value of the coefficient sum at rational points (scale factor excluded)."""
        if self._arity == 2 and y is None:
            raise MissingVariable("bivariate polynomial needs y")
        x = _coerce(x)
        y = _coerce(y) if y is not None else Fraction(0)
        return sum((c * x**i * y**j for (i, j), c in self._coeffs.items()), Fraction(0))

    def scale_factor(self) -> float:
        return _INV_SQRT_2PI ** self._scale_exp

    def to_dense(self) -> np.ndarray:
        """Float coefficient array ``a[i, j]`` of x^i y^j (scale factor excluded)."""
        if self._dense is None:
            nx = max((i for i, _ in self._coeffs), default=0) + 1
            ny = max((j for _, j in self._coeffs), default=0) + 1
            a = np.zeros((nx, ny), dtype=np.float64)
            for (i, j), c in self._coeffs.items():
                a[i, j] = float(c)
            a.setflags(write=False)
            self._dense = a
        return self._dense

    def __call__(self, x, y=None):
        return poly_eval_complex(self, x, y)


# -- module-level operations ------------------------------------------------


def _check_arity(a: ScaledPoly, b: ScaledPoly) -> None:
    if a.arity != b.arity:
        raise ArityMismatch(f"arity {a.arity} vs {b.arity}")


def poly_add(a: ScaledPoly, b: ScaledPoly) -> ScaledPoly:
    """Exact sum.  Nonzero operands must share ``scale_exp``."""
    _check_arity(a, b)
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if a.scale_exp != b.scale_exp:
        raise IrrationalScaleMismatch(
            f"cannot add (2pi)^(-{a.scale_exp}/2) and (2pi)^(-{b.scale_exp}/2) terms exactly"
        )
    out = dict(a._coeffs)
    for m, c in b._coeffs.items():
        v = out.get(m, 0) + c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return ScaledPoly(out, a.scale_exp, a.arity)


def poly_sum(polys: Iterable[ScaledPoly], arity: int = 1) -> ScaledPoly:
    acc = ScaledPoly.zero(arity)
    for p in polys:
        acc = poly_add(acc, p)
    return acc


def poly_mul(a: ScaledPoly, b: ScaledPoly) -> ScaledPoly:
    """Exact product; univariate operands embed into two variables as needed."""
    arity = max(a.arity, b.arity)
    if a.is_zero() or b.is_zero():
        return ScaledPoly.zero(arity)
    out: dict[Monomial, Fraction] = {}
    bi = list(b._coeffs.items())
    for (i1, j1), c1 in a._coeffs.items():
        for (i2, j2), c2 in bi:
            m = (i1 + i2, j1 + j2)
            out[m] = out.get(m, 0) + c1 * c2
    return ScaledPoly(out, a.scale_exp + b.scale_exp, arity)


def poly_diff(a: ScaledPoly, var: str = "x", order: int = 1) -> ScaledPoly:
    """Formal derivative of the given order in ``var``."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    if var not in ("x", "y"):
        raise ValueError(f"unknown variable {var!r}")
    if order == 0:
        return a
    out = {}
    for (i, j), c in a._coeffs.items():
        k = i if var == "x" else j
        if k < order:
            continue
        f = math.perm(k, order)
        m = (i - order, j) if var == "x" else (i, j - order)
        out[m] = c * f
    return ScaledPoly(out, a.scale_exp, a.arity)


def _leading(p: ScaledPoly) -> tuple[Monomial, Fraction]:
    m = max(p._coeffs)  # lex order, x first
    return m, p._coeffs[m]


def poly_divexact(a: ScaledPoly, b: ScaledPoly) -> ScaledPoly:
    """Quotient ``a / b`` when b divides a exactly; scale tags subtract.

    Raises ``XHermiteError`` when a remainder is left over.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    arity = max(a.arity, b.arity)
    rem = dict(a._coeffs)
    bm, bc = _leading(b)
    bitems = list(b._coeffs.items())
    quot: dict[Monomial, Fraction] = {}
    while rem:
        rm = max(rem)
        rc = rem[rm]
        qm = (rm[0] - bm[0], rm[1] - bm[1])
        if qm[0] < 0 or qm[1] < 0:
            raise XHermiteError("polynomial division is not exact")
        qc = rc / bc
        quot[qm] = qc
        for (i, j), c in bitems:
            m = (i + qm[0], j + qm[1])
            v = rem.get(m, 0) - qc * c
            if v:
                rem[m] = v
            else:
                rem.pop(m, None)
    return ScaledPoly(quot, a.scale_exp - b.scale_exp, arity)


class PolyMatrix:
    """Rectangular matrix of ScaledPolys sharing arity and scale tag."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: list[list[ScaledPoly]]):
        if not rows or not rows[0]:
            raise ValueError("empty matrix")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        flat = [e for r in rows for e in r]
        arities = {e.arity for e in flat}
        if len(arities) != 1:
            raise ArityMismatch("matrix entries must share arity")
        scales = {e.scale_exp for e in flat if not e.is_zero()}
        if len(scales) > 1:
            raise IrrationalScaleMismatch("matrix entries must share scale_exp")
        self.rows = len(rows)
        self.cols = ncols
        self.entries = tuple(flat)

    @property
    def arity(self) -> int:
        return self.entries[0].arity

    @property
    def scale_exp(self) -> int:
        for e in self.entries:
            if not e.is_zero():
                return e.scale_exp
        return 0

    def __getitem__(self, ij: tuple[int, int]) -> ScaledPoly:
        i, j = ij
        return self.entries[i * self.cols + j]

    def as_lists(self) -> list[list[ScaledPoly]]:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def swap_rows(self, i: int, j: int) -> PolyMatrix:
        rows = self.as_lists()
        rows[i], rows[j] = rows[j], rows[i]
        return PolyMatrix(rows)


def _raw(p: ScaledPoly) -> ScaledPoly:
    return p.with_scale(0)


def _det_cofactor_raw(rows: list[list[ScaledPoly]], arity: int) -> ScaledPoly:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    acc = ScaledPoly.zero(arity)
    for j in range(n):
        a = rows[0][j]
        if a.is_zero():
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * _det_cofactor_raw(minor, arity)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def _det_bareiss_raw(rows: list[list[ScaledPoly]], arity: int) -> ScaledPoly:
    m = [list(r) for r in rows]
    n = len(m)
    sign = 1
    prev = ScaledPoly.constant(1, 0, arity)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for r in range(k + 1, n):
                if not m[r][k].is_zero():
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return ScaledPoly.zero(arity)
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * pivot - m[i][k] * m[k][j]
                m[i][j] = poly_divexact(num, prev) if not num.is_zero() else num
        prev = pivot
    d = m[n - 1][n - 1]
    return d if sign > 0 else -d


def det_cofactor(m: PolyMatrix) -> ScaledPoly:
    """Laplace expansion along the first row."""
    if m.rows != m.cols:
        raise NonSquare(f"{m.rows}x{m.cols} matrix")
    rows = [[_raw(e) for e in r] for r in m.as_lists()]
    d = _det_cofactor_raw(rows, m.arity)
    return d.with_scale(m.rows * m.scale_exp)


def det_bareiss(m: PolyMatrix) -> ScaledPoly:
    """Fraction-free Bareiss elimination over the polynomial ring."""
    if m.rows != m.cols:
        raise NonSquare(f"{m.rows}x{m.cols} matrix")
    rows = [[_raw(e) for e in r] for r in m.as_lists()]
    d = _det_bareiss_raw(rows, m.arity)
    return d.with_scale(m.rows * m.scale_exp)


def det(m: PolyMatrix) -> ScaledPoly:
    """Exact determinant; the result's scale tag is ``rows * entry scale_exp``."""
    if m.rows != m.cols:
        raise NonSquare(f"{m.rows}x{m.cols} matrix")
    if m.rows <= 4:
        return det_cofactor(m)
    return det_bareiss(m)


def poly_eval_complex(a: ScaledPoly, x, y=None):
    """Double-precision evaluation including the ``(2*pi)**(-e/2)`` factor.

    Scalars give a Python complex; array arguments broadcast and give an ndarray.
    """
    if a.arity == 2 and y is None:
        raise MissingVariable("bivariate polynomial needs a y value")
    from .kernels import horner2d

    scalar = np.ndim(x) == 0 and np.ndim(y) == 0
    xa = np.asarray(x, dtype=np.complex128)
    ya = np.asarray(0 if y is None else y, dtype=np.complex128)
    xa, ya = np.broadcast_arrays(xa, ya)
    if a.is_zero():
        out = np.zeros(xa.shape, dtype=np.complex128)
    else:
        out = horner2d(a.to_dense(), xa.ravel(), ya.ravel()).reshape(xa.shape) * a.scale_factor()
    if scalar:
        return complex(out)
    return out


# -- text rendering ----------------------------------------------------------


def _mono_text(i: int, j: int) -> str:
    parts = []
    if i:
        parts.append("x" if i == 1 else f"x^{i}")
    if j:
        parts.append("y" if j == 1 else f"y^{j}")
    return "*".join(parts)


def _poly_body(coeffs: Mapping[Monomial, Fraction]) -> str:
    terms = sorted(coeffs.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0]))
    out = []
    for k, (m, c) in enumerate(terms):
        mono = _mono_text(*m)
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        if k == 0:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(out) or "0"


def to_text(p: ScaledPoly) -> str:
    """Human readable form, e.g. ``(x^2*y^2 + x^2 + y^2 - 1)/(4π)``."""
    if p.is_zero():
        return "0"
    g = p.content()
    inner = {m: c / g for m, c in p.items()}
    lead = max(inner, key=lambda m: (m[0] + m[1], m[0]))
    if inner[lead] < 0:
        inner = {m: -c for m, c in inner.items()}
        g = -g
    e = p.scale_exp
    half, odd = divmod(abs(e), 2)
    r = g / 2**half if e > 0 else g * 2**half
    pi_text = "" if half == 0 else ("π" if half == 1 else f"π^{half}")
    if odd:
        pi_text = f"{pi_text}*sqrt(2π)" if pi_text else "sqrt(2π)"
    sign = "-" if r < 0 else ""
    r = abs(r)
    body = _poly_body(inner)
    num_factors = [] if r.numerator == 1 else [str(r.numerator)]
    den_text = "" if r.denominator == 1 else str(r.denominator)
    if e < 0 and pi_text:
        num_factors.append(pi_text)
    elif e > 0 and pi_text:
        den_text = f"{den_text}*{pi_text}" if den_text and odd else f"{den_text}{pi_text}"
    if body != "1":
        compound = len(inner) > 1 and (num_factors or den_text)
        num_factors.append(f"({body})" if compound else body)
    numerator = "*".join(num_factors) or "1"
    if not den_text:
        return sign + numerator
    if den_text.isdigit() or (den_text.startswith("sqrt") and "*" not in den_text):
        return f"{sign}{numerator}/{den_text}"
    return f"{sign}{numerator}/({den_text})"


# -- JSON --------------------------------------------------------------------


def to_json_obj(p: ScaledPoly) -> dict:
    terms = [
        {"dx": i, "dy": j, "num": str(c.numerator), "den": str(c.denominator)}
        for (i, j), c in sorted(p.items())
    ]
    return {"scale_exp": p.scale_exp, "arity": p.arity, "terms": terms}


def from_json_obj(obj: Mapping) -> ScaledPoly:
    coeffs = {}
    for t in obj["terms"]:
        coeffs[(int(t["dx"]), int(t["dy"]))] = Fraction(int(t["num"]), int(t["den"]))
    return ScaledPoly(coeffs, int(obj["scale_exp"]), int(obj["arity"]))

