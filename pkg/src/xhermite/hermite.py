"""Probabilists' Hermite polynomials, paired normalisations, rescaled families."""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Callable, Mapping

from .exactalg import ScaledPoly


class HermiteCache:
    """Memoised table of He_n built by ``He_{n+1} = x He_n - n He_{n-1}``.

    Appends happen under a lock; readers only see fully built prefixes.
    """

    def __init__(self):
        self._table: list[ScaledPoly] = [ScaledPoly.constant(1), ScaledPoly.x()]
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._table)

    def get(self, n: int) -> ScaledPoly:
        if n < 0:
            raise ValueError("n must be nonnegative")
        table = self._table
        if n < len(table):
            return table[n]
        with self._lock:
            table = list(self._table)
            x = ScaledPoly.x()
            while len(table) <= n:
                k = len(table) - 1
                table.append(x * table[k] - table[k - 1] * k)
            self._table = table
        return table[n]


_CACHE = HermiteCache()


def hermite(n: int) -> ScaledPoly:
    """He_n as an exact univariate polynomial (scale_exp 0)."""
    return _CACHE.get(n)


def hermite_coefficients(n: int) -> list[Fraction]:
    """Ascending coefficients h_{n,k}, k = 0..n."""
    he = hermite(n)
    return [he[(k, 0)] for k in range(n + 1)]


def normsq(n: int) -> Fraction:
    """Rational part of p_n^2 = 1/(n! sqrt(2 pi)); carries one unit of scale_exp."""
    return Fraction(1, math.factorial(n))


def normalized_hermite_pair(n: int) -> ScaledPoly:
    """h_n(x) h_n(y) = He_n(x) He_n(y) / n!  with scale_exp 1.

    A single h_n involves sqrt(n!), so only the paired product is exposed.
    """
    he = hermite(n)
    return (he.outer(he) * normsq(n)).with_scale(1)


# -- rescaled Hermite polynomials with formal scales ---------------------------

# monomial key (x power, alpha power, beta power)
AlphaKey = tuple[int, int, int]


class AlphaPoly:
    """Polynomial in x whose coefficients are rational polynomials in alpha and beta."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[AlphaKey, object] | None = None):
        clean = {}
        for key, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(key)] = c
        self._terms = clean

    @property
    def terms(self) -> dict[AlphaKey, Fraction]:
        return dict(self._terms)

    def __eq__(self, other):
        if not isinstance(other, AlphaPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        parts = []
        for (k, a, b), c in sorted(self._terms.items(), reverse=True):
            mono = "*".join(
                s for s in (
                    f"x^{k}" if k else "",
                    f"alpha^{a}" if a else "",
                    f"beta^{b}" if b else "",
                ) if s
            )
            parts.append(f"{c}*{mono}" if mono else str(c))
        return "AlphaPoly(" + " + ".join(parts or ["0"]) + ")"

    def __add__(self, other: AlphaPoly) -> AlphaPoly:
        out = dict(self._terms)
        for key, c in other._terms.items():
            out[key] = out.get(key, 0) + c
        return AlphaPoly(out)

    def __sub__(self, other: AlphaPoly) -> AlphaPoly:
        return self + other * -1

    def __mul__(self, other) -> AlphaPoly:
        if not isinstance(other, AlphaPoly):
            c = Fraction(other)
            return AlphaPoly({k: v * c for k, v in self._terms.items()})
        out: dict[AlphaKey, Fraction] = {}
        for (k1, a1, b1), c1 in self._terms.items():
            for (k2, a2, b2), c2 in other._terms.items():
                key = (k1 + k2, a1 + a2, b1 + b2)
                out[key] = out.get(key, 0) + c1 * c2
        return AlphaPoly(out)

    __rmul__ = __mul__

    def degree(self) -> int:
        return max((k for k, _, _ in self._terms), default=-1)

    def coefficient(self, k: int) -> AlphaPoly:
        """Coefficient of x^k as an AlphaPoly free of x."""
        return AlphaPoly({(0, a, b): c for (kk, a, b), c in self._terms.items() if kk == k})

    def diff(self) -> AlphaPoly:
        """d/dx."""
        return AlphaPoly({(k - 1, a, b): c * k for (k, a, b), c in self._terms.items() if k})

    def substitute(self, alpha=None, beta=None) -> AlphaPoly:
        """Replace alpha and/or beta by rational numbers."""
        out: dict[AlphaKey, Fraction] = {}
        for (k, a, b), c in self._terms.items():
            if alpha is not None:
                c = c * Fraction(alpha) ** a
                a = 0
            if beta is not None:
                c = c * Fraction(beta) ** b
                b = 0
            key = (k, a, b)
            out[key] = out.get(key, 0) + c
        return AlphaPoly(out)

    def to_scaled(self) -> ScaledPoly:
        """Drop to an x-polynomial; requires that no formal scale remains."""
        if any(a or b for _, a, b in self._terms):
            raise ValueError("formal scales still present")
        return ScaledPoly({(k, 0): c for (k, _, _), c in self._terms.items()})

    @classmethod
    def from_scaled(cls, p: ScaledPoly) -> AlphaPoly:
        return cls({(i, 0, 0): c for (i, _), c in p.items()})


def _scale_power(scale: str, e: int) -> AlphaPoly:
    if scale == "alpha":
        return AlphaPoly({(0, e, 0): 1})
    if scale == "beta":
        return AlphaPoly({(0, 0, e): 1})
    if scale == "alpha+beta":
        return AlphaPoly({(0, i, e - i): math.comb(e, i) for i in range(e + 1)})
    raise ValueError(f"unknown scale {scale!r}")


def rescaled_hermite(n: int, scale: str = "alpha") -> AlphaPoly:
    """He_n^[s](x) = s^(n/2) He_n(x / sqrt(s)) for a formal scale s.

    ``scale`` is ``"alpha"``, ``"beta"`` or ``"alpha+beta"``.  The coefficient
    of x^k is h_{n,k} s^((n-k)/2), and n-k is always even.
    """
    acc = AlphaPoly()
    for k, h in enumerate(hermite_coefficients(n)):
        if h:
            acc = acc + _scale_power(scale, (n - k) // 2) * AlphaPoly({(k, 0, 0): h})
    return acc


def umbral_compose(a: AlphaPoly, basis: Callable[[int], AlphaPoly]) -> AlphaPoly:
    """(A o B)(x) = sum_k a_k B_k(x), a_k the x^k coefficient of ``a``."""
    acc = AlphaPoly()
    for k in range(a.degree() + 1):
        ak = a.coefficient(k)
        if ak._terms:
            acc = acc + ak * basis(k)
    return acc
