"""Level sequences, Hermite Wronskians and exceptional Hermite pairs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidSequence, NotKreinAdler
from .exactalg import PolyMatrix, ScaledPoly, det, poly_diff
from .hermite import hermite, normsq


@dataclass(frozen=True)
class LevelSequence:
    """Strictly increasing tuple of deleted oscillator levels."""

    levels: tuple[int, ...] = ()

    def __post_init__(self):
        levels = tuple(int(v) for v in self.levels)
        object.__setattr__(self, "levels", levels)
        if any(v < 0 for v in levels):
            raise InvalidSequence("levels must be nonnegative")
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise InvalidSequence("sequence must be strictly increasing")

    @classmethod
    def parse(cls, text: str) -> LevelSequence:
        """Parse ``"1,2"``; an empty string gives the empty sequence."""
        text = text.strip().strip("{}[]")
        if not text:
            return cls(())
        try:
            levels = tuple(int(tok) for tok in text.split(","))
        except ValueError:
            raise InvalidSequence(f"cannot parse level sequence {text!r}") from None
        return cls(levels)

    def __iter__(self):
        return iter(self.levels)

    def __len__(self):
        return len(self.levels)

    def __contains__(self, n) -> bool:
        return n in self.levels

    def __str__(self):
        return "{" + ",".join(map(str, self.levels)) + "}"

    @property
    def last(self) -> int:
        """Largest level, or -1 for the empty sequence."""
        return self.levels[-1] if self.levels else -1

    @property
    def M(self) -> int:
        return len(self.levels) // 2

    @property
    def is_krein_adler(self) -> bool:
        lv = self.levels
        if len(lv) % 2:
            return False
        return all(lv[i + 1] == lv[i] + 1 for i in range(0, len(lv), 2))

    def require_krein_adler(self) -> None:
        if not self.is_krein_adler:
            raise NotKreinAdler(f"{self} is not a Krein-Adler sequence")

    def wronskian_degree(self) -> int:
        return sum(s - j for j, s in enumerate(self.levels))

    def ground_degree(self) -> int:
        """Degree of the exceptional polynomial attached to n = 0."""
        return self.wronskian_degree() - len(self.levels)


def as_sequence(sigma) -> LevelSequence:
    if isinstance(sigma, LevelSequence):
        return sigma
    if isinstance(sigma, str):
        return LevelSequence.parse(sigma)
    return LevelSequence(tuple(sigma))


def wronskian_matrix(polys: Sequence[ScaledPoly]) -> PolyMatrix:
    """Rows are successive x-derivatives, columns follow ``polys``."""
    n = len(polys)
    return PolyMatrix([[poly_diff(p, "x", i) for p in polys] for i in range(n)])


def wronskian(polys: Sequence[ScaledPoly]) -> ScaledPoly:
    if not polys:
        return ScaledPoly.constant(1)
    return det(wronskian_matrix(polys))


@lru_cache(maxsize=None)
def _wronskian_levels(levels: tuple[int, ...]) -> ScaledPoly:
    return wronskian([hermite(s) for s in levels])


def wronskian_of_levels(sigma) -> ScaledPoly:
    """Wr[He_sigma](x); the empty sequence gives 1."""
    return _wronskian_levels(as_sequence(sigma).levels)


@dataclass(frozen=True)
class WronskianSet:
    sigma: LevelSequence
    w_hat: ScaledPoly
    w_hat_minus: tuple[ScaledPoly, ...]


def wronskian_set(sigma) -> WronskianSet:
    sigma = as_sequence(sigma)
    lv = sigma.levels
    minus = tuple(_wronskian_levels(lv[:i] + lv[i + 1:]) for i in range(len(lv)))
    return WronskianSet(sigma, _wronskian_levels(lv), minus)


@lru_cache(maxsize=None)
def _xhermite_wronskian(levels: tuple[int, ...], n: int) -> ScaledPoly:
    return wronskian([hermite(s) for s in levels] + [hermite(n)])


def xhermite_wronskian(sigma, n: int) -> ScaledPoly:
    """Wr[He_sigma, He_n](x), the unnormalised exceptional polynomial."""
    return _xhermite_wronskian(as_sequence(sigma).levels, n)


def xhermite_normsq(sigma, n: int) -> Fraction:
    """Squared normalisation N_n^2 = 1 / prod_j (sigma_j - n), zero for n in sigma.

    For sequences of even length this equals 1 / prod_j (n - sigma_j); for odd
    length the ordering (sigma_j - n) is the one under which sigma = {1}
    produces Q_0 = +1/sqrt(2 pi).
    """
    sigma = as_sequence(sigma)
    if n in sigma:
        return Fraction(0)
    return Fraction(1, math.prod(s - n for s in sigma.levels))


def xhermite_pair_factors(sigma, n: int) -> tuple[Fraction, ScaledPoly]:
    """(c, W) with h_n^sigma(x) h_n^sigma(y) = c W(x) W(y) (2 pi)^(-(|sigma|+1)/2)."""
    sigma = as_sequence(sigma)
    c = xhermite_normsq(sigma, n)
    if not c:
        return c, ScaledPoly.zero(1)
    c *= normsq(n) * math.prod(normsq(s) for s in sigma.levels)
    return c, xhermite_wronskian(sigma, n)


def xhermite_pair(sigma, n: int) -> ScaledPoly:
    """h_n^sigma(x) h_n^sigma(y) as an exact bivariate polynomial, scale_exp |sigma|+1."""
    sigma = as_sequence(sigma)
    c, w = xhermite_pair_factors(sigma, n)
    if not c:
        return ScaledPoly.zero(2)
    return (w.outer(w) * c).with_scale(len(sigma) + 1)


def wronskian_pair(sigma) -> ScaledPoly:
    """Wr[h_sigma](x) Wr[h_sigma](y) = prod p_s^2 * W(x) W(y), scale_exp |sigma|."""
    sigma = as_sequence(sigma)
    w = wronskian_of_levels(sigma)
    c = math.prod((normsq(s) for s in sigma.levels), start=Fraction(1))
    return (w.outer(w) * c).with_scale(len(sigma))


def apply_Lhat(sigma, f: ScaledPoly) -> tuple[ScaledPoly, ScaledPoly]:
    """L-hat f = Wr[He_sigma, f] / Wr[He_sigma] as an exact (numerator, denominator)."""
    sigma = as_sequence(sigma)
    num = wronskian([hermite(s) for s in sigma.levels] + [f])
    return num, wronskian_of_levels(sigma)


def is_even_in_x(p: ScaledPoly) -> bool:
    return all(i % 2 == 0 for i, _ in p.coeffs)


def real_zero_free(p: ScaledPoly, radius: float = 20.0, npts: int = 4001) -> bool:
    """No sign change or exact zero of ``p`` on an ``npts`` grid over [-R, R]."""
    xs = np.linspace(-radius, radius, npts)
    vals = np.real(p(xs))
    return bool(np.all(vals > 0) or np.all(vals < 0))


def krein_adler_sequences(max_last: int, max_pairs: int = 2) -> Iterable[LevelSequence]:
    """All Krein-Adler sequences with at most ``max_pairs`` pairs and last level <= max_last."""

    def rec(start, pairs, acc):
        if acc:
            yield LevelSequence(tuple(acc))
        if pairs == max_pairs:
            return
        for k in range(start, max_last):
            yield from rec(k + 2, pairs + 1, acc + [k, k + 1])

    yield from rec(1, 0, [])
