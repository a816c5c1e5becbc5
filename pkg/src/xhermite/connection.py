"""Connection polynomials Q_k between Hermite and exceptional Hermite pairs."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

from .exactalg import ScaledPoly, from_json_obj, poly_sum, to_json_obj, to_text
from .hermite import normalized_hermite_pair
from .report import VerificationReport
from .wronskian import LevelSequence, as_sequence, wronskian_pair, xhermite_pair


@dataclass(frozen=True)
class QTable:
    sigma: LevelSequence
    polys: tuple[ScaledPoly, ...]

    @property
    def scale_exp(self) -> int:
        return len(self.sigma)

    def __len__(self):
        return len(self.polys)

    def __getitem__(self, k: int) -> ScaledPoly:
        return self.polys[k]

    def __iter__(self):
        return iter(self.polys)

    @property
    def top(self) -> int:
        """Largest index k; Q_k vanishes beyond it."""
        return len(self.polys) - 1

    def total(self) -> ScaledPoly:
        return poly_sum(self.polys, arity=2)

    def weighted_total(self) -> ScaledPoly:
        """sum_k k Q_k."""
        return poly_sum((q * k for k, q in enumerate(self.polys)), arity=2)

    def to_json_obj(self) -> dict:
        return {
            "sigma": list(self.sigma.levels),
            "scale_exp": self.scale_exp,
            "q": [to_json_obj(q) for q in self.polys],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2)

    @classmethod
    def from_json_obj(cls, obj) -> QTable:
        sigma = LevelSequence(tuple(obj["sigma"]))
        polys = tuple(from_json_obj(q) for q in obj["q"])
        table = cls(sigma, polys)
        if int(obj["scale_exp"]) != table.scale_exp:
            raise ValueError("scale_exp does not match |sigma|")
        return table

    @classmethod
    def from_json(cls, text: str) -> QTable:
        return cls.from_json_obj(json.loads(text))

    def render(self) -> list[str]:
        return [f"Q_{k} = {to_text(q)}" for k, q in enumerate(self.polys)]


@lru_cache(maxsize=64)
def _build(levels: tuple[int, ...]) -> QTable:
    sigma = LevelSequence(levels)
    e = len(levels)
    top = sigma.last + 1 if levels else 0
    qs: list[ScaledPoly] = []
    for k in range(top + 1):
        acc = xhermite_pair(sigma, k)
        for j in range(1, k + 1):
            if qs[k - j].is_zero():
                continue
            acc = acc - qs[k - j] * normalized_hermite_pair(j)
        # divide by h_0(x) h_0(y) = (2 pi)^(-1/2): drop one unit of scale
        q = acc.with_scale(acc.scale_exp - 1) if not acc.is_zero() else acc
        if not q.is_zero() and q.scale_exp != e:
            raise AssertionError(f"Q_{k} has scale {q.scale_exp}, expected {e}")
        qs.append(q)
    return QTable(sigma, tuple(qs))


def build_qtable(sigma) -> QTable:
    """Q_0 .. Q_{last+1} by the recursion

    Q_k = (h_k^s(x) h_k^s(y) - sum_{j=1..k} Q_{k-j} h_j(x) h_j(y)) / (h_0(x) h_0(y)).

    The empty sequence gives the single entry Q_0 = 1.
    """
    return _build(as_sequence(sigma).levels)


def sum_rule_sign(sigma: LevelSequence) -> int:
    """(-1)^|sigma|: sign relating sum_k Q_k to Wr[h_sigma](x) Wr[h_sigma](y)."""
    return -1 if len(sigma) % 2 else 1


def verify_sum_rule(q: QTable) -> VerificationReport:
    lhs = q.total()
    rhs = wronskian_pair(q.sigma) * sum_rule_sign(q.sigma)
    diff = lhs - rhs
    return VerificationReport.exact(
        "sum_rule", q.sigma, diff.is_zero(),
        [{"difference": to_text(diff), "sum": to_text(lhs)}],
    )


def connection_lhs(q: QTable, m: int) -> ScaledPoly:
    """sum_k h_{m-k}(x) h_{m-k}(y) Q_k, terms with m-k < 0 omitted."""
    acc = ScaledPoly.zero(2)
    for k, qk in enumerate(q.polys):
        if m - k < 0 or qk.is_zero():
            continue
        acc = acc + qk * normalized_hermite_pair(m - k)
    return acc


def verify_connection_lemma(q: QTable, m_max: int | None = None) -> VerificationReport:
    if m_max is None:
        m_max = max(2 * q.sigma.last, q.top)
    if m_max < q.top:
        raise ValueError(f"m_max must be at least {q.top}")
    cases = []
    ok = True
    for m in range(m_max + 1):
        diff = connection_lhs(q, m) - xhermite_pair(q.sigma, m)
        good = diff.is_zero()
        ok &= good
        cases.append({"m": m, "exact": good, **({} if good else {"difference": to_text(diff)})})
    return VerificationReport.exact("connection_lemma", q.sigma, ok, cases)


def verify_parity(q: QTable) -> VerificationReport:
    """Symmetry, joint parity and the single-variable parity rule for every Q_k."""
    parity = -1 if q.sigma.ground_degree() % 2 else 1
    cases = []
    ok = True
    for k, qk in enumerate(q.polys):
        sym = qk.swap() == qk
        joint = qk.reflect(x=True, y=True) == qk
        expected = qk * (parity if k % 2 == 0 else -parity)
        single = qk.reflect(x=True) == expected
        ok &= sym and joint and single
        cases.append({"k": k, "symmetric": sym, "even_jointly": joint, "x_parity": single})
    return VerificationReport.exact("parity", q.sigma, ok, cases)
