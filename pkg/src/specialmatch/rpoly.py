"""R-polynomials and Kazhdan-Lusztig polynomials by matching recursions.

For a special matching M of [e, w] and u <= w,

    R_{u,w} = (q^c - 1) R_{u,M(w)} + q^c R_{M(u),M(w)},   c = [M(u) > u],

with R_{u,u} = 1 and R_{u,v} = 0 unless u <= v.  The classical route uses
right multiplication matchings only; the abstract route uses nothing but the
poset structure of the interval.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from typing import Dict, Optional

from .coxeter import CoxeterGroup, Element
from .errors import NoSpecialMatching, NotSpecial
from .poset import AbstractPoset, Matching, build_interval, first_special_matching, is_special


@dataclass(frozen=True)
class IntPoly:
    """Polynomial in q with exact integer coefficients, lowest degree first."""

    coeffs: tuple = ()

    def __post_init__(self):
        c = [int(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def const(cls, n: int) -> "IntPoly":
        return cls((n,))

    @classmethod
    def monomial(cls, k: int, coeff: int = 1) -> "IntPoly":
        return cls((0,) * k + (coeff,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __bool__(self):
        return bool(self.coeffs)

    def _coerce(self, other) -> "IntPoly":
        if isinstance(other, IntPoly):
            return other
        if isinstance(other, int):
            return IntPoly((other,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(tuple(self[k] + other[k] for k in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(tuple(out))

    __rmul__ = __mul__

    def __call__(self, q):
        res = 0
        for c in reversed(self.coeffs):
            res = res * q + c
        return res

    def truncate(self, below: int) -> "IntPoly":
        """Terms of degree < below."""
        return IntPoly(self.coeffs[:max(below, 0)])

    def to_json(self) -> list:
        return list(self.coeffs)

    @classmethod
    def from_json(cls, data) -> "IntPoly":
        return cls(tuple(data))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                var = "q" if k == 1 else f"q^{k}"
                body = var if mag == 1 else f"{mag}{var}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)


ZERO = IntPoly()
ONE = IntPoly((1,))
Q = IntPoly((0, 1))
Q_MINUS_ONE = IntPoly((-1, 1))


def _step(c: int, r_same: IntPoly, r_moved: IntPoly) -> IntPoly:
    if c:
        return Q_MINUS_ONE * r_same + Q * r_moved
    return r_moved


class RPolynomials:
    """Memoized R- and KL-polynomials of one Coxeter group.

    The cache is keyed on canonical pairs (u, w); entries are written once
    with a value determined by the key.
    """

    def __init__(self, group: CoxeterGroup):
        self.group = group
        self._r: Dict[tuple, IntPoly] = {}
        self._p: Dict[tuple, IntPoly] = {}

    def classical(self, u: Element, w: Element) -> IntPoly:
        """R_{u,w} pivoting on rho_s for the smallest right descent s of w."""
        G = self.group
        if u == w:
            return ONE
        if not G.leq(u, w):
            return ZERO
        key = (u, w)
        hit = self._r.get(key)
        if hit is not None:
            return hit
        s = min(G.right_descents(w))
        ws, us = G.rmul(w, s), G.rmul(u, s)
        c = 1 if len(us) > len(u) else 0
        res = _step(c, self.classical(u, ws), self.classical(us, ws))
        self._r[key] = res
        return res

    def via_matching(self, u: Element, M: Matching) -> IntPoly:
        """One recursion step with the special matching M of [e, w] at the top."""
        I = M.poset
        if not is_special(M):
            raise NotSpecial("matching is not special")
        w = I.root
        mw = M.image(w)
        if u not in I.index:
            return ZERO
        mu = M.image(u)
        c = 1 if len(mu) > len(u) else 0
        return _step(c, self.classical(u, mw), self.classical(mu, mw))

    def kl(self, u: Element, w: Element) -> IntPoly:
        """P_{u,w} from q^{l(u,w)} P_{u,w}(1/q) = sum_{u<=x<=w} R_{u,x} P_{x,w}."""
        G = self.group
        if u == w:
            return ONE
        if not G.leq(u, w):
            return ZERO
        key = (u, w)
        hit = self._p.get(key)
        if hit is not None:
            return hit
        interval = build_interval(G, w)
        total = ZERO
        for x in interval.elements:
            if x != u and G.leq(u, x):
                total = total + self.classical(u, x) * self.kl(x, w)
        d = len(w) - len(u)
        # q^d P(1/q) has only terms of degree > d/2, P only terms of degree < d/2
        res = -total.truncate((d + 1) // 2)
        self._p[key] = res
        return res


_tables: "weakref.WeakKeyDictionary[CoxeterGroup, RPolynomials]" = weakref.WeakKeyDictionary()


def polynomials(group: CoxeterGroup) -> RPolynomials:
    """The shared polynomial table of ``group``."""
    table = _tables.get(group)
    if table is None:
        table = _tables[group] = RPolynomials(group)
    return table


def r_polynomial_classical(group: CoxeterGroup, u: Element, w: Element) -> IntPoly:
    return polynomials(group).classical(u, w)


def r_polynomial_via_matching(group: CoxeterGroup, u: Element, M: Matching) -> IntPoly:
    return polynomials(group).via_matching(u, M)


def kl_polynomial(group: CoxeterGroup, u: Element, w: Element) -> IntPoly:
    return polynomials(group).kl(u, w)


def r_polynomial_abstract(P: AbstractPoset, _memo: Optional[dict] = None) -> dict:
    """R_{x, top} for every x of an abstract lower interval, from its covers alone.

    A special matching of the poset is found by brute force; the recursion
    then descends into the down-set of M(top) and searches that sub-poset for
    a special matching of its own, and so on.  Returns ``{x: IntPoly}``.
    """
    top = P.maximum
    if top is None:
        raise ValueError("poset has no maximum")
    memo = {} if _memo is None else _memo
    return _abstract_below(P, top, memo)


def _abstract_below(P: AbstractPoset, top: int, memo: dict) -> dict:
    key = P.below[top]
    hit = memo.get(key)
    if hit is not None:
        return hit
    members = P.down_set(top)
    if len(members) == 1:
        res = {top: ONE}
        memo[key] = res
        return res
    sub, _ = P.subposet(members)
    M = first_special_matching(sub)
    if M is None:
        raise NoSpecialMatching(f"down-set of element {top} admits no special matching")
    # map the sub-poset matching back to P's labels
    match = {members[i]: members[j] for i, j in enumerate(M.partner)}
    mtop = match[top]
    lower = _abstract_below(P, mtop, memo)
    res = {}
    for x in members:
        mx = match[x]
        c = 1 if P.rank[mx] > P.rank[x] else 0
        res[x] = _step(c, lower.get(x, ZERO), lower.get(mx, ZERO))
    memo[key] = res
    return res
