"""Finite graded posets, lower Bruhat intervals and their matchings."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .coxeter import CoxeterGroup, Element, format_word, sort_key
from .errors import BudgetExceeded, NotADescent, NotAMatching

DEFAULT_INTERVAL_BUDGET = 50_000
DEFAULT_ENUMERATION_BUDGET = 2_000


class AbstractPoset:
    """A finite graded poset with a unique minimum, given by its cover relations.

    Elements are the integers ``0..n-1``.  ``covers`` lists pairs ``(i, j)``
    meaning ``i`` is covered by ``j``.  The order relation is stored as one
    bitmask per element (bit ``i`` of ``below[j]`` is set iff ``i <= j``).
    """

    def __init__(self, size: int, covers: Iterable[tuple]):
        self.size = size
        self.lower = [[] for _ in range(size)]
        self.upper = [[] for _ in range(size)]
        cover_set = set()
        for i, j in covers:
            if (i, j) in cover_set:
                continue
            cover_set.add((i, j))
            self.lower[j].append(i)
            self.upper[i].append(j)
        for lst in self.lower + self.upper:
            lst.sort()
        self.cover_pairs = sorted(cover_set)

        minima = [i for i in range(size) if not self.lower[i]]
        if len(minima) != 1:
            raise ValueError(f"poset must have a unique minimum, found {len(minima)}")
        self.minimum = minima[0]

        rank = [None] * size
        rank[self.minimum] = 0
        order = [self.minimum]
        indeg = [len(x) for x in self.lower]
        k = 0
        while k < len(order):
            i = order[k]
            k += 1
            for j in self.upper[i]:
                r = rank[i] + 1
                if rank[j] is None:
                    rank[j] = r
                elif rank[j] != r:
                    raise ValueError("poset is not graded")
                indeg[j] -= 1
                if indeg[j] == 0:
                    order.append(j)
        if len(order) != size:
            raise ValueError("cover relation contains a cycle")
        self.rank = rank
        self.order = sorted(range(size), key=lambda i: (rank[i], i))

        below = [0] * size
        for j in self.order:
            b = 1 << j
            for i in self.lower[j]:
                b |= below[i]
            below[j] = b
        self.below = below

    def __repr__(self):
        return f"{type(self).__name__}(size={self.size})"

    def __len__(self):
        return self.size

    def leq(self, i: int, j: int) -> bool:
        return (self.below[j] >> i) & 1 == 1

    def is_cover(self, i: int, j: int) -> bool:
        return i in self.lower[j]

    @property
    def maxima(self) -> list:
        return [i for i in range(self.size) if not self.upper[i]]

    @property
    def maximum(self) -> Optional[int]:
        tops = self.maxima
        return tops[0] if len(tops) == 1 else None

    def rank_sizes(self) -> list:
        counts = [0] * (max(self.rank) + 1)
        for r in self.rank:
            counts[r] += 1
        return counts

    def down_set(self, j: int) -> list:
        """Indices of the elements below ``j``, in increasing order."""
        b = self.below[j]
        return [i for i in range(self.size) if (b >> i) & 1]

    def subposet(self, members: Sequence[int]) -> tuple:
        """Induced subposet on an order ideal.  Returns (poset, members)."""
        members = list(members)
        where = {x: k for k, x in enumerate(members)}
        covers = [(where[i], where[j]) for i, j in self.cover_pairs if i in where and j in where]
        return AbstractPoset(len(members), covers), members

    def relabel(self, perm: Sequence[int]) -> "AbstractPoset":
        """Copy with element ``i`` renamed ``perm[i]``."""
        return AbstractPoset(self.size, [(perm[i], perm[j]) for i, j in self.cover_pairs])

    def scrambled(self, seed: int = 0) -> tuple:
        """A relabelled copy and the permutation used (old index -> new index)."""
        perm = list(range(self.size))
        random.Random(seed).shuffle(perm)
        return self.relabel(perm), perm

    def abstract(self) -> "AbstractPoset":
        return AbstractPoset(self.size, self.cover_pairs)


class BruhatInterval(AbstractPoset):
    """The lower interval [e, w] as an explicit poset.

    ``elements`` are sorted by (length, canonical word); ``index`` maps an
    element back to its position.
    """

    def __init__(self, group: CoxeterGroup, root: Element, elements: list, covers: list):
        self.group = group
        self.root = root
        self.elements = elements
        self.index = {x: i for i, x in enumerate(elements)}
        super().__init__(len(elements), covers)

    def __contains__(self, x) -> bool:
        return x in self.index

    def element_covers(self) -> list:
        return [(self.elements[i], self.elements[j]) for i, j in self.cover_pairs]

    def to_json(self) -> dict:
        return {
            "elements": [list(x) for x in self.elements],
            "covers": [[i, j] for i, j in self.cover_pairs],
        }

    def to_dot(self, matching: Optional["Matching"] = None, names=None) -> str:
        return interval_to_dot(self, matching, names)


def build_interval(group: CoxeterGroup, w: Element, budget: int = DEFAULT_INTERVAL_BUDGET) -> BruhatInterval:
    """Materialize [e, w]: products of subwords of the canonical word of w."""
    reach = {()}
    for s in w:
        reach |= {group.rmul(x, s) for x in reach}
        if len(reach) > budget:
            raise BudgetExceeded(f"interval below {format_word(w)} exceeds {budget} elements")
    elements = sorted(reach, key=sort_key)
    index = {x: i for i, x in enumerate(elements)}
    covers = []
    for j, v in enumerate(elements):
        for u in group.lower_covers(v):
            covers.append((index[u], j))
    return BruhatInterval(group, w, elements, covers)


def interval_from_json(group: CoxeterGroup, data: dict) -> BruhatInterval:
    """Rebuild an interval from its JSON export, checking it is consistent."""
    elements = [group.element(x) for x in data["elements"]]
    if not elements:
        raise ValueError("interval has no elements")
    top = max(elements, key=sort_key)
    interval = build_interval(group, top)
    if interval.elements != elements:
        raise ValueError("element list does not match the lower interval of its top element")
    if sorted(map(tuple, data["covers"])) != interval.cover_pairs:
        raise ValueError("cover list does not match the Bruhat order")
    return interval


def parabolic_top(interval: BruhatInterval, J: Iterable[int]) -> Element:
    """Max-scan of [e, w] intersected with W_J; raises if the maximum is not unique."""
    J = frozenset(J)
    members = [i for i, x in enumerate(interval.elements) if frozenset(x) <= J]
    maximal = [i for i in members
               if not any(k != i and interval.leq(i, k) for k in members)]
    if len(maximal) != 1:
        raise AssertionError(f"{len(maximal)} maximal elements in parabolic restriction")
    return interval.elements[maximal[0]]


# Matchings -------------------------------------------------------------------

@dataclass(frozen=True)
class Matching:
    """An involution of a poset whose orbits are Hasse edges."""

    poset: AbstractPoset
    partner: tuple

    def __post_init__(self):
        p = tuple(self.partner)
        object.__setattr__(self, "partner", p)
        P = self.poset
        if len(p) != P.size:
            raise NotAMatching(f"matching has {len(p)} entries for a poset of size {P.size}")
        for i, j in enumerate(p):
            if not 0 <= j < P.size or p[j] != i:
                raise NotAMatching(f"not an involution at {i}")
            if not (P.is_cover(i, j) or P.is_cover(j, i)):
                raise NotAMatching(f"{{{i}, {j}}} is not a Hasse edge")

    def __call__(self, i: int) -> int:
        return self.partner[i]

    def __len__(self):
        return len(self.partner)

    def image(self, x: Element) -> Element:
        """Apply to an element of a Bruhat interval."""
        P = self.poset
        return P.elements[self.partner[P.index[x]]]

    def pairs(self) -> list:
        return [(i, j) for i, j in enumerate(self.partner) if i < j]

    def goes_up(self, i: int) -> bool:
        return self.poset.rank[self.partner[i]] > self.poset.rank[i]

    def to_json(self) -> dict:
        return {"pairs": [[i, j] for i, j in self.pairs()]}

    def describe(self) -> str:
        P = self.poset
        if isinstance(P, BruhatInterval):
            return ", ".join(f"{format_word(P.elements[i])}–{format_word(P.elements[j])}"
                             for i, j in self.pairs())
        return ", ".join(f"{i}–{j}" for i, j in self.pairs())


def matching_from_pairs(poset: AbstractPoset, pairs: Iterable) -> Matching:
    partner = [None] * poset.size
    for i, j in pairs:
        if partner[i] is not None or partner[j] is not None:
            raise NotAMatching(f"element matched twice in pair ({i}, {j})")
        partner[i], partner[j] = j, i
    if any(p is None for p in partner):
        raise NotAMatching("some elements are unmatched")
    return Matching(poset, tuple(partner))


def matching_from_json(poset: AbstractPoset, data: dict) -> Matching:
    return matching_from_pairs(poset, data["pairs"])


def matching_from_map(interval: BruhatInterval, fn) -> Matching:
    """Materialize an element-level involution ``fn`` on [e, w]."""
    partner = []
    for x in interval.elements:
        y = fn(x)
        if y not in interval.index:
            raise NotAMatching(f"image of {format_word(x)} is {format_word(y)}, outside the interval")
        partner.append(interval.index[y])
    return Matching(interval, tuple(partner))


def is_special(M: Matching) -> bool:
    P, p = M.poset, M.partner
    for u, v in P.cover_pairs:
        if p[u] != v and not P.leq(p[u], p[v]):
            return False
    return True


def lifting_violations(M: Matching) -> list:
    """Pairs u <= v breaking a clause of the lifting property for M."""
    P, p = M.poset, M.partner
    bad = []
    for v in range(P.size):
        v_down = p[v] in P.lower[v]
        for u in P.down_set(v):
            u_down = p[u] in P.lower[u]
            if v_down == u_down:
                ok = P.leq(p[u], p[v])
            elif v_down and not u_down:
                ok = P.leq(p[u], v) and P.leq(u, p[v])
            else:
                continue
            if not ok:
                bad.append((u, v))
    return bad


def multiplication_matching(interval: BruhatInterval, s: int, side="right") -> Matching:
    """rho_s (right) or lambda_s (left) on [e, w]; s must be a descent of w."""
    G, w = interval.group, interval.root
    if s not in G.descents(w, side):
        raise NotADescent(f"{s} is not a {side} descent of {format_word(w)}")
    if side == "right":
        return matching_from_map(interval, lambda x: G.rmul(x, s))
    return matching_from_map(interval, lambda x: G.lmul(s, x))


def multiplication_matchings(interval: BruhatInterval) -> dict:
    """All multiplication matchings keyed by (side, s)."""
    G, w = interval.group, interval.root
    out = {}
    for side in ("left", "right"):
        for s in sorted(G.descents(w, side)):
            out[(side, s)] = multiplication_matching(interval, s, side)
    return out


def is_multiplication_matching(M: Matching) -> bool:
    return M in multiplication_matchings(M.poset).values()


def iter_matchings(P: AbstractPoset, special: bool = False) -> Iterator[Matching]:
    """Perfect matchings of the Hasse diagram, by backtracking in rank order.

    The lowest unmatched element is always matched upward, so the minimum is
    paired with an atom first.  With ``special=True`` every cover whose two
    endpoints are matched is checked as soon as possible.
    """
    n = P.size
    if n % 2:
        return
    partner = [-1] * n
    order = P.order
    lower, upper, leq = P.lower, P.upper, P.leq

    def consistent(x: int) -> bool:
        px = partner[x]
        for v in upper[x]:
            pv = partner[v]
            if pv >= 0 and px != v and not leq(px, pv):
                return False
        for u in lower[x]:
            pu = partner[u]
            if pu >= 0 and pu != x and not leq(pu, px):
                return False
        return True

    def search(k: int):
        while k < n and partner[order[k]] >= 0:
            k += 1
        if k == n:
            yield Matching(P, tuple(partner))
            return
        x = order[k]
        for y in upper[x]:
            if partner[y] >= 0:
                continue
            partner[x], partner[y] = y, x
            if not special or (consistent(x) and consistent(y)):
                yield from search(k + 1)
            partner[x] = partner[y] = -1

    yield from search(0)


def enumerate_matchings(P: AbstractPoset, budget: int = DEFAULT_ENUMERATION_BUDGET) -> list:
    if P.size > budget:
        raise BudgetExceeded(f"poset of size {P.size} exceeds enumeration budget {budget}")
    return list(iter_matchings(P, special=False))


def enumerate_special_matchings(P: AbstractPoset, budget: int = DEFAULT_ENUMERATION_BUDGET) -> list:
    if P.size > budget:
        raise BudgetExceeded(f"poset of size {P.size} exceeds enumeration budget {budget}")
    return list(iter_matchings(P, special=True))


def first_special_matching(P: AbstractPoset) -> Optional[Matching]:
    return next(iter_matchings(P, special=True), None)


# Isomorphism -----------------------------------------------------------------

def _colours(P: AbstractPoset, rounds: int = 3) -> list:
    col = [(P.rank[i], len(P.lower[i]), len(P.upper[i])) for i in range(P.size)]
    for _ in range(rounds):
        col = [(col[i],
                tuple(sorted(col[j] for j in P.lower[i])),
                tuple(sorted(col[j] for j in P.upper[i])))
               for i in range(P.size)]
        # compress to small integers so the tuples stay shallow
        table = {c: k for k, c in enumerate(sorted(set(col)))}
        col = [table[c] for c in col]
    return col


def poset_isomorphic(P: AbstractPoset, Q: AbstractPoset) -> Optional[list]:
    """A rank-preserving isomorphism P -> Q as a list, or None.

    Candidates are restricted by refined degree/rank signatures computed
    jointly on both posets; elements are assigned in rank order and every
    lower cover of an assigned element must map to a lower cover of its image.
    """
    if P.size != Q.size or sorted(P.rank) != sorted(Q.rank):
        return None
    if len(P.cover_pairs) != len(Q.cover_pairs):
        return None
    # refine colours on the disjoint union so labels are comparable
    n = P.size
    union = AbstractPoset.__new__(AbstractPoset)
    union.size = 2 * n
    union.rank = P.rank + Q.rank
    union.lower = P.lower + [[j + n for j in x] for x in Q.lower]
    union.upper = P.upper + [[j + n for j in x] for x in Q.upper]
    col = _colours(union, rounds=4)
    cp, cq = col[:n], col[n:]
    if sorted(cp) != sorted(cq):
        return None
    by_colour = {}
    for q in range(n):
        by_colour.setdefault(cq[q], []).append(q)

    f = [-1] * n
    used = [False] * n
    order = P.order

    def extend(k: int) -> bool:
        if k == n:
            return True
        p = order[k]
        for q in by_colour[cp[p]]:
            if used[q]:
                continue
            ql = Q.lower[q]
            if all(f[x] in ql for x in P.lower[p]):
                f[p] = q
                used[q] = True
                if extend(k + 1):
                    return True
                used[q] = False
                f[p] = -1
        return False

    if not extend(0):
        return None
    return f


def is_isomorphism(P: AbstractPoset, Q: AbstractPoset, f: Sequence[int]) -> bool:
    if sorted(f) != list(range(Q.size)) or P.size != Q.size:
        return False
    mapped = sorted((f[i], f[j]) for i, j in P.cover_pairs)
    return mapped == Q.cover_pairs


# Export ------------------------------------------------------------------------

def interval_to_dot(interval: BruhatInterval, matching: Optional[Matching] = None, names=None) -> str:
    """Rank-layered Graphviz source for the Hasse diagram of [e, w]."""
    lines = ["digraph hasse {", "  rankdir=BT;", "  node [shape=plaintext];"]
    for i, x in enumerate(interval.elements):
        lines.append(f'  n{i} [label="{format_word(x, names)}"];')
    for r in range(max(interval.rank) + 1):
        ids = " ".join(f"n{i};" for i in range(interval.size) if interval.rank[i] == r)
        lines.append(f"  {{ rank=same; {ids} }}")
    matched = set(matching.pairs()) if matching is not None else set()
    for i, j in interval.cover_pairs:
        attrs = ' [color=red, penwidth=2]' if (i, j) in matched or (j, i) in matched else ""
        lines.append(f"  n{i} -> n{j}{attrs};")
    lines.append("}")
    return "\n".join(lines) + "\n"
