"""Word-level arithmetic in a Coxeter group.

Elements are represented by their canonical word: the lexicographically
smallest reduced word, stored as a tuple of 0-based generator indices.  Two
elements are equal iff their canonical words are equal, so plain tuples can be
hashed, compared and used as dictionary keys directly.

The word problem is solved with the braid-move closure of a reduced word
(Tits): the reduced words of an element form a single class under braid
moves, the right descents are the last letters occurring in the class, and
multiplying by a generator either strips it (if it is a descent) or appends
it.  Everything is cached per group, so each element's class is computed once.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Literal, Optional, Sequence

from .errors import ClosureBudgetExceeded, InvalidJ

Element = tuple  # canonical reduced word, tuple[int, ...]
Side = Literal["left", "right"]

IDENTITY: Element = ()
INFINITY = 0  # matrix entry used for m = oo


@dataclass(frozen=True)
class CoxeterMatrix:
    """Symmetric matrix of bond orders; an entry 0 stands for infinity."""

    m: tuple

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.m)
        object.__setattr__(self, "m", m)
        n = len(m)
        if n == 0:
            raise ValueError("a Coxeter matrix needs at least one generator")
        for i in range(n):
            if len(m[i]) != n:
                raise ValueError("Coxeter matrix must be square")
            if m[i][i] != 1:
                raise ValueError(f"diagonal entry m[{i}][{i}] must be 1")
            for j in range(n):
                if m[i][j] != m[j][i]:
                    raise ValueError(f"matrix is not symmetric at ({i}, {j})")
                if i != j and m[i][j] != INFINITY and m[i][j] < 2:
                    raise ValueError(f"off-diagonal entry m[{i}][{j}] must be >= 2 or 0 (infinity)")

    @property
    def rank(self) -> int:
        return len(self.m)

    def order(self, s: int, t: int) -> Optional[int]:
        """Order of st, or None when it is infinite."""
        v = self.m[s][t]
        return None if v == INFINITY else v

    def to_json(self) -> dict:
        return {"rank": self.rank, "m": [list(row) for row in self.m]}

    @classmethod
    def from_json(cls, data: dict) -> "CoxeterMatrix":
        mat = cls(data["m"])
        if "rank" in data and int(data["rank"]) != mat.rank:
            raise ValueError(f"rank {data['rank']} does not match a {mat.rank}x{mat.rank} matrix")
        return mat

    @classmethod
    def load(cls, path) -> "CoxeterMatrix":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    # Named families -------------------------------------------------------

    @classmethod
    def from_edges(cls, rank: int, edges: dict) -> "CoxeterMatrix":
        """Build from ``{(i, j): m_ij}``; unlisted pairs commute."""
        m = [[1 if i == j else 2 for j in range(rank)] for i in range(rank)]
        for (i, j), v in edges.items():
            m[i][j] = m[j][i] = v
        return cls(m)

    @classmethod
    def type_A(cls, n: int) -> "CoxeterMatrix":
        return cls.from_edges(n, {(i, i + 1): 3 for i in range(n - 1)})

    @classmethod
    def type_B(cls, n: int) -> "CoxeterMatrix":
        edges = {(i, i + 1): 3 for i in range(n - 1)}
        edges[(0, 1)] = 4
        return cls.from_edges(n, edges)

    @classmethod
    def type_H(cls, n: int) -> "CoxeterMatrix":
        if n not in (2, 3, 4):
            raise ValueError("type H exists only in ranks 2, 3, 4")
        edges = {(i, i + 1): 3 for i in range(n - 1)}
        edges[(0, 1)] = 5
        return cls.from_edges(n, edges)

    @classmethod
    def dihedral(cls, m: int) -> "CoxeterMatrix":
        return cls.from_edges(2, {(0, 1): m})

    @classmethod
    def named(cls, name: str) -> "CoxeterMatrix":
        """Parse names such as ``A3``, ``B3``, ``H3``, ``I2(5)``, ``A1xA1xA1``."""
        name = name.strip()
        if "x" in name:
            parts = [cls.named(p) for p in name.split("x")]
            return cls.direct_sum(*parts)
        match = re.fullmatch(r"I2\((\d+|inf)\)", name)
        if match:
            v = match.group(1)
            return cls.dihedral(INFINITY if v == "inf" else int(v))
        match = re.fullmatch(r"([ABH])(\d+)", name)
        if not match:
            raise ValueError(f"unknown Coxeter type {name!r}")
        family, n = match.group(1), int(match.group(2))
        if n < 1:
            raise ValueError(f"unknown Coxeter type {name!r}")
        return {"A": cls.type_A, "B": cls.type_B, "H": cls.type_H}[family](n)

    @classmethod
    def direct_sum(cls, *mats: "CoxeterMatrix") -> "CoxeterMatrix":
        n = sum(x.rank for x in mats)
        m = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
        off = 0
        for x in mats:
            for i in range(x.rank):
                for j in range(x.rank):
                    m[off + i][off + j] = x.m[i][j]
            off += x.rank
        return cls(m)


def load_matrix(spec: str) -> CoxeterMatrix:
    """Load a matrix from a JSON file path, falling back to a type name."""
    if Path(spec).is_file():
        return CoxeterMatrix.load(spec)
    return CoxeterMatrix.named(spec)


@dataclass(frozen=True)
class ParabolicSplit:
    """Length-additive parabolic factorization.

    For ``side == "right"``: ``original = quotient * parabolic`` with
    ``quotient`` in W^J and ``parabolic`` in W_J.  For ``side == "left"``:
    ``original = parabolic * quotient`` with ``quotient`` in ^J W.
    """

    quotient: Element
    parabolic: Element
    side: str
    J: frozenset


class CoxeterGroup:
    """A Coxeter system (W, S) with memoized word arithmetic.

    All caches are plain dicts whose entries are written once with a value
    that depends only on the key, so concurrent readers see either a miss or
    the final value.
    """

    def __init__(self, matrix: CoxeterMatrix, closure_budget: int = 2_000_000):
        if not isinstance(matrix, CoxeterMatrix):
            matrix = CoxeterMatrix(matrix)
        self.matrix = matrix
        self.rank = matrix.rank
        self.generators = frozenset(range(self.rank))
        self.closure_budget = closure_budget
        self._braids = self._braid_table()
        self._classes: dict = {(): frozenset([()])}
        self._canon: dict = {(): ()}
        self._rdesc: dict = {(): frozenset()}
        self._ldesc: dict = {(): frozenset()}
        self._rmul: dict = {}
        self._lmul: dict = {}
        self._leq: dict = {}

    def __repr__(self):
        return f"CoxeterGroup({[list(r) for r in self.matrix.m]})"

    def _braid_table(self):
        table = {}
        for s in range(self.rank):
            for t in range(self.rank):
                if s == t:
                    continue
                m = self.matrix.order(s, t)
                if m is None:
                    continue
                lhs = tuple(s if k % 2 == 0 else t for k in range(m))
                rhs = tuple(t if k % 2 == 0 else s for k in range(m))
                table[(s, t)] = (m, lhs, rhs)
        return table

    # Word problem -----------------------------------------------------------

    def _check_letters(self, word: Iterable[int]) -> tuple:
        word = tuple(int(x) for x in word)
        for x in word:
            if not 0 <= x < self.rank:
                raise ValueError(f"generator index {x} out of range for rank {self.rank}")
        return word

    def braid_class(self, reduced_word: Sequence[int]) -> frozenset:
        """All words reachable from ``reduced_word`` by braid moves."""
        start = tuple(reduced_word)
        seen = {start}
        queue = deque([start])
        budget = self.closure_budget
        while queue:
            word = queue.popleft()
            n = len(word)
            for i in range(n - 1):
                s, t = word[i], word[i + 1]
                if s == t:
                    continue
                entry = self._braids.get((s, t))
                if entry is None:
                    continue
                m, lhs, rhs = entry
                if i + m > n or word[i:i + m] != lhs:
                    continue
                new = word[:i] + rhs + word[i + m:]
                if new not in seen:
                    seen.add(new)
                    if len(seen) > budget:
                        raise ClosureBudgetExceeded(
                            f"braid closure exceeded {budget} nodes for a word of length {n}")
                    queue.append(new)
        return frozenset(seen)

    def _register(self, reduced_word: tuple) -> Element:
        """Compute and cache the class of a word known to be reduced."""
        hit = self._canon.get(reduced_word)
        if hit is not None:
            return hit
        cls = self.braid_class(reduced_word)
        canon = min(cls)
        self._classes[canon] = cls
        self._rdesc[canon] = frozenset(w[-1] for w in cls)
        self._ldesc[canon] = frozenset(w[0] for w in cls)
        for word in cls:
            self._canon[word] = canon
        return canon

    def reduced_words(self, w: Element) -> frozenset:
        return self._classes[self._register(w)]

    def rmul(self, w: Element, s: int) -> Element:
        """The product w*s."""
        key = (w, s)
        hit = self._rmul.get(key)
        if hit is not None:
            return hit
        if s in self.right_descents(w):
            word = next(x for x in self._classes[w] if x[-1] == s)
            res = self._register(word[:-1])
        else:
            res = self._register(w + (s,))
        self._rmul[key] = res
        return res

    def lmul(self, s: int, w: Element) -> Element:
        """The product s*w."""
        key = (s, w)
        hit = self._lmul.get(key)
        if hit is not None:
            return hit
        if s in self.left_descents(w):
            word = next(x for x in self._classes[w] if x[0] == s)
            res = self._register(word[1:])
        else:
            res = self._register((s,) + w)
        self._lmul[key] = res
        return res

    def element(self, word: Iterable[int] = ()) -> Element:
        """Canonicalize an arbitrary (possibly non-reduced) word."""
        word = self._check_letters(word)
        hit = self._canon.get(word)
        if hit is not None:
            return hit
        w: Element = ()
        for s in word:
            w = self.rmul(w, s)
        return w

    canonicalize = element

    def is_element(self, w) -> bool:
        """True iff ``w`` is a canonical word of this group."""
        try:
            w = self._check_letters(w)
        except ValueError:
            return False
        return self.element(w) == w

    def mul(self, *factors: Element) -> Element:
        res: Element = ()
        for f in factors:
            for s in f:
                res = self.rmul(res, s)
        return res

    def inverse(self, w: Element) -> Element:
        return self._register(tuple(reversed(w)))

    def length(self, w: Element) -> int:
        return len(w)

    def right_descents(self, w: Element) -> frozenset:
        hit = self._rdesc.get(w)
        if hit is None:
            self._register(w)
            hit = self._rdesc[w]
        return hit

    def left_descents(self, w: Element) -> frozenset:
        hit = self._ldesc.get(w)
        if hit is None:
            self._register(w)
            hit = self._ldesc[w]
        return hit

    def descents(self, w: Element, side: Side = "right") -> frozenset:
        if side == "right":
            return self.right_descents(w)
        if side == "left":
            return self.left_descents(w)
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")

    def is_additive(self, *factors: Element) -> bool:
        """True iff the product of ``factors`` has the sum of their lengths."""
        return len(self.mul(*factors)) == sum(len(f) for f in factors)

    # Bruhat order -------------------------------------------------------------

    def leq(self, u: Element, w: Element) -> bool:
        """Bruhat comparison u <= w.

        Lifting recursion: for s a left descent of w, u <= w iff
        min(u, su) <= sw.  The canonical word of sw is w[1:].
        """
        lu, lw = len(u), len(w)
        if lu > lw:
            return False
        if lu == lw:
            return u == w
        if lu == 0:
            return True
        key = (u, w)
        hit = self._leq.get(key)
        if hit is None:
            s = w[0]
            lower = self.lmul(s, u) if s in self.left_descents(u) else u
            hit = self._leq[key] = self.leq(lower, w[1:])
        return hit

    bruhat_leq = leq

    def covers(self, u: Element, v: Element) -> bool:
        return len(v) == len(u) + 1 and self.leq(u, v)

    def lower_covers(self, v: Element) -> list:
        """Elements covered by v, obtained by deleting one letter."""
        out = set()
        for i in range(len(v)):
            x = self.element(v[:i] + v[i + 1:])
            if len(x) == len(v) - 1:
                out.add(x)
        return sorted(out, key=sort_key)

    # Parabolic machinery ---------------------------------------------------

    def parabolic_split(self, w: Element, J: Iterable[int], side: Side = "right") -> ParabolicSplit:
        J = frozenset(J)
        x, par = w, ()
        if side == "right":
            while True:
                d = self.right_descents(x) & J
                if not d:
                    break
                s = min(d)
                x = self.rmul(x, s)
                par = self.lmul(s, par)
        elif side == "left":
            while True:
                d = self.left_descents(x) & J
                if not d:
                    break
                s = min(d)
                x = self.lmul(s, x)
                par = self.rmul(par, s)
        else:
            raise ValueError(f"side must be 'left' or 'right', not {side!r}")
        return ParabolicSplit(quotient=x, parabolic=par, side=side, J=J)

    # Short names used throughout: w^J, w_J, ^J w, _J w.
    def right_quotient(self, w, J) -> Element:
        return self.parabolic_split(w, J, "right").quotient

    def right_parabolic(self, w, J) -> Element:
        return self.parabolic_split(w, J, "right").parabolic

    def left_quotient(self, w, J) -> Element:
        return self.parabolic_split(w, J, "left").quotient

    def left_parabolic(self, w, J) -> Element:
        return self.parabolic_split(w, J, "left").parabolic

    def support(self, w: Element, H: Optional[Iterable[int]] = None) -> frozenset:
        supp = frozenset(w)
        return supp if H is None else supp & frozenset(H)

    def in_parabolic(self, w: Element, J: Iterable[int]) -> bool:
        return frozenset(w) <= frozenset(J)

    def commuting_set(self, s: int) -> frozenset:
        """C_s: generators commuting with s, including s itself."""
        return frozenset(c for c in range(self.rank) if self.matrix.m[s][c] in (1, 2))

    def s_complement(self, J: Iterable[int], s: int) -> frozenset:
        J = frozenset(J)
        cs = self.commuting_set(s)
        if not cs <= J:
            raise InvalidJ(f"C_{s} = {sorted(cs)} is not contained in J = {sorted(J)}")
        K = (self.generators - J) | cs
        assert J | K == self.generators and J & K == cs
        return K

    def commutes(self, s: int, t: int) -> bool:
        return self.matrix.m[s][t] in (1, 2)

    def w0(self, w: Element, J: Iterable[int]) -> Element:
        """Unique maximal element of [e, w] restricted to W_J.

        By the subword property these elements are the products of subwords
        of the J-letters of a reduced word of w; the maximum is the longest.
        """
        J = frozenset(J)
        reach = {()}
        for s in w:
            if s in J:
                reach |= {self.rmul(x, s) for x in reach}
        top = max(reach, key=lambda x: (len(x), x))
        return top

    def prefixes(self, w: Element) -> set:
        """All u with l(u) + l(u^-1 w) = l(w)."""
        out = {w}
        stack = [w]
        while stack:
            x = stack.pop()
            for s in self.right_descents(x):
                y = self.rmul(x, s)
                if y not in out:
                    out.add(y)
                    stack.append(y)
        return out

    def elements_up_to(self, max_length: int) -> list:
        """All elements of length <= max_length, sorted canonically."""
        layer = {()}
        out = [()]
        for _ in range(max_length):
            nxt = set()
            for x in layer:
                for s in range(self.rank):
                    if s not in self.right_descents(x):
                        nxt.add(self.rmul(x, s))
            out.extend(sorted(nxt))
            layer = nxt
            if not layer:
                break
        return sorted(out, key=sort_key)


def sort_key(w: Element):
    return (len(w), w)


def parse_word(text: str) -> tuple:
    """Parse ``"0 1 0"`` (or ``"0,1,0"``) into a tuple of indices."""
    text = text.strip()
    if text in ("", "e"):
        return ()
    try:
        return tuple(int(x) for x in re.split(r"[\s,]+", text) if x)
    except ValueError:
        raise ValueError(f"cannot parse word {text!r}; expected whitespace-separated indices") from None


def format_word(w: Sequence[int], names: Optional[Sequence[str]] = None) -> str:
    if not w:
        return "e"
    if names is None:
        return "·".join(str(x) for x in w)
    return "".join(names[x] for x in w)
