"""Systems (J, H, M) and the special matchings they induce on [e, w].

A system for w consists of a set J of generators containing C_s, a set H of
one or two generators and a matching M of the dihedral interval
[e, w0(H)] (s = M(e)).  Every element u <= w factors length-additively as
u = a.b.c with a, c "outside" H and b in W_H; the induced matching is
u -> a.M(b).c.  Every special matching of [e, w] arises this way.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional

from .coxeter import CoxeterGroup, Element, format_word, sort_key
from .errors import (
    DihedralInterval,
    InvalidLeftSystem,
    InvalidRightSystem,
    NotAMatching,
    NotInDomain,
    PreconditionViolated,
    SystemViolation,
)
from .poset import (
    BruhatInterval,
    Matching,
    build_interval,
    enumerate_matchings,
    enumerate_special_matchings,
    is_multiplication_matching,
    is_special,
    matching_from_json,
    matching_from_map,
    multiplication_matching,
)


def _fmt(J) -> str:
    return "{" + ",".join(str(x) for x in sorted(J)) + "}"


def commutes_with_multiplication(M: Matching, alpha: int, side: str) -> bool:
    """Does M commute with lambda_alpha (side="left") or rho_alpha on its interval?

    Both maps must be matchings of the same interval, so alpha has to be a
    descent of the top element; otherwise the answer is False.
    """
    I = M.poset
    if alpha not in I.group.descents(I.root, side):
        return False
    N = multiplication_matching(I, alpha, side)
    m, n = M.partner, N.partner
    return all(m[n[i]] == n[m[i]] for i in range(I.size))


def matchings_commute(M: Matching, N: Matching) -> bool:
    m, n = M.partner, N.partner
    return all(m[n[i]] == n[m[i]] for i in range(len(m)))


@dataclass(frozen=True)
class SFactorization:
    a: Element
    b: Element
    c: Element

    def __iter__(self):
        return iter((self.a, self.b, self.c))


@dataclass(frozen=True, eq=False)
class System:
    """A validated system (J, H, M) for w.  Build with :func:`check_system`."""

    w: Element
    J: frozenset
    H: frozenset
    M: Matching
    s: int
    K: frozenset
    kind: str  # "first", "second" or "both"

    @property
    def group(self) -> CoxeterGroup:
        return self.M.poset.group

    @property
    def dihedral(self) -> BruhatInterval:
        return self.M.poset

    @property
    def t(self) -> Optional[int]:
        rest = self.H - {self.s}
        return next(iter(rest)) if rest else None

    @property
    def first_kind(self) -> bool:
        """Whether the right-handed (first kind) formulas apply."""
        return self.kind in ("first", "both")

    @cached_property
    def _w_parts(self) -> SFactorization:
        return _raw_factorization(self, self.w)

    def key(self) -> tuple:
        return (self.w, tuple(sorted(self.J)), tuple(sorted(self.H)), self.M.partner)

    def __eq__(self, other):
        return isinstance(other, System) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return (f"System(w={format_word(self.w)}, J={_fmt(self.J)}, H={_fmt(self.H)}, "
                f"kind={self.kind}, M=[{self.M.describe()}])")

    def to_json(self) -> dict:
        return {
            "w": list(self.w),
            "J": sorted(self.J),
            "H": sorted(self.H),
            "M": [[i, j] for i, j in self.M.pairs()],
        }


def check_system(group: CoxeterGroup, w: Element, J: Iterable[int], H: Iterable[int], M: Matching) -> System:
    """Validate (J, H, M) as a system for w.

    Raises :class:`NotAMatching` if M is not a matching of [e, w0(H)] and
    :class:`SystemViolation` naming the first failing axiom otherwise.
    """
    J, H = frozenset(J), frozenset(H)
    if not H <= group.generators or len(H) not in (1, 2):
        raise SystemViolation("H", f"H = {_fmt(H)} must be 1 or 2 generators")
    if not J <= group.generators:
        raise SystemViolation("Cs", f"J = {_fmt(J)} is not a set of generators")
    top = group.w0(w, H)
    I0 = M.poset
    if not isinstance(I0, BruhatInterval) or I0.group is not group or I0.root != top:
        raise NotAMatching(f"M must be a matching of [e, {format_word(top)}]")
    atom = I0.elements[M.partner[0]]
    s = atom[0]

    cs = group.commuting_set(s)
    if not cs <= J:
        raise SystemViolation("Cs", f"C_{s} = {_fmt(cs)} is not contained in J = {_fmt(J)}")

    mult = is_multiplication_matching(M)
    if mult != (len(H) == 1):
        if len(H) == 1:
            raise SystemViolation("S0", "|H| = 1 but M is not a multiplication matching")
        raise SystemViolation("S0", "|H| = 2 but M is a multiplication matching")

    K = group.s_complement(J, s)
    wJ = group.right_quotient(w, J)
    if not group.in_parabolic(wJ, K):
        raise SystemViolation("S1", f"w^J = {format_word(wJ)} is not in W_K, K = {_fmt(K)}")

    left_part = group.right_quotient(wJ, H)
    supp = group.support(left_part, H)
    if len(supp) > 1:
        raise SystemViolation("S2", f"Supp_H((w^J)^H) = {_fmt(supp)} has two elements")
    for alpha in supp:
        if not commutes_with_multiplication(M, alpha, "left"):
            raise SystemViolation("S2", f"M does not commute with lambda_{alpha}")
    right_part = group.left_quotient(group.left_quotient(w, K), H)
    supp = group.support(right_part, H)
    if len(supp) > 1:
        raise SystemViolation("S2", f"Supp_H(^H(^K w)) = {_fmt(supp)} has two elements")
    for beta in supp:
        if not commutes_with_multiplication(M, beta, "right"):
            raise SystemViolation("S2", f"M does not commute with rho_{beta}")

    if len(H) == 1:
        kind = "both"
    elif H <= K:
        kind = "first"
    elif H <= J:
        kind = "second"
    else:  # pragma: no cover - H = {s, t} always lies in J or K
        raise AssertionError("H is contained in neither J nor K")
    return System(w=w, J=J, H=H, M=M, s=s, K=K, kind=kind)


def is_system(group, w, J, H, M) -> bool:
    try:
        check_system(group, w, J, H, M)
    except (SystemViolation, NotAMatching):
        return False
    return True


def system_from_json(group: CoxeterGroup, data: dict) -> System:
    w = group.element(data["w"])
    H = frozenset(data["H"])
    I0 = build_interval(group, group.w0(w, H))
    M = matching_from_json(I0, {"pairs": data["M"]})
    return check_system(group, w, data["J"], H, M)


# Canonical factorization ------------------------------------------------------

def _raw_factorization(S: System, u: Element) -> SFactorization:
    G, H = S.group, S.H
    if S.first_kind:
        split = G.parabolic_split(u, S.J, "right")
        left, right = split.quotient, split.parabolic
    else:
        split = G.parabolic_split(u, S.K, "left")
        left, right = split.parabolic, split.quotient
    x = G.parabolic_split(left, H, "right")
    y = G.parabolic_split(right, H, "left")
    return SFactorization(x.quotient, G.mul(x.parabolic, y.parabolic), y.quotient)


def in_domain(S: System, u: Element) -> bool:
    """Membership in W_S (first kind) or W'_S (second kind)."""
    G = S.group
    if not G.leq(G.w0(u, S.H), S.dihedral.root):
        return False
    f = _raw_factorization(S, u)
    if S.first_kind:
        return G.leq(f.a, S._w_parts.a)
    return G.leq(f.c, S._w_parts.c)


def canonical_factorization(S: System, u: Element) -> SFactorization:
    """The canonical S-factorization (a_S(u), b_S(u), c_S(u)).

    First-kind systems split off u^J on the right; second-kind systems use
    the mirrored split with K on the left.
    """
    if not in_domain(S, u):
        raise NotInDomain(f"{format_word(u)} lies outside the domain of {S!r}")
    return _raw_factorization(S, u)


def first_kind_parts(S: System, u: Element) -> SFactorization:
    """((u^J)^H, (u^J)_H . _H(u_J), ^H(u_J)) regardless of the kind of S."""
    G, H = S.group, S.H
    split = G.parabolic_split(u, S.J, "right")
    x = G.parabolic_split(split.quotient, H, "right")
    y = G.parabolic_split(split.parabolic, H, "left")
    return SFactorization(x.quotient, G.mul(x.parabolic, y.parabolic), y.quotient)


def is_s_factorization(S: System, u: Element, a: Element, b: Element, c: Element) -> bool:
    G, H = S.group, S.H
    if len(a) + len(b) + len(c) != len(u) or G.mul(a, b, c) != u:
        return False
    if not G.in_parabolic(a, S.K) or G.right_descents(a) & H:
        return False
    supp = G.support(a, H)
    if len(supp) > 1 or any(not commutes_with_multiplication(S.M, x, "left") for x in supp):
        return False
    if not G.in_parabolic(b, H):
        return False
    if not G.in_parabolic(c, S.J) or G.left_descents(c) & H:
        return False
    supp = G.support(c, H)
    if len(supp) > 1 or any(not commutes_with_multiplication(S.M, x, "right") for x in supp):
        return False
    return True


def all_s_factorizations(S: System, u: Element) -> list:
    """Every S-factorization of u, by exhaustive prefix search."""
    G, H = S.group, S.H
    out = []
    for a in sorted(G.prefixes(u), key=sort_key):
        if not G.in_parabolic(a, S.K) or G.right_descents(a) & H:
            continue
        rest = G.mul(G.inverse(a), u)
        for b in sorted(G.prefixes(rest), key=sort_key):
            if not G.in_parabolic(b, H):
                continue
            c = G.mul(G.inverse(b), rest)
            if is_s_factorization(S, u, a, b, c):
                out.append(SFactorization(a, b, c))
    return out


def evaluate(S: System, a: Element, b: Element, c: Element) -> Element:
    """a * M(b) * c (group product)."""
    if b not in S.dihedral.index:
        raise NotInDomain(f"{format_word(b)} is not in [e, {format_word(S.dihedral.root)}]")
    return S.group.mul(a, S.M.image(b), c)


def apply_system_matching(S: System, u: Element) -> Element:
    """M_S(u) computed from the canonical S-factorization of u."""
    return evaluate(S, *canonical_factorization(S, u))


def induced_matching(S: System, interval: Optional[BruhatInterval] = None) -> Matching:
    """M_S materialized as a matching of [e, w]."""
    if interval is None:
        interval = build_interval(S.group, S.w)
    return matching_from_map(interval, lambda u: apply_system_matching(S, u))


def is_top_cover(S: System) -> bool:
    """True iff M_S(w) is covered by w."""
    G = S.group
    mw = apply_system_matching(S, S.w)
    return len(mw) + 1 == len(S.w) and G.leq(mw, S.w)


def apply_via_triple(S: System, wfact: SFactorization, a1: Element, b1: Element, c1: Element) -> Element:
    """Evaluate M_S(a1 b1 c1) as a1 M(b1) c1, given an S-factorization of w.

    Needs a1 <= a, b1 <= b, c1 <= c and either additive lengths for
    (a1, b1, c1), or M_S special (M_S(w) covered by w) together with a left
    descent r of a making (r a1, b1, c1) additive.
    """
    G = S.group
    a, b, c = wfact
    if not is_s_factorization(S, S.w, a, b, c):
        raise PreconditionViolated("wfact is not an S-factorization of w")
    if not (G.leq(a1, a) and G.leq(b1, b) and G.leq(c1, c)):
        raise PreconditionViolated("factors are not below the factors of w")
    u = G.mul(a1, b1, c1)
    if not G.is_additive(a1, b1, c1):
        ok = False
        if G.leq(u, S.w) and is_top_cover(S):
            for r in G.left_descents(a):
                ra1 = G.lmul(r, a1)
                if G.lmul(r, u) == G.mul(ra1, b1, c1) and G.is_additive(ra1, b1, c1):
                    ok = True
                    break
        if not ok:
            raise PreconditionViolated("neither the additive nor the descent hypothesis holds")
    res = evaluate(S, a1, b1, c1)
    expected = apply_system_matching(S, u)
    if res != expected:
        raise AssertionError(
            f"a'M(b')c' = {format_word(res)} but M_S(u) = {format_word(expected)}")
    return res


# Normalization and enumeration -----------------------------------------------

def normalize_system(S: System) -> System:
    """Move t across J so that M(t) = s t exactly when t is in J."""
    if len(S.H) == 1:
        return S
    G, t = S.group, S.t
    mt = S.M.image((t,))
    if t not in S.J and mt != G.rmul((t,), S.s):
        return check_system(G, S.w, S.J | {t}, S.H, S.M)
    if t in S.J and mt != G.lmul(S.s, (t,)):
        return check_system(G, S.w, S.J - {t}, S.H, S.M)
    return S


def satisfies_normal_condition(S: System) -> bool:
    """For every alpha in H: M_S(alpha) = s alpha iff alpha is in J."""
    G = S.group
    for alpha in S.H:
        x = (alpha,)
        if (apply_system_matching(S, x) == G.lmul(S.s, x)) != (alpha in S.J):
            return False
    return True


def candidate_H(group: CoxeterGroup, w: Element) -> list:
    supp = sorted(group.support(w))
    out = [frozenset([s]) for s in supp]
    for s, t in itertools.combinations(supp, 2):
        if not group.commutes(s, t):
            out.append(frozenset([s, t]))
    return out


def iter_systems(group: CoxeterGroup, w: Element) -> Iterator[System]:
    """Every system for w, over all H, all matchings of [e, w0(H)] and all J."""
    gens = sorted(group.generators)
    for H in candidate_H(group, w):
        I0 = build_interval(group, group.w0(w, H))
        for M in enumerate_matchings(I0):
            s = I0.elements[M.partner[0]][0]
            cs = group.commuting_set(s)
            free = [g for g in gens if g not in cs]
            for k in range(len(free) + 1):
                for extra in itertools.combinations(free, k):
                    try:
                        yield check_system(group, w, cs | frozenset(extra), H, M)
                    except SystemViolation:
                        continue


def sm_systems(group: CoxeterGroup, w: Element) -> list:
    """SM_w: systems with M_S(w) covered by w in normal position."""
    return [S for S in iter_systems(group, w) if is_top_cover(S) and satisfies_normal_condition(S)]


def enumerate_SMw(group: CoxeterGroup, w: Element, interval: Optional[BruhatInterval] = None) -> list:
    """Distinct special matchings of [e, w] obtained from SM_w.

    Returns (system, matching) pairs, one representative system per distinct
    matching, ordered by the matching's partner table.
    """
    if interval is None:
        interval = build_interval(group, w)
    seen = {}
    for S in sm_systems(group, w):
        M = induced_matching(S, interval)
        seen.setdefault(M.partner, (S, M))
    return [seen[k] for k in sorted(seen)]


# Right and left systems --------------------------------------------------------

@dataclass(frozen=True)
class RightSystem:
    w: Element
    J: frozenset
    s: int
    t: int
    M_st: Matching

    @property
    def group(self) -> CoxeterGroup:
        return self.M_st.poset.group


@dataclass(frozen=True)
class LeftSystem(RightSystem):
    pass


def _right_inner(R: RightSystem, u: Element):
    G, st = R.group, {R.s, R.t}
    split = G.parabolic_split(u, R.J, "right")
    x = G.parabolic_split(split.quotient, st, "right")
    y = G.parabolic_split(split.parabolic, {R.s}, "left")
    return x.quotient, G.mul(x.parabolic, y.parabolic), y.quotient


def _left_inner(R: LeftSystem, u: Element):
    G, st = R.group, {R.s, R.t}
    split = G.parabolic_split(u, R.J, "left")
    x = G.parabolic_split(split.parabolic, {R.s}, "right")
    y = G.parabolic_split(split.quotient, st, "left")
    return x.quotient, G.mul(x.parabolic, y.parabolic), y.quotient


def _system_image(R: RightSystem, u: Element) -> Element:
    inner = _left_inner if isinstance(R, LeftSystem) else _right_inner
    a, b, c = inner(R, u)
    I0 = R.M_st.poset
    if b not in I0.index:
        raise NotInDomain(f"middle factor {format_word(b)} is not in [e, {format_word(I0.root)}]")
    return R.group.mul(a, R.M_st.image(b), c)


def right_system_matching(R: RightSystem, u: Element) -> Element:
    """M_R(u) = (u^J)^{s,t} . M_st((u^J)_{s,t} . _s(u_J)) . ^s(u_J).

    For a :class:`LeftSystem` the mirrored formula is used.
    """
    return _system_image(R, u)


left_system_matching = right_system_matching


def check_right_system(R: RightSystem) -> RightSystem:
    """Verify the axioms of a right (or, for LeftSystem, left) system."""
    left = isinstance(R, LeftSystem)
    err = InvalidLeftSystem if left else InvalidRightSystem
    tag = "L" if left else "R"
    G, w, J, s, t, M = R.group, R.w, frozenset(R.J), R.s, R.t, R.M_st
    I0 = M.poset
    st = {s, t}
    if not (s in J and t not in J and s != t):
        raise err(f"{tag}1", "need s in J and t outside J")
    if I0.root != G.w0(w, st):
        raise err(f"{tag}1", "M_st is not a matching of [e, w0(s,t)]")
    if I0.elements[M.partner[0]] != (s,):
        raise err(f"{tag}1", "M_st(e) != s")
    if (t,) in I0.index:
        want = G.lmul(s, (t,)) if left else G.rmul((t,), s)
        if M.image((t,)) != want:
            raise err(f"{tag}1", f"M_st(t) != {'st' if left else 'ts'}")
    if not is_special(M):
        raise err(f"{tag}1", "M_st is not special")

    for u in build_interval(G, w).elements:
        try:
            image = _system_image(R, u)
        except NotInDomain:
            raise err(f"{tag}2", f"formula undefined at {format_word(u)}") from None
        if not G.leq(image, w):
            raise err(f"{tag}2", f"image of {format_word(u)} is not below w")

    if left:
        qJ, pJ = G.left_quotient(w, J), G.left_parabolic(w, J)
        outer = G.left_quotient(qJ, st)
        side, other = "right", "left"
        tail = G.right_quotient(pJ, {s})
    else:
        qJ, pJ = G.right_quotient(w, J), G.right_parabolic(w, J)
        outer = G.right_quotient(qJ, st)
        side, other = "left", "right"
        tail = G.left_quotient(pJ, {s})

    for r in J:
        if r in qJ and not G.commutes(r, s):
            raise err(f"{tag}3", f"{r} in J lies below the quotient but does not commute with {s}")

    s_in, t_in = s in outer, t in outer
    if s_in and t_in:
        if s not in G.descents(I0.root, other) or M != multiplication_matching(I0, s, other):
            raise err(f"{tag}4", "M_st must be a multiplication matching by s")
    elif s_in and not commutes_with_multiplication(M, s, side):
        raise err(f"{tag}4", f"M_st does not commute with multiplication by {s}")
    elif t_in and not s_in and not commutes_with_multiplication(M, t, side):
        raise err(f"{tag}4", f"M_st does not commute with multiplication by {t}")

    if s in tail and not commutes_with_multiplication(M, s, other):
        raise err(f"{tag}5", f"M_st does not commute with multiplication by {s}")
    return R


def iter_right_left_systems(group: CoxeterGroup, w: Element) -> Iterator[RightSystem]:
    """All valid right and left systems for w."""
    gens = sorted(group.generators)
    for k in range(1, len(gens)):
        for J in itertools.combinations(gens, k):
            J = frozenset(J)
            for s in sorted(J):
                for t in gens:
                    if t in J:
                        continue
                    I0 = build_interval(group, group.w0(w, {s, t}))
                    for M in enumerate_special_matchings(I0):
                        if I0.elements[M.partner[0]] != (s,):
                            continue
                        for cls in (RightSystem, LeftSystem):
                            R = cls(w, J, s, t, M)
                            try:
                                yield check_right_system(R)
                            except (InvalidRightSystem, NotInDomain):
                                continue


# Commuting companion -----------------------------------------------------------

def find_commuting_multiplication_matching(S: System, interval: Optional[BruhatInterval] = None) -> tuple:
    """A multiplication matching N of w commuting with M_S and with N(w) != M_S(w).

    Returns ``(r, side)``: lambda_r with r a left descent of a when a != e in
    the canonical S-factorization of w, otherwise rho_r with r a right
    descent of c.  Raises :class:`DihedralInterval` when Supp(w) has at most
    two generators, whatever the system.
    """
    G = S.group
    if len(G.support(S.w)) <= 2:
        raise DihedralInterval(f"[e, {format_word(S.w)}] is a dihedral interval")
    a, b, c = canonical_factorization(S, S.w)
    if a:
        r, side = min(G.left_descents(a)), "left"
    elif c:
        r, side = min(G.right_descents(c)), "right"
    else:
        raise DihedralInterval(f"[e, {format_word(S.w)}] is a dihedral interval")
    if interval is None:
        interval = build_interval(G, S.w)
    M = induced_matching(S, interval)
    N = multiplication_matching(interval, r, side)
    top = interval.index[S.w]
    if M.partner[top] == N.partner[top]:
        raise AssertionError("N(w) == M(w)")
    if not matchings_commute(M, N):
        raise AssertionError("M and N do not commute")
    return r, side
