import json
from functools import lru_cache

import pytest

from specialmatch.errors import (
    DihedralInterval,
    InvalidRightSystem,
    NotAMatching,
    NotInDomain,
    PreconditionViolated,
    SystemViolation,
)
from specialmatch.poset import (
    build_interval,
    enumerate_matchings,
    enumerate_special_matchings,
    is_multiplication_matching,
    is_special,
    matching_from_pairs,
    multiplication_matching,
)
from specialmatch.systems import (
    LeftSystem,
    RightSystem,
    SFactorization,
    apply_system_matching,
    apply_via_triple,
    canonical_factorization,
    check_right_system,
    check_system,
    enumerate_SMw,
    find_commuting_multiplication_matching,
    in_domain,
    induced_matching,
    is_s_factorization,
    is_system,
    is_top_cover,
    iter_right_left_systems,
    iter_systems,
    matchings_commute,
    normalize_system,
    right_system_matching,
    satisfies_normal_condition,
    system_from_json,
)

from conftest import R_, S_, T_, group


def matching(I, *pairs):
    G = I.group
    return matching_from_pairs(I, [(I.index[G.element(x)], I.index[G.element(y)]) for x, y in pairs])


def single(G, w, s):
    I0 = build_interval(G, G.w0(w, {s}))
    return enumerate_matchings(I0)[0]


@pytest.fixture
def rst_w(RST):
    return RST.element((R_, T_, S_, T_, S_))


def rst_hybrid(RST, w, variant):
    I0 = build_interval(RST, RST.w0(w, {S_, T_}))
    s, t = S_, T_
    pairs = {
        "a": [((t,), (s, t)), ((t, s), (s, t, s)), ((t, s, t), (t, s, t, s))],
        "b": [((t,), (s, t)), ((t, s), (t, s, t)), ((s, t, s), (t, s, t, s))],
        "c": [((t,), (t, s)), ((s, t), (t, s, t)), ((s, t, s), (t, s, t, s))],
    }[variant]
    return matching(I0, ((), (s,)), *pairs)


# --- validation ----------------------------------------------------------------

def test_single_generator_systems_are_multiplications(A2):
    w = A2.element((0, 1, 0))
    I = build_interval(A2, w)
    M = single(A2, w, 0)
    S = check_system(A2, w, {0, 1}, {0}, M)
    assert S.kind == "both"
    assert induced_matching(S, I) == multiplication_matching(I, 0, "left")
    S = check_system(A2, w, {0}, {0}, M)
    assert induced_matching(S, I) == multiplication_matching(I, 0, "right")


@pytest.mark.parametrize("variant", ["a", "b", "c"])
def test_rst_hybrids_are_second_kind(RST, rst_w, variant):
    M = rst_hybrid(RST, rst_w, variant)
    assert is_special(M) and not is_multiplication_matching(M)
    S = check_system(RST, rst_w, RST.generators, {S_, T_}, M)
    assert S.kind == "second" and not S.first_kind
    assert S.K == {S_, R_}


def test_violations_name_the_axiom(A2, A3, B3, RST):
    w = A2.element((0, 1, 0))
    cases = [
        ((A2, w, {1}, {0}, single(A2, w, 0)), "Cs"),
        ((A2, w, {0, 1}, {0, 1}, multiplication_matching(build_interval(A2, w), 0, "left")), "S0"),
        ((A3, (0, 1, 2), {0, 1}, {1}, single(A3, (0, 1, 2), 1)), "S1"),
    ]
    wb = B3.element((0, 1, 0, 2))
    Ib = build_interval(B3, B3.w0(wb, {0, 1}))
    cases.append(((B3, wb, {1}, {0, 1}, matching_from_pairs(Ib, [(0, 2), (1, 3), (4, 5)])), "S2"))
    wr = RST.element((0, 1, 2, 1))
    Ir = build_interval(RST, RST.w0(wr, {1, 2}))
    cases.append(((RST, wr, {0, 1, 2}, {1, 2}, matching_from_pairs(Ir, [(0, 2), (1, 3), (4, 5)])), "S2"))
    for args, axiom in cases:
        with pytest.raises(SystemViolation) as info:
            check_system(*args)
        report = info.value.as_dict()
        assert report["axiom"] == axiom and report["detail"]
        assert not is_system(*args)


def test_bad_H_and_wrong_interval(A2, A3):
    w = A2.element((0, 1, 0))
    with pytest.raises(SystemViolation) as info:
        check_system(A3, (0, 1, 2), {0, 1, 2}, {0, 1, 2}, single(A3, (0, 1, 2), 0))
    assert info.value.axiom == "H"
    wrong = multiplication_matching(build_interval(A2, (0, 1)), 1, "right")
    with pytest.raises(NotAMatching):
        check_system(A2, w, {0}, {0}, wrong)


def test_system_json_round_trip(RST, rst_w):
    S = check_system(RST, rst_w, RST.generators, {S_, T_}, rst_hybrid(RST, rst_w, "a"))
    data = json.loads(json.dumps(S.to_json()))
    assert system_from_json(RST, data) == S


# --- factorization and evaluation ------------------------------------------------

def test_canonical_factorization_examples(RST, rst_w):
    S = check_system(RST, rst_w, RST.generators, {S_, T_}, rst_hybrid(RST, rst_w, "a"))
    assert tuple(canonical_factorization(S, ())) == ((), (), ())
    b = RST.element((S_, T_, S_))
    assert tuple(canonical_factorization(S, b)) == ((), b, ())
    assert tuple(canonical_factorization(S, rst_w)) == ((R_,), RST.element((T_, S_, T_, S_)), ())


def test_not_in_domain(A2):
    S = check_system(A2, (0,), {0}, {0}, single(A2, (0,), 0))
    assert not in_domain(S, (0, 1))
    with pytest.raises(NotInDomain):
        canonical_factorization(S, (0, 1))


def test_apply_examples(A2, RST, rst_w):
    w = A2.element((0, 1, 0))
    S = check_system(A2, w, {0, 1}, {0}, single(A2, w, 0))
    assert apply_system_matching(S, ()) == (0,)
    assert apply_system_matching(S, (1, 0)) == w
    M = rst_hybrid(RST, rst_w, "a")
    S = check_system(RST, rst_w, RST.generators, {S_, T_}, M)
    for b in M.poset.elements:
        assert apply_system_matching(S, b) == M.image(b)


def test_apply_via_triple_examples(RST, rst_w):
    S = check_system(RST, rst_w, RST.generators, {S_, T_}, rst_hybrid(RST, rst_w, "a"))
    f = canonical_factorization(S, rst_w)
    assert apply_via_triple(S, f, *f) == apply_system_matching(S, rst_w)
    for b1 in build_interval(RST, f.b).elements:
        assert apply_via_triple(S, f, (), b1, ()) == S.M.image(b1)
    with pytest.raises(PreconditionViolated):
        apply_via_triple(S, f, (T_,), (), ())  # t is not below a = r
    with pytest.raises(PreconditionViolated):
        apply_via_triple(S, SFactorization((), rst_w, ()), (), (), ())


def test_s_factorization_predicate(RST, rst_w):
    S = check_system(RST, rst_w, RST.generators, {S_, T_}, rst_hybrid(RST, rst_w, "a"))
    assert is_s_factorization(S, rst_w, (R_,), RST.element((T_, S_, T_, S_)), ())
    assert not is_s_factorization(S, rst_w, (), rst_w, ())
    assert not is_s_factorization(S, rst_w, (R_,), (T_, S_, T_), (S_,))


# --- normalization and enumeration ----------------------------------------------------

def test_normalize_examples(A2, RST, rst_w):
    w = A2.element((0, 1, 0))
    S = check_system(A2, w, {0}, {0}, single(A2, w, 0))
    assert normalize_system(S) is S
    S = check_system(RST, rst_w, RST.generators, {S_, T_}, rst_hybrid(RST, rst_w, "a"))
    assert normalize_system(S) is S  # M(t) = st with t in J
    S = check_system(RST, rst_w, RST.generators, {S_, T_}, rst_hybrid(RST, rst_w, "c"))
    N = normalize_system(S)
    assert N.J == {R_, S_} and satisfies_normal_condition(N)
    for u in build_interval(RST, rst_w).elements:
        assert apply_system_matching(N, u) == apply_system_matching(S, u)


def test_enumerate_examples(A2, I25):
    assert len(enumerate_SMw(A2, (0,))) == 1
    w = A2.element((0, 1, 0))
    I = build_interval(A2, w)
    assert {M.partner for _, M in enumerate_SMw(A2, w)} == {M.partner for M in enumerate_special_matchings(I)}
    w = I25.element((1, 0, 1, 0))
    I = build_interval(I25, w)
    found = enumerate_SMw(I25, w)
    assert {M.partner for _, M in found} == {M.partner for M in enumerate_special_matchings(I)}
    assert len(found) == 8
    assert sum(not is_multiplication_matching(M) for _, M in found) == 6


# --- right and left systems ------------------------------------------------------------

def test_right_system_example(A2):
    w = A2.element((0, 1, 0))
    I = build_interval(A2, w)
    rho0 = multiplication_matching(I, 0, "right")
    R = check_right_system(RightSystem(w, frozenset({0}), 0, 1, rho0))
    assert right_system_matching(R, ()) == (0,)
    assert right_system_matching(R, (1,)) == (1, 0)
    for u in I.elements:
        assert right_system_matching(R, u) == rho0.image(u)
    with pytest.raises(InvalidRightSystem) as info:
        check_right_system(RightSystem(w, frozenset({1}), 0, 1, rho0))
    assert info.value.axiom == "R1"


def test_right_and_left_systems_cover_all_special_matchings():
    for name in ["A2", "I2(5)", "A3"]:
        G = group(name)
        for w in G.elements_up_to(6):
            I = build_interval(G, w)
            want = {M.partner for M in enumerate_special_matchings(I)}
            got = set()
            for R in iter_right_left_systems(G, w):
                got.add(tuple(I.index[right_system_matching(R, u)] for u in I.elements))
            assert got == want, (name, w)


def test_left_system_is_mirror_of_right_system(A3):
    # a left system for w acts as the inverse-conjugate of a right system for w^-1
    checked = 0
    for w in A3.elements_up_to(5):
        I = build_interval(A3, w)
        for R in iter_right_left_systems(A3, w):
            if not isinstance(R, LeftSystem):
                continue
            I0 = R.M_st.poset
            mirrored = build_interval(A3, A3.inverse(I0.root))
            inv_M = matching_from_pairs(mirrored, [
                (mirrored.index[A3.inverse(I0.elements[i])], mirrored.index[A3.inverse(I0.elements[j])])
                for i, j in R.M_st.pairs()])
            mirror = RightSystem(A3.inverse(w), R.J, R.s, R.t, inv_M)
            for u in I.elements:
                want = A3.inverse(right_system_matching(mirror, A3.inverse(u)))
                assert right_system_matching(R, u) == want
            checked += 1
    assert checked > 0


# --- commuting companion -------------------------------------------------------------------

def test_commuting_companion_examples(A2, A3):
    w = (0, 1, 2)
    I = build_interval(A3, w)
    for S, M in enumerate_SMw(A3, w, I):
        r, side = find_commuting_multiplication_matching(S, I)
        a, _, c = canonical_factorization(S, w)
        if a:
            assert (r, side) == (min(A3.left_descents(a)), "left")
        N = multiplication_matching(I, r, side)
        assert matchings_commute(M, N) and N.image(w) != M.image(w)
    w = A2.element((0, 1, 0))
    for S, _ in enumerate_SMw(A2, w):
        with pytest.raises(DihedralInterval):
            find_commuting_multiplication_matching(S)


# --- properties over every valid system -------------------------------------------------------

@lru_cache(maxsize=None)
def property_systems():
    out = []
    for name in ["A3", "B3", "RST"]:
        G = group(name)
        for w in G.elements_up_to(5):
            # the domain is an order ideal containing [e, w]; sample it up to l(w) + 1
            nearby = G.elements_up_to(len(w) + 1)
            for S in iter_systems(G, w):
                out.append((G, S, tuple(u for u in nearby if in_domain(S, u))))
    return out


def test_domain_contains_the_interval():
    for G, S, domain in property_systems():
        assert set(build_interval(G, S.w).elements) <= set(domain)


def test_c_part_dominates_the_k_quotient():
    checked = 0
    for G, S, domain in property_systems():
        if not S.first_kind:
            continue
        for u in domain:
            c = canonical_factorization(S, u).c
            x = G.left_quotient(G.left_quotient(u, S.K), S.H)
            assert G.leq(x, c)
            assert (S.s in G.support(c)) == (S.s in G.support(x))
            checked += 1
    assert checked > 1000


def test_a_times_moved_b_lies_in_quotient_times_s():
    for G, S, domain in property_systems():
        if not S.first_kind:
            continue
        for u in domain:
            a, b, _ = canonical_factorization(S, u)
            x = G.mul(a, S.M.image(b))
            assert not G.right_descents(x) & S.J or not G.right_descents(G.rmul(x, S.s)) & S.J


def test_system_matching_is_a_stable_involution():
    checked = 0
    for G, S, domain in property_systems():
        for u in domain:
            f = canonical_factorization(S, u)
            if not is_s_factorization(S, u, *f):
                continue  # see test_domain_point_without_s_factorization
            checked += 1
            v = apply_system_matching(S, u)
            assert in_domain(S, v)
            g = canonical_factorization(S, v)
            assert (g.a, g.b, g.c) == (f.a, S.M.image(f.b), f.c)
            assert apply_system_matching(S, v) == u
            assert abs(len(v) - len(u)) == 1
            assert G.leq(u, v) or G.leq(v, u)
            assert (len(v) > len(u)) == (len(S.M.image(f.b)) > len(f.b))
    assert checked > 10000


def test_domain_point_without_s_factorization(B3):
    # u passes the membership test, but its canonical triple is not an
    # S-factorization: c = 2*1 carries the generator 1 of H while M does not
    # commute with right multiplication by 1.  M_S then leaves the domain.
    w = B3.element((0, 1, 0))
    I0 = build_interval(B3, w)
    M = matching(I0, ((), (1,)), ((0,), (1, 0)), ((0, 1), (0, 1, 0)))
    S = check_system(B3, w, {1, 2}, {0, 1}, M)
    assert S.kind == "first" and is_top_cover(S)
    u = B3.element((0, 2, 1))
    assert in_domain(S, u)
    f = canonical_factorization(S, u)
    assert tuple(f) == ((), (0,), B3.element((2, 1)))
    assert not is_s_factorization(S, u, *f)
    v = apply_system_matching(S, u)
    assert v == B3.element((1, 0, 2, 1))
    assert B3.w0(v, S.H) == B3.element((1, 0, 1))
    assert not in_domain(S, v)


def test_normalization_keeps_the_matching():
    checked = 0
    for G, S, _ in property_systems():
        if len(S.H) != 2:
            continue
        N = normalize_system(S)
        assert satisfies_normal_condition(N)
        for u in build_interval(G, S.w).elements:
            assert apply_system_matching(N, u) == apply_system_matching(S, u)
        checked += 1
    assert checked > 0


def test_top_cover_systems_induce_special_matchings():
    for G, S, _ in property_systems():
        if is_top_cover(S):
            I = build_interval(G, S.w)
            assert is_special(induced_matching(S, I))
