import dataclasses

import pytest

from modadequacy.adequacy import is_absolutely_irreducible, is_weakly_adequate
from modadequacy.catalog import perm_group
from modadequacy.constructions import (
    ConstructionError,
    NoWitness,
    a4_subgroup_psl2,
    build_example1,
    build_taylor_example,
    build_wreath_example,
    dihedral_subgroup_psl2,
    find_regular_orbit_character,
    is_core_free,
    make_certificate,
    psl2,
    psl2_family_scan,
    replay_certificate,
    scan_coset_witness,
    scan_sylow_coset,
    taylor_candidates,
    witness_listing,
)
from modadequacy.fieldarith import field_create
from modadequacy.groups import (
    GroupError,
    MatrixDomain,
    Permutations,
    enumerate_group,
    normal_closure,
    quotient_group,
    trivial_subgroup,
)
from modadequacy.linalg import Matrix
from modadequacy.modrep import rep_from_generator_images

S3_HGENS = [[[0, -1], [1, -1]], [[0, 1], [1, 0]]]


@pytest.fixture(scope="module")
def example1():
    return build_example1(5, 2, S3_HGENS, 3)


def _s3():
    D = Permutations(3)
    return enumerate_group(D, [D.from_cycles((0, 1, 2)), D.from_cycles((0, 1))], name="S3")


def _c2_with_character(p):
    L = enumerate_group(Permutations(2), [(1, 0)], name="C2")
    k = field_create(p)
    return L, rep_from_generator_images(L, [Matrix(k, [[k.neg(1)]])], name="W")


def test_example1_instance(example1):
    ex = example1
    assert ex.group.order == 150 and ex.A.order == 25 and ex.H.order == 6
    assert ex.rep.dim == 6 and ex.field.q == 81
    assert is_absolutely_irreducible(ex.rep)
    assert not is_weakly_adequate(ex.rep, 3)
    assert len(ex.obstructions) == 2
    assert replay_certificate(ex.certificate, ex.group.domain)


def test_example1_obstructions_match_enumeration(example1):
    G, A, H = example1.group, example1.A, example1.H
    brute = set()
    for i in range(G.order):
        coset = {G.mul(i, G.index[a]) for a in A.elements}
        if all(G.element_order(j) % 3 == 0 for j in coset):
            brute.add(min(coset))
    assert sorted(brute) == example1.obstructions
    for x in example1.obstructions:
        assert H.element_order(H.index[G.elements[x][1]]) % 3 == 0


def test_example1_r7():
    ex = build_example1(7, 2, S3_HGENS, 3)
    assert ex.group.order == 294 and ex.rep.dim == 6
    assert is_absolutely_irreducible(ex.rep) and not is_weakly_adequate(ex.rep, 3)
    assert len(ex.obstructions) == 2


def test_example1_preconditions():
    with pytest.raises(ConstructionError):
        build_example1(5, 2, S3_HGENS, 7)  # 7 does not divide 6
    with pytest.raises(ConstructionError):
        build_example1(5, 2, S3_HGENS, 5)  # r = p
    # C3 generated by an order-3 element is not generated by 3-regular elements
    with pytest.raises(ConstructionError):
        build_example1(7, 2, [[[0, -1], [1, -1]]], 3)


def test_regular_orbit_examples():
    F = field_create(5)
    D = MatrixDomain(F, 2)
    one = enumerate_group(D, [], name="1")
    c = find_regular_orbit_character(5, 2, one)
    assert c.character == (0, 1) and c.orbit_sizes == {1: 24}
    S3 = enumerate_group(D, [D.element(m) for m in S3_HGENS], name="S3")
    c = find_regular_orbit_character(5, 2, S3)
    assert c.character is not None and 6 in c.orbit_sizes
    assert sum(k * v for k, v in c.orbit_sizes.items()) == 24
    minus = enumerate_group(D, [D.element([[4, 0], [0, 4]])], name="<-I>")
    c = find_regular_orbit_character(5, 2, minus)
    assert c.orbit_sizes == {2: 12} and c.character == (0, 1)


def test_wreath_explicit():
    L, W = _c2_with_character(3)
    T = _s3()
    res = build_wreath_example(L, W, T, trivial_subgroup(T), 3)
    assert res.mode == "explicit" and res.m == 6
    assert res.group.order == 2**6 * 6 and res.rep.dim == 6
    assert res.faithful and res.absolutely_irreducible
    assert res.weakly_adequate is False
    assert replay_certificate(res.certificate, res.group.domain)


def test_wreath_transposition_subgroup_has_no_witness():
    # every coset of <(01)> in S3 contains a transposition, which is 3-regular
    L, W = _c2_with_character(3)
    T = _s3()
    C2 = enumerate_group(T.domain, [T.domain.from_cycles((0, 1))], name="C2")
    assert scan_coset_witness(T, C2, 3) is None
    with pytest.raises(NoWitness):
        build_wreath_example(L, W, T, C2, 3)


def test_wreath_refusals():
    L, W = _c2_with_character(3)
    T = _s3()
    with pytest.raises(ConstructionError):
        build_wreath_example(L, W, T, T, 3)
    A3 = enumerate_group(T.domain, [T.domain.from_cycles((0, 1, 2))], name="A3")
    assert not is_core_free(T, A3)
    with pytest.raises(ConstructionError):
        build_wreath_example(L, W, T, A3, 3)


def test_wreath_quotient_lifted_mode():
    L, W = _c2_with_character(3)
    T = _s3()
    res = build_wreath_example(L, W, T, trivial_subgroup(T), 3, cap=100)
    assert res.mode == "quotient-lifted" and res.group is None
    assert replay_certificate(res.certificate, T.domain)


def test_quotient_lift_soundness(example1):
    checks = [(example1.group, example1.A)]
    L, W = _c2_with_character(3)
    T = _s3()
    res = build_wreath_example(L, W, T, trivial_subgroup(T), 3)
    G = res.group
    base = normal_closure(G, [G.index[g] for g in G.gens if g[1] == T.domain.one], name="N")
    assert base.order == 2**6
    checks.append((G, base))
    for G, N in checks:
        Q = quotient_group(G, N)
        for i in range(G.order):
            image = Q.index[Q.domain.canon(i)]
            assert G.element_order(i) % Q.element_order(image) == 0


def test_psl2_dihedral_examples():
    for q, p in [(7, 3), (13, 3), (11, 5), (31, 5)]:
        T = psl2(q)
        D = dihedral_subgroup_psl2(T, p)
        assert D.order == 2 * p and D.order_profile() == {1: 1, 2: p, p: p - 1}
    with pytest.raises(ConstructionError):
        dihedral_subgroup_psl2(psl2(7), 5)


def test_a4_examples():
    A4 = a4_subgroup_psl2(psl2(5))
    assert A4.order == 12 and A4.order_profile() == {1: 1, 2: 3, 3: 8}
    assert a4_subgroup_psl2(psl2(13)).order == 12
    with pytest.raises((ConstructionError, GroupError)):
        a4_subgroup_psl2(psl2(3))


def test_scan_examples():
    S3 = perm_group(3, [[(0, 1)], [(0, 1, 2)]], "S3")
    C2 = enumerate_group(S3.domain, [S3.domain.from_cycles((0, 1))], name="C2")
    assert scan_coset_witness(S3, C2, 5) is None
    P, x = scan_sylow_coset(perm_group(5, [[(0, 1, 2, 3, 4)]], "C5"), 5)
    assert P.order == 5 and x is None
    P, x = scan_sylow_coset(S3, 3)
    # the two cosets of A3 are A3 itself and the three transpositions
    assert P.order == 3 and x is None


def test_scan_returns_least_witness():
    T = psl2(43)
    T1 = dihedral_subgroup_psl2(T, 3)
    x = scan_coset_witness(T, T1, 3)
    brute = None
    for i in range(T.order):
        coset = [T.mul(i, T.index[t]) for t in T1.elements]
        if all(T.element_order(j) % 3 == 0 for j in coset):
            cand = min(coset)
            brute = cand if brute is None else min(brute, cand)
    assert x is not None and x == brute


def test_parallel_scan_matches_serial():
    T = psl2(43)
    T1 = dihedral_subgroup_psl2(T, 3)
    serial = scan_coset_witness(T, T1, 3)
    assert serial is not None
    for threads, chunk in [(2, None), (3, 997), (4, 50)]:
        assert scan_coset_witness(T, T1, 3, threads=threads, chunk=chunk) == serial


def test_l2_137_a4_witness(l2_137, l2_137_a4):
    assert l2_137.order == 1_285_608
    assert l2_137_a4.order_profile() == {1: 1, 2: 3, 3: 8}
    x = scan_coset_witness(l2_137, l2_137_a4, 2)
    assert x is not None
    listing = witness_listing(l2_137, l2_137_a4, x)
    assert len(listing) == 12 and all(e["order"] % 2 == 0 for e in listing)
    cert = make_certificate(l2_137, l2_137_a4, x, 2, mode="quotient-lifted")
    assert replay_certificate(cert, l2_137.domain)


def test_certificate_tampering_detected(example1):
    cert = example1.certificate
    assert replay_certificate(cert, example1.group.domain)
    bad = dataclasses.replace(cert, member_orders=[1] + cert.member_orders[1:])
    assert not replay_certificate(bad, example1.group.domain)
    bad = dataclasses.replace(cert, witness=example1.group.domain.encode(example1.group.domain.one).hex())
    assert not replay_certificate(bad, example1.group.domain)
    bad = dataclasses.replace(cert, subgroup_elements=cert.subgroup_elements[1:])
    assert not replay_certificate(bad, example1.group.domain)


def test_taylor_candidates():
    assert taylor_candidates(3, 200)[:4] == [7, 13, 31, 43]
    assert all((q - 1) % 3 == 0 and (q - 1) % 9 for q in taylor_candidates(3, 200))


def test_taylor_odd_scan():
    res = build_taylor_example(3, 200)
    assert res["found"] and res["q"] == 43
    assert [s["q"] for s in res["scanned"]] == [7, 13, 31, 43]
    inst = res["instance"]
    assert inst["m"] == 39732 // 6 and inst["p_divides_m"] is False
    assert inst["h1_T1_trivial"] == {"cocycles": 0, "abelianization": 0}
    assert all(o % 3 == 0 for o in inst["witness_orders"])
    T = psl2(43)
    cert = inst["certificate"]
    from modadequacy.constructions import ObstructionCertificate

    assert replay_certificate(ObstructionCertificate(**cert), T.domain)


def test_taylor_exhaustion_reports():
    res = build_taylor_example(3, 40)
    assert not res["found"] and [s["q"] for s in res["scanned"]] == [7, 13, 31]
    res = build_taylor_example(2, 100)
    assert not res["found"] and "137" in res["reason"]


def test_psl2_family_scan_p2():
    res = psl2_family_scan(2, 40)
    assert res["found"] and res["q"] == 37
    assert [s["q"] for s in res["scanned"]] == [5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
    assert all(s["status"] == "no witness" for s in res["scanned"][:-1])
    from modadequacy.constructions import ObstructionCertificate

    cert = ObstructionCertificate(**res["certificate"])
    assert len(cert.member_orders) == 4 and replay_certificate(cert, psl2(37).domain)


def test_psl2_family_scan_exhaustion():
    res = psl2_family_scan(2, 31)
    assert not res["found"] and len(res["scanned"]) == 9
