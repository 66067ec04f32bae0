import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modadequacy.adequacy import (
    PreconditionError,
    adequacy_report,
    algebra_span_rank,
    commutant_dimension,
    corollary_strong_holds,
    coset_obstruction,
    fermat_prime,
    is_absolutely_irreducible,
    is_weakly_adequate,
    q2_screen,
    q2_screen_group,
)
from modadequacy.catalog import (
    all_cases,
    burnside_cases,
    cyclic_character,
    p_solvable,
    perm_group,
    q8_2dim,
    s3_2dim,
    sl2_3,
    tensor_instances,
)
from modadequacy.constructions import build_example1
from modadequacy.fieldarith import field_create
from modadequacy.groups import count_p_regular, enumerate_group, trivial_subgroup
from modadequacy.modrep import direct_sum, image_order, one_dim_rep, regular_rep, restrict_rep, trivial_rep

S3_HGENS = [[[0, -1], [1, -1]], [[0, 1], [1, 0]]]


@pytest.fixture(scope="module")
def example1():
    return build_example1(5, 2, S3_HGENS, 3)


def _two_characters():
    C4 = perm_group(4, [[(0, 1, 2, 3)]], "C4")
    F = field_create(5)
    return direct_sum(one_dim_rep(C4, F, [2]), one_dim_rep(C4, F, [3]))


def test_span_rank_examples():
    V = sl2_3().rep
    assert algebra_span_rank(V, lambda i: i == 0) == 1
    assert algebra_span_rank(V) == 4
    assert algebra_span_rank(_two_characters()) == 2


def test_absolute_irreducibility_examples():
    C4 = perm_group(4, [[(0, 1, 2, 3)]], "C4")
    assert is_absolutely_irreducible(one_dim_rep(C4, field_create(5), [2]))
    V = sl2_3().rep
    assert is_absolutely_irreducible(V)
    assert not is_absolutely_irreducible(direct_sum(V, V))


def test_commutant_examples():
    G = perm_group(3, [[(0, 1, 2)]], "C3")
    one = trivial_subgroup(G)
    assert commutant_dimension(trivial_rep(one, field_create(7), 3)) == 9
    assert commutant_dimension(sl2_3().rep) == 1
    assert commutant_dimension(_two_characters()) == 2


def test_commutant_agrees_with_span_on_catalog():
    for case in all_cases():
        V = case.rep
        assert (commutant_dimension(V) == 1) == (algebra_span_rank(V) == V.dim**2), case.name
    # reducible modules too
    V = sl2_3().rep
    for V in [_two_characters(), direct_sum(V, V)]:
        assert commutant_dimension(V) > 1 and algebra_span_rank(V) < V.dim**2


def test_non_split_field_is_not_absolutely_irreducible():
    # C3 acting through a rotation of order 3 over F_2 is irreducible but not absolutely
    G = perm_group(3, [[(0, 1, 2)]], "C3")
    F = field_create(2)
    from modadequacy.linalg import Matrix
    from modadequacy.modrep import rep_from_generator_images

    V = rep_from_generator_images(G, [Matrix(F, [[0, 1], [1, 1]])])
    assert commutant_dimension(V) == 2 and not is_absolutely_irreducible(V)


def test_weak_adequacy_examples(example1):
    for case in burnside_cases():
        assert case.group.order % case.p
        wa = is_weakly_adequate(case.rep, case.p)
        assert wa.adequate and wa.rank == case.dim**2
    wa = is_weakly_adequate(example1.rep, 3)
    assert not wa.adequate and wa.rank < 36
    wa = is_weakly_adequate(sl2_3().rep, 3)
    assert wa.adequate and wa.rank == 4


def test_weak_adequacy_preconditions():
    with pytest.raises(PreconditionError):
        is_weakly_adequate(sl2_3().rep, 5)
    V = sl2_3().rep
    with pytest.raises(PreconditionError):
        is_weakly_adequate(direct_sum(V, V), 3)


def test_span_monotone_under_filters():
    for case in all_cases():
        V, p = case.rep, case.p
        G = V.group
        reg = algebra_span_rank(V, lambda i: G.is_p_regular(i, p))
        gens_only = algebra_span_rank(V, lambda i: i == 0 or i in G.gen_indices)
        assert reg <= algebra_span_rank(V) and gens_only <= algebra_span_rank(V)


def test_coset_obstruction_examples(example1):
    S3 = perm_group(3, [[(0, 1)], [(0, 1, 2)]], "S3")
    C2 = enumerate_group(S3.domain, [S3.domain.from_cycles((0, 1))], name="C2")
    assert coset_obstruction(S3, C2, 5) == []
    obs = coset_obstruction(example1.group, example1.A, 3)
    assert len(obs) == 2
    # the obstructed cosets lie over the two elements of order 3 in H
    G, D = example1.group, example1.group.domain
    H = example1.H
    tops = sorted(H.element_order(H.index[G.elements[x][1]]) for x in obs)
    assert tops == [3, 3]


def test_obstruction_forces_failure_of_weak_adequacy(example1):
    # an obstructed coset means the block pattern misses a block position
    assert coset_obstruction(example1.group, example1.A, 3)
    assert not is_weakly_adequate(example1.rep, 3)


def test_q2_examples():
    assert q2_screen(3_290_625, 2048)
    assert not q2_screen(4, 2)
    S3 = perm_group(3, [[(0, 1)], [(0, 1, 2)]], "S3")
    assert q2_screen(count_p_regular(S3, 3), 6)
    with pytest.raises(ValueError):
        q2_screen(-1, 2)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**7), st.integers(0, 4000))
def test_q2_is_strict_square_comparison(count, dim):
    assert q2_screen(count, dim) == (count < dim * dim)


def test_q2_flag_implies_not_weakly_adequate(example1):
    for case in all_cases():
        if q2_screen_group(case.group, case.p, case.dim):
            assert not is_weakly_adequate(case.rep, case.p)
    assert not q2_screen_group(example1.group, 3, 6)  # 150 - 50 = 100 >= 36: the screen is silent here


def test_report_p_prime_group():
    case = q8_2dim(5)
    r = adequacy_report(case.rep, 5)
    assert r.verdict == "adequate"
    assert (r.c1, r.c2, r.c3, r.c4) == (True, True, True, True)


def test_report_sl2_3():
    r = adequacy_report(sl2_3().rep, 3)
    assert (r.c1, r.c2, r.c4) == (False, True, True)
    assert r.h1_trivial_dim == r.h1_trivial_oracle == 1
    assert r.verdict == "not adequate"
    js = r.to_json()
    assert js["conditions"]["c1"] is False and js["ranks"]["target"] == 4


def test_report_example1(example1):
    r = adequacy_report(example1.rep, 3, inducing_subgroup=example1.A)
    assert r.c2 is False and r.c4 is False and r.verdict == "not adequate"
    assert len(r.witnesses) == 2


def test_report_reducible():
    r = adequacy_report(_two_characters(), 5)
    assert r.verdict == "not absolutely irreducible" and r.c1 is None


def test_report_budget_skip():
    r = adequacy_report(sl2_3().rep, 3, cond3_budget=10)
    assert r.c3 is None and r.skips
    assert r.verdict == "not adequate"  # c1 already fails


def test_tensor_lemma_instances():
    instances = tensor_instances()
    assert len(instances) >= 3
    for t in instances:
        assert t.N.order % t.p
        assert is_absolutely_irreducible(restrict_rep(t.U, t.N))
        assert all(m.is_identity() for m in restrict_rep(t.W, t.N).images)
        if is_absolutely_irreducible(t.W) and is_weakly_adequate(t.W, t.p):
            assert is_weakly_adequate(t.UW, t.p), t.name


def test_tensor_lemma_hypothesis_is_exercised():
    assert sum(bool(is_weakly_adequate(t.W, t.p)) for t in tensor_instances()) >= 3


def test_fermat_primes():
    assert [p for p in range(2, 300) if fermat_prime(p)] == [3, 5, 17, 257]


def test_corollary_strong_sweep():
    for case in all_cases():
        if p_solvable(case) and is_absolutely_irreducible(case.rep):
            assert corollary_strong_holds(case.dim, case.p, image_order(case.rep)), case.name
    # a violation would be a 2-dim image of order divisible by 5 in characteristic 5
    assert not corollary_strong_holds(2, 5, 10)
    assert corollary_strong_holds(2, 3, 24)
    assert corollary_strong_holds(1, 2, 3)


def test_regular_rep_not_irreducible():
    c = cyclic_character(3, 2)
    assert not is_absolutely_irreducible(regular_rep(c.group, c.rep.field))


def test_s3_modular_natural_module():
    # the reflection module of S3 stays irreducible away from 3 and becomes reducible in characteristic 3
    assert is_absolutely_irreducible(s3_2dim(5).rep)
    assert not is_absolutely_irreducible(s3_2dim(3).rep)
