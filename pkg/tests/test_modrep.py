import random

import numpy as np
import pytest

from modadequacy.catalog import all_cases, cohomology_groups, perm_group, q8_2dim, s3_2dim, sl2_3
from modadequacy.fieldarith import FieldError, field_create
from modadequacy.groups import GroupError, enumerate_group, sylow_subgroup, trivial_subgroup
from modadequacy.linalg import Matrix, rank
from modadequacy.modrep import (
    RepresentationError,
    adjoint_rep,
    direct_sum,
    dual_rep,
    extend_scalars,
    fixed_subspace,
    frobenius_induced_character,
    image_order,
    induce,
    kernel_size,
    one_dim_rep,
    regular_rep,
    rep_from_generator_images,
    restrict_rep,
    reynolds_projector,
    tensor_rep,
    trivial_rep,
)

F3, F5 = field_create(3), field_create(5)


@pytest.fixture(scope="module")
def c2():
    return perm_group(2, [[(0, 1)]], "C2")


def test_generator_image_examples(c2):
    G = enumerate_group(c2.domain, [], name="1")
    V = rep_from_generator_images(G, [], F5, 3)
    assert V.dim == 3 and V.image(0).is_identity()
    V = rep_from_generator_images(c2, [Matrix(F5, [[4]])])
    assert V.character() == [1, 4]
    with pytest.raises(RepresentationError):
        rep_from_generator_images(c2, [Matrix(F5, [[2]])])


def test_generator_image_errors(c2):
    with pytest.raises(RepresentationError):
        rep_from_generator_images(c2, [])
    S3 = perm_group(3, [[(0, 1)], [(0, 1, 2)]], "S3")
    with pytest.raises(FieldError):
        rep_from_generator_images(S3, [Matrix(F5, [[4]]), Matrix(F3, [[1]])])
    # a non-homomorphism on S3: both generators sent to -1
    with pytest.raises(RepresentationError):
        rep_from_generator_images(S3, [Matrix(F5, [[4]]), Matrix(F5, [[4]])])


def test_homomorphism_on_random_pairs():
    rng = random.Random(11)
    for case in all_cases():
        G, V = case.group, case.rep
        for _ in range(30):
            i, j = rng.randrange(G.order), rng.randrange(G.order)
            assert V.image(G.mul(i, j)) == V.image(i) @ V.image(j)


def test_induce_examples(c2):
    K = trivial_subgroup(c2)
    R = induce(c2, K, trivial_rep(K, F3))
    assert R.dim == 2 and R.image(1).a.tolist() == [[0, 1], [1, 0]]
    W = one_dim_rep(c2, F3, [2])
    same = induce(c2, c2, W)
    assert same.dim == 1 and same.character() == W.character()
    with pytest.raises(RepresentationError):
        induce(c2, c2, trivial_rep(K, F3))


def test_induce_frobenius_formula():
    for G, _ in cohomology_groups()[:15]:
        for p in (2, 3, 5):
            F = field_create(p)
            K = sylow_subgroup(G, p) if G.order % p == 0 else trivial_subgroup(G)
            K = enumerate_group(G.domain, K.gens, name=K.name)
            W = trivial_rep(K, F)
            V = induce(G, K, W)
            assert V.dim == G.order // K.order
            assert V.character() == frobenius_induced_character(G, K, W)


def test_induce_nontrivial_character():
    G = perm_group(4, [[(0, 1, 2, 3)], [(0, 2)]], "D8")
    K = enumerate_group(G.domain, [G.domain.from_cycles((0, 1, 2, 3))], name="C4")
    F = field_create(5)
    i4 = F.root_of_unity(4)
    W = one_dim_rep(K, F, [i4])
    V = induce(G, K, W)
    assert V.dim == 2
    assert V.character() == frobenius_induced_character(G, K, W)


def test_tensor_examples():
    c = s3_2dim(5)
    G, V = c.group, c.rep
    F = V.field
    one = trivial_rep(G, F)
    assert tensor_rep(V, one).character() == V.character()
    det = lambda m: F.sub(F.mul(int(m.a[0, 0]), int(m.a[1, 1])), F.mul(int(m.a[0, 1]), int(m.a[1, 0])))
    sign = rep_from_generator_images(G, [Matrix(F, [[det(m)]]) for m in V.gen_images])
    sq = tensor_rep(sign, sign)
    assert sq.dim == 1 and all(t == 1 for t in sq.character())
    three = direct_sum(one, V)
    T = tensor_rep(V, three)
    assert T.dim == 6
    assert T.character() == [F.mul(a, b) for a, b in zip(V.character(), three.character())]


def test_tensor_rejects_mismatch():
    a, b = s3_2dim(5), s3_2dim(7)
    with pytest.raises(RepresentationError):
        tensor_rep(a.rep, b.rep)


def test_dual_and_adjoint():
    c2 = perm_group(2, [[(0, 1)]], "C2")
    assert dual_rep(trivial_rep(c2, F5)).character() == [1, 1]
    C4 = perm_group(4, [[(0, 1, 2, 3)]], "C4")
    chi = one_dim_rep(C4, F5, [2])
    inv = dual_rep(chi).character()
    assert [F5.mul(a, b) for a, b in zip(chi.character(), inv)] == [1] * 4
    for case in [sl2_3(), q8_2dim(5), s3_2dim(7)]:
        G, V = case.group, case.rep
        A = adjoint_rep(V)
        chi = V.character()
        assert A.dim == V.dim**2
        assert A.character() == [V.field.mul(chi[i], chi[G.inverse(i)]) for i in range(G.order)]


def test_restrict_examples():
    c = sl2_3()
    G, V = c.group, c.rep
    assert restrict_rep(V, G).character() == V.character()
    T = restrict_rep(V, trivial_subgroup(G))
    assert T.group.order == 1 and T.image(0).is_identity()
    Q = sylow_subgroup(G, 2)
    R = restrict_rep(V, Q)
    assert R.dim == 2 and R.group.order == 8
    other = perm_group(3, [[(0, 1, 2)]], "C3")
    with pytest.raises(GroupError):
        restrict_rep(V, other)


def test_fixed_subspace_examples(c2):
    R = regular_rep(c2, F3)
    assert len(fixed_subspace(R, trivial_subgroup(c2))) == 2
    (v,) = fixed_subspace(R, c2)
    assert v.tolist() == [1, 1]
    assert fixed_subspace(one_dim_rep(c2, F3, [2]), c2) == []


def test_fixed_subspace_vectors_are_fixed():
    for case in all_cases()[:20]:
        G, V = case.group, case.rep
        for v in fixed_subspace(V, G):
            for m in V.gen_images:
                assert np.array_equal(V.field.vmatmul(m.a, v[:, None])[:, 0], v)


def test_reynolds_examples(c2):
    R = regular_rep(c2, F3)
    P = reynolds_projector(R, trivial_subgroup(c2))
    assert P.is_identity()
    P = reynolds_projector(R, c2)
    assert P @ P == P and rank(P) == 1
    assert P.a.tolist() == [[2, 2], [2, 2]]
    assert not reynolds_projector(one_dim_rep(c2, F3, [2]), c2).a.any()
    with pytest.raises(RepresentationError):
        reynolds_projector(regular_rep(c2, field_create(2)), c2)


def test_reynolds_image_is_fixed_space():
    G = perm_group(4, [[(0, 1, 2)], [(0, 1), (2, 3)]], "A4")
    V = regular_rep(G, F5)
    P = reynolds_projector(V, G)
    assert P @ P == P
    assert rank(P) == len(fixed_subspace(V, G)) == 1


def test_character_examples():
    G = perm_group(3, [[(0, 1)], [(0, 1, 2)]], "S3")
    assert trivial_rep(G, F5).character() == [1] * 6
    R = regular_rep(G, F5)
    chi = R.character()
    assert chi[0] == 6 % 5 and all(t == 0 for t in chi[1:])
    assert kernel_size(R) == 1 and image_order(R) == 6


def test_extend_scalars():
    c = sl2_3()
    F9 = field_create(3, 2)
    V = extend_scalars(c.rep, F9)
    assert V.field == F9 and V.character() == c.rep.character()
    with pytest.raises(FieldError):
        extend_scalars(c.rep, field_create(5, 2))
