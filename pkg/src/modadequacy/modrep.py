"""Matrix representations of enumerated groups."""

from __future__ import annotations

import numpy as np

from .fieldarith import GF, FieldError
from .groups import FiniteGroup, GroupError, left_cosets
from .linalg import LinalgError, Matrix, block_diagonal, kronecker, nullspace

MATERIALIZE_LIMIT = 10_000


class RepresentationError(ValueError):
    pass


class Representation:
    """A homomorphism G -> GL_n(k), certified on every Cayley-graph edge.

    Images are materialized for groups up to ``MATERIALIZE_LIMIT`` elements and
    otherwise evaluated on demand from the BFS words.
    """

    def __init__(self, group: FiniteGroup, field: GF, dim: int, gen_images: list[Matrix], name: str = "V"):
        self.group = group
        self.field = field
        self.dim = dim
        self.gen_images = gen_images
        self.name = name
        self._images: list[Matrix] | None = None
        self._cache: dict[int, Matrix] = {}

    def __repr__(self) -> str:
        return f"Representation({self.name}, group={self.group.name}, dim={self.dim}, field={self.field})"

    def image(self, i: int) -> Matrix:
        if self._images is not None:
            return self._images[i]
        if i == 0:
            return Matrix.identity(self.field, self.dim)
        hit = self._cache.get(i)
        if hit is None:
            G = self.group
            hit = self.gen_images[int(G.gen_of[i])] @ self.image(int(G.parent[i]))
            if len(self._cache) < 100_000:
                self._cache[i] = hit
        return hit

    def __call__(self, g) -> Matrix:
        return self.image(self.group.index[g])

    @property
    def images(self) -> list[Matrix]:
        if self._images is None:
            self._images = [self.image(i) for i in range(self.group.order)]
        return self._images

    def character(self) -> list[int]:
        return [m.trace() for m in self.images]


def rep_from_generator_images(
    G: FiniteGroup, images: list[Matrix], field: GF | None = None, dim: int | None = None, name: str = "V"
) -> Representation:
    """Extend generator images along the BFS words and check every Cayley-graph edge."""
    if len(images) != len(G.gens):
        raise RepresentationError(f"{len(images)} images for {len(G.gens)} generators")
    if images:
        field = images[0].field
        dim = images[0].rows
    if field is None or dim is None:
        raise RepresentationError("field and dim are required when there are no generators")
    for m in images:
        if m.field != field:
            raise FieldError("generator images over different fields")
        if m.shape != (dim, dim):
            raise RepresentationError("generator images of different shapes")
        if m.rank() < dim:
            raise LinalgError("singular generator image")
    V = Representation(G, field, dim, list(images), name=name)
    materialize = G.order <= MATERIALIZE_LIMIT
    mats: list[Matrix] = [Matrix.identity(field, dim)]
    keys: list[bytes] = [mats[0].key()]
    parent, gen_of = G.parent, G.gen_of
    for j in range(1, G.order):
        m = images[int(gen_of[j])] @ mats[int(parent[j])]
        mats.append(m)
        keys.append(m.key())
    # every edge g -> s*g must agree with the tree value
    for k, s in enumerate(images):
        for i in range(G.order):
            j = G.index[G.domain.mul(G.gens[k], G.elements[i])]
            if (s @ mats[i]).key() != keys[j]:
                raise RepresentationError(
                    f"not a homomorphism: generator {k} times element {i} disagrees with element {j}"
                )
    if materialize:
        V._images = mats
    return V


def trivial_rep(G: FiniteGroup, field: GF, dim: int = 1) -> Representation:
    one = Matrix.identity(field, dim)
    return rep_from_generator_images(G, [one] * len(G.gens), field, dim, name="trivial")


def one_dim_rep(G: FiniteGroup, field: GF, values: list[int], name: str = "chi") -> Representation:
    return rep_from_generator_images(G, [Matrix(field, [[v]]) for v in values], field, 1, name=name)


def regular_rep(G: FiniteGroup, field: GF) -> Representation:
    from .groups import trivial_subgroup

    one = trivial_subgroup(G)
    return induce(G, one, trivial_rep(one, field))


def permutation_matrix(field: GF, perm) -> Matrix:
    n = len(perm)
    a = np.zeros((n, n), dtype=np.int64)
    for i, t in enumerate(perm):
        a[t, i] = 1
    return Matrix(field, a)


def induce(G: FiniteGroup, K: FiniteGroup, W: Representation) -> Representation:
    """Ind_K^G W with block (i, j) of g equal to W(g_i^-1 g g_j) when that lies in K."""
    if not K.is_subgroup_of(G):
        raise GroupError(f"{K.name} is not a subgroup of {G.name}")
    if W.group is not K:
        raise RepresentationError("W must be a representation of K")
    reps = left_cosets(G, K)
    D = G.domain
    rep_vals = [G.elements[r] for r in reps]
    rep_invs = [D.inv(x) for x in rep_vals]
    m, d = len(reps), W.dim
    F = W.field
    images = []
    for s in G.gens:
        a = np.zeros((m * d, m * d), dtype=np.int64)
        for j, gj in enumerate(rep_vals):
            sg = D.mul(s, gj)
            hits = 0
            for i, gi_inv in enumerate(rep_invs):
                k = D.mul(gi_inv, sg)
                if k in K.index:
                    a[i * d : (i + 1) * d, j * d : (j + 1) * d] = W.image(K.index[k]).a
                    hits += 1
            if hits != 1:  # pragma: no cover - guaranteed by the coset decomposition
                raise RepresentationError("coset bookkeeping failed")
        images.append(Matrix(F, a))
    return rep_from_generator_images(G, images, F, m * d, name=f"Ind({W.name})")


def frobenius_induced_character(G: FiniteGroup, K: FiniteGroup, W: Representation) -> list[int]:
    """Trace of Ind_K^G W at every g via sum_i tr W(g_i^-1 g g_i), independent of ``induce``."""
    F = W.field
    D = G.domain
    reps = [G.elements[r] for r in left_cosets(G, K)]
    chi = W.character()
    out = []
    for g in G.elements:
        t = 0
        for gi in reps:
            k = D.mul(D.mul(D.inv(gi), g), gi)
            if k in K.index:
                t = F.add(t, chi[K.index[k]])
        out.append(t)
    return out


def _check_same(U: Representation, W: Representation) -> None:
    if U.group is not W.group:
        raise RepresentationError("representations of different groups")
    if U.field != W.field:
        raise FieldError("representations over different fields")


def tensor_rep(U: Representation, W: Representation) -> Representation:
    _check_same(U, W)
    images = [kronecker(a, b) for a, b in zip(U.gen_images, W.gen_images)]
    return rep_from_generator_images(U.group, images, U.field, U.dim * W.dim, name=f"{U.name}(x){W.name}")


def direct_sum(U: Representation, W: Representation) -> Representation:
    _check_same(U, W)
    images = [block_diagonal(a, b) for a, b in zip(U.gen_images, W.gen_images)]
    return rep_from_generator_images(U.group, images, U.field, U.dim + W.dim, name=f"{U.name}+{W.name}")


def dual_rep(V: Representation) -> Representation:
    images = [m.inverse().T for m in V.gen_images]
    return rep_from_generator_images(V.group, images, V.field, V.dim, name=f"{V.name}*")


def adjoint_rep(V: Representation) -> Representation:
    return tensor_rep(V, dual_rep(V))


def restrict_rep(V: Representation, H: FiniteGroup) -> Representation:
    G = V.group
    if not H.is_subgroup_of(G):
        raise GroupError(f"{H.name} is not a subgroup of {G.name}")
    images = [V(h) for h in H.gens]
    return rep_from_generator_images(H, images, V.field, V.dim, name=f"{V.name}|{H.name}")


def extend_scalars(V: Representation, field: GF) -> Representation:
    """Re-read V over an extension of its prime field (prime-field entries only)."""
    if V.field.p != field.p:
        raise FieldError("characteristic mismatch")
    if V.field.s != 1:
        raise FieldError("only prime-field representations can be re-read")
    images = [Matrix(field, m.a) for m in V.gen_images]
    return rep_from_generator_images(V.group, images, field, V.dim, name=V.name)


def inflate(V: Representation, G: FiniteGroup, project) -> Representation:
    """Pull V back along a homomorphism given by ``project`` on G-values."""
    images = [V(project(g)) for g in G.gens]
    return rep_from_generator_images(G, images, V.field, V.dim, name=V.name)


def fixed_subspace(V: Representation, H: FiniteGroup) -> list[np.ndarray]:
    """Echelon basis of V^H: nullspace of the stacked V(s) - I over generators s of H."""
    G = V.group
    if not H.is_subgroup_of(G):
        raise GroupError(f"{H.name} is not a subgroup of {G.name}")
    if not H.gens:
        return [row for row in np.eye(V.dim, dtype=np.int64)]
    one = Matrix.identity(V.field, V.dim)
    stacked = np.concatenate([(V(h) - one).a for h in H.gens], axis=0)
    return nullspace(Matrix(V.field, stacked))


def reynolds_projector(V: Representation, N: FiniteGroup) -> Matrix:
    """|N|^-1 sum_{n in N} V(n); requires p not dividing |N|."""
    F = V.field
    if N.order % F.p == 0:
        raise RepresentationError(f"characteristic {F.p} divides |{N.name}| = {N.order}")
    if not N.is_subgroup_of(V.group):
        raise GroupError(f"{N.name} is not a subgroup of {V.group.name}")
    total = F.vsum(np.stack([V(n).a for n in N.elements]), axis=0)
    return Matrix(F, total).scale(F.inv(F.from_int(N.order)))


def submodule_rep(V: Representation, basis: list[np.ndarray], name: str | None = None) -> Representation:
    """Action of V on the span of ``basis`` (column vectors), which must be G-stable."""
    from .linalg import echelon, solve_left_combination

    F = V.field
    if not basis:
        raise RepresentationError("empty basis")
    rows, _ = echelon(F, np.array(basis, dtype=np.int64))
    if len(rows) != len(basis):
        raise RepresentationError("basis vectors are dependent")
    k = len(basis)
    images = []
    for m in V.gen_images:
        a = np.zeros((k, k), dtype=np.int64)
        for i, b in enumerate(rows):
            c = solve_left_combination(F, rows, F.vmatmul(m.a, b[:, None])[:, 0])
            if c is None:
                raise RepresentationError("subspace is not G-stable")
            a[:, i] = c
        images.append(Matrix(F, a))
    return rep_from_generator_images(V.group, images, F, k, name=name or f"{V.name}|sub")


def character(V: Representation) -> list[int]:
    return V.character()


def kernel_size(V: Representation) -> int:
    return sum(1 for m in V.images if m.is_identity())


def image_order(V: Representation) -> int:
    return len({m.key() for m in V.images})
