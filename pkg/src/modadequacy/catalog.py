"""A fixed catalog of small groups and modules used by the test suite, the CLI and the scripts.

Every entry is rebuilt from literal generator data, so catalog order and element
order are deterministic across runs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .fieldarith import GF, field_create, splitting_degree
from .groups import (
    FiniteGroup,
    MatrixDomain,
    Permutations,
    direct_product,
    enumerate_group,
    is_p_solvable,
    subgroup,
)
from .linalg import Matrix, kronecker
from .modrep import Representation, rep_from_generator_images


@dataclass
class Case:
    name: str
    p: int
    group: FiniteGroup
    rep: Representation

    @property
    def dim(self) -> int:
        return self.rep.dim


def int_matrix(F: GF, rows) -> np.ndarray:
    return np.array([[F.from_int(int(v)) for v in row] for row in rows], dtype=np.int64)


def matrix_group(F: GF, gens: list[np.ndarray], name: str) -> tuple[FiniteGroup, Representation]:
    """The group generated by ``gens`` inside GL_n(F) with its natural module."""
    n = gens[0].shape[0]
    D = MatrixDomain(F, n)
    G = enumerate_group(D, [D.from_array(a) for a in gens], name=name)
    V = rep_from_generator_images(G, [Matrix(F, a) for a in gens], name=f"{name}:natural")
    return G, V


def _case(F: GF, gens, name: str, p: int | None = None) -> Case:
    G, V = matrix_group(F, gens, name)
    return Case(name, F.p if p is None else p, G, V)


def _diag(F: GF, vals) -> np.ndarray:
    a = np.zeros((len(vals), len(vals)), dtype=np.int64)
    for i, v in enumerate(vals):
        a[i, i] = v
    return a


def _field_with_roots(p: int, n: int) -> GF:
    return field_create(p, splitting_degree(p, n))


# --------------------------------------------------------------------------
# p'-group cases


def cyclic_character(n: int, p: int) -> Case:
    F = _field_with_roots(p, n)
    return _case(F, [_diag(F, [F.root_of_unity(n)])], f"C{n}/GF({F.q})")


def dihedral_2dim(n: int, p: int) -> Case:
    """D_{2n} on diag(z, z^-1) and the swap, z a primitive n-th root of unity."""
    F = _field_with_roots(p, n)
    z = F.root_of_unity(n)
    r = _diag(F, [z, F.inv(z)])
    s = np.array([[0, 1], [1, 0]], dtype=np.int64)
    return _case(F, [r, s], f"D{2 * n}/GF({F.q})")


def s3_2dim(p: int) -> Case:
    F = field_create(p)
    return _case(F, [int_matrix(F, [[0, -1], [1, -1]]), int_matrix(F, [[0, 1], [1, 0]])], f"S3/GF({p})")


def _s4_reflection(perm: tuple[int, ...]) -> list[list[int]]:
    # action on v_i = e_i - e_3 (i < 3), v_3 = 0
    cols = []
    for i in range(3):
        col = [0, 0, 0]
        a, b = perm[i], perm[3]
        if a < 3:
            col[a] += 1
        if b < 3:
            col[b] -= 1
        cols.append(col)
    return [[cols[j][i] for j in range(3)] for i in range(3)]


def s4_3dim(p: int, twisted: bool = False) -> Case:
    F = field_create(p)
    gens = [(1, 2, 3, 0), (1, 0, 2, 3)]
    mats = []
    for g in gens:
        m = np.array(_s4_reflection(g))
        if twisted:
            sign = -1 if sum(1 for i, j in itertools.combinations(range(4), 2) if g[i] > g[j]) % 2 else 1
            m = sign * m
        mats.append(int_matrix(F, m))
    return _case(F, mats, f"S4{'x sgn' if twisted else ''}/GF({p})")


def a4_3dim(p: int) -> Case:
    F = field_create(p)
    gens = [(1, 2, 0, 3), (1, 0, 3, 2)]
    return _case(F, [int_matrix(F, _s4_reflection(g)) for g in gens], f"A4/GF({p})")


def d8_2dim(p: int) -> Case:
    F = field_create(p)
    return _case(F, [int_matrix(F, [[0, -1], [1, 0]]), int_matrix(F, [[1, 0], [0, -1]])], f"D8/GF({p})")


def _sum_of_two_squares(F: GF, target: int) -> tuple[int, int]:
    for a in range(F.p):
        for b in range(F.p):
            if (a * a + b * b - target) % F.p == 0:
                return a, b
    raise ValueError("no representation")  # pragma: no cover - always exists mod p


def q8_2dim(p: int) -> Case:
    """i = [[0,-1],[1,0]], j = [[a,b],[b,-a]] with a^2 + b^2 = -1."""
    F = field_create(p)
    a, b = _sum_of_two_squares(F, -1)
    return _case(F, [int_matrix(F, [[0, -1], [1, 0]]), int_matrix(F, [[a, b], [b, -a]])], f"Q8/GF({p})")


def burnside_cases() -> list[Case]:
    out = [
        cyclic_character(3, 2),
        cyclic_character(7, 2),
        cyclic_character(5, 2),
        cyclic_character(4, 5),
        cyclic_character(6, 7),
        cyclic_character(13, 3),
        dihedral_2dim(3, 5),
        dihedral_2dim(4, 3),
        dihedral_2dim(5, 3),
        dihedral_2dim(5, 11),
        dihedral_2dim(7, 3),
        dihedral_2dim(6, 5),
        s3_2dim(5),
        s3_2dim(7),
        s3_2dim(11),
        s4_3dim(5),
        s4_3dim(7),
        s4_3dim(5, twisted=True),
        a4_3dim(5),
        a4_3dim(7),
        q8_2dim(3),
        q8_2dim(5),
        q8_2dim(7),
    ]
    return out


# --------------------------------------------------------------------------
# p-solvable cases with p dividing |G|


def sl2_3() -> Case:
    F = field_create(3)
    return _case(F, [int_matrix(F, [[1, 1], [0, 1]]), int_matrix(F, [[0, -1], [1, 0]])], "SL2(3)")


def gl2_3() -> Case:
    F = field_create(3)
    gens = [int_matrix(F, [[1, 1], [0, 1]]), int_matrix(F, [[-1, 0], [0, 1]]), int_matrix(F, [[0, -1], [1, 0]])]
    return _case(F, gens, "GL2(3)")


def sl2_3_tensor_square() -> Case:
    """SL2(3) x SL2(3) acting on the tensor square of the natural module."""
    F = field_create(3)
    one = np.eye(2, dtype=np.int64)
    base = [int_matrix(F, [[1, 1], [0, 1]]), int_matrix(F, [[0, -1], [1, 0]])]
    gens = [kronecker(Matrix(F, g), Matrix(F, one)).a for g in base]
    gens += [kronecker(Matrix(F, one), Matrix(F, g)).a for g in base]
    return _case(F, gens, "SL2(3)(x)SL2(3)")


def monomial_wreath(n: int, p: int) -> Case:
    """C_n wr S_3 as monomial 3 x 3 matrices over a field with n-th roots of unity."""
    F = _field_with_roots(p, n)
    z = F.root_of_unity(n)
    d = _diag(F, [z, 1, 1])
    c = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=np.int64)
    t = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=np.int64)
    return _case(F, [d, c, t], f"C{n}wrS3/GF({F.q})")


def p_solvable_cases() -> list[Case]:
    return [sl2_3(), gl2_3(), sl2_3_tensor_square(), monomial_wreath(3, 2)]


# --------------------------------------------------------------------------
# tensor-lemma instances: G = N x H, U from N (p' order), W from H


@dataclass
class TensorInstance:
    name: str
    p: int
    G: FiniteGroup
    N: FiniteGroup
    U: Representation
    W: Representation
    UW: Representation


def _product_instance(name: str, n_case: Case, h_case: Case | None, p: int) -> TensorInstance:
    F = n_case.rep.field
    if h_case is None:
        Hd = MatrixDomain(F, 1)
        H = enumerate_group(Hd, [Hd.one], name="1")
        wgens = [Matrix.identity(F, 1)] * len(H.gens)
    else:
        if h_case.rep.field != F:
            raise ValueError("factors over different fields")
        H = h_case.group
        wgens = list(h_case.rep.gen_images)
    N = n_case.group
    G = direct_product(N, H, name=name)
    nu, nw = n_case.dim, (1 if h_case is None else h_case.dim)
    ones_u, ones_w = Matrix.identity(F, nu), Matrix.identity(F, nw)
    u_imgs = list(n_case.rep.gen_images) + [ones_u] * len(H.gens)
    w_imgs = [ones_w] * len(N.gens) + wgens
    U = rep_from_generator_images(G, u_imgs, name="U")
    W = rep_from_generator_images(G, w_imgs, name="W")
    UW = rep_from_generator_images(G, [kronecker(a, b) for a, b in zip(u_imgs, w_imgs)], name="U(x)W")
    Nsub = enumerate_group(G.domain, [(g, H.domain.one) for g in N.gens], name=N.name)
    return TensorInstance(name, p, G, Nsub, U, W, UW)


def _sl2_3_over_q8() -> TensorInstance:
    c = sl2_3()
    G, V = c.group, c.rep
    F = V.field
    q8 = [int_matrix(F, [[0, -1], [1, 0]]), int_matrix(F, [[1, 1], [1, -1]])]
    N = enumerate_group(G.domain, [G.domain.from_array(a) for a in q8], name="Q8")
    W = rep_from_generator_images(G, [Matrix.identity(F, 1)] * len(G.gens), name="W")
    UW = rep_from_generator_images(G, [kronecker(m, Matrix.identity(F, 1)) for m in V.gen_images], name="U(x)W")
    return TensorInstance("SL2(3) over Q8", 3, G, N, V, W, UW)


def tensor_instances() -> list[TensorInstance]:
    return [
        _product_instance("Q8 x SL2(3)", q8_2dim(3), sl2_3(), 3),
        _product_instance("D8 x SL2(3)", d8_2dim(3), sl2_3(), 3),
        _product_instance("Q8 x 1", q8_2dim(3), None, 3),
        _sl2_3_over_q8(),
    ]


# --------------------------------------------------------------------------
# groups for cohomology checks


def perm_group(n: int, cycle_gens: list[list[tuple[int, ...]]], name: str) -> FiniteGroup:
    D = Permutations(n)
    return enumerate_group(D, [D.from_cycles(*c) for c in cycle_gens], name=name)


def cohomology_groups() -> list[tuple[FiniteGroup, list[int]]]:
    """(group, primes to test) pairs; primes include divisors and a non-divisor."""
    g = perm_group
    groups = [
        (g(3, [[(0, 1, 2)]], "C3"), [3, 2]),
        (g(4, [[(0, 1, 2, 3)]], "C4"), [2, 3]),
        (g(6, [[(0, 1, 2, 3, 4, 5)]], "C6"), [2, 3, 5]),
        (g(9, [[(0, 1, 2, 3, 4, 5, 6, 7, 8)]], "C9"), [3]),
        (g(4, [[(0, 1)], [(2, 3)]], "C2xC2"), [2, 3]),
        (g(6, [[(0, 1, 2)], [(3, 4, 5)]], "C3xC3"), [3, 2]),
        (g(6, [[(0, 1, 2, 3)], [(4, 5)]], "C4xC2"), [2]),
        (g(3, [[(0, 1, 2)], [(0, 1)]], "S3"), [2, 3, 5]),
        (g(4, [[(0, 1, 2, 3)], [(0, 2)]], "D8"), [2, 3]),
        (g(5, [[(0, 1, 2, 3, 4)], [(1, 4), (2, 3)]], "D10"), [2, 5]),
        (g(4, [[(0, 1, 2)], [(0, 1), (2, 3)]], "A4"), [2, 3]),
        (g(4, [[(0, 1, 2, 3)], [(0, 1)]], "S4"), [2, 3]),
        (g(5, [[(0, 1, 2, 3, 4)], [(0, 1, 2)]], "A5"), [2, 3, 5]),
        (g(5, [[(0, 1, 2, 3, 4)], [(1, 2, 4, 3)]], "F20"), [2, 5]),
        (g(7, [[(0, 1, 2, 3, 4, 5, 6)], [(1, 2, 4), (3, 6, 5)]], "F21"), [3, 7]),
        (q8_2dim(3).group, [2]),
        (sl2_3().group, [2, 3]),
        (gl2_3().group, [2, 3]),
    ]
    return groups


def shapiro_pairs() -> list[tuple[FiniteGroup, FiniteGroup, int]]:
    """(G, K, p) with K a subgroup of G."""
    by_name = {G.name: G for G, _ in cohomology_groups()}

    def sub(G: FiniteGroup, n: int, pred: Callable[[int], bool], name: str) -> FiniteGroup:
        # subgroup generated by the first canonical elements satisfying pred
        gens: list[int] = []
        H = subgroup(G, [], name=name)
        for i in range(1, G.order):
            if G.elements[i] in H.index or not pred(i):
                continue
            gens.append(i)
            H = subgroup(G, gens, name=name)
            if H.order == n:
                return H
        raise ValueError(f"no subgroup of order {n} found in {G.name}")

    S3, A4, S4, D10, SL = by_name["S3"], by_name["A4"], by_name["S4"], by_name["D10"], by_name["SL2(3)"]
    return [
        (S3, sub(S3, 2, lambda i: S3.element_order(i) == 2, "C2"), 2),
        (S3, sub(S3, 3, lambda i: S3.element_order(i) == 3, "C3"), 3),
        (A4, sub(A4, 3, lambda i: A4.element_order(i) == 3, "C3"), 3),
        (A4, sub(A4, 4, lambda i: A4.element_order(i) == 2, "V4"), 2),
        (S4, sub(S4, 12, lambda i: S4.element_order(i) in (2, 3) and _even(S4, i), "A4"), 2),
        (D10, sub(D10, 5, lambda i: D10.element_order(i) == 5, "C5"), 5),
        (SL, sub(SL, 3, lambda i: SL.element_order(i) == 3, "C3"), 3),
    ]


def _even(G: FiniteGroup, i: int) -> bool:
    perm = G.elements[i]
    seen, parity = set(), 0
    for s in range(len(perm)):
        if s in seen:
            continue
        j, length = s, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        parity += length - 1
    return parity % 2 == 0


# --------------------------------------------------------------------------
# registry


def all_cases() -> list[Case]:
    """Every catalog module, p-solvable or not."""
    out = burnside_cases() + p_solvable_cases()
    for t in tensor_instances():
        out.append(Case(f"{t.name}:U(x)W", t.p, t.G, t.UW))
    return out


NAMED: dict[str, Callable[[], Case]] = {
    "SL2(3)": sl2_3,
    "GL2(3)": gl2_3,
    "SL2(3)(x)SL2(3)": sl2_3_tensor_square,
    "C3wrS3": lambda: monomial_wreath(3, 2),
    "S4": lambda: s4_3dim(5),
    "A4": lambda: a4_3dim(5),
    "Q8": lambda: q8_2dim(3),
    "S3": lambda: s3_2dim(5),
}


def named_case(name: str) -> Case:
    try:
        return NAMED[name]()
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(sorted(NAMED))}") from None


def p_solvable(case: Case) -> bool:
    return is_p_solvable(case.group, case.p)
