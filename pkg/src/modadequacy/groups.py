"""Finite groups by explicit enumeration.

A group element is a plain hashable value whose multiplication is supplied by
a *domain* object (permutations, matrices, monomial matrices, semidirect and
wreath pairs, PSL2 classes, cosets of a normal subgroup).  ``FiniteGroup``
holds the full BFS-ordered element list plus the spanning-tree words used to
evaluate representations.

Every witness or representative chosen here is the least one in BFS order, so
all outputs are reproducible.
"""

from __future__ import annotations

import functools
import hashlib
import random
import struct
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Sequence

import numpy as np

from .fieldarith import GF, factorize, p_part

DEFAULT_CAP = 2_000_000
# groups at least this large are written to an active on-disk cache
CACHE_MIN_ORDER = 10_000
CACHE_MIN_CAP = 100_000
ENUMERATION_CACHE: dict = {}


class GroupError(ValueError):
    pass


class GroupTooLarge(RuntimeError):
    """Enumeration or search exceeded its resource cap."""


class SearchBudgetExceeded(RuntimeError):
    pass


# --------------------------------------------------------------------------
# element domains


class Domain:
    """Multiplication, inversion and canonical encoding for one element shape."""

    one: Hashable
    cacheable = True  # describe() determines the domain completely

    def mul(self, x, y):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def encode(self, x) -> bytes:
        raise NotImplementedError

    def decode(self, b: bytes):
        raise NotImplementedError

    def describe(self) -> str:
        return type(self).__name__

    def power(self, x, e: int):
        result, base = self.one, x
        if e < 0:
            base, e = self.inv(x), -e
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result


def _pack_ints(values: Iterable[int]) -> bytes:
    vals = list(values)
    return struct.pack(f"<{len(vals)}q", *vals)


def _unpack_ints(b: bytes) -> tuple[int, ...]:
    return struct.unpack(f"<{len(b) // 8}q", b)


class Permutations(Domain):
    """Permutations of {0..n-1} as image tuples; (x*y)(i) = x(y(i))."""

    def __init__(self, n: int):
        self.n = n
        self.one = tuple(range(n))

    def mul(self, x, y):
        return tuple(x[i] for i in y)

    def inv(self, x):
        out = [0] * self.n
        for i, xi in enumerate(x):
            out[xi] = i
        return tuple(out)

    def encode(self, x) -> bytes:
        return _pack_ints(x)

    def decode(self, b: bytes):
        return _unpack_ints(b)

    def describe(self) -> str:
        return f"Perm({self.n})"

    def from_cycles(self, *cycles: Sequence[int]):
        img = list(range(self.n))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a] = b
        return tuple(img)


class MatrixDomain(Domain):
    """Invertible n x n matrices over a field, as row-major tuples of encoded entries."""

    def __init__(self, field: GF, n: int):
        self.field = field
        self.n = n
        self.one = tuple(int(x) for x in np.eye(n, dtype=np.int64).reshape(-1))

    def array(self, x) -> np.ndarray:
        return np.array(x, dtype=np.int64).reshape(self.n, self.n)

    def element(self, rows) -> tuple:
        """Element from integer rows (ints mapped through Z -> F_p)."""
        return tuple(self.field.from_int(int(v)) for row in rows for v in row)

    def from_array(self, a) -> tuple:
        return tuple(int(v) for v in np.asarray(a).reshape(-1))

    def mul(self, x, y):
        return self.from_array(self.field.vmatmul(self.array(x), self.array(y)))

    def inv(self, x):
        from .linalg import Matrix

        return self.from_array(Matrix(self.field, self.array(x)).inverse().a)

    def encode(self, x) -> bytes:
        return _pack_ints(x)

    def decode(self, b: bytes):
        return _unpack_ints(b)

    def describe(self) -> str:
        return f"GL({self.n},{self.field.q})"


class MonomialDomain(Domain):
    """Monomial matrices (perm, scalars): column i sends e_i to scalars[i] * e_perm[i]."""

    def __init__(self, field: GF, n: int):
        self.field = field
        self.n = n
        self.one = (tuple(range(n)), (1,) * n)

    def mul(self, x, y):
        (pi, a), (sigma, b) = x, y
        F = self.field
        return (tuple(pi[s] for s in sigma), tuple(F.mul(a[s], bi) for s, bi in zip(sigma, b)))

    def inv(self, x):
        pi, a = x
        F = self.field
        perm = [0] * self.n
        scal = [0] * self.n
        for i, (t, c) in enumerate(zip(pi, a)):
            perm[t] = i
            scal[t] = F.inv(c)
        return (tuple(perm), tuple(scal))

    def matrix(self, x) -> np.ndarray:
        pi, a = x
        out = np.zeros((self.n, self.n), dtype=np.int64)
        for i, (t, c) in enumerate(zip(pi, a)):
            out[t, i] = c
        return out

    def encode(self, x) -> bytes:
        return _pack_ints(x[0] + x[1])

    def decode(self, b: bytes):
        v = _unpack_ints(b)
        return (tuple(v[: self.n]), tuple(v[self.n :]))

    def describe(self) -> str:
        return f"Monomial({self.n},{self.field.q})"


class SemidirectDomain(Domain):
    """Pairs (v, h) of A = F_r^a and h in an outer matrix group acting linearly on A.

    (v, h)(w, k) = (v + h.w, hk).
    """

    def __init__(self, field: GF, outer: MatrixDomain):
        if outer.field != field:
            raise GroupError("outer matrices must act over the vector field")
        self.field = field
        self.outer = outer
        self.a = outer.n
        self.one = ((0,) * self.a, outer.one)

    def act(self, h, v):
        F = self.field
        return tuple(int(x) for x in F.vmatmul(self.outer.array(h), np.array(v, dtype=np.int64)[:, None])[:, 0])

    def mul(self, x, y):
        (v, h), (w, k) = x, y
        F = self.field
        hw = self.act(h, w)
        return (tuple(F.add(a, b) for a, b in zip(v, hw)), self.outer.mul(h, k))

    def inv(self, x):
        v, h = x
        hi = self.outer.inv(h)
        F = self.field
        return (tuple(F.neg(c) for c in self.act(hi, v)), hi)

    def encode(self, x) -> bytes:
        return _pack_ints(x[0] + x[1])

    def decode(self, b: bytes):
        v = _unpack_ints(b)
        return (tuple(v[: self.a]), tuple(v[self.a :]))

    def describe(self) -> str:
        return f"F{self.field.q}^{self.a}:{self.outer.describe()}"


class WreathDomain(Domain):
    """L wr T for T acting on m points: pairs (f, t), f a tuple of L-indices.

    (f, t)(f', t') = (f * t(f'), tt') with t(f')[pi_t(i)] = f'[i].
    ``top_perm`` maps a T-value to its permutation tuple of the m points.
    """

    def __init__(self, base: "FiniteGroup", top: Domain, m: int, top_perm: Callable):
        self.base = base
        self.top = top
        self.m = m
        self.top_perm = top_perm
        self.one = ((0,) * m, top.one)

    def mul(self, x, y):
        (f, t), (g, u) = x, y
        pi = self.top_perm(t)
        moved = [0] * self.m
        for i, gi in enumerate(g):
            moved[pi[i]] = gi
        base = self.base
        return (tuple(base.mul(a, b) for a, b in zip(f, moved)), self.top.mul(t, u))

    def inv(self, x):
        f, t = x
        ti = self.top.inv(t)
        pi = self.top_perm(ti)
        moved = [0] * self.m
        for i, fi in enumerate(f):
            moved[pi[i]] = self.base.inverse(fi)
        return (tuple(moved), ti)

    def encode(self, x) -> bytes:
        return _pack_ints(x[0]) + self.top.encode(x[1])

    def decode(self, b: bytes):
        k = 8 * self.m
        return (_unpack_ints(b[:k]), self.top.decode(b[k:]))

    cacheable = False

    def describe(self) -> str:
        return f"({self.base.name}) wr {self.m}"


class DirectProductDomain(Domain):
    def __init__(self, left: Domain, right: Domain):
        self.left = left
        self.right = right
        self.one = (left.one, right.one)
        self.cacheable = left.cacheable and right.cacheable

    def mul(self, x, y):
        return (self.left.mul(x[0], y[0]), self.right.mul(x[1], y[1]))

    def inv(self, x):
        return (self.left.inv(x[0]), self.right.inv(x[1]))

    def encode(self, x) -> bytes:
        a = self.left.encode(x[0])
        return struct.pack("<I", len(a)) + a + self.right.encode(x[1])

    def decode(self, b: bytes):
        (n,) = struct.unpack("<I", b[:4])
        return (self.left.decode(b[4 : 4 + n]), self.right.decode(b[4 + n :]))

    def describe(self) -> str:
        return f"{self.left.describe()} x {self.right.describe()}"


class PSL2Domain(Domain):
    """L2(q): determinant-1 matrices modulo +-I, packed into one int.

    Canonical representative: the first nonzero row-major entry is the
    integer-smaller member of its pair {x, -x}.
    """

    def __init__(self, field: GF):
        if field.p == 2:
            raise GroupError("even q is not supported")
        self.field = field
        q = field.q
        self.q = q
        self.one = self.pack(1, 0, 0, 1)
        self._prime = field.is_prime_field

    def pack(self, a, b, c, d) -> int:
        q = self.q
        return ((a * q + b) * q + c) * q + d

    def unpack(self, x: int):
        q = self.q
        x, d = divmod(x, q)
        x, c = divmod(x, q)
        a, b = divmod(x, q)
        return a, b, c, d

    def canon(self, a, b, c, d) -> int:
        F = self.field
        lead = a if a else b
        if not F.positive(lead):
            a, b, c, d = F.neg(a), F.neg(b), F.neg(c), F.neg(d)
        return self.pack(a, b, c, d)

    def element(self, rows) -> int:
        F = self.field
        (a, b), (c, d) = [[F.from_int(int(v)) for v in row] for row in rows]
        if F.sub(F.mul(a, d), F.mul(b, c)) != 1:
            raise GroupError("PSL2 element must have determinant 1")
        return self.canon(a, b, c, d)

    def mul(self, x, y):
        q = self.q
        if self._prime:
            x, d1 = divmod(x, q)
            x, c1 = divmod(x, q)
            a1, b1 = divmod(x, q)
            y, d2 = divmod(y, q)
            y, c2 = divmod(y, q)
            a2, b2 = divmod(y, q)
            a = (a1 * a2 + b1 * c2) % q
            b = (a1 * b2 + b1 * d2) % q
            c = (c1 * a2 + d1 * c2) % q
            d = (c1 * b2 + d1 * d2) % q
            lead = a if a else b
            if 2 * lead > q:
                a = (q - a) % q
                b = (q - b) % q
                c = (q - c) % q
                d = (q - d) % q
            return ((a * q + b) * q + c) * q + d
        F = self.field
        a1, b1, c1, d1 = self.unpack(x)
        a2, b2, c2, d2 = self.unpack(y)
        return self.canon(
            F.add(F.mul(a1, a2), F.mul(b1, c2)),
            F.add(F.mul(a1, b2), F.mul(b1, d2)),
            F.add(F.mul(c1, a2), F.mul(d1, c2)),
            F.add(F.mul(c1, b2), F.mul(d1, d2)),
        )

    def inv(self, x):
        a, b, c, d = self.unpack(x)
        F = self.field
        return self.canon(d, F.neg(b), F.neg(c), a)

    def matrix(self, x):
        a, b, c, d = self.unpack(x)
        return [[a, b], [c, d]]

    def trace(self, x) -> int:
        a, _, _, d = self.unpack(x)
        return self.field.add(a, d)

    def encode(self, x) -> bytes:
        return struct.pack("<q", x)

    def decode(self, b: bytes):
        return struct.unpack("<q", b)[0]

    def describe(self) -> str:
        return f"L2({self.q})"


class QuotientDomain(Domain):
    """Cosets of a normal subgroup N of G, each named by its BFS-least member (a G index)."""

    def __init__(self, G: "FiniteGroup", N: "FiniteGroup"):
        self.G = G
        self.N = N
        reps, coset_of = left_cosets_table(G, N)
        self.reps = reps
        self.rep_of = np.asarray(reps, dtype=np.int64)[coset_of]
        self.one = 0

    def canon(self, i: int) -> int:
        return int(self.rep_of[i])

    def mul(self, x, y):
        return int(self.rep_of[self.G.mul(x, y)])

    def inv(self, x):
        return int(self.rep_of[self.G.inverse(x)])

    def encode(self, x) -> bytes:
        return struct.pack("<q", x)

    def decode(self, b: bytes):
        return struct.unpack("<q", b)[0]

    cacheable = False

    def describe(self) -> str:
        return f"({self.G.name})/({self.N.name})"


# --------------------------------------------------------------------------
# enumerated groups


@dataclass(eq=False)
class FiniteGroup:
    domain: Domain
    gens: list
    elements: list
    index: dict
    parent: np.ndarray
    gen_of: np.ndarray
    name: str = "G"
    _orders: dict = field(default_factory=dict, repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.index

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"

    @functools.cached_property
    def gen_indices(self) -> list[int]:
        return [self.index[g] for g in self.gens]

    def mul(self, i: int, j: int) -> int:
        return self.index[self.domain.mul(self.elements[i], self.elements[j])]

    def inverse(self, i: int) -> int:
        return self.index[self.domain.inv(self.elements[i])]

    def power(self, i: int, e: int) -> int:
        return self.index[self.domain.power(self.elements[i], e)]

    def conj(self, i: int, x: int) -> int:
        """x i x^-1"""
        D = self.domain
        xe = self.elements[x]
        return self.index[D.mul(D.mul(xe, self.elements[i]), D.inv(xe))]

    def word(self, i: int) -> list[int]:
        """Generator positions w with elements[i] = gens[w[0]] * ... * gens[w[-1]]."""
        out = []
        while i:
            out.append(int(self.gen_of[i]))
            i = int(self.parent[i])
        return out

    def has_order(self, i: int, n: int) -> bool:
        """ord(g) == n, tested with exponents dividing n only."""
        cached = self._orders.get(i)
        if cached is not None:
            return cached == n
        D = self.domain
        g = self.elements[i]
        if D.power(g, n) != D.one:
            return False
        return all(D.power(g, n // ell) != D.one for ell in factorize(n))

    def element_order(self, i: int) -> int:
        """Least n >= 1 with g^n = 1, descending from the multiple |G|."""
        cached = self._orders.get(i)
        if cached is not None:
            return cached
        D = self.domain
        g = self.elements[i]
        n = self.order
        for ell in self.order_primes:
            while n % ell == 0 and D.power(g, n // ell) == D.one:
                n //= ell
        self._orders[i] = n
        return n

    @functools.cached_property
    def order_primes(self) -> list[int]:
        return sorted(factorize(self.order))

    def is_p_regular(self, i: int, p: int) -> bool:
        """p does not divide the order of element i."""
        if i in self._orders:
            return self._orders[i] % p != 0
        m = self.order
        while m % p == 0:
            m //= p
        return self.domain.power(self.elements[i], m) == self.domain.one

    @functools.cached_property
    def orders(self) -> np.ndarray:
        return np.array([self.element_order(i) for i in range(self.order)], dtype=np.int64)

    def order_profile(self) -> dict[int, int]:
        return dict(sorted(Counter(int(o) for o in self.orders).items()))

    @functools.cached_property
    def exponent(self) -> int:
        from math import lcm

        out = 1
        for o in set(int(x) for x in self.orders):
            out = lcm(out, o)
        return out

    def is_subgroup_of(self, G: "FiniteGroup") -> bool:
        return self.domain is G.domain and all(x in G.index for x in self.elements)

    def embed(self, G: "FiniteGroup") -> np.ndarray:
        """Positions in G of this group's elements."""
        try:
            return np.array([G.index[x] for x in self.elements], dtype=np.int64)
        except KeyError:
            raise GroupError(f"{self.name} is not contained in {G.name}") from None

    def element_stream_checksum(self) -> str:
        h = hashlib.sha256()
        for x in self.elements:
            h.update(self.domain.encode(x))
        return h.hexdigest()


def enumerate_group(domain: Domain, gens: Sequence, cap: int = DEFAULT_CAP, name: str = "G") -> FiniteGroup:
    """BFS closure under left multiplication by the generators.

    Element j is discovered as ``gens[gen_of[j]] * elements[parent[j]]``.
    """
    gens = list(gens)
    cache = ENUMERATION_CACHE.get("active")
    use_cache = cache is not None and cap >= CACHE_MIN_CAP and domain.cacheable
    if use_cache:
        hit = cache.load(domain, gens, name)
        if hit is not None:
            if hit.order > cap:
                raise GroupTooLarge(f"{name}: more than {cap} elements")
            return hit
    G = _enumerate(domain, gens, cap, name)
    if use_cache and G.order >= CACHE_MIN_ORDER:
        cache.store(G)
    return G


def _enumerate(domain: Domain, gens: list, cap: int, name: str) -> FiniteGroup:
    one = domain.one
    elements = [one]
    index = {one: 0}
    parent = [0]
    gen_of = [-1]
    mul = domain.mul
    i = 0
    while i < len(elements):
        g = elements[i]
        for k, s in enumerate(gens):
            h = mul(s, g)
            if h not in index:
                if len(elements) >= cap:
                    raise GroupTooLarge(f"{name}: more than {cap} elements")
                index[h] = len(elements)
                elements.append(h)
                parent.append(i)
                gen_of.append(k)
        i += 1
    return FiniteGroup(
        domain,
        gens,
        elements,
        index,
        np.array(parent, dtype=np.int32),
        np.array(gen_of, dtype=np.int16),
        name,
    )


def subgroup(G: FiniteGroup, gen_indices: Iterable[int], name: str = "H", cap: int | None = None) -> FiniteGroup:
    gens = [G.elements[i] for i in gen_indices]
    return enumerate_group(G.domain, gens, cap=G.order if cap is None else cap, name=name)


def try_subgroup(G: FiniteGroup, gen_indices: Iterable[int], cap: int, name: str = "H") -> FiniteGroup | None:
    """Subgroup closure, or None as soon as it exceeds ``cap`` elements."""
    try:
        return subgroup(G, gen_indices, name=name, cap=cap)
    except GroupTooLarge:
        return None


def trivial_subgroup(G: FiniteGroup, name: str = "1") -> FiniteGroup:
    return enumerate_group(G.domain, [], name=name)


def element_order(G: FiniteGroup, g) -> int:
    return G.element_order(G.index[g])


def is_p_regular(G: FiniteGroup, g, p: int) -> bool:
    return G.is_p_regular(G.index[g], p)


def left_cosets_table(G: FiniteGroup, K: FiniteGroup):
    """Representatives (BFS-least member of each gK) and the coset number of every element."""
    kvals = K.elements
    for x in kvals:
        if x not in G.index:
            raise GroupError(f"{K.name} is not a subgroup of {G.name}")
    coset_of = np.full(G.order, -1, dtype=np.int64)
    reps = []
    D = G.domain
    for i, g in enumerate(G.elements):
        if coset_of[i] >= 0:
            continue
        c = len(reps)
        reps.append(i)
        for k in kvals:
            coset_of[G.index[D.mul(g, k)]] = c
    return reps, coset_of


def left_cosets(G: FiniteGroup, K: FiniteGroup) -> list[int]:
    """Canonical left coset representatives (indices into G), identity first."""
    return left_cosets_table(G, K)[0]


def coset_members(G: FiniteGroup, K: FiniteGroup, i: int) -> list[int]:
    D = G.domain
    g = G.elements[i]
    return [G.index[D.mul(g, k)] for k in K.elements]


def iter_coset_reps(G: FiniteGroup, K: FiniteGroup, start: int = 0, stop: int | None = None) -> Iterator[tuple[int, list[int]]]:
    """Canonical representatives in [start, stop) with their cosets, without a global table.

    i is a representative iff it is the least index of i*K.
    """
    stop = G.order if stop is None else stop
    D = G.domain
    kvals = K.elements
    index = G.index
    for i in range(start, stop):
        g = G.elements[i]
        members = []
        for k in kvals:
            j = index[D.mul(g, k)]
            if j < i:
                break
            members.append(j)
        else:
            yield i, members


def normal_closure(G: FiniteGroup, S: Iterable[int], name: str = "N") -> FiniteGroup:
    """Least normal subgroup of G containing the elements with indices S."""
    gens = sorted(set(int(s) for s in S) - {0})
    N = subgroup(G, gens, name=name)
    queue = list(gens)
    while queue:
        n = queue.pop()
        for x in G.gen_indices:
            c = G.conj(n, x)
            if G.elements[c] not in N.index:
                gens.append(c)
                queue.append(c)
                N = subgroup(G, gens, name=name)
    return N


def is_normal(G: FiniteGroup, N: FiniteGroup) -> bool:
    for x in G.gen_indices:
        for n in N.gens:
            if G.elements[G.conj(G.index[n], x)] not in N.index:
                return False
    return True


def conjugacy_class(G: FiniteGroup, i: int) -> set[int]:
    seen = {i}
    frontier = [i]
    while frontier:
        nxt = []
        for j in frontier:
            for x in G.gen_indices:
                c = G.conj(j, x)
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return seen


def _is_p_number(n: int, p: int) -> bool:
    return n == p_part(n, p)


def _largest_normal(G: FiniteGroup, good_element: Callable[[int], bool], good_order: Callable[[int], bool], name: str) -> FiniteGroup:
    """Subgroup generated by all g whose normal closure has an order accepted by good_order."""
    current = trivial_subgroup(G, name)
    rejected: set[int] = set()
    for i in range(1, G.order):
        if G.elements[i] in current.index or i in rejected or not good_element(i):
            continue
        ncl = normal_closure(G, [i])
        if good_order(ncl.order):
            current = normal_closure(G, [G.index[g] for g in current.gens] + [i], name=name)
        else:
            rejected |= conjugacy_class(G, i)
    current.name = name
    return current


def o_p_prime(G: FiniteGroup, p: int) -> FiniteGroup:
    """O_{p'}(G), the largest normal subgroup of order prime to p."""
    return _largest_normal(G, lambda i: G.is_p_regular(i, p), lambda n: n % p != 0, f"O_{p}'")


def o_p(G: FiniteGroup, p: int) -> FiniteGroup:
    """O_p(G), the largest normal p-subgroup."""
    return _largest_normal(
        G, lambda i: _is_p_number(G.element_order(i), p), lambda n: _is_p_number(n, p), f"O_{p}"
    )


def quotient_group(G: FiniteGroup, N: FiniteGroup, name: str | None = None) -> FiniteGroup:
    if not N.is_subgroup_of(G):
        raise GroupError(f"{N.name} is not a subgroup of {G.name}")
    if not is_normal(G, N):
        raise GroupError(f"{N.name} is not normal in {G.name}")
    D = QuotientDomain(G, N)
    gens = [D.canon(i) for i in G.gen_indices]
    return enumerate_group(D, gens, cap=G.order, name=name or f"{G.name}/{N.name}")


def upper_p_series(G: FiniteGroup, p: int) -> list[tuple[str, int]]:
    """Orders of the successive O_{p'} and O_p layers; stops when no progress is made."""
    layers = []
    Q = G
    while Q.order > 1:
        progressed = False
        for label, fn in (("p'", o_p_prime), ("p", o_p)):
            O = fn(Q, p)
            if O.order > 1:
                layers.append((label, O.order))
                Q = quotient_group(Q, O)
                progressed = True
        if not progressed:
            layers.append(("stall", Q.order))
            break
    return layers


def is_p_solvable(G: FiniteGroup, p: int) -> bool:
    series = upper_p_series(G, p)
    return not series or series[-1][0] != "stall"


def sylow_subgroup(G: FiniteGroup, p: int) -> FiniteGroup:
    target = p_part(G.order, p)
    if target == 1:
        raise GroupError(f"{p} does not divide |{G.name}| = {G.order}")
    p_elements = [i for i in range(G.order) if i and _is_p_number(G.element_order(i), p)]
    best = max(p_elements, key=lambda i: (G.element_order(i), -i))
    P = subgroup(G, [best], name=f"Syl_{p}")
    pgens = [best]
    while P.order < target:
        for i in p_elements:
            if G.elements[i] in P.index:
                continue
            if all(G.elements[G.conj(G.index[h], i)] in P.index for h in P.gens):
                pgens.append(i)
                P = subgroup(G, pgens, name=f"Syl_{p}")
                break
        else:  # pragma: no cover - impossible by Sylow theory
            raise GroupError("Sylow growth stalled")
    return P


@dataclass
class ComplementResult:
    subgroup: FiniteGroup
    generators: list[int]
    seed: int
    method: str

    def certificate(self) -> dict:
        return {
            "order": self.subgroup.order,
            "generators": [self.subgroup.domain.encode(g).hex() for g in self.subgroup.gens],
            "generator_indices": self.generators,
            "seed": self.seed,
            "method": self.method,
        }


def find_p_complement(
    G: FiniteGroup, p: int, seed: int = 0, restarts: int = 20, budget: int = 20_000
) -> ComplementResult:
    """Subgroup of order |G|_{p'}: randomized greedy growth, then a bounded exhaustive search."""
    target = G.order // p_part(G.order, p)
    regular = [i for i in range(1, G.order) if G.is_p_regular(i, p)]
    if target == G.order:
        return ComplementResult(G, list(G.gen_indices), seed, "whole group")
    rng = random.Random(seed)

    def grow(gens, H, cands):
        for x in cands:
            if G.elements[x] in H.index:
                continue
            K = try_subgroup(G, gens + [x], cap=target)
            if K is not None and K.order % p:
                gens = gens + [x]
                H = K
                if H.order == target:
                    break
        return gens, H

    one = trivial_subgroup(G)
    for _ in range(restarts):
        cands = list(regular)
        rng.shuffle(cands)
        gens, H = grow([], one, cands)
        if H.order == target:
            return ComplementResult(H, gens, seed, "random growth")

    # exhaustive fallback: depth-first over canonical generator sequences
    spent = 0
    stack: list[tuple[list[int], FiniteGroup, int]] = [([], one, 0)]
    while stack:
        gens, H, start = stack.pop()
        for pos in range(len(regular) - 1, start - 1, -1):
            x = regular[pos]
            if G.elements[x] in H.index:
                continue
            spent += 1
            if spent > budget:
                raise SearchBudgetExceeded(f"no p-complement certified within budget {budget}")
            K = try_subgroup(G, gens + [x], cap=target)
            if K is None or K.order % p == 0:
                continue
            if K.order == target:
                return ComplementResult(K, gens + [x], seed, "exhaustive")
            stack.append((gens + [x], K, pos + 1))
    raise GroupError(f"no p-complement exists in {G.name} for p={p}")


def count_p_regular(G: FiniteGroup, p: int) -> int:
    return sum(1 for i in range(G.order) if G.is_p_regular(i, p))


def derived_subgroup(G: FiniteGroup) -> FiniteGroup:
    comms = []
    gi = G.gen_indices
    for a in gi:
        for b in gi:
            c = G.mul(G.mul(a, b), G.mul(G.inverse(a), G.inverse(b)))
            if c:
                comms.append(c)
    return normal_closure(G, comms, name=f"{G.name}'")


def _ilog(n: int, base: int) -> int:
    k = 0
    while n > 1:
        n //= base
        k += 1
    return k


def abelian_invariants(A: FiniteGroup) -> list[int]:
    """Invariant factors d1 | d2 | ... (all > 1) of an enumerated abelian group."""
    orders = [int(o) for o in A.orders]
    primary: dict[int, list[int]] = {}
    for ell in factorize(A.order):
        # n_k = #{x : x^(ell^k) = 1} = ell^(sum_i min(k, e_i))
        counts = []
        k = 0
        while True:
            k += 1
            n_k = sum(1 for o in orders if (ell**k) % o == 0)
            counts.append(n_k)
            if n_k == p_part(A.order, ell):
                break
        logs = [0] + [_ilog(c, ell) for c in counts]
        # number of cyclic factors of exponent >= k is logs[k] - logs[k-1]
        ge = [logs[k] - logs[k - 1] for k in range(1, len(logs))] + [0]
        exps = []
        for k in range(1, len(ge)):
            exps += [k] * (ge[k - 1] - ge[k])
        primary[ell] = sorted(exps, reverse=True)
    width = max((len(v) for v in primary.values()), default=0)
    factors = []
    for j in range(width):
        d = 1
        for ell, exps in primary.items():
            if j < len(exps):
                d *= ell ** exps[j]
        factors.append(d)
    return sorted(factors)


def abelianization_invariants(G: FiniteGroup) -> list[int]:
    D = derived_subgroup(G)
    if D.order == G.order:
        return []
    return abelian_invariants(quotient_group(G, D))


def direct_product(G: FiniteGroup, H: FiniteGroup, cap: int = DEFAULT_CAP, name: str | None = None) -> FiniteGroup:
    D = DirectProductDomain(G.domain, H.domain)
    gens = [(g, H.domain.one) for g in G.gens] + [(G.domain.one, h) for h in H.gens]
    return enumerate_group(D, gens, cap=cap, name=name or f"{G.name}x{H.name}")


def image_order(images: Iterable[bytes]) -> int:
    return len(set(images))
