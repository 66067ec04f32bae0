"""Factories for induced modules that fail weak adequacy, and the coset scanners behind them."""

from __future__ import annotations

import concurrent.futures as cf
import multiprocessing as mp
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .adequacy import (
    algebra_span_rank,
    coset_obstruction,
    is_absolutely_irreducible,
    is_weakly_adequate,
)
from .cohomology import h1_dimension, h1_trivial_module_oracle
from .fieldarith import GF, field_create, is_prime, p_part, splitting_degree
from .groups import (
    DEFAULT_CAP,
    FiniteGroup,
    GroupError,
    GroupTooLarge,
    MatrixDomain,
    Permutations,
    PSL2Domain,
    SemidirectDomain,
    WreathDomain,
    coset_members,
    enumerate_group,
    iter_coset_reps,
    left_cosets,
    left_cosets_table,
    normal_closure,
    subgroup,
    trivial_subgroup,
)
from .linalg import Matrix
from .modrep import Representation, induce, kernel_size, rep_from_generator_images, trivial_rep


class ConstructionError(ValueError):
    pass


class NoWitness(ConstructionError):
    pass


# --------------------------------------------------------------------------
# certificates


@dataclass
class ObstructionCertificate:
    """A coset of the inducing subgroup containing no p-regular element."""

    group: str
    subgroup: str
    p: int
    witness: str  # hex encoding of the coset representative
    member_orders: list[int]
    mode: str  # "explicit" or "quotient-lifted"
    quotient: str | None = None
    subgroup_elements: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "subgroup": self.subgroup,
            "p": self.p,
            "mode": self.mode,
            "quotient": self.quotient,
            "witness": self.witness,
            "member_orders": list(self.member_orders),
            "subgroup_elements": list(self.subgroup_elements),
        }


def make_certificate(G: FiniteGroup, K: FiniteGroup, rep: int, p: int, mode: str = "explicit", quotient=None):
    members = coset_members(G, K, rep)
    D = G.domain
    return ObstructionCertificate(
        group=G.name,
        subgroup=K.name,
        p=p,
        witness=D.encode(G.elements[rep]).hex(),
        member_orders=[G.element_order(j) for j in members],
        mode=mode,
        quotient=quotient,
        subgroup_elements=[D.encode(k).hex() for k in K.elements],
    )


def replay_certificate(cert: ObstructionCertificate, domain) -> bool:
    """Re-verify every coset element from the certificate data alone.

    Orders are recomputed by direct powering in the element domain, so the
    check does not depend on any enumerated group.
    """
    x = domain.decode(bytes.fromhex(cert.witness))
    ks = [domain.decode(bytes.fromhex(h)) for h in cert.subgroup_elements]
    if domain.one not in ks:
        return False
    orders = []
    for k in ks:
        g = domain.mul(x, k)
        n, h = 1, g
        while h != domain.one:
            h = domain.mul(h, g)
            n += 1
        orders.append(n)
    return orders == list(cert.member_orders) and all(o % cert.p == 0 for o in orders)


# --------------------------------------------------------------------------
# first family: A x| H induced from a character in a regular orbit


def _is_irreducible_action(H: FiniteGroup, field: GF, a: int, limit: int = 10**5) -> bool:
    """Brute force: every nonzero vector's H-orbit spans F^a."""
    if field.q**a > limit:
        raise ConstructionError("irreducibility check too large")
    from itertools import product

    from .linalg import rank

    mats = [np.array(h, dtype=np.int64).reshape(a, a) for h in H.elements]
    for v in product(range(field.q), repeat=a):
        if not any(v):
            continue
        vec = np.array(v, dtype=np.int64)
        orbit = np.array([field.vmatmul(m, vec[:, None])[:, 0] for m in mats])
        if rank(Matrix(field, orbit)) < a:
            return False
    return True


@dataclass
class OrbitCensus:
    character: tuple[int, ...] | None
    orbit_sizes: dict[int, int]


def find_regular_orbit_character(r: int, a: int, H: FiniteGroup) -> OrbitCensus:
    """Least nontrivial character (a dual vector u, lambda(v) = zeta^(u.v)) with trivial stabilizer.

    H acts on characters by u -> h^-T u; characters are scanned in
    lexicographic order of u.
    """
    from itertools import product

    Fr = field_create(r)
    inv_t = [
        np.array(H.domain.inv(h), dtype=np.int64).reshape(a, a).T for h in H.elements
    ]
    seen: set[tuple[int, ...]] = set()
    sizes: dict[int, int] = {}
    best = None
    for u in product(range(r), repeat=a):
        if not any(u) or u in seen:
            continue
        vec = np.array(u, dtype=np.int64)
        orbit = {tuple(int(x) for x in Fr.vmatmul(m, vec[:, None])[:, 0]) for m in inv_t}
        seen |= orbit
        sizes[len(orbit)] = sizes.get(len(orbit), 0) + 1
        if best is None and len(orbit) == H.order:
            best = u
    return OrbitCensus(best, dict(sorted(sizes.items())))


@dataclass
class Example1:
    group: FiniteGroup
    A: FiniteGroup
    H: FiniteGroup
    rep: Representation
    character: tuple[int, ...]
    orbit_sizes: dict[int, int]
    obstructions: list[int]
    certificate: ObstructionCertificate
    field: GF


def build_example1(r: int, a: int, H_gens: list, p: int, cap: int = DEFAULT_CAP) -> Example1:
    """G = A x| H with A = F_r^a and V = Ind_A^G(lambda) for lambda in a regular H-orbit."""
    if not (is_prime(r) and is_prime(p)) or r == p:
        raise ConstructionError("need distinct primes r and p")
    Fr = field_create(r)
    outer = MatrixDomain(Fr, a)
    hvals = [outer.element(m) for m in H_gens]
    H = enumerate_group(outer, hvals, cap=cap, name="H")
    if H.order % p:
        raise ConstructionError(f"p = {p} does not divide |H| = {H.order}")
    reg = [i for i in range(H.order) if H.is_p_regular(i, p)]
    if subgroup(H, reg).order != H.order:
        raise ConstructionError("H is not generated by p-regular elements")
    if not _is_irreducible_action(H, Fr, a):
        raise ConstructionError("H does not act irreducibly on A")
    census = find_regular_orbit_character(r, a, H)
    if census.character is None:
        raise ConstructionError(f"no regular H-orbit on characters; orbit sizes {census.orbit_sizes}")
    lam = census.character

    D = SemidirectDomain(Fr, outer)
    basis = [tuple(int(i == j) for j in range(a)) for i in range(a)]
    a_gens = [(e, outer.one) for e in basis]
    G = enumerate_group(D, a_gens + [((0,) * a, h) for h in hvals], cap=cap, name=f"{r}^{a}:H")
    A = enumerate_group(D, a_gens, name="A")

    k = field_create(p, splitting_degree(p, r))
    zeta = k.root_of_unity(r)
    W = rep_from_generator_images(A, [Matrix(k, [[k.pow(zeta, lam[i])]]) for i in range(a)], name="lambda")
    V = induce(G, A, W)
    obstructions = coset_obstruction(G, A, p)
    if not obstructions:  # pragma: no cover - p | |H| always yields obstructed cosets
        raise NoWitness("no obstructed coset")
    cert = make_certificate(G, A, obstructions[0], p)
    return Example1(G, A, H, V, lam, census.orbit_sizes, obstructions, cert, k)


# --------------------------------------------------------------------------
# generalized wreath products


def coset_action(T: FiniteGroup, T1: FiniteGroup):
    """Permutation of the canonical cosets of T1 induced by left multiplication, per T-value."""
    reps, coset_of = left_cosets_table(T, T1)
    D = T.domain
    rep_vals = [T.elements[r] for r in reps]
    cache: dict[Any, tuple[int, ...]] = {}

    def perm(t):
        hit = cache.get(t)
        if hit is None:
            hit = tuple(int(coset_of[T.index[D.mul(t, g)]]) for g in rep_vals)
            cache[t] = hit
        return hit

    return reps, perm


def is_core_free(T: FiniteGroup, T1: FiniteGroup) -> bool:
    """T1 contains no nontrivial normal subgroup of T."""
    for x in T1.elements[1:]:
        ncl = normal_closure(T, [T.index[x]])
        if all(y in T1.index for y in ncl.elements):
            return False
    return True


def generated_by_p_regular(G: FiniteGroup, p: int) -> bool:
    reg = [i for i in range(1, G.order) if G.is_p_regular(i, p)]
    return subgroup(G, reg).order == G.order


@dataclass
class WreathResult:
    m: int
    mode: str
    certificate: ObstructionCertificate
    group: FiniteGroup | None = None
    rep: Representation | None = None
    K: FiniteGroup | None = None
    absolutely_irreducible: bool | None = None
    faithful: bool | None = None
    weakly_adequate: bool | None = None
    span_rank: int | None = None

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "mode": self.mode,
            "group_order": None if self.group is None else self.group.order,
            "dim": None if self.rep is None else self.rep.dim,
            "absolutely_irreducible": self.absolutely_irreducible,
            "faithful": self.faithful,
            "weakly_adequate": self.weakly_adequate,
            "span_rank": self.span_rank,
            "certificate": self.certificate.to_json(),
        }


def build_wreath_example(
    L: FiniteGroup, W: Representation, T: FiniteGroup, T1: FiniteGroup, p: int, cap: int = DEFAULT_CAP
) -> WreathResult:
    """G = L wr_{T1} T acting on V = Ind_{N T1}^G(W_1); explicit when |L|^m |T| <= cap."""
    if W.group is not L:
        raise ConstructionError("W must be a representation of L")
    if not T1.is_subgroup_of(T):
        raise ConstructionError("T1 is not a subgroup of T")
    m = T.order // T1.order
    if m == 1:
        raise ConstructionError("T1 = T leaves no proper coset")
    for X, label in ((L, "L"), (T, "T")):
        if not generated_by_p_regular(X, p):
            raise ConstructionError(f"{label} is not generated by p-regular elements")
    if not is_core_free(T, T1):
        raise ConstructionError("T1 contains a nontrivial normal subgroup of T")
    x = scan_coset_witness(T, T1, p)
    if x is None:
        raise NoWitness(f"every coset of {T1.name} in {T.name} contains a p-regular element")

    if L.order**m * T.order > cap:
        cert = make_certificate(T, T1, x, p, mode="quotient-lifted", quotient=f"G/N = {T.name}")
        return WreathResult(m, "quotient-lifted", cert)

    reps, perm = coset_action(T, T1)
    D = WreathDomain(L, T.domain, m, perm)
    base_gens = []
    for li in L.gen_indices:
        f = [0] * m
        f[0] = li
        base_gens.append((tuple(f), T.domain.one))
    top_gens = [((0,) * m, t) for t in T.gens]
    G = enumerate_group(D, base_gens + top_gens, cap=cap, name=f"{L.name}wr{T.name}")

    # K = N T1 = stabilizer of coordinate 0; W_1 reads coordinate 0 through W
    n_gens = []
    for c in range(m):
        for li in L.gen_indices:
            f = [0] * m
            f[c] = li
            n_gens.append((tuple(f), T.domain.one))
    t1_gens = [((0,) * m, t) for t in T1.gens]
    K = enumerate_group(D, n_gens + t1_gens, cap=cap, name="NT1")
    ident = Matrix.identity(W.field, W.dim)
    k_images = [W.image(f[0]) for f, _ in n_gens] + [ident for _ in t1_gens]
    W1 = rep_from_generator_images(K, k_images, W.field, W.dim, name="W1")
    V = induce(G, K, W1)

    obstructions = coset_obstruction(G, K, p)
    if not obstructions:  # pragma: no cover - lifted from the T-level witness
        raise NoWitness("explicit scan found no obstructed coset")
    cert = make_certificate(G, K, obstructions[0], p)
    irreducible = is_absolutely_irreducible(V)
    faithful = kernel_size(V) == 1
    wa = is_weakly_adequate(V, p, check_irreducible=False)
    return WreathResult(m, "explicit", cert, G, V, K, irreducible, faithful, wa.adequate, wa.rank)


# --------------------------------------------------------------------------
# L2(q)


def psl2(q: int, cap: int = DEFAULT_CAP) -> FiniteGroup:
    """L2(q) for odd q, generated by [[1,1],[0,1]], [[0,1],[-1,0]] (and a torus element for q not prime)."""
    from .fieldarith import factorize

    fac = factorize(q)
    if len(fac) != 1:
        raise GroupError(f"{q} is not a prime power")
    (p, s), = fac.items()
    if p == 2:
        raise GroupError("even q is not supported")
    expected = q * (q * q - 1) // 2
    if expected > cap:
        raise GroupTooLarge(f"|L2({q})| = {expected} exceeds cap {cap}")
    F = field_create(p, s)
    D = PSL2Domain(F)
    gens = [D.element([[1, 1], [0, 1]]), D.element([[0, 1], [-1, 0]])]
    if s > 1:
        w = F.primitive_element
        gens.append(D.canon(w, 0, 0, F.inv(w)))
    T = enumerate_group(D, gens, cap=cap, name=f"L2({q})")
    if T.order != expected:  # pragma: no cover
        raise GroupError(f"generated {T.order} elements, expected {expected}")
    return T


def dihedral_subgroup_psl2(T: FiniteGroup, p: int) -> FiniteGroup:
    """<diag(a, 1/a), antidiag(1, -1)> with a of multiplicative order p."""
    D = T.domain
    if not isinstance(D, PSL2Domain):
        raise GroupError("expected an L2(q) group")
    F = D.field
    if p == 2 or (F.q - 1) % p:
        raise ConstructionError(f"need an odd prime p dividing q - 1 = {F.q - 1}")
    a = next(x for x in range(1, F.q) if F.element_order(x) == p)
    gens = [D.canon(a, 0, 0, F.inv(a)), D.canon(0, 1, F.neg(1), 0)]
    T1 = enumerate_group(D, gens, name=f"D{2 * p}")
    if T1.order != 2 * p or T1.order_profile() != {1: 1, 2: p, p: p - 1}:
        raise ConstructionError(f"closure is not dihedral of order {2 * p}: {T1.order_profile()}")
    return T1


def _first_elements_of_order(T: FiniteGroup, n: int, limit: int):
    for i in range(1, T.order):
        if T.has_order(i, n):
            yield i
            limit -= 1
            if limit == 0:
                return


def _bounded_subgroup(T: FiniteGroup, gens: list, cap: int, name: str) -> FiniteGroup | None:
    try:
        return enumerate_group(T.domain, gens, cap=cap, name=name)
    except GroupTooLarge:
        return None


def _klein_filter(T: FiniteGroup, u: int, v: int) -> bool:
    # in A4 and S4 the involution t (u or u^2) commutes with its conjugate by v
    D = T.domain
    t = T.elements[u]
    if T.element_order(u) == 4:
        t = D.mul(t, t)
    x = T.elements[v]
    c = D.mul(D.mul(x, t), D.inv(x))
    return c != t and D.mul(t, c) == D.mul(c, t)


def find_subgroup_by_profile(
    T: FiniteGroup, o1: int, o2: int, profile: dict, name: str, max_pairs: int = 5000, prefilter=None
):
    """First (u, v) in canonical order, ord u = o1, ord v = o2, whose closure has the given order profile."""
    size = sum(profile.values())
    if T.order <= size:
        raise ConstructionError(f"|{T.name}| = {T.order} leaves no proper {name}")
    firsts = list(_first_elements_of_order(T, o1, 64))
    seconds = list(_first_elements_of_order(T, o2, max_pairs))
    for u in firsts:
        for v in seconds:
            if prefilter is not None and not prefilter(T, u, v):
                continue
            H = _bounded_subgroup(T, [T.elements[u], T.elements[v]], size, name)
            if H is not None and H.order == size and H.order_profile() == profile:
                return H
    raise ConstructionError(f"search exhausted: no {name} among {len(firsts)} x {len(seconds)} pairs")


A4_PROFILE = {1: 1, 2: 3, 3: 8}
S4_PROFILE = {1: 1, 2: 9, 3: 8, 4: 6}


def a4_subgroup_psl2(T: FiniteGroup) -> FiniteGroup:
    return find_subgroup_by_profile(T, 2, 3, A4_PROFILE, "A4", prefilter=_klein_filter)


def s4_subgroup_psl2(T: FiniteGroup) -> FiniteGroup:
    return find_subgroup_by_profile(T, 4, 3, S4_PROFILE, "S4", prefilter=_klein_filter)


# --------------------------------------------------------------------------
# coset scans

_SCAN_STATE: dict = {}


def _scan_range(T: FiniteGroup, T1: FiniteGroup, p: int, start: int, stop: int) -> int | None:
    for rep, members in iter_coset_reps(T, T1, start, stop):
        if not any(T.is_p_regular(j, p) for j in members):
            return rep
    return None


def _scan_worker(args):
    start, stop = args
    T, T1, p = _SCAN_STATE["args"]
    return _scan_range(T, T1, p, start, stop)


def scan_coset_witness(T: FiniteGroup, T1: FiniteGroup, p: int, threads: int = 1, chunk: int | None = None) -> int | None:
    """Least canonical representative x with no p-regular element in x T1, or None.

    Parallel runs split the element range into chunks and keep the witness of
    the earliest chunk that has one, which is the same canonical-least witness.
    """
    if not T1.is_subgroup_of(T):
        raise GroupError(f"{T1.name} is not a subgroup of {T.name}")
    if T.order % p:
        return None
    if threads <= 1:
        return _scan_range(T, T1, p, 0, T.order)
    chunk = chunk or max(T.order // (threads * 16), 1)
    ranges = [(s, min(s + chunk, T.order)) for s in range(0, T.order, chunk)]
    _SCAN_STATE["args"] = (T, T1, p)
    ctx = mp.get_context("fork")
    try:
        with cf.ProcessPoolExecutor(max_workers=threads, mp_context=ctx) as pool:
            for res in pool.map(_scan_worker, ranges):
                if res is not None:
                    pool.shutdown(wait=False, cancel_futures=True)
                    return res
    finally:
        _SCAN_STATE.clear()
    return None


def scan_sylow_coset(T: FiniteGroup, p: int, threads: int = 1):
    from .groups import sylow_subgroup

    P = sylow_subgroup(T, p)
    if P.order == T.order:
        return P, None
    return P, scan_coset_witness(T, P, p, threads=threads)


def witness_listing(T: FiniteGroup, T1: FiniteGroup, x: int) -> list[dict]:
    D = T.domain
    out = []
    for j in coset_members(T, T1, x):
        entry = {"element": D.encode(T.elements[j]).hex(), "order": T.element_order(j)}
        if isinstance(D, PSL2Domain):
            entry["matrix"] = D.matrix(T.elements[j])
        out.append(entry)
    return out


def psl2_family_scan(p: int, q_max: int, cap: int = DEFAULT_CAP, threads: int = 1, q_min: int = 5) -> dict:
    """Sylow coset scans over L2(q), odd prime q in [q_min, q_max]; first witness wins."""
    scanned = []
    for q in range(q_min, q_max + 1):
        if not is_prime(q) or q == 2:
            continue
        order = q * (q * q - 1) // 2
        if order > cap:
            scanned.append({"q": q, "status": "skipped: cap"})
            continue
        T = psl2(q, cap)
        if order % p:
            scanned.append({"q": q, "status": "p does not divide |T|"})
            continue
        P, x = scan_sylow_coset(T, p, threads=threads)
        if x is None:
            scanned.append({"q": q, "status": "no witness", "sylow_order": P.order})
            continue
        cert = make_certificate(T, P, x, p)
        scanned.append({"q": q, "status": "witness", "sylow_order": P.order})
        return {"p": p, "q_max": q_max, "found": True, "q": q, "certificate": cert.to_json(), "scanned": scanned}
    return {"p": p, "q_max": q_max, "found": False, "scanned": scanned}


# --------------------------------------------------------------------------
# Taylor-question instances


def _h1_trivial(T1: FiniteGroup, p: int) -> dict:
    k = field_create(p)
    via_cocycles = h1_dimension(T1, trivial_rep(T1, k))
    return {"cocycles": via_cocycles, "abelianization": h1_trivial_module_oracle(T1, p)}


def taylor_candidates(p: int, q_max: int) -> list[int]:
    """Primes q <= q_max with p exactly dividing q - 1."""
    return [q for q in range(3, q_max + 1) if is_prime(q) and (q - 1) % p == 0 and (q - 1) % (p * p)]


def _taylor_instance(T: FiniteGroup, T1: FiniteGroup, p: int, L_order: int, threads: int, x=-1) -> dict:
    m = T.order // T1.order
    if x == -1:
        x = scan_coset_witness(T, T1, p, threads=threads)
    out = {
        "T": T.name,
        "T_order": T.order,
        "T1": T1.name,
        "T1_order": T1.order,
        "L": f"C{L_order}",
        "m": m,
        "m_parity": "even" if m % 2 == 0 else "odd",
        "p_divides_m": m % p == 0,
        "h1_T1_trivial": _h1_trivial(T1, p),
        "witness_found": x is not None,
    }
    if x is not None:
        cert = make_certificate(T, T1, x, p, mode="quotient-lifted", quotient=f"G/N = {T.name}, |N| = {L_order}^{m}")
        out["certificate"] = cert.to_json()
        out["witness_orders"] = cert.member_orders
    out["conditions"] = {
        "c1_h1_T1": "computed",
        "c2_p_not_dividing_m": "computed",
        "c3": "asserted by the Shapiro reduction; machine-checked only on small analogues",
        "c4_fails": "certified by the witness coset" if x is not None else "no witness",
    }
    return out


def build_taylor_example(p: int, q_max: int = 200, cap: int = DEFAULT_CAP, threads: int = 1, with_s4: bool = True) -> dict:
    if p == 2:
        if q_max < 137:
            return {"p": 2, "q_max": q_max, "found": False, "scanned": [], "reason": "q = 137 excluded by q_max"}
        T = psl2(137, cap)
        A4 = a4_subgroup_psl2(T)
        result = {"p": 2, "q": 137, "found": True, "instances": {"A4": _taylor_instance(T, A4, 2, 3, threads)}}
        result["found"] = result["instances"]["A4"]["witness_found"]
        result["index_formula"] = {"A4": T.order // 12, "S4": T.order // 24}
        if with_s4:
            S4 = s4_subgroup_psl2(T)
            result["instances"]["S4"] = _taylor_instance(T, S4, 2, 3, threads)
        return result
    scanned = []
    for q in taylor_candidates(p, q_max):
        order = q * (q * q - 1) // 2
        if order > cap:
            scanned.append({"q": q, "status": "skipped: cap", "order": order})
            continue
        T = psl2(q, cap)
        T1 = dihedral_subgroup_psl2(T, p)
        x = scan_coset_witness(T, T1, p, threads=threads)
        if x is None:
            scanned.append({"q": q, "status": "no witness", "order": order})
            continue
        scanned.append({"q": q, "status": "witness", "order": order})
        inst = _taylor_instance(T, T1, p, 2, threads, x)
        return {"p": p, "q_max": q_max, "found": True, "q": q, "instance": inst, "scanned": scanned}
    return {"p": p, "q_max": q_max, "found": False, "scanned": scanned}
