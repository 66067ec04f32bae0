"""Decision procedures for adequacy and weak adequacy."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .cohomology import BUDGET, CohomologyBudgetExceeded, h1_dimension, h1_trivial_module_oracle
from .groups import FiniteGroup, GroupError, count_p_regular, iter_coset_reps
from .linalg import Matrix, SpanAccumulator, nullspace_dim
from .modrep import Representation, adjoint_rep

STREAM_LIMIT = 2_000_000
COND3_BUDGET = 10**9


class PreconditionError(ValueError):
    pass


class StreamTooLarge(RuntimeError):
    pass


def algebra_span_rank(V: Representation, keep: Callable[[int], bool] | None = None) -> int:
    """Rank of span{V(g) : keep(g)} inside End(V), streamed in BFS order."""
    G = V.group
    if G.order > STREAM_LIMIT:
        raise StreamTooLarge(f"{G.order} elements exceed the streaming limit {STREAM_LIMIT}")
    acc = SpanAccumulator(V.field, V.dim**2)
    for i in range(G.order):
        if keep is not None and not keep(i):
            continue
        acc.insert(V.image(i))
        if acc.full:
            break
    return acc.rank


def commutant_dimension(V: Representation) -> int:
    """dim {X : X V(s) = V(s) X for every generator s}."""
    F = V.field
    n = V.dim
    if not V.gen_images:
        return n * n
    eye = np.eye(n, dtype=np.int64)
    blocks = []
    for m in V.gen_images:
        # row-major vec: vec(X S) = (I (x) S^T) vec X, vec(S X) = (S (x) I) vec X
        left = F.vmul(eye[:, None, :, None], m.a.T[None, :, None, :]).reshape(n * n, n * n)
        right = F.vmul(m.a[:, None, :, None], eye[None, :, None, :]).reshape(n * n, n * n)
        blocks.append(F.vsub(left, right))
    return nullspace_dim(F, np.concatenate(blocks, axis=0))


def is_absolutely_irreducible(V: Representation) -> bool:
    return algebra_span_rank(V) == V.dim**2


@dataclass
class WeakAdequacy:
    adequate: bool
    rank: int
    target: int

    def __bool__(self) -> bool:
        return self.adequate


def p_regular_filter(G: FiniteGroup, p: int) -> Callable[[int], bool]:
    return lambda i: G.is_p_regular(i, p)


def is_weakly_adequate(V: Representation, p: int, check_irreducible: bool = True) -> WeakAdequacy:
    if V.field.p != p:
        raise PreconditionError(f"field characteristic {V.field.p} differs from p = {p}")
    if check_irreducible and not is_absolutely_irreducible(V):
        raise PreconditionError("weak adequacy is only defined for absolutely irreducible modules")
    r = algebra_span_rank(V, p_regular_filter(V.group, p))
    return WeakAdequacy(r == V.dim**2, r, V.dim**2)


def coset_obstruction(G: FiniteGroup, K: FiniteGroup, p: int) -> list[int]:
    """Canonical representatives of the cosets gK that contain no p-regular element.

    An empty list is not evidence of weak adequacy.
    """
    if not K.is_subgroup_of(G):
        raise GroupError(f"{K.name} is not a subgroup of {G.name}")
    out = []
    for rep, members in iter_coset_reps(G, K):
        if not any(G.is_p_regular(j, p) for j in members):
            out.append(rep)
    return out


def q2_screen(p_regular_count: int, dim: int) -> bool:
    """True when fewer p-regular elements exist than dim^2: weak adequacy is impossible."""
    if p_regular_count < 0 or dim < 0:
        raise ValueError("counts must be nonnegative")
    return p_regular_count < dim * dim


def q2_screen_group(G: FiniteGroup, p: int, dim: int) -> bool:
    return q2_screen(count_p_regular(G, p), dim)


@dataclass
class AdequacyReport:
    group_order: int
    dim: int
    p: int
    absolutely_irreducible: bool
    c1: bool | None = None
    h1_trivial_dim: int | None = None
    h1_trivial_oracle: int | None = None
    c2: bool | None = None
    c3: bool | None = None
    h1_adjoint_dim: int | None = None
    c4: bool | None = None
    span_rank: int | None = None
    span_rank_all: int | None = None
    witnesses: list[str] = field(default_factory=list)
    skips: list[str] = field(default_factory=list)
    verdict: str = "not adequate"

    def to_json(self) -> dict:
        return {
            "group_order": self.group_order,
            "dim": self.dim,
            "p": self.p,
            "absolutely_irreducible": self.absolutely_irreducible,
            "conditions": {"c1": self.c1, "c2": self.c2, "c3": self.c3, "c4": self.c4},
            "cohomology": {
                "h1_trivial": self.h1_trivial_dim,
                "h1_trivial_oracle": self.h1_trivial_oracle,
                "h1_adjoint": self.h1_adjoint_dim,
            },
            "ranks": {"p_regular_span": self.span_rank, "full_span": self.span_rank_all, "target": self.dim**2},
            "witnesses": list(self.witnesses),
            "verdict": self.verdict,
            "skips": list(self.skips),
        }


def adequacy_report(
    V: Representation,
    p: int,
    inducing_subgroup: FiniteGroup | None = None,
    cond3_budget: int = COND3_BUDGET,
) -> AdequacyReport:
    G = V.group
    n = V.dim
    full = algebra_span_rank(V)
    report = AdequacyReport(G.order, n, p, full == n * n, span_rank_all=full)
    if not report.absolutely_irreducible:
        report.verdict = "not absolutely irreducible"
        return report

    from .modrep import trivial_rep

    h1k = h1_dimension(G, trivial_rep(G, V.field))
    oracle = h1_trivial_module_oracle(G, p)
    if h1k != oracle:  # pragma: no cover - the two routes must agree
        raise AssertionError(f"H^1(G,k): cocycles give {h1k}, abelianization gives {oracle}")
    report.h1_trivial_dim = h1k
    report.h1_trivial_oracle = oracle
    report.c1 = h1k == 0
    report.c2 = n % p != 0

    if G.order * n**4 > cond3_budget:
        report.skips.append(f"c3: |G|*dim^4 = {G.order * n**4} exceeds budget {cond3_budget}")
    else:
        try:
            h = h1_dimension(G, adjoint_rep(V), budget=BUDGET)
            report.h1_adjoint_dim = h
            report.c3 = h == 0
        except CohomologyBudgetExceeded as exc:
            report.skips.append(f"c3: {exc}")

    wa = is_weakly_adequate(V, p, check_irreducible=False)
    report.c4 = wa.adequate
    report.span_rank = wa.rank
    if not wa.adequate and inducing_subgroup is not None:
        for rep in coset_obstruction(G, inducing_subgroup, p):
            report.witnesses.append(G.domain.encode(G.elements[rep]).hex())

    conds = [report.c1, report.c2, report.c3, report.c4]
    if all(c is True for c in conds):
        report.verdict = "adequate"
    elif any(c is False for c in conds):
        report.verdict = "not adequate"
    else:
        report.verdict = "partial"
    return report


def fermat_prime(p: int) -> bool:
    from .fieldarith import is_prime

    return p >= 3 and (p - 1) & (p - 2) == 0 and is_prime(p)


def corollary_strong_holds(n: int, p: int, image_order: int) -> bool:
    """Completely reducible p-solvable G in GL_n with p | |G| forces n >= p or n = p-1, p Fermat."""
    if image_order % p:
        return True
    return n >= p or (n == p - 1 and fermat_prime(p))
