"""First cohomology H^1(G, M) by 1-cocycle systems on generators.

Unknowns are the cocycle values d(s) on the generators.  Values on every other
element follow along the BFS spanning tree from d(s g) = d(s) + s.d(g); each
non-tree Cayley edge contributes dim M linear constraints.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroup, abelianization_invariants
from .linalg import echelon
from .modrep import Representation, fixed_subspace

BUDGET = 10**9
MEMORY_LIMIT = 5 * 10**7  # entries of the per-element coefficient table


class CohomologyBudgetExceeded(RuntimeError):
    pass


@dataclass
class CocycleSystem:
    group: FiniteGroup
    module: Representation
    coefficients: np.ndarray  # (|G|, d, d*|S|): d(g) as a linear map of the unknowns
    constraints: np.ndarray  # echelonized constraint rows
    pivots: list[int]

    @property
    def n_unknowns(self) -> int:
        return self.coefficients.shape[2]

    @property
    def z1_dim(self) -> int:
        return self.n_unknowns - len(self.pivots)

    def z1_basis(self) -> list[np.ndarray]:
        free = [c for c in range(self.n_unknowns) if c not in set(self.pivots)]
        F = self.module.field
        out = []
        for f in free:
            v = np.zeros(self.n_unknowns, dtype=np.int64)
            v[f] = 1
            for row, pc in zip(self.constraints, self.pivots):
                if row[f]:
                    v[pc] = F.neg(int(row[f]))
            out.append(v)
        return out

    def cocycle_values(self, unknowns: np.ndarray) -> np.ndarray:
        """d(g) for every element g, shape (|G|, d)."""
        F = self.module.field
        return F.vsum(F.vmul(self.coefficients, unknowns[None, None, :]), axis=2)


def cost_estimate(G: FiniteGroup, M: Representation) -> int:
    return G.order * max(len(G.gens), 1) * M.dim**2


def cocycle_system(G: FiniteGroup, M: Representation, budget: int = BUDGET) -> CocycleSystem:
    if M.group is not G:
        raise ValueError("module must be a representation of G")
    if cost_estimate(G, M) > budget:
        raise CohomologyBudgetExceeded(f"|G|*|S|*d^2 = {cost_estimate(G, M)} exceeds {budget}")
    if cost_estimate(G, M) > MEMORY_LIMIT:
        raise CohomologyBudgetExceeded(f"cocycle table of {cost_estimate(G, M)} entries exceeds {MEMORY_LIMIT}")
    F = M.field
    d = M.dim
    S = len(G.gens)
    nu = d * S
    coeff = np.zeros((G.order, d, nu), dtype=np.int64)
    gen_mats = [m.a for m in M.gen_images]
    eye = np.eye(d, dtype=np.int64)

    def edge_value(k: int, i: int) -> np.ndarray:
        # d(s_k g_i) = d(s_k) + s_k . d(g_i)
        out = F.vmatmul(gen_mats[k], coeff[i])
        out[:, k * d : (k + 1) * d] = F.vadd(out[:, k * d : (k + 1) * d], eye)
        return out

    parent, gen_of = G.parent, G.gen_of
    for j in range(1, G.order):
        coeff[j] = edge_value(int(gen_of[j]), int(parent[j]))

    rows = np.zeros((0, nu), dtype=np.int64)
    pivots: list[int] = []
    pending = []
    pending_rows = 0
    chunk = max(4 * nu, 256)
    D = G.domain
    for i in range(G.order):
        for k, s in enumerate(G.gens):
            j = G.index[D.mul(s, G.elements[i])]
            if j != 0 and int(parent[j]) == i and int(gen_of[j]) == k:
                continue
            diff = F.vsub(coeff[j], edge_value(k, i))
            nz = diff[np.any(diff != 0, axis=1)]
            if nz.size:
                pending.append(nz)
                pending_rows += nz.shape[0]
            if pending_rows >= chunk:
                rows, pivots = echelon(F, np.concatenate([rows] + pending, axis=0))
                pending, pending_rows = [], 0
                if len(pivots) == nu:
                    break
        if len(pivots) == nu:
            pending = []
            break
    if pending:
        rows, pivots = echelon(F, np.concatenate([rows] + pending, axis=0))
    return CocycleSystem(G, M, coeff, rows, pivots)


def h1_dimension(G: FiniteGroup, M: Representation, budget: int = BUDGET) -> int:
    """dim Z^1 - dim B^1, with dim B^1 = dim M - dim M^G."""
    system = cocycle_system(G, M, budget)
    b1 = M.dim - len(fixed_subspace(M, G))
    return system.z1_dim - b1


def h1_trivial_module_oracle(G: FiniteGroup, p: int) -> int:
    """dim Hom(G, k+): invariant factors of G/G' divisible by p."""
    return sum(1 for d in abelianization_invariants(G) if d % p == 0)
