"""Sparse Gaussian elimination over F_p.

Vectors are dicts from an arbitrary hashable index to a nonzero residue.
"""

from __future__ import annotations

from typing import Dict, Hashable, List, Optional, Sequence

from .errors import BudgetExhausted

SparseVec = Dict[Hashable, int]


class EchelonBasis:
    """Fully reduced row-echelon basis, grown one vector at a time.

    Each pivot index occurs only in its own row, so reducing a vector
    against the basis never reintroduces a pivot.  Alongside every row we
    carry the combination of input vectors that produced it, which yields
    kernel vectors of the input family for free.
    """

    def __init__(self, p: int, budget: Optional[int] = None):
        self.p = p
        self.rows: Dict[Hashable, SparseVec] = {}
        self.combos: Dict[Hashable, Dict[int, int]] = {}
        self.budget = budget
        self.touched = set()

    def _eliminate(self, v: SparseVec, combo: Dict[int, int]):
        p = self.p
        for m in [m for m in v if m in self.rows]:
            c = v.get(m)
            if not c:
                continue
            for e, a in self.rows[m].items():
                nv = (v.get(e, 0) - c * a) % p
                if nv:
                    v[e] = nv
                else:
                    v.pop(e, None)
            for j, a in self.combos[m].items():
                nv = (combo.get(j, 0) - c * a) % p
                if nv:
                    combo[j] = nv
                else:
                    combo.pop(j, None)

    def add(self, v: SparseVec, label: int) -> Optional[Dict[int, int]]:
        """Insert ``v``; return a kernel combination if it became dependent."""
        self.touched.update(v)
        if self.budget is not None and len(self.touched) > self.budget:
            raise BudgetExhausted(f"more than {self.budget} target monomials")
        p = self.p
        v = {k: c % p for k, c in v.items() if c % p}
        combo = {label: 1}
        self._eliminate(v, combo)
        if not v:
            return combo
        pivot = next(iter(v))
        inv = pow(v[pivot], p - 2, p)
        v = {k: c * inv % p for k, c in v.items()}
        combo = {k: c * inv % p for k, c in combo.items()}
        # keep other rows free of the new pivot
        for m, row in self.rows.items():
            c = row.get(pivot)
            if not c:
                continue
            for e, a in v.items():
                nv = (row.get(e, 0) - c * a) % p
                if nv:
                    row[e] = nv
                else:
                    row.pop(e, None)
            cm = self.combos[m]
            for j, a in combo.items():
                nv = (cm.get(j, 0) - c * a) % p
                if nv:
                    cm[j] = nv
                else:
                    cm.pop(j, None)
        self.rows[pivot] = v
        self.combos[pivot] = combo
        return None


def kernel(images: Sequence[SparseVec], p: int, budget: Optional[int] = None) -> List[Dict[int, int]]:
    """Basis of {lambda : sum lambda_j images[j] = 0}, as sparse combinations."""
    eb = EchelonBasis(p, budget)
    out = []
    for j, v in enumerate(images):
        k = eb.add(dict(v), j)
        if k is not None:
            out.append(k)
    return out


def rref(vectors: Sequence[Sequence[int]], p: int) -> List[List[int]]:
    """Reduced row echelon form of dense vectors (zero rows dropped)."""
    rows = [[x % p for x in v] for v in vectors]
    ncols = len(rows[0]) if rows else 0
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][col], p - 2, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                c = rows[i][col]
                rows[i] = [(a - c * b) % p for a, b in zip(rows[i], rows[r])]
        r += 1
    return rows[:r]
