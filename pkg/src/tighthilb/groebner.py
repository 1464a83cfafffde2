"""Buchberger's algorithm with the Gebauer-Moeller pair criteria.

Inner loops work on raw ``{exponent: coefficient}`` dicts; the public
functions take and return :class:`~tighthilb.gfp.Polynomial` objects.
"""

from __future__ import annotations

import heapq
from typing import Dict, List, Optional, Sequence, Tuple

from .gfp import (
    Exponent,
    MonomialOrder,
    PolyRing,
    Polynomial,
    mono_coprime,
    mono_divides,
    mono_lcm,
)

Terms = Dict[Exponent, int]


def _reduce(
    terms: Terms,
    basis: Sequence[Tuple[Exponent, Terms]],
    key,
    p: int,
    top_only: bool = False,
) -> Terms:
    """Remainder of ``terms`` modulo monic ``basis`` (list of (lm, terms))."""
    work = dict(terms)
    heap = [(tuple(-k for k in key(e)), e) for e in work]
    heapq.heapify(heap)
    queued = set(work)
    rem: Terms = {}
    while heap:
        _, m = heapq.heappop(heap)
        queued.discard(m)
        c = work.pop(m, 0)
        if not c:
            continue
        for lm, g in basis:
            if mono_divides(lm, m):
                shift = tuple(a - b for a, b in zip(m, lm))
                for e, v in g.items():
                    if e == lm:
                        continue
                    e2 = tuple(a + b for a, b in zip(e, shift))
                    nv = (work.get(e2, 0) - c * v) % p
                    if nv:
                        work[e2] = nv
                        if e2 not in queued:
                            queued.add(e2)
                            heapq.heappush(heap, (tuple(-k for k in key(e2)), e2))
                    else:
                        work.pop(e2, None)
                break
        else:
            rem[m] = c
            if top_only:
                rem.update(work)
                return rem
    return rem


def _monic(terms: Terms, lm: Exponent, p: int) -> Terms:
    c = terms[lm]
    if c == 1:
        return terms
    inv = pow(c, p - 2, p)
    return {e: v * inv % p for e, v in terms.items()}


def _lm(terms: Terms, key) -> Exponent:
    return max(terms, key=key)


class GroebnerBasis:
    """A reduced Groebner basis, sorted by increasing leading monomial."""

    def __init__(self, ring: PolyRing, polys: Sequence[Polynomial]):
        self.ring = ring
        key = ring.order.key
        self.polys: Tuple[Polynomial, ...] = tuple(sorted(polys, key=lambda f: key(f.lm)))
        self.lms: Tuple[Exponent, ...] = tuple(f.lm for f in self.polys)
        self._basis = [(f.lm, f._terms) for f in self.polys]

    @property
    def order(self) -> MonomialOrder:
        return self.ring.order

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __eq__(self, other):
        if not isinstance(other, GroebnerBasis):
            return NotImplemented
        return self.ring.order == other.ring.order and self.polys == other.polys

    def __hash__(self):
        return hash(self.polys)

    def is_unit(self) -> bool:
        return any(not any(lm) for lm in self.lms)

    def reduce_terms(self, terms: Terms) -> Terms:
        return _reduce(terms, self._basis, self.ring.order.key, self.ring.p)

    def normal_form(self, f: Polynomial) -> Polynomial:
        return Polynomial(self.ring, self.reduce_terms(f._terms))

    def contains(self, f: Polynomial) -> bool:
        return not self.reduce_terms(f._terms)

    def __str__(self):
        return "{" + ", ".join(str(f) for f in self.polys) + "}"


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    return G.normal_form(f)


def spoly_terms(
    f: Tuple[Exponent, Terms], g: Tuple[Exponent, Terms], p: int
) -> Terms:
    lf, tf = f
    lg, tg = g
    L = mono_lcm(lf, lg)
    sf = tuple(a - b for a, b in zip(L, lf))
    sg = tuple(a - b for a, b in zip(L, lg))
    out: Terms = {}
    for e, c in tf.items():
        out[tuple(a + b for a, b in zip(e, sf))] = c
    for e, c in tg.items():
        e2 = tuple(a + b for a, b in zip(e, sg))
        v = (out.get(e2, 0) - c) % p
        if v:
            out[e2] = v
        else:
            out.pop(e2, None)
    return out


def _gm_update(G, pairs, lm_new, new_index):
    """Gebauer-Moeller update: prune old pairs, add minimal new ones."""
    lms = [g[0] for g in G]
    kept = set()
    for (i, j) in pairs:
        L = mono_lcm(lms[i], lms[j])
        if (
            not mono_divides(lm_new, L)
            or L == mono_lcm(lms[i], lm_new)
            or L == mono_lcm(lms[j], lm_new)
        ):
            kept.add((i, j))
    by_lcm: Dict[Exponent, List[int]] = {}
    for i in range(new_index):
        by_lcm.setdefault(mono_lcm(lms[i], lm_new), []).append(i)
    # chain criterion among the new pairs: keep only divisor-minimal lcms
    minimal: List[Exponent] = []
    for L in sorted(by_lcm, key=sum):
        if not any(mono_divides(M, L) for M in minimal):
            minimal.append(L)
    added = set()
    for L in minimal:
        idx = by_lcm[L]
        # product criterion: a coprime pair in this class kills the class
        if any(mono_coprime(lms[i], lm_new) for i in idx):
            continue
        added.add((min(idx), new_index))
    return kept | added


def buchberger(
    gens: Sequence[Polynomial],
    ring: Optional[PolyRing] = None,
    audit: bool = False,
) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    ``ring`` fixes the order when ``gens`` is empty or mixes rings with the
    same arity.  With ``audit`` the result is checked against the input by
    mutual membership.
    """
    if ring is None:
        if not gens:
            raise ValueError("need a ring for an empty generator list")
        ring = gens[0].ring
    p = ring.p
    key = ring.order.key
    G: List[Tuple[Exponent, Terms]] = []
    pairs: set = set()
    heap: List = []

    def add(terms: Terms):
        nonlocal pairs
        lm = _lm(terms, key)
        terms = _monic(terms, lm, p)
        idx = len(G)
        G.append((lm, terms))
        new = _gm_update(G, pairs, lm, idx)
        for pr in new - pairs:
            L = mono_lcm(G[pr[0]][0], G[pr[1]][0])
            heapq.heappush(heap, (key(L), pr))
        pairs = new

    seeds = []
    for f in gens:
        if f.ring.nvars != ring.nvars or f.ring.p != p:
            raise ValueError("generators live in different rings")
        if f._terms:
            seeds.append(dict(f._terms))
    # cheap seeds first keeps early pairs small
    seeds.sort(key=lambda t: key(_lm(t, key)))
    for t in seeds:
        r = _reduce(t, G, key, p)
        if r:
            add(r)

    while heap:
        _, pr = heapq.heappop(heap)
        if pr not in pairs:
            continue
        pairs.discard(pr)
        i, j = pr
        s = spoly_terms(G[i], G[j], p)
        if not s:
            continue
        r = _reduce(s, G, key, p)
        if r:
            add(r)

    reduced = _interreduce(G, key, p)
    basis = GroebnerBasis(ring, [Polynomial(ring, t) for _, t in reduced])
    if audit:
        audit_basis(gens, basis)
    return basis


def _interreduce(G, key, p):
    # minimalize
    G = sorted(G, key=lambda g: key(g[0]))
    minimal = []
    for lm, t in G:
        if not any(mono_divides(m, lm) for m, _ in minimal):
            minimal.append((lm, t))
    out = []
    for i, (lm, t) in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        r = _reduce(t, others, key, p)
        out.append((lm, _monic(r, lm, p)))
    return out


def audit_basis(gens: Sequence[Polynomial], basis: GroebnerBasis) -> None:
    """Check ``basis`` against ``gens``: containment plus the S-pair criterion.

    Raises ``AssertionError`` on failure.  Containment of the basis in the
    input ideal is checked by recomputing from ``gens`` under lex and
    reducing every basis element there.
    """
    for f in gens:
        if not basis.contains(f):
            raise AssertionError(f"generator {f} not in computed basis")
    p = basis.ring.p
    items = basis._basis
    for a in range(len(items)):
        for b in range(a + 1, len(items)):
            s = spoly_terms(items[a], items[b], p)
            if s and basis.reduce_terms(s):
                raise AssertionError("S-pair criterion fails")
    lex_ring = basis.ring.with_order(MonomialOrder("lex"))
    other = buchberger([lex_ring(f) for f in gens], lex_ring)
    for f in basis.polys:
        if not other.contains(lex_ring(f)):
            raise AssertionError(f"basis element {f} not in the input ideal")
