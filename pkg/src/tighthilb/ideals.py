"""Quotient rings F_p[x]/J, their ideals, lengths, intersections and colons.

Power-series rings are modelled by polynomial rings localised at the
origin: every length computed here is for an ideal supported only at the
origin, where the global and local quotients agree.  ``length`` refuses
ideals whose zero set contains other points.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import DomainError, NotMPrimary
from .gfp import (
    GREVLEX,
    Exponent,
    PolyRing,
    Polynomial,
    PrimeField,
    block_order,
    format_polynomial,
    mono_divides,
)
from .groebner import GroebnerBasis, buchberger

INFINITE = float("inf")


# -- staircases ----------------------------------------------------------------


def pure_power_bounds(lms: Sequence[Exponent], n: int) -> List[Optional[int]]:
    """Smallest k with x_i^k a leading monomial, per variable (None if absent)."""
    bounds: List[Optional[int]] = [None] * n
    for m in lms:
        nz = [i for i, k in enumerate(m) if k]
        if len(nz) == 1:
            i = nz[0]
            if bounds[i] is None or m[i] < bounds[i]:
                bounds[i] = m[i]
        elif not nz:
            return [0] * n
    return bounds


def standard_monomials(lms: Sequence[Exponent], n: int, limit: Optional[int] = None) -> List[Exponent]:
    """Monomials outside the monomial ideal generated by ``lms``.

    The staircase must be finite.  With ``limit`` the enumeration stops once
    more than ``limit`` monomials have been found.
    """
    bounds = pure_power_bounds(lms, n)
    if any(b is None for b in bounds):
        raise DomainError("staircase is infinite")
    out: List[Exponent] = []
    e = [0] * n

    def blocked() -> bool:
        return any(all(a <= b for a, b in zip(m, e)) for m in lms)

    def rec(i: int) -> bool:
        if i == n:
            out.append(tuple(e))
            return limit is None or len(out) <= limit
        for k in range(bounds[i]):
            e[i] = k
            if blocked():
                break
            if not rec(i + 1):
                e[i] = 0
                return False
        e[i] = 0
        return True

    if n == 0:
        return [()] if not lms else []
    rec(0)
    return out


def independent_dimension(lms: Sequence[Exponent], n: int) -> int:
    """Largest set of variables with no leading monomial supported inside it."""
    supports = [frozenset(i for i, k in enumerate(m) if k) for m in lms]
    if any(not s for s in supports):
        return -1
    best = 0
    for size in range(n, 0, -1):
        for U in itertools.combinations(range(n), size):
            Us = set(U)
            if not any(s <= Us for s in supports):
                return size
    return best


# -- rings ------------------------------------------------------------------


class PresentedRing:
    """R = ambient / J, localised at the origin."""

    def __init__(self, ambient: PolyRing, relations: Sequence[Polynomial] = (), name: str = "R"):
        self.ambient = ambient
        self.name = name
        self.relations = tuple(ambient(f) for f in relations)
        self.J = buchberger(list(self.relations), ambient)
        if self.J.is_unit():
            raise DomainError("defining ideal is the unit ideal")
        for f in self.J.polys:
            if f.coefficient((0,) * ambient.nvars):
                raise DomainError(f"relation {f} does not vanish at the origin")

    @classmethod
    def polynomial_ring(cls, p: int, names: Sequence[str], name: str = "R") -> "PresentedRing":
        return cls(PolyRing(PrimeField(p), tuple(names)), (), name=name)

    @property
    def field(self) -> PrimeField:
        return self.ambient.field

    @property
    def p(self) -> int:
        return self.ambient.p

    @property
    def names(self) -> Tuple[str, ...]:
        return self.ambient.names

    @property
    def nvars(self) -> int:
        return self.ambient.nvars

    @cached_property
    def d(self) -> int:
        return krull_dim(self)

    def __call__(self, value) -> Polynomial:
        """Lift ``value`` to the ambient ring and reduce it modulo J."""
        return self.reduce(self.ambient(value))

    def reduce(self, f: Polynomial) -> Polynomial:
        return self.J.normal_form(f)

    def gens(self) -> List[Polynomial]:
        return self.ambient.gens()

    def ideal(self, gens: Iterable[Union[Polynomial, str, int]]) -> "RingIdeal":
        return RingIdeal(self, [self.ambient(g) for g in gens])

    def maximal_ideal(self) -> "RingIdeal":
        return RingIdeal(self, self.ambient.gens())

    def unit_ideal(self) -> "RingIdeal":
        return RingIdeal(self, [self.ambient.one()])

    def zero_ideal(self) -> "RingIdeal":
        return RingIdeal(self, [])

    def describe(self) -> str:
        rel = ", ".join(format_polynomial(f) for f in self.J.polys)
        return f"{self.ambient} / ({rel})" if rel else str(self.ambient)

    def __repr__(self):
        return f"PresentedRing({self.describe()})"


def krull_dim(ring: PresentedRing) -> int:
    return independent_dimension(ring.J.lms, ring.nvars)


class RingIdeal:
    """An ideal of a :class:`PresentedRing`, stored by lifted generators."""

    def __init__(self, ring: PresentedRing, gens: Sequence[Polynomial]):
        self.ring = ring
        self.gens: Tuple[Polynomial, ...] = tuple(ring.reduce(ring.ambient(g)) for g in gens)

    @cached_property
    def gb(self) -> GroebnerBasis:
        """Reduced basis of gens + J in the ambient ring."""
        nonzero = [g for g in self.gens if g]
        return buchberger(list(self.ring.J.polys) + nonzero, self.ring.ambient)

    @property
    def nonzero_gens(self) -> List[Polynomial]:
        return [g for g in self.gens if g]

    def contains(self, f: Polynomial) -> bool:
        return self.gb.contains(self.ring.ambient(f))

    def __contains__(self, f):
        return self.contains(f)

    def issubset(self, other: "RingIdeal") -> bool:
        return all(other.gb.contains(g) for g in self.gens)

    def __le__(self, other):
        return self.issubset(other)

    def __eq__(self, other):
        if not isinstance(other, RingIdeal):
            return NotImplemented
        return self.ring is other.ring and self.gb == other.gb

    def __hash__(self):
        return hash(self.gb)

    def is_unit(self) -> bool:
        return self.gb.is_unit()

    def normal_form(self, f: Polynomial) -> Polynomial:
        return self.gb.normal_form(self.ring.ambient(f))

    def canonical_text(self) -> str:
        """Sorted reduced basis of gens + J, one generator per entry."""
        return "(" + ", ".join(format_polynomial(g) for g in self.gb.polys) + ")"

    def __str__(self):
        return "(" + ", ".join(format_polynomial(g) for g in self.gens) + ")"

    def __repr__(self):
        return f"RingIdeal{self}"

    # algebra
    def __add__(self, other):
        return ideal_sum(self, other)

    def __mul__(self, other):
        return ideal_product(self, other)

    def __pow__(self, n):
        return ideal_power(self, n)

    def __and__(self, other):
        return ideal_intersect(self, other)

    def standard_monomials(self, limit: Optional[int] = None) -> List[Exponent]:
        return standard_monomials(self.gb.lms, self.ring.nvars, limit)


def _same_ring(I: RingIdeal, K: RingIdeal):
    if I.ring is not K.ring:
        raise DomainError("ideals live in different rings")


def ideal_sum(I: RingIdeal, K: RingIdeal) -> RingIdeal:
    _same_ring(I, K)
    return RingIdeal(I.ring, I.gens + K.gens)


def ideal_product(I: RingIdeal, K: RingIdeal) -> RingIdeal:
    _same_ring(I, K)
    R = I.ring
    prods = {R.reduce(f * g) for f in I.nonzero_gens for g in K.nonzero_gens}
    return RingIdeal(R, sorted(prods, key=lambda f: R.ambient.order.key(f.lm) if f else ()))


def ideal_power(I: RingIdeal, n: int) -> RingIdeal:
    """I^n generated by all degree-n products of the generators (I^0 = unit)."""
    if not isinstance(n, int) or n < 0:
        raise DomainError(f"ideal power must be a non-negative integer, got {n!r}")
    R = I.ring
    if n == 0:
        return R.unit_ideal()
    gens = I.nonzero_gens
    prods: Dict[Tuple[int, ...], Polynomial] = {(): R.ambient.one()}
    for combo in itertools.combinations_with_replacement(range(len(gens)), n):
        for k in range(1, n + 1):
            c = combo[:k]
            if c not in prods:
                prods[c] = R.reduce(prods[c[:-1]] * gens[c[-1]])
    out = []
    seen = set()
    for combo in itertools.combinations_with_replacement(range(len(gens)), n):
        f = prods[combo]
        if f and f not in seen:
            seen.add(f)
            out.append(f)
    return RingIdeal(R, out)


def bracket_power(I: RingIdeal, e: int) -> RingIdeal:
    """I^[p^e]: Frobenius powers of the stored generators."""
    if e < 0:
        raise DomainError("Frobenius exponent must be non-negative")
    R = I.ring
    return RingIdeal(R, [R.reduce(g.frobenius(e)) for g in I.nonzero_gens])


# -- elimination ---------------------------------------------------------------


def _prepend_vars(ring: PolyRing, names: Sequence[str]) -> PolyRing:
    fresh = []
    for base in names:
        name = base
        while name in ring.names or name in fresh:
            name = "_" + name
        fresh.append(name)
    return PolyRing(ring.field, tuple(fresh) + ring.names, block_order(len(fresh)))


def _lift(f: Polynomial, big: PolyRing, shift: int) -> Polynomial:
    pad = (0,) * shift
    return Polynomial(big, {pad + e: c for e, c in f.items()})


def eliminate(gens: Sequence[Polynomial], big: PolyRing, k: int, target: PolyRing) -> List[Polynomial]:
    """Generators of (gens) intersected with the subring of the last variables."""
    G = buchberger(list(gens), big)
    out = []
    for g in G.polys:
        if all(not any(e[:k]) for e, _ in g.items()):
            out.append(Polynomial(target, {e[k:]: c for e, c in g.items()}))
    return out


def intersect_ambient(A: Sequence[Polynomial], B: Sequence[Polynomial], ring: PolyRing) -> List[Polynomial]:
    """(A) cap (B) in ``ring`` via t*A + (1-t)*B, eliminating t."""
    big = _prepend_vars(ring, ["t"])
    t = big.gen(0)
    gens = [t * _lift(f, big, 1) for f in A if f] + [(1 - t) * _lift(g, big, 1) for g in B if g]
    if not gens:
        return []
    return eliminate(gens, big, 1, ring)


def ideal_intersect(I: RingIdeal, K: RingIdeal) -> RingIdeal:
    _same_ring(I, K)
    R = I.ring
    J = list(R.J.polys)
    gens = intersect_ambient(I.nonzero_gens + J, K.nonzero_gens + J, R.ambient)
    return RingIdeal(R, gens)


def exact_divide(h: Polynomial, f: Polynomial) -> Polynomial:
    """h / f when f divides h in the ambient polynomial ring."""
    ring = h.ring
    p = ring.p
    key = ring.order.key
    lmf = f.lm
    inv = ring.field.inv(f.lc)
    rest = dict(h._terms)
    quo: Dict[Exponent, int] = {}
    while rest:
        m = max(rest, key=key)
        if not mono_divides(lmf, m):
            raise DomainError(f"{f} does not divide {h}")
        shift = tuple(a - b for a, b in zip(m, lmf))
        c = rest[m] * inv % p
        quo[shift] = c
        for e, v in f.items():
            e2 = tuple(a + b for a, b in zip(e, shift))
            nv = (rest.get(e2, 0) - c * v) % p
            if nv:
                rest[e2] = nv
            else:
                rest.pop(e2, None)
    return Polynomial(ring, quo)


def ideal_quotient(I: RingIdeal, f: Union[Polynomial, RingIdeal]) -> RingIdeal:
    """I : f = {g : g f in I}; for an ideal K, the intersection of I : k over its generators."""
    R = I.ring
    if isinstance(f, RingIdeal):
        _same_ring(I, f)
        gens = f.nonzero_gens
        if not gens:
            return R.unit_ideal()
        result = None
        for g in gens:
            part = ideal_quotient(I, g)
            result = part if result is None else ideal_intersect(result, part)
        return result
    f = R.reduce(R.ambient(f))
    if not f:
        raise DomainError("colon by an element that is zero in the ring")
    J = list(R.J.polys)
    meet = intersect_ambient(I.nonzero_gens + J, [f], R.ambient)
    return RingIdeal(R, [exact_divide(h, f) for h in meet])


# -- lengths -------------------------------------------------------------------


def is_origin_supported(I: RingIdeal, colength: int) -> bool:
    """True when every variable is nilpotent modulo I (I primary to m).

    For an m-primary ideal of colength L, m^L lies in I, so x_i^L must
    reduce to zero; otherwise the zero set has a point off the origin.
    """
    G = I.gb
    ring = I.ring.ambient
    for i in range(ring.nvars):
        f = ring.one()
        x = ring.gen(i)
        for _ in range(max(colength, 1)):
            f = G.normal_form(f * x)
            if not f:
                break
        if f:
            return False
    return True


def length(ring: PresentedRing, I: RingIdeal) -> Union[int, float]:
    """ell(R/I) for I supported at the origin; INFINITE for a positive-dimensional quotient."""
    if I.ring is not ring:
        raise DomainError("ideal belongs to another ring")
    G = I.gb
    if G.is_unit():
        return 0
    bounds = pure_power_bounds(G.lms, ring.nvars)
    if any(b is None for b in bounds):
        return INFINITE
    L = len(standard_monomials(G.lms, ring.nvars))
    if not is_origin_supported(I, L):
        raise NotMPrimary(f"{I} has zeros away from the origin")
    return L


def is_m_primary(I: RingIdeal) -> bool:
    try:
        L = length(I.ring, I)
    except NotMPrimary:
        return False
    return L != INFINITE and L > 0


def require_m_primary(I: RingIdeal) -> int:
    L = length(I.ring, I)
    if L == INFINITE:
        raise NotMPrimary(f"{I} is not primary to the maximal ideal")
    return int(L)


# -- ring maps and toric rings -------------------------------------------------


@dataclass
class RingMap:
    """A ring map source -> target given by images of the source variables."""

    source: PresentedRing
    target: PresentedRing
    images: Tuple[Polynomial, ...]

    def __post_init__(self):
        self.images = tuple(self.target.reduce(self.target.ambient(h)) for h in self.images)
        if len(self.images) != self.source.nvars:
            raise DomainError(
                f"map needs {self.source.nvars} images, got {len(self.images)}"
            )
        for h in self.images:
            if h.coefficient((0,) * self.target.nvars):
                raise DomainError(f"image {h} is not in the maximal ideal (map not local)")
        for rel in self.source.J.polys:
            if self.target.reduce(rel.substitute(self.images)):
                raise DomainError(f"relation {rel} does not map to zero")

    def __call__(self, f: Polynomial) -> Polynomial:
        return self.target.reduce(self.source.ambient(f).substitute(self.images))

    def extend(self, I: RingIdeal) -> RingIdeal:
        """The extended ideal I S."""
        return RingIdeal(self.target, [self(g) for g in I.nonzero_gens])


def extension_length(R: PresentedRing, S: PresentedRing, phi: RingMap, I: RingIdeal, n: int) -> int:
    """ell_S(S / I^n S)."""
    if phi.source is not R or phi.target is not S:
        raise DomainError("map does not go from R to S")
    if n == 0:
        return 0
    IS = phi.extend(ideal_power(I, n))
    return require_m_primary(IS)


def lattice_rank(vectors: Sequence[Sequence[int]]) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors if any(v)]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                factor = rows[r][col] / rows[rank][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def toric_presentation(
    field: PrimeField,
    monomial_generators: Sequence[Sequence[int]],
    target_names: Optional[Sequence[str]] = None,
    source_names: Optional[Sequence[str]] = None,
    name: str = "R",
) -> PresentedRing:
    """Presentation of F_p[m_1, ..., m_s] for monomials m_i (given as exponent vectors)."""
    gens = [tuple(m) for m in monomial_generators]
    if not gens:
        raise DomainError("need at least one generator")
    nsrc = len(gens[0])
    if any(len(m) != nsrc for m in gens):
        raise DomainError("exponent vectors have different lengths")
    if any(not any(m) for m in gens):
        raise DomainError("generator 1 is not allowed (ring must be local at the origin)")
    s = len(gens)
    if target_names is None:
        target_names = [f"t{i + 1}" for i in range(s)]
    if source_names is None:
        source_names = [f"s{i + 1}" for i in range(nsrc)]
    target = PolyRing(field, tuple(target_names), GREVLEX)
    big = PolyRing(field, tuple(source_names) + tuple(target_names), block_order(nsrc))
    rels = []
    for i, m in enumerate(gens):
        t = [0] * (nsrc + s)
        t[nsrc + i] = 1
        rels.append(big.monomial(t) - big.monomial(tuple(m) + (0,) * s))
    J = eliminate(rels, big, nsrc, target)
    ring = PresentedRing(target, J, name=name)
    ring.__dict__["d"] = lattice_rank(gens)
    ring.monomial_generators = gens
    return ring
