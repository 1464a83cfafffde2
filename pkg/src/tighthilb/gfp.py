"""Prime fields, monomial orders and sparse multivariate polynomials over F_p.

Polynomials are immutable maps from dense exponent tuples to nonzero
coefficients in ``range(p)``.  A :class:`PolyRing` fixes the field, the
variable names and the monomial order; every polynomial points at one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

from .errors import ArityError, DivisionByZero, DomainError, NotPrime

Exponent = Tuple[int, ...]

P_MAX = 2**31 - 1


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise NotPrime(f"{self.p!r} is not prime")
        if self.p > P_MAX:
            raise DomainError(f"characteristic {self.p} exceeds 2^31-1")

    def __call__(self, v: int) -> int:
        return v % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in F_{self.p}")
        return pow(a, self.p - 2, self.p)

    def __str__(self):
        return f"F{self.p}"


def field_arith(F: PrimeField, a: int, b: int, op: str) -> int:
    """Apply ``op`` in {add, mul, inv, neg}; the unary ops act on ``b``."""
    if op == "add":
        return F.add(a, b)
    if op == "mul":
        return F.mul(a, b)
    if op == "inv":
        return F.inv(b)
    if op == "neg":
        return F.neg(b)
    raise ValueError(f"unknown field operation {op!r}")


# -- monomials --------------------------------------------------------------


def mono_mul(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a: Exponent, b: Exponent) -> bool:
    """True when the monomial ``a`` divides ``b``."""
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x if x > y else y for x, y in zip(a, b))


def mono_coprime(a: Exponent, b: Exponent) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _grevlex_key(e: Exponent) -> Tuple[int, ...]:
    return (sum(e),) + tuple(-x for x in reversed(e))


@dataclass(frozen=True)
class MonomialOrder:
    """Global monomial order.

    ``kind`` is ``"grevlex"``, ``"lex"`` or ``"block"``; a block order
    compares the first ``k`` variables by grevlex and breaks ties with
    grevlex on the rest, which makes it an elimination order for them.
    """

    kind: str = "grevlex"
    k: int = 0

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and self.k < 0:
            raise ValueError("block size must be non-negative")

    def key(self, e: Exponent) -> Tuple[int, ...]:
        """Flat integer tuple; larger tuples are larger monomials."""
        if self.kind == "grevlex":
            return _grevlex_key(e)
        if self.kind == "lex":
            return tuple(e)
        return _grevlex_key(e[: self.k]) + _grevlex_key(e[self.k :])

    def __str__(self):
        return f"block({self.k})" if self.kind == "block" else self.kind


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def block_order(k: int) -> MonomialOrder:
    return MonomialOrder("block", k)


# -- rings and polynomials --------------------------------------------------


@dataclass(frozen=True)
class PolyRing:
    """The polynomial ring F_p[names] with a fixed monomial order."""

    field: PrimeField
    names: Tuple[str, ...]
    order: MonomialOrder = GREVLEX

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def nvars(self) -> int:
        return len(self.names)

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.field, self.names, order)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c: int) -> "Polynomial":
        c %= self.p
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def monomial(self, exp: Sequence[int], coeff: int = 1) -> "Polynomial":
        exp = tuple(exp)
        if len(exp) != self.nvars:
            raise ArityError(f"exponent {exp} has arity {len(exp)}, expected {self.nvars}")
        coeff %= self.p
        return Polynomial(self, {exp: coeff} if coeff else {})

    def from_terms(self, terms: Dict[Sequence[int], int]) -> "Polynomial":
        """Build a polynomial from an arbitrary exponent -> integer map."""
        return Polynomial(self, dict(terms), _clean=False)

    def gen(self, i: int) -> "Polynomial":
        e = [0] * self.nvars
        e[i] = 1
        return self.monomial(e)

    def gens(self) -> List["Polynomial"]:
        return [self.gen(i) for i in range(self.nvars)]

    def var(self, name: str) -> "Polynomial":
        return self.gen(self.names.index(name))

    def __call__(self, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            if value.ring.nvars != self.nvars:
                raise ArityError("arity mismatch")
            return value if value.ring == self else Polynomial(self, value._terms)
        if isinstance(value, int):
            return self.constant(value)
        if isinstance(value, str):
            return parse_polynomial(value, self)
        raise TypeError(f"cannot coerce {value!r}")

    def __str__(self):
        return f"{self.field}[{','.join(self.names)}]"


class Polynomial:
    __slots__ = ("ring", "_terms", "_lm")

    def __init__(self, ring: PolyRing, terms: Dict[Exponent, int], _clean: bool = True):
        self.ring = ring
        if not _clean:
            p = ring.p
            n = ring.nvars
            cleaned = {}
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n:
                    raise ArityError(f"exponent {e} has arity {len(e)}, expected {n}")
                c %= p
                if c:
                    cleaned[e] = c
            terms = cleaned
        self._terms = terms
        self._lm = None

    # -- inspection
    @property
    def p(self) -> int:
        return self.ring.p

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def coefficient(self, exp: Exponent) -> int:
        return self._terms.get(tuple(exp), 0)

    def items(self) -> Iterable[Tuple[Exponent, int]]:
        return self._terms.items()

    def monomials(self) -> List[Exponent]:
        return [e for e, _ in self.terms()]

    def terms(self) -> List[Tuple[Exponent, int]]:
        """Terms in canonical (descending) order."""
        key = self.ring.order.key
        return sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=True)

    @property
    def lm(self) -> Exponent:
        if self._lm is None:
            if not self._terms:
                raise DomainError("zero polynomial has no leading monomial")
            self._lm = max(self._terms, key=self.ring.order.key)
        return self._lm

    @property
    def lc(self) -> int:
        return self._terms[self.lm]

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def support(self) -> set:
        """Indices of variables that occur."""
        return {i for e in self._terms for i, x in enumerate(e) if x}

    # -- arithmetic
    def _check(self, other: "Polynomial"):
        if self.ring.nvars != other.ring.nvars:
            raise ArityError(f"arity {self.ring.nvars} vs {other.ring.nvars}")
        if self.ring.p != other.ring.p:
            raise ArityError(f"characteristic {self.ring.p} vs {other.ring.p}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, int):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = (out.get(e, 0) + c) % p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {e: p - c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out: Dict[Exponent, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = (out.get(e, 0) + c1 * c2) % p
        return Polynomial(self.ring, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {e: v * c % p for e, v in self._terms.items()})

    def mul_term(self, exp: Exponent, c: int = 1) -> "Polynomial":
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Polynomial(
            self.ring,
            {tuple(a + b for a, b in zip(e, exp)): v * c % p for e, v in self._terms.items()},
        )

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            raise DomainError("negative polynomial power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def frobenius(self, e: int) -> "Polynomial":
        """Return self^(p^e), computed term by term."""
        if e < 0:
            raise DomainError("Frobenius exponent must be non-negative")
        q = self.ring.p**e
        return Polynomial(
            self.ring, {tuple(x * q for x in m): c for m, c in self._terms.items()}
        )

    def monic(self) -> "Polynomial":
        if not self._terms:
            return self
        return self.scale(self.ring.field.inv(self.lc))

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Evaluate at ``images`` (one polynomial per variable, all in one ring)."""
        if len(images) != self.ring.nvars:
            raise ArityError(f"need {self.ring.nvars} images, got {len(images)}")
        target = images[0].ring if images else self.ring
        powers: Dict[Tuple[int, int], Polynomial] = {}

        def power(i, k):
            if (i, k) not in powers:
                powers[(i, k)] = images[i] ** k
            return powers[(i, k)]

        out = target.zero()
        for e, c in self._terms.items():
            t = target.constant(c)
            for i, k in enumerate(e):
                if k:
                    t = t * power(i, k)
            out = out + t
        return out

    # -- comparison and display
    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (
            self.ring.nvars == other.ring.nvars
            and self.ring.p == other.ring.p
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.ring.p, frozenset(self._terms.items())))

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({self}, {self.ring})"


def poly_arith(f: Polynomial, g: Polynomial, op: str) -> Polynomial:
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown polynomial operation {op!r}")


def frobenius_power(f: Polynomial, e: int) -> Polynomial:
    return f.frobenius(e)


# -- text form ----------------------------------------------------------------


def format_monomial(exp: Exponent, names: Sequence[str]) -> str:
    parts = []
    for name, k in zip(names, exp):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def format_polynomial(f: Polynomial) -> str:
    """Canonical text: descending terms, coefficients in the symmetric range."""
    if f.is_zero():
        return "0"
    p = f.ring.p
    out = []
    for e, c in f.terms():
        neg = p > 2 and c > p // 2
        a = p - c if neg else c
        mono = format_monomial(e, f.ring.names)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


_TERM_RE = re.compile(r"\s*([+-])?\s*([^+-]+)")


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    """Parse the flat canonical form, e.g. ``3*x^2*y - z + 1``."""
    src = text.strip()
    if not src:
        raise ValueError("empty polynomial")
    index = {name: i for i, name in enumerate(ring.names)}
    terms: Dict[Exponent, int] = {}
    pos = 0
    first = True
    while pos < len(src):
        m = _TERM_RE.match(src, pos)
        if not m or (m.group(1) is None and not first):
            raise ValueError(f"cannot parse polynomial {text!r} at offset {pos}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = sign
        exp = [0] * ring.nvars
        for factor in m.group(2).split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"empty factor in {text!r}")
            base, _, power = factor.partition("^")
            base = base.strip()
            k = int(power) if power else 1
            if base.isdigit():
                coeff *= int(base) ** k
            elif base in index:
                exp[index[base]] += k
            else:
                raise ValueError(f"unknown variable {base!r} in {text!r}")
        e = tuple(exp)
        terms[e] = (terms.get(e, 0) + coeff) % ring.p
        pos = m.end()
        first = False
    return Polynomial(ring, {e: c for e, c in terms.items() if c})
