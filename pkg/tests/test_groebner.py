import itertools
import random

import pytest

from tighthilb.gfp import GREVLEX, LEX, PolyRing, PrimeField, mono_div, mono_divides, mono_lcm, mono_mul
from tighthilb.groebner import audit_basis, buchberger


def naive_reduce(f, G):
    """Textbook multivariate division; returns the remainder."""
    R = f.ring
    r = R.zero()
    while f:
        lm, lc = f.lm, f.lc
        for g in G:
            if mono_divides(g.lm, lm):
                c = lc * R.field.inv(g.lc)
                f = f - g.mul_term(mono_div(lm, g.lm), c)
                break
        else:
            r = r + R.monomial(lm, lc)
            f = f - R.monomial(lm, lc)
    return r


def naive_groebner(F):
    """Plain Buchberger (coprime pairs skipped), reduced and sorted by leading monomial."""
    G = [f.monic() for f in F if f]
    pairs = list(itertools.combinations(range(len(G)), 2))
    while pairs:
        i, j = pairs.pop()
        f, g = G[i], G[j]
        m = mono_lcm(f.lm, g.lm)
        if m == mono_mul(f.lm, g.lm):
            continue
        s = f.mul_term(mono_div(m, f.lm)) - g.mul_term(mono_div(m, g.lm))
        r = naive_reduce(s, G)
        if r:
            G.append(r.monic())
            pairs += [(k, len(G) - 1) for k in range(len(G) - 1)]
    G = [g for i, g in enumerate(G)
         if not any(mono_divides(h.lm, g.lm) and (h.lm != g.lm or k < i) for k, h in enumerate(G) if k != i)]
    reduced = []
    for i, g in enumerate(G):
        rest = G[:i] + G[i + 1:]
        reduced.append((g.ring.monomial(g.lm) + naive_reduce(g - g.ring.monomial(g.lm), rest)).monic())
    key = reduced[0].ring.order.key if reduced else None
    return sorted(reduced, key=lambda g: key(g.lm))


def test_small_examples():
    R = PolyRing(PrimeField(3), ("x", "y"))
    x, y = R.gens()
    assert [str(g) for g in buchberger([x**2, y], R).polys] == ["y", "x^2"]
    assert [str(g) for g in buchberger([x - y, x + y], R).polys] == ["y", "x"]


def test_unit_ideal():
    R = PolyRing(PrimeField(5), ("x", "y"))
    x, y = R.gens()
    G = buchberger([x * y - 1, x], R)
    assert G.is_unit()


def random_poly(R, rng, terms=3, degree=2):
    out = R.zero()
    for _ in range(terms):
        e = [rng.randint(0, degree) for _ in range(R.nvars)]
        out = out + R.monomial(e, rng.randint(1, R.p - 1))
    return out


def random_system(seed, names, order):
    rng = random.Random(seed)
    R = PolyRing(PrimeField(rng.choice([2, 3, 5, 7])), names, order)
    return R, [random_poly(R, rng) for _ in range(rng.randint(2, 3))]


@pytest.mark.parametrize("seed", range(16))
@pytest.mark.parametrize("order", [GREVLEX, LEX])
def test_matches_naive_oracle(seed, order):
    R, F = random_system(seed, ("x", "y"), order)
    assert list(buchberger(F, R).polys) == naive_groebner(F)


@pytest.mark.parametrize("seed", range(16))
@pytest.mark.parametrize("order", [GREVLEX, LEX])
def test_three_variable_bases_pass_pair_criterion(seed, order):
    R, F = random_system(seed, ("x", "y", "z"), order)
    G = list(buchberger(F, R).polys)
    assert all(not naive_reduce(f, G) for f in F)
    for f, g in itertools.combinations(G, 2):
        m = mono_lcm(f.lm, g.lm)
        s = f.mul_term(mono_div(m, f.lm)) - g.mul_term(mono_div(m, g.lm))
        assert not naive_reduce(s, G)
    # reduced: no term of g is divisible by another leading monomial
    for g in G:
        assert g.lc == 1
        for h in G:
            if h is not g:
                assert not any(mono_divides(h.lm, e) for e in g.monomials())


def test_audit_on_example_relations():
    R = PolyRing(PrimeField(3), tuple("xyzw"))
    x, y, z, w = R.gens()
    F = [x * z, x * w, y * z, y * w, x + z]
    audit_basis(F, buchberger(F, R, audit=True))
