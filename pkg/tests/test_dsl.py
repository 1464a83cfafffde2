from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from tighthilb.dsl import (
    JACOBIAN,
    KEYWORDS,
    Analyze,
    Assertion,
    BinOp,
    IdealDef,
    MapDef,
    Neg,
    Num,
    Pow,
    RingDef,
    Script,
    SubringDef,
    Var,
    build,
    format_expr,
    format_script,
    parse,
    tokenize,
)
from tighthilb.errors import (
    ArityError,
    CharacteristicMismatch,
    DslSyntaxError,
    NotPrime,
    UndefinedIdentifier,
)

SAMPLES = Path(__file__).resolve().parent.parent / "samples"

EX52 = """\
ring R = poly(F3, [x, y, z, w]) / ideal(x*z, x*w, y*z, y*w);
ideal Q = (x + z, y + w) in R;
analyze Q --depth 8 --emax 3 --test-element x + z;
"""


def test_example_script_ast():
    script = parse(EX52)
    ring, ideal, job = script.statements
    assert ring == RingDef("R", 3, ("x", "y", "z", "w"), tuple(
        BinOp("*", Var(a), Var(b)) for a, b in ["xz", "xw", "yz", "yw"]))
    assert ideal == IdealDef("Q", (BinOp("+", Var("x"), Var("z")), BinOp("+", Var("y"), Var("w"))), "R")
    assert job == Analyze("Q", depth=8, emax=3, test_element=BinOp("+", Var("x"), Var("z")))
    assert (ideal.span.line, ideal.span.col) == (2, 1)


@pytest.mark.parametrize("source, error, where", [
    ("ideal Q = (x) in R;", UndefinedIdentifier, (1, 1)),
    ("ring R = poly(F6, [x]);", NotPrime, (1, 15)),
    ("ring R = poly(F3, [x]);\nring S = poly(F5, [y]);", CharacteristicMismatch, (2, 1)),
    ("ring R = poly(F3, [x]) / ideal(x*q);", UndefinedIdentifier, (1, 34)),
    ("ring R = poly(F3, [x]);\nideal Q = (x) in R\nanalyze Q;", DslSyntaxError, (3, 1)),
    ("ring R = poly(F3, [x]);\nideal Q = (x $ 1) in R;", DslSyntaxError, (2, 14)),
    ("ring R = poly(F3, [x]);\nring S = poly(F3, [y]);\nmap f : R -> S = [y, y];", ArityError, (3, 1)),
    ("ring R = poly(F3, [x]);\nanalyze R;", UndefinedIdentifier, (2, 1)),
    ("ring R = poly(F3, [x]);\nideal Q = (x) in R;\nanalyze Q --bogus 3;", DslSyntaxError, (3, 11)),
])
def test_errors_carry_positions(source, error, where):
    with pytest.raises(error) as info:
        parse(source)
    assert (info.value.line, info.value.col) == where
    assert info.value.to_record()["error"] == error.code


def test_tokens_and_comments():
    kinds = [t.kind for t in tokenize("# note\nanalyze Q --out out.json; -> 12")]
    assert kinds == ["ident", "ident", "option", "path", "punct", "arrow", "number", "eof"]


def test_jacobian_strategy_and_paths():
    src = 'ring R = poly(F5, [x, y, z]) / ideal(x*y - z^2);\nideal Q = (x, y) in R;\n' \
          'analyze Q --test-element jacobian --out "dir/report one.json" --csv t.csv;'
    job = parse(src).statements[-1]
    assert job.test_element == JACOBIAN
    assert job.out == "dir/report one.json" and job.csv == "t.csv"


@pytest.mark.parametrize("name", ["two_planes.th", "quartic_curve.th", "regular.th"])
def test_bundled_scripts_build(name):
    script = parse((SAMPLES / name).read_text())
    env = build(script)
    assert env.jobs and env.ideals
    assert parse(format_script(script)) == script


def test_monomial_subring_build():
    env = build(parse((SAMPLES / "quartic_curve.th").read_text()))
    T = env.rings["T"]
    assert T.d == 2 and len(T.J.polys) == 4
    assert env.maps["phi"].target is env.rings["S"]


# -- round trip on random ASTs ---------------------------------------------------

names = st.from_regex(r"[A-Za-z_][A-Za-z0-9_]{0,4}", fullmatch=True).filter(
    lambda s: s not in KEYWORDS and not (s[0] == "F" and s[1:].isdigit())
)
exprs = st.recursive(
    st.one_of(st.builds(Num, st.integers(0, 50)), st.builds(Var, names)),
    lambda inner: st.one_of(
        st.builds(Neg, inner),
        st.builds(BinOp, st.sampled_from("+-*"), inner, inner),
        st.builds(Pow, inner, st.integers(0, 9)),
    ),
    max_leaves=8,
)
expr_tuple = st.lists(exprs, max_size=3).map(tuple)
name_tuple = st.lists(names, max_size=3).map(tuple)
primes = st.sampled_from([2, 3, 5, 7, 101])
paths = st.text(min_size=1, max_size=12)

statements = st.one_of(
    st.builds(RingDef, names, primes, name_tuple, expr_tuple),
    st.builds(SubringDef, names, primes, name_tuple, expr_tuple),
    st.builds(IdealDef, names, expr_tuple, names),
    st.builds(MapDef, names, names, names, expr_tuple),
    st.builds(Assertion, st.sampled_from(["standard_sop", "test_element_generators"]), names),
    st.builds(Assertion, st.just("ass_primes"), names, name_tuple),
    st.builds(
        Analyze,
        names,
        st.none() | st.integers(0, 99),
        st.none() | st.integers(0, 9),
        st.none() | st.integers(1, 9),
        st.none() | st.just(JACOBIAN) | exprs,
        st.none() | names,
        st.none() | paths,
        st.none() | paths,
    ),
)
scripts = st.lists(statements, max_size=6).map(lambda s: Script(tuple(s)))


@settings(max_examples=300, deadline=None)
@given(script=scripts)
def test_parse_print_round_trip(script):
    assert parse(format_script(script), resolve=False) == script


@settings(max_examples=300, deadline=None)
@given(e=exprs)
def test_expression_round_trip(e):
    text = format_expr(e)
    parsed = parse(f"ideal Q = ({text}) in R;", resolve=False).statements[0].generators[0]
    assert parsed == e
