import pytest
from hypothesis import given
from hypothesis import strategies as st

from uag.algebras import GROUP_SIG
from uag.terms import (
    IDENTITY,
    Signature,
    Substitution,
    VarContext,
    adjoin_constants,
    app,
    apply_subst,
    compose,
    constant_name,
    render,
    sort_of,
    subterm_universe,
    term_depth,
    term_key,
    term_size,
    term_vars,
    var,
    well_sorted,
)


def test_interning_identity():
    assert var("x") is var("x")
    t1 = app("mul", var("x"), var("y"))
    t2 = app("mul", var("x"), var("y"))
    assert t1 is t2
    assert app("mul", var("y"), var("x")) is not t1


def test_render_shapes():
    assert render(var("x")) == "x"
    assert render(app("e")) == "e"
    assert render(app("mul", var("x"), app("inv", var("y")))) == "(mul x (inv y))"


def test_sizes_and_depth():
    t = app("mul", var("x"), app("inv", var("y")))
    assert term_size(var("x")) == 1
    assert term_size(t) == 4
    assert term_depth(var("x")) == 0
    assert term_depth(app("e")) == 1
    assert term_depth(t) == 2


def test_term_vars_first_occurrence_order():
    t = app("mul", var("y"), app("mul", var("x"), var("y")))
    assert term_vars(t) == ["y", "x"]


def test_signature_validation():
    with pytest.raises(ValueError):
        Signature((), ())
    with pytest.raises(ValueError):
        Signature(("g", "g"), ())
    with pytest.raises(ValueError):
        Signature(("g",), [("f", ("h",), "g")])
    sig = GROUP_SIG
    assert sig.op("mul").arity == 2
    assert not sig.has_op("nope")


def test_context_lookup(gctx2):
    assert gctx2.position("y") == 1
    assert gctx2.names == ("x", "y")
    with pytest.raises(ValueError):
        gctx2.position("q")
    with pytest.raises(ValueError):
        VarContext(GROUP_SIG, [("x", "g"), ("x", "g")])


def test_sorting_checks(gctx2):
    t = app("mul", var("x"), app("e"))
    assert sort_of(t, GROUP_SIG, gctx2) == 0
    assert well_sorted(t, GROUP_SIG, gctx2)
    bad = app("mul", var("x"))
    assert not well_sorted(bad, GROUP_SIG, gctx2)


def test_substitution_apply():
    s = Substitution({"x": app("inv", var("y"))})
    t = app("mul", var("x"), var("x"))
    assert apply_subst(s, t) is app("mul", app("inv", var("y")), app("inv", var("y")))
    assert apply_subst(IDENTITY, t) is t
    assert s("x") is app("inv", var("y"))
    assert s("z") is var("z")


simple_terms = st.recursive(
    st.sampled_from([var("x"), var("y"), app("e")]),
    lambda kids: st.builds(lambda a, b: app("mul", a, b), kids, kids)
    | st.builds(lambda a: app("inv", a), kids),
    max_leaves=6,
)

substs = st.dictionaries(
    st.sampled_from(["x", "y"]), simple_terms, min_size=0, max_size=2
).map(Substitution)


@given(substs, substs, simple_terms)
def test_compose_law(s1, s2, t):
    assert apply_subst(compose(s1, s2), t) is apply_subst(s1, apply_subst(s2, t))


@given(simple_terms)
def test_term_key_orders_by_size_first(t):
    k = term_key(t)
    assert k[0] == term_size(t)
    assert k[1] == render(t)


def test_subterm_universe_dedup():
    t = app("mul", var("x"), var("x"))
    u = subterm_universe([t, var("x")])
    assert len(u) == 2


def test_adjoin_constants(z4):
    sig_c, ground = adjoin_constants(GROUP_SIG, z4)
    assert sig_c.has_op("c0") and sig_c.has_op("c3")
    assert constant_name(sig_c, 0, 2) == "c2"
    # one diagram pair per table entry: 4*4 for mul, 4 for inv, 1 for e
    assert len(ground) == 16 + 4 + 1
    with pytest.raises(ValueError):
        bad_sig = Signature(("g",), [("c0", (), "g")])
        adjoin_constants(bad_sig, z4)
