"""Core term operations: numerals, alpha-equivalence, substitution."""

import hypothesis as hyp
import pytest
from hypothesis import strategies as st

from genterms import FREEPOOL, any_term, pure_term, rng
from storlab.terms import (
    App,
    Const,
    Family,
    Lam,
    Var,
    alpha_eq,
    app,
    app_power,
    church_value,
    free_names,
    fresh_name,
    is_closed_pure,
    mk_church,
    spine,
    substitute,
    substitute_many,
)

names = st.sampled_from(("p", "q", "r", "s", "t"))
leaves = st.one_of(
    st.builds(Var, names),
    st.integers(0, 3).map(mk_church),
    st.builds(lambda lvl: Const(Family.LOWER, lvl), st.integers(0, 2)),
    st.builds(lambda lvl: Const(Family.UPPER, lvl), st.integers(0, 2)),
)
terms = st.recursive(
    leaves,
    lambda sub: st.one_of(
        st.builds(Lam, names, sub),
        st.builds(App, sub, sub),
        st.builds(lambda a, b: Const(Family.UPPER, 1, (a, b)), sub, sub),
    ),
    max_leaves=12,
)


def test_mk_church_small():
    assert mk_church(0) == Lam("f", Lam("x", Var("x")))
    assert mk_church(2) == Lam("f", Lam("x", App(Var("f"), App(Var("f"), Var("x")))))
    assert church_value(mk_church(5)) == 5


def count_apps(t):
    match t:
        case App(fn, arg):
            return 1 + count_apps(fn) + count_apps(arg)
        case Lam(_, body):
            return count_apps(body)
        case _:
            return 0


def test_mk_church_application_count_and_closed():
    for n in range(10):
        numeral = mk_church(n)
        assert count_apps(numeral) == n
        assert free_names(numeral) == frozenset()
        assert is_closed_pure(numeral)


def test_church_value_rejects_non_numerals():
    assert church_value(Var("p")) is None
    assert church_value(Lam("f", Lam("x", Var("f")))) is None
    assert church_value(mk_church(0)) == 0


def test_alpha_eq_examples():
    assert alpha_eq(Lam("x", Var("x")), Lam("y", Var("y")))
    assert not alpha_eq(Lam("x", Var("y")), Lam("x", Var("z")))
    assert alpha_eq(Const(Family.LOWER, 2), Const(Family.LOWER, 2))
    assert not alpha_eq(Const(Family.LOWER, 2), Const(Family.UPPER, 2))


def test_alpha_eq_sees_payloads():
    a = Const(Family.LOWER, 1, (Var("p"), Lam("s", Var("s"))))
    b = Const(Family.LOWER, 1, (Var("p"), Lam("t", Var("t"))))
    c = Const(Family.LOWER, 1, (Var("p"), Lam("t", Var("p"))))
    assert alpha_eq(a, b)
    assert not alpha_eq(a, c)
    assert not alpha_eq(a, Const(Family.LOWER, 2, a.payload))


def test_alpha_eq_binder_payload_scope():
    # payload occurrences of a bound name must track the binder
    t = Lam("s", Const(Family.UPPER, 0, (Var("s"), Var("p"))))
    u = Lam("t", Const(Family.UPPER, 0, (Var("t"), Var("p"))))
    w = Lam("t", Const(Family.UPPER, 0, (Var("s"), Var("p"))))
    assert alpha_eq(t, u)
    assert not alpha_eq(t, w)


@hyp.given(terms)
def test_alpha_eq_reflexive(t):
    assert alpha_eq(t, t)


@hyp.given(terms, terms)
def test_alpha_eq_symmetric(t, u):
    assert alpha_eq(t, u) == alpha_eq(u, t)


def rename_binders(t, suffix):
    match t:
        case Var(name):
            return Var(name)
        case Lam(name, body):
            fresh = name + suffix
            renamed = substitute(rename_binders(body, suffix), name, Var(fresh))
            return Lam(fresh, renamed)
        case App(fn, arg):
            return App(rename_binders(fn, suffix), rename_binders(arg, suffix))
        case Const(family, level, payload):
            return Const(family, level, tuple(rename_binders(p, suffix) for p in payload))


def test_alpha_eq_transitive_on_renamed_chain():
    r = rng(11)
    for _ in range(200):
        t = any_term(r, 4)
        u = rename_binders(t, "0")
        w = rename_binders(u, "1")
        assert alpha_eq(t, u) and alpha_eq(u, w) and alpha_eq(t, w)


def test_substitute_avoids_capture():
    result = substitute(Lam("y", Var("x")), "x", Var("y"))
    assert isinstance(result, Lam)
    assert result.binder != "y"
    assert result.body == Var("y")
    assert alpha_eq(result, Lam("z", Var("y")))


def test_substitute_rewrites_payloads():
    stored = Const(Family.LOWER, 1, (Var("v"), Var("w")))
    assert substitute(stored, "w", mk_church(0)) == Const(
        Family.LOWER, 1, (Var("v"), mk_church(0))
    )


def test_substitute_self_application():
    identity = Lam("y", Var("y"))
    assert substitute(App(Var("x"), Var("x")), "x", identity) == App(identity, identity)


def test_substitute_many_is_simultaneous():
    swap = {"p": Var("q"), "q": Var("p")}
    assert substitute_many(App(Var("p"), Var("q")), swap) == App(Var("q"), Var("p"))


def test_substitute_untouched_when_name_not_free():
    t = Lam("x", App(Var("x"), Var("q")))
    assert substitute(t, "p", mk_church(7)) == t


def test_free_names_examples():
    assert free_names(Lam("x", App(Var("x"), Var("y")))) == frozenset({"y"})
    stored = Const(Family.LOWER, 1, (Var("y"), Lam("z", Var("z"))))
    assert free_names(stored) == frozenset({"y"})
    assert free_names(mk_church(3)) == frozenset()


def test_is_closed_pure_examples():
    assert is_closed_pure(mk_church(4))
    assert not is_closed_pure(Const(Family.LOWER, 0))
    assert not is_closed_pure(Lam("f", App(Var("f"), Var("y"))))


def test_const_validation():
    with pytest.raises(ValueError):
        Const(Family.LOWER, -1)
    with pytest.raises(ValueError):
        Const(Family.UPPER, 1, (Var("a"),))
    assert Const(Family.UPPER, 3).is_seed
    assert not Const(Family.UPPER, 3, (Var("a"), Var("b"))).is_seed


def test_app_spine_helpers():
    t = app(Var("f"), Var("a"), Var("b"))
    head, args = spine(t)
    assert head == Var("f") and args == [Var("a"), Var("b")]
    s1 = Var("S")
    assert app_power(s1, 3, mk_church(0)) == App(s1, App(s1, App(s1, mk_church(0))))
    assert app_power(s1, 0, mk_church(0)) == mk_church(0)


def test_fresh_name_avoids_collisions():
    got = fresh_name("x", {"x", "x1", "x2"})
    assert got not in {"x", "x1", "x2"}


@hyp.given(terms, names, terms)
def test_substitution_free_name_bookkeeping(t, x, u):
    result = substitute(t, x, u)
    allowed = (free_names(t) - {x}) | (free_names(u) if x in free_names(t) else set())
    assert free_names(result) <= allowed


def test_substitution_never_captures_generated():
    r = rng(23)
    for _ in range(300):
        t = pure_term(r, 4)
        x = r.choice(FREEPOOL)
        shield = Lam("s", t)
        # pushing Var("s") under the shield must rename the binder, never bind it
        result = substitute(shield, x, Var("s"))
        if x in free_names(t):
            assert isinstance(result, Lam)
            assert result.binder != "s"
            assert "s" in free_names(result)
        else:
            assert result == shield
