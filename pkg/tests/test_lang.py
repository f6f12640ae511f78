import random

import pytest

from helpers import rand_ast
from ksmc import lang
from ksmc.kstruct import InconsistentTheoryError
from ksmc.lang import (
    And,
    Announce,
    Atom,
    Common,
    Exists,
    Forall,
    Fragment,
    Iff,
    Implies,
    Knows,
    LangError,
    Not,
    Or,
    classify,
    parse_formula,
    parse_model,
    print_formula,
)

p, q, r = Atom("p"), Atom("q"), Atom("r")


def test_parse_basics():
    assert parse_formula("K[A] (p -> q)") == Knows("A", Implies(p, q))
    assert parse_formula("E{p} ((p|q) & (~p|r))") == Exists(
        ("p",), And(Or(p, q), Or(Not(p), r))
    )
    phi = And(p, Not(Common(("A", "B"), p)))
    assert parse_formula("[p & ~C[A,B] p] ~(p & ~C[A,B] p)") == Announce(phi, Not(phi))
    assert parse_formula("true & ~false") == And(lang.TRUE, Not(lang.FALSE))


def test_precedence():
    assert parse_formula("~p & q") == And(Not(p), q)
    assert parse_formula("p -> q -> r") == Implies(p, Implies(q, r))
    assert parse_formula("p | q & r") == Or(p, And(q, r))
    assert parse_formula("p <-> q -> r") == Iff(p, Implies(q, r))
    assert parse_formula("K[A] p & q") == And(Knows("A", p), q)
    assert parse_formula("A{p q} p | q") == Or(Forall(("p", "q"), p), q)


def test_numeric_agents():
    assert parse_formula("K[1] q") == Knows("1", q)
    assert parse_formula("C[1,2] p") == Common(("1", "2"), p)


def test_parse_errors():
    with pytest.raises(LangError):
        parse_formula("p &")
    with pytest.raises(LangError):
        parse_formula("C[] p")
    with pytest.raises(LangError):
        parse_formula("E{p p} q")
    with pytest.raises(LangError):
        parse_formula("E{p} K[A] p")  # quantifier over a modal subtree
    err = None
    try:
        parse_formula("p &\n& q")
    except LangError as e:
        err = e
    assert err is not None and err.line == 2 and err.col is not None
    with pytest.raises(LangError):
        parse_formula("p q")


def test_print_and_reparse_examples():
    assert print_formula(p) == "p"
    assert print_formula(Knows("A", p)) == "K[A] p"
    assert print_formula(And(p, And(q, r))) == "p & (q & r)"
    assert print_formula(Implies(Implies(p, q), r)) == "(p -> q) -> r"


def test_roundtrip_fuzz():
    rng = random.Random(42)
    for _ in range(1000):
        f = rand_ast(rng, 6)
        assert parse_formula(print_formula(f)) == f


def test_classify():
    assert classify(parse_formula("K[1] K[2] p | K[1] K[2] ~p")) == Fragment.POSITIVE_K
    assert classify(parse_formula("K[1] K[2] p | K[1] ~K[2] p")) == Fragment.FULL_EPISTEMIC
    assert classify(parse_formula("p & ~q")) == Fragment.PROPOSITIONAL
    assert classify(parse_formula("E{p} (p & q)")) == Fragment.PROPOSITIONAL
    assert classify(parse_formula("C[1,2] p")) == Fragment.FULL_EPISTEMIC
    assert classify(parse_formula("[p] q")) == Fragment.PAL
    # implication antecedents count as negated positions
    assert classify(parse_formula("K[1] p -> q")) == Fragment.FULL_EPISTEMIC
    assert classify(parse_formula("p -> K[1] q")) == Fragment.POSITIVE_K


def test_classify_not_monotone_under_modal_negation():
    rng = random.Random(43)
    for _ in range(200):
        f = rand_ast(rng, 4)
        if classify(Not(f)) == Fragment.POSITIVE_K:
            assert lang.is_propositional(f)


def test_fragment_order():
    assert (
        Fragment.PROPOSITIONAL
        < Fragment.POSITIVE_K
        < Fragment.FULL_EPISTEMIC
        < Fragment.PAL
    )


def test_parse_model_f0():
    F = parse_model("vars p, q\nagent 1 obs p\nagent 2 obs q\naxiom p -> q\n")
    assert F.variables == ("p", "q")
    assert F.agents == ("1", "2")
    assert F.observables("1") == {"p"}
    assert [sorted(s) for s in F.states()] == [[], ["q"], ["p", "q"]]


def test_parse_model_empty_axioms():
    F = parse_model("vars a, b, c\nagent x obs a\n")
    assert F.state_count() == 8


def test_parse_model_obs_empty():
    F = parse_model("vars a\nagent x obs\n")
    assert F.observables("x") == frozenset()


def test_parse_model_errors():
    with pytest.raises(InconsistentTheoryError):
        parse_model("vars p\naxiom p & ~p\n")
    with pytest.raises(LangError):
        parse_model("vars p\naxiom p -> q\n")
    with pytest.raises(LangError):
        parse_model("vars p\naxiom K[1] p\n")
    with pytest.raises(LangError):
        parse_model("vars p\nagent i obs q\n")
    with pytest.raises(LangError):
        parse_model("vars p, p\n")
    with pytest.raises(LangError):
        parse_model("vars p\nagent i obs p\nagent i obs\n")
    with pytest.raises(LangError):
        parse_model("whatever p\n")


def test_parse_model_comments_and_var_order():
    text = "# header\nvars p, q # trailing\nagent 1 obs p\naxiom p -> q\n"
    F = parse_model(text)
    assert F.variables == ("p", "q")
    G = parse_model(text, var_order=["q", "p"])
    assert G.variables == ("q", "p")
    with pytest.raises(LangError):
        parse_model(text, var_order=["q"])


def test_formula_from_boolfn_roundtrip():
    rng = random.Random(44)
    from helpers import assignments, eval_prop, rand_prop
    from ksmc.boolfn import VarTable, mk_store

    names = ["p", "q", "r"]
    for engine in ("bdd", "enum"):
        st = mk_store(engine, VarTable(names))
        for _ in range(50):
            f_ast = rand_prop(rng, names, 3)
            f = lang.to_boolfn(f_ast, st)
            dumped = lang.formula_from_boolfn(f)
            for a in assignments(names):
                assert eval_prop(dumped, a) == st.eval_at(f, a)
