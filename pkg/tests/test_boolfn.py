import itertools
import random

import pytest

from helpers import assignments, eval_prop, forget_oracle, rand_prop, truth_table
from ksmc import lang
from ksmc.boolfn import (
    BddStore,
    BoolFnError,
    DuplicateVariableError,
    EnumerationCapError,
    FrozenTableError,
    RenameError,
    StoreMismatchError,
    TableStore,
    UnknownVariableError,
    VarTable,
    mk_store,
)

PQR = ["p", "q", "r"]


def store_pqr(engine="bdd"):
    return mk_store(engine, VarTable(PQR))


@pytest.fixture(params=["bdd", "enum"])
def st(request):
    return store_pqr(request.param)


def test_vartable_basics():
    t = VarTable(["a", "b"])
    assert t.index("a") == 0 and t.index("b") == 1
    assert "a" in t and len(t) == 2
    with pytest.raises(DuplicateVariableError):
        t.add("a")
    with pytest.raises(UnknownVariableError):
        t.index("zz")
    t.freeze()
    with pytest.raises(FrozenTableError):
        t.add("c")
    t.add("@scratch")  # fresh names stay allowed
    assert t.names[-1] == "@scratch"
    assert t.fresh_name("scratch") == "@scratch_2"


def test_constant_algebra(st):
    p = st.var("p")
    assert st.apply("and", p, st.neg(p)) == st.false
    assert st.apply("implies", st.false, p) == st.true
    f = st.apply("or", p, st.var("q"))
    assert st.apply("iff", f, f) == st.true
    assert st.mk(True) == st.true and st.mk("p") == p


def test_cofactor(st):
    p, q, r = (st.var(n) for n in PQR)
    phi = (p | q) & (~p | r)
    assert st.cofactor(phi, "p", True) == r
    assert st.cofactor(q, "p", False) == q
    assert st.cofactor(p, "p", True) == st.true
    with pytest.raises(UnknownVariableError):
        st.cofactor(p, "nope", True)


def test_forgetting_examples(st):
    p, q, r = (st.var(n) for n in PQR)
    phi = (p | q) & (~p | r)
    assert st.forget_exists(["p"], phi) == q | r
    assert st.forget_exists(["q"], phi) == ~p | r
    assert st.forget_exists([], phi) == phi
    assert st.forget_exists(["p"], p) == st.true
    assert st.forget_forall(["p"], p | q) == q
    assert st.forget_forall([], phi) == phi
    assert st.forget_forall(["p"], p) == st.false


def test_single_variable_forgetting_is_cofactor_pair(st):
    rng = random.Random(7)
    for _ in range(50):
        f = lang.to_boolfn(rand_prop(rng, PQR, 3), st)
        for v in PQR:
            assert st.forget_exists([v], f) == st.cofactor(f, v, True) | st.cofactor(f, v, False)


def test_iterated_forgetting_matches_definition(st):
    rng = random.Random(8)
    for _ in range(40):
        f = lang.to_boolfn(rand_prop(rng, PQR, 3), st)
        assert st.forget_exists(["p", "q"], f) == st.forget_exists(
            ["p"], st.forget_exists(["q"], f)
        )


def test_rename(st):
    t = st.table
    t.add("p2")
    p, q = st.var("p"), st.var("q")
    assert st.rename(p & q, {"p": "p2"}) == st.var("p2") & q
    f = p & ~q
    assert st.rename(f, {}) == f
    g = st.rename(f, {"p": "p2"})
    assert st.rename(g, {"p2": "p"}) == f
    with pytest.raises(RenameError):
        st.rename(p & q, {"p": "q"})
    with pytest.raises(RenameError):
        st.rename(p & q, {"p": "r", "q": "r"})


def test_decisions(st):
    p, q = st.var("p"), st.var("q")
    assert st.is_valid(p | ~p)
    assert not st.is_valid(p)
    assert st.is_sat(p) and not st.is_sat(p & ~p)
    assert st.entails(p & q, p | q)
    assert not st.entails(p | q, p & q)
    assert st.equiv_under(p.implies(q), q, q | (p & q))


def test_equiv_under_against_enumeration():
    rng = random.Random(11)
    names = [f"w{i}" for i in range(6)]
    st = mk_store("bdd", VarTable(names))
    for _ in range(1000):
        theta_f = rand_prop(rng, names, 2)
        a_f = rand_prop(rng, names, 2)
        b_f = rand_prop(rng, names, 2)
        got = st.equiv_under(
            lang.to_boolfn(theta_f, st), lang.to_boolfn(a_f, st), lang.to_boolfn(b_f, st)
        )
        want = all(
            (not eval_prop(theta_f, a)) or (eval_prop(a_f, a) == eval_prop(b_f, a))
            for a in assignments(names)
        )
        assert got == want


def test_enumerate_models(st):
    p, q = st.var("p"), st.var("q")
    assert [sorted(m) for m in st.enumerate_models(p.implies(q), ["p", "q"])] == [
        [],
        ["q"],
        ["p", "q"],
    ]
    assert list(st.enumerate_models(st.false, PQR)) == []
    with pytest.raises(EnumerationCapError):
        st.enumerate_models(p, ["p"], cap=0)


def test_model_count_matches_enumeration(st):
    rng = random.Random(12)
    for _ in range(60):
        f_ast = rand_prop(rng, PQR, 3)
        f = lang.to_boolfn(f_ast, st)
        want = sum(eval_prop(f_ast, a) for a in assignments(PQR))
        assert st.model_count(f, PQR) == want
        assert len(list(st.enumerate_models(f, PQR))) == want


def test_forgetting_invariants(st):
    rng = random.Random(13)
    for _ in range(60):
        f = lang.to_boolfn(rand_prop(rng, PQR, 3), st)
        w = rng.sample(PQR, rng.randint(0, 3))
        ex = st.forget_exists(w, f)
        un = st.forget_forall(w, f)
        assert st.entails(f, ex)
        assert st.entails(un, f)
        # result independent of the forgotten variables
        for v in w:
            assert st.cofactor(ex, v, True) == st.cofactor(ex, v, False)
        # dualities, as handle equalities
        assert un == st.neg(st.forget_exists(w, st.neg(f)))
        assert ex == st.neg(st.forget_forall(w, st.neg(f)))


def test_forgetting_commutation(st):
    rng = random.Random(14)
    for _ in range(40):
        f = lang.to_boolfn(rand_prop(rng, PQR, 3), st)
        w1 = rng.sample(PQR, rng.randint(0, 2))
        w2 = rng.sample(PQR, rng.randint(0, 2))
        assert st.forget_exists(w1, st.forget_exists(w2, f)) == st.forget_exists(
            set(w1) | set(w2), f
        )


def test_strongest_consequence_small_exhaustive():
    # every function independent of W entailed by f is implied by exists-W(f)
    rng = random.Random(15)
    names = [f"w{i}" for i in range(5)]
    st = mk_store("bdd", VarTable(names))
    for _ in range(25):
        f_ast = rand_prop(rng, names, 3)
        f = lang.to_boolfn(f_ast, st)
        keep = rng.randint(2, 3)
        w = set(rng.sample(names, len(names) - keep))
        ex = st.forget_exists(sorted(w), f)
        rest = [n for n in names if n not in w]
        f_tt = truth_table(f_ast, names)
        for g_bits in itertools.product([False, True], repeat=2 ** len(rest)):
            def g_at(a):
                idx = 0
                for n in rest:
                    idx = (idx << 1) | (n in a)
                return g_bits[idx]

            alla = list(assignments(names))
            if all((not ft) or g_at(a) for ft, a in zip(f_tt, alla)):
                assert all(
                    (not st.eval_at(ex, a)) or g_at(a) for a in alla
                )


def test_backends_agree_bit_for_bit():
    rng = random.Random(16)
    names = [f"w{i}" for i in range(6)]
    bdd = mk_store("bdd", VarTable(names))
    tab = mk_store("enum", VarTable(names))
    for _ in range(200):
        f_ast = rand_prop(rng, names, 3, quantifiers=True)
        w = rng.sample(names, rng.randint(0, 3))
        fb = lang.to_boolfn(f_ast, bdd)
        ft = lang.to_boolfn(f_ast, tab)
        for a in assignments(names):
            assert bdd.eval_at(fb, a) == tab.eval_at(ft, a)
        eb = bdd.forget_exists(w, fb)
        et = tab.forget_exists(w, ft)
        for a in assignments(names):
            assert bdd.eval_at(eb, a) == tab.eval_at(et, a)
        assert bdd.model_count(fb, names) == tab.model_count(ft, names)
        assert list(bdd.enumerate_models(fb, names)) == list(tab.enumerate_models(ft, names))


def test_forget_oracle_agreement(st):
    rng = random.Random(17)
    for _ in range(40):
        f_ast = rand_prop(rng, PQR, 3)
        w = set(rng.sample(PQR, rng.randint(0, 3)))
        for exist in (True, False):
            got = (
                st.forget_exists(sorted(w), lang.to_boolfn(f_ast, st))
                if exist
                else st.forget_forall(sorted(w), lang.to_boolfn(f_ast, st))
            )
            want = forget_oracle(f_ast, PQR, w, exist)
            assert tuple(st.eval_at(got, a) for a in assignments(PQR)) == want


def test_store_mismatch():
    a = store_pqr()
    b = store_pqr()
    with pytest.raises(StoreMismatchError):
        a.apply("and", a.var("p"), b.var("p"))


def test_from_truth_table(st):
    # row index: first name is the most significant bit
    f = st.from_truth_table(["p", "q"], 0b1000)  # true only at p=1,q=1
    assert f == st.var("p") & st.var("q")
    g = st.from_truth_table(["q", "p"], 0b1000)  # same rows, swapped roles
    assert g == st.var("q") & st.var("p")
    assert st.from_truth_table([], 1) == st.true


def test_enumeration_requires_cover(st):
    p, q = st.var("p"), st.var("q")
    with pytest.raises(BoolFnError):
        list(st.enumerate_models(p & q, ["p"]))
