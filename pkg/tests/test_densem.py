"""Denotational semantics: both step disciplines, read-back soundness."""

import random
from fractions import Fraction

import pytest

from probfpc.delay import prefix_eq, probterm, probterm_seq, step_of
from probfpc.densem import (
    STANDARD, STEP_FAITHFUL, FoldV, FunV, InlV, InrV, Interp, NatV, PairV,
    UNIT, ground_eq, is_ground_ty, soundness_check, val_interp,
)
from probfpc.parser import parse_term, parse_ty
from probfpc.syntax import App, Choice, FnT, Lam, NatT, Num, Star, Suc, Var
from probfpc.typecheck import elaborate
from probfpc.corpus import geo_loop, id_hes, unitize, y_comb

from genlib import gen_ground_ty, gen_term, gen_value

NAT = NatT()
HALF = Fraction(1, 2)


def elab(t):
    return elaborate(t)[0]


# --- semantic values ----------------------------------------------------------

def test_val_interp_goldens():
    assert val_interp(Star()) is UNIT
    assert val_interp(Num(3)) == NatV(3)
    assert ground_eq(val_interp(elab(parse_term("(1, inl[Nat + Unit] 2)"))),
                     PairV(NatV(1), InlV(NatV(2))))
    f = val_interp(elab(Lam(NAT, Suc(Var(0)))))
    assert isinstance(f, FunV)
    d = f.fn(NatV(2))
    assert probterm(0, d) == 1
    cell = val_interp(elab(parse_term("fold[(mu X. Nat)] 3")))
    assert isinstance(cell, FoldV)
    assert ground_eq(cell.force(), NatV(3))


def test_ground_eq_and_ground_ty():
    assert ground_eq(NatV(2), NatV(2))
    assert not ground_eq(NatV(2), NatV(3))
    assert not ground_eq(InlV(UNIT), InrV(UNIT))
    assert ground_eq(PairV(NatV(0), UNIT), PairV(NatV(0), UNIT))
    with pytest.raises(TypeError):
        ground_eq(val_interp(elab(Lam(NAT, Var(0)))), NatV(0))
    assert is_ground_ty(parse_ty("Nat + Unit * Nat"))
    assert not is_ground_ty(parse_ty("Nat -> Nat"))
    assert not is_ground_ty(parse_ty("mu X. Nat"))


# --- step discipline ------------------------------------------------------------

def test_standard_mode_applications_are_silent():
    it = Interp(STANDARD)
    d = it.interp(elab(parse_term("(fn x : Nat => suc x) 2")))
    assert probterm_seq(d, 2).values == (1, 1, 1)
    sf = Interp(STEP_FAITHFUL)
    d2 = sf.interp(elab(parse_term("(fn x : Nat => suc x) 2")))
    assert probterm_seq(d2, 2).values == (0, 1, 1)


def test_unfold_fold_costs_one_step_in_both_modes():
    t = elab(parse_term("unfold (fold[(mu X. Nat)] 5)"))
    for mode in (STANDARD, STEP_FAITHFUL):
        d = Interp(mode).interp(t)
        assert probterm_seq(d, 2).values == (0, 1, 1)


def test_recursion_unfolds_in_one_standard_step():
    # the only cost of a recursion round in standard mode is its unfold
    hes = Lam(FnT(NAT, NAT), Lam(NAT, Choice(HALF, Var(0), App(Var(1), Var(0)))))
    y = y_comb(NAT, NAT)
    it = Interp(STANDARD)
    lhs = it.interp(elab(App(App(y, hes), Num(3))))
    rhs = it.interp(elab(App(App(hes, App(y, hes)), Num(3))))
    assert prefix_eq(lhs, step_of(rhs), 8)


def test_standard_terminates_no_later_than_step_faithful():
    for src in (geo_loop(HALF), App(id_hes(HALF), Num(2)),
                unitize(geo_loop(Fraction(3, 4)), NAT)):
        t = elab(src)
        f = probterm_seq(Interp(STANDARD).interp(t), 64)
        g = probterm_seq(Interp(STEP_FAITHFUL).interp(t), 64)
        assert all(a >= b for a, b in zip(f, g))


def test_interp_memoizes_per_term_and_env():
    it = Interp(STANDARD)
    t = elab(parse_term("(fn x : Nat => suc x) 1"))
    assert it.interp(t) is it.interp(t)
    assert prefix_eq(Interp(STANDARD).interp(t), Interp(STANDARD).interp(t), 16)


# --- substitution lemma ----------------------------------------------------------

def test_substitution_lemma_at_observables():
    from probfpc.syntax import subst
    rng = random.Random(71)
    it = Interp(STANDARD)
    for _ in range(200):
        a = gen_ground_ty(rng, 1)
        ty = gen_ground_ty(rng, 2)
        m = gen_term(rng, ty, (a,), 3)
        m2, _ = elaborate(m, (a,))
        v2 = elab(gen_value(rng, a))
        left = it.interp(m2, (val_interp(v2),))
        right = it.interp(subst(m2, v2))
        assert prefix_eq(left, right, 12)


# --- read-back soundness ----------------------------------------------------------

def test_soundness_examples():
    assert soundness_check(Star(), 8)
    assert soundness_check(Choice(HALF, Num(0), Num(1)), 12)
    assert soundness_check(App(id_hes(HALF), Num(2)), 12)
    assert soundness_check(geo_loop(HALF), 12)
    with pytest.raises(TypeError):
        soundness_check(Lam(NAT, Var(0)), 8)


def test_soundness_on_random_first_order_programs():
    rng = random.Random(72)
    for _ in range(200):
        t = gen_term(rng, gen_ground_ty(rng, 2), (), 3)
        assert soundness_check(t, 8)
