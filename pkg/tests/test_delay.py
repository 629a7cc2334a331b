"""Convex delay trees: run, bind, witnesses, and limit comparison."""

import random
from fractions import Fraction

import pytest

from probfpc.dist import Dist, Inl, Inr, dirac
from probfpc.delay import (
    ChoiceCong, DelayThunk, Refl, Seq, StepElim, TermSeq, WitnessShapeError,
    check_witness, dchoice, delay_bind, delay_map, embed_approx, eqlim_upto,
    geo, hesitant, leqlim_upto, node_eq, now, prefix_eq, probterm, probterm0,
    probterm_seq, random_delay, run, run_n, step, step_of, value_part,
    witness_for_run, witness_from_text, witness_to_text, zeta,
)

from genlib import random_witness, witness_steps

HALF = Fraction(1, 2)


def vals_of(d):
    return {el.val: w for w, el in d.node.entries if isinstance(el, Inl)}


# --- constructors and run ---------------------------------------------------

def test_now_and_step_shapes():
    d = now(3)
    assert d.node.entries == ((Fraction(1), Inl(3)),)
    s = step_of(d)
    (w, el), = s.node.entries
    assert w == 1 and isinstance(el, Inr)
    assert el.val.force() is d


def test_run_eliminates_one_layer():
    d = step_of(step_of(now(0)))
    assert probterm_seq(d, 3).values == (0, 0, 1, 1)
    assert prefix_eq(run(d), step_of(now(0)), 4)
    assert prefix_eq(run(now(5)), now(5), 4)


def test_run_worked_example():
    # p to a value after one step, else two steps to another value
    nu = dchoice(Fraction(1, 3), step_of(now(0)), step_of(step_of(now(1))))
    assert probterm_seq(nu, 3).values == (
        Fraction(0), Fraction(1, 3), Fraction(1), Fraction(1))
    assert vals_of(run(nu)) == {0: Fraction(1, 3)}
    assert vals_of(run(run(nu))) == {0: Fraction(1, 3), 1: Fraction(2, 3)}


def test_run_geo_unfolds_one_round():
    for p in (Fraction(1, 3), HALF):
        want = dchoice(p, now(0), dchoice(p, now(1), step_of(geo(p, 2))))
        assert prefix_eq(run(geo(p, 0)), want, 6)


def test_geo_probterm_closed_form():
    for p in (Fraction(1, 3), HALF, Fraction(2, 3)):
        d = geo(p)
        assert probterm(1, d) == 2 * p - p * p
        for n in range(11):
            assert probterm(n, d) == 1 - (1 - p) ** (n + 1)


def test_hesitant_probterm_closed_form():
    d = hesitant(HALF, "a")
    for m in range(8):
        assert probterm(m, d) == 1 - HALF ** m


def test_value_part():
    assert value_part(now("a"), 0) == (1, ((Fraction(1), "a"),))
    mass, vals = value_part(geo(HALF, 0), 1)
    assert mass == Fraction(3, 4)
    assert dict((v, w) for w, v in vals) == {0: HALF, 1: Fraction(1, 4)}
    assert value_part(step_of(now(0)), 0)[0] == 0


def test_probterm_matches_seq_indexing():
    rng = random.Random(31)
    for _ in range(200):
        d = random_delay(rng)
        seq = probterm_seq(d, 6)
        n = rng.randrange(7)
        assert probterm(n, d) == seq[n]


def test_probterm_monotone():
    rng = random.Random(32)
    for _ in range(200):
        seq = probterm_seq(random_delay(rng), 16)
        assert all(a <= b for a, b in zip(seq, seq.values[1:]))


def test_termseq_json_shape():
    seq = probterm_seq(geo(HALF), 2)
    assert seq.to_json() == {"depths": [0, 1, 2],
                             "probterm": ["1/2", "3/4", "7/8"]}
    assert len(seq) == 3 and list(seq) == [HALF, Fraction(3, 4), Fraction(7, 8)]


# --- zeta -------------------------------------------------------------------

def test_zeta_singleton_is_identity():
    t = step_of(now(0)).node.entries[0][1].val
    assert zeta(dirac(t)) is t


def test_zeta_mixes_forced_continuations():
    ta = DelayThunk(lambda: now(0))
    tb = DelayThunk(lambda: now(1))
    mixed = zeta(Dist([(HALF, ta), (HALF, tb)])).force()
    assert vals_of(mixed) == {0: HALF, 1: HALF}


# --- bind -------------------------------------------------------------------

def test_bind_left_identity():
    f = {3: step_of(now(4))}.__getitem__
    assert node_eq(delay_bind(now(3), f), f(3))


def test_bind_right_identity():
    rng = random.Random(33)
    for _ in range(200):
        d = random_delay(rng)
        assert prefix_eq(delay_bind(d, now), d, 8)


def test_bind_associativity():
    rng = random.Random(34)
    fs = {a: random_delay(random.Random(400 + a), 3) for a in range(4)}
    gs = {a: random_delay(random.Random(500 + a), 3) for a in range(4)}
    f, g = fs.__getitem__, gs.__getitem__
    for _ in range(200):
        d = random_delay(rng)
        assert prefix_eq(delay_bind(delay_bind(d, f), g),
                         delay_bind(d, lambda a: delay_bind(f(a), g)), 10)


def test_bind_threads_steps_before_the_continuation():
    d = delay_bind(step_of(step_of(now(1))), lambda n: step_of(now(n + 1)))
    assert probterm_seq(d, 4).values == (0, 0, 0, 1, 1)
    assert vals_of(run_n(d, 3)) == {2: Fraction(1)}


def test_delay_map_is_bind_with_now():
    d = geo(HALF)
    assert prefix_eq(delay_map(d, lambda n: n * 2),
                     delay_bind(d, lambda n: now(n * 2)), 6)


def test_bind_preserves_sharing():
    # an unbounded walk whose positions are shared thunks: width under run
    # grows linearly; bind must not sever the sharing and make it exponential
    thunks = {}

    def tail(k):
        t = thunks.get(k)
        if t is None:
            t = DelayThunk(lambda k=k: body(k))
            thunks[k] = t
        return t

    def body(k):
        if k == 0:
            return now(0)
        return dchoice(HALF, step(tail(k - 1)), step(tail(k + 1)))

    e = delay_bind(body(2), lambda a: now(a + 1))
    cur = e
    for _ in range(40):
        assert len(cur.node.entries) <= 120
        cur = run(cur)
    assert probterm0(cur) > HALF


# --- witnesses --------------------------------------------------------------

def test_check_witness_choice_cong_example():
    inner = step_of(step_of(now(1)))
    nu = dchoice(Fraction(1, 3), step_of(now(0)), inner)
    red = check_witness(ChoiceCong(Fraction(1, 3), StepElim(), Refl()), nu)
    assert node_eq(red, dchoice(Fraction(1, 3), now(0), inner))


def test_check_witness_shape_errors():
    with pytest.raises(WitnessShapeError):
        check_witness(StepElim(), now(0))
    with pytest.raises(WitnessShapeError):
        check_witness(StepElim(), dchoice(HALF, step_of(now(0)), now(1)))
    with pytest.raises(WitnessShapeError):
        check_witness(ChoiceCong(Fraction(1, 5), Refl(), Refl()),
                      dchoice(HALF, now(0), now(1)))


def test_witness_for_run_replays_to_run():
    rng = random.Random(35)
    for _ in range(200):
        d = random_delay(rng)
        n = rng.randrange(9)
        red = check_witness(witness_for_run(d, n), d)
        assert node_eq(red, run_n(d, n))
        assert prefix_eq(red, run_n(d, n), 8)


def test_witness_soundness_bounds_probterm():
    # a reduct delivers no later than the source and at most steps(w) earlier
    rng = random.Random(36)
    for _ in range(200):
        d = random_delay(rng)
        w = random_witness(rng, d)
        red = check_witness(w, d)
        k = witness_steps(w)
        for n in range(9):
            assert probterm(n, d) <= probterm(n, red)
            assert probterm(n, red) <= probterm(n + k, d)


def test_confluence_of_partial_runs():
    # two different run amounts rejoin once each is completed to the deeper one
    rng = random.Random(37)
    for _ in range(200):
        d = random_delay(rng)
        n1, n2 = rng.randrange(5), rng.randrange(5)
        r1 = check_witness(witness_for_run(d, n1), d)
        r2 = check_witness(witness_for_run(d, n2), d)
        top = max(n1, n2)
        assert prefix_eq(run_n(r1, top - n1), run_n(r2, top - n2), 8)


def test_bind_preserves_reduction():
    rng = random.Random(38)
    fs = {a: random_delay(random.Random(600 + a), 3) for a in range(4)}
    f = fs.__getitem__
    for _ in range(200):
        d = random_delay(rng)
        w = random_witness(rng, d)
        red = check_witness(w, d)
        k = witness_steps(w)
        for n in range(9):
            assert probterm(n, delay_bind(d, f)) <= probterm(n, delay_bind(red, f))
            assert probterm(n, delay_bind(red, f)) <= probterm(n + k, delay_bind(d, f))


def test_witness_text_round_trip():
    assert witness_to_text(Refl()) == "R"
    assert witness_to_text(Seq(StepElim(), Refl())) == "(S;R)"
    assert witness_to_text(ChoiceCong(HALF, StepElim(), Refl())) == "C(1/2,S,R)"
    assert isinstance(witness_from_text(" ( S ; R ) "), Seq)
    rng = random.Random(39)
    for _ in range(200):
        d = random_delay(rng)
        w = random_witness(rng, d)
        w2 = witness_from_text(witness_to_text(w))
        assert witness_to_text(w2) == witness_to_text(w)
        assert node_eq(check_witness(w2, d), check_witness(w, d))
    with pytest.raises(ValueError):
        witness_from_text("(S;R)X")
    with pytest.raises(ValueError):
        witness_from_text("Q")


# --- approximate embedding and limit comparison ------------------------------

def test_embed_approx():
    assert embed_approx(now("a"), [(Fraction(1), "a")], 4, 0) == 0
    assert embed_approx(hesitant(HALF, "a"), [(Fraction(1), "a")],
                        8, Fraction(1, 16)) == 4
    assert embed_approx(now("b"), [(Fraction(1), "a")], 8, Fraction(1, 16)) is None
    assert embed_approx(now("b"), [(Fraction(1), "a")], 8, 1) == 0


def test_leqlim_eqlim_basics():
    rng = random.Random(40)
    for _ in range(200):
        f = probterm_seq(random_delay(rng), 12)
        assert leqlim_upto(f, f, 0)
        assert eqlim_upto(f, f, 0)
        g = probterm_seq(run_n(random_delay(rng), 1), 12)
        e = Fraction(rng.randrange(0, 5), 16)
        assert leqlim_upto(f, g, e) == (max(f) <= max(g) + e)
        assert eqlim_upto(f, g, e) == eqlim_upto(g, f, e)


def test_leqlim_transitivity_sums_slack():
    rng = random.Random(41)
    for _ in range(200):
        d = random_delay(rng)
        f = probterm_seq(d, 12)
        g = probterm_seq(run_n(d, 2), 12)
        h = probterm_seq(run_n(d, 4), 12)
        e1 = Fraction(rng.randrange(0, 4), 32)
        e2 = Fraction(rng.randrange(0, 4), 32)
        assert leqlim_upto(f, g, e1) and leqlim_upto(g, h, e2)
        assert leqlim_upto(f, h, e1 + e2)


def test_leqlim_closed_under_convex_combination():
    # termination sequences are monotone, so their max sits at the end and
    # pointwise mixing preserves a shared verdict at the same slack
    rng = random.Random(42)
    for _ in range(200):
        d1, d2 = random_delay(rng), random_delay(rng)
        f1, f2 = probterm_seq(d1, 12), probterm_seq(d2, 12)
        g1, g2 = probterm_seq(run_n(d1, 3), 12), probterm_seq(run_n(d2, 3), 12)
        e = Fraction(rng.randrange(0, 4), 32)
        assert leqlim_upto(f1, g1, e) and leqlim_upto(f2, g2, e)
        p = Fraction(rng.randrange(1, 8), 8)
        mix = lambda x, y: TermSeq([p * a + (1 - p) * b for a, b in zip(x, y)])
        assert leqlim_upto(mix(f1, f2), mix(g1, g2), e)


# --- canonical comparison ----------------------------------------------------

def test_prefix_eq_detects_differences():
    rng = random.Random(43)
    for _ in range(200):
        d = random_delay(rng)
        assert prefix_eq(d, d, 8)
    assert not prefix_eq(now(0), now(1), 4)
    assert not prefix_eq(step_of(now(0)), now(0), 4)
    assert prefix_eq(dchoice(HALF, now(0), now(1)),
                     dchoice(HALF, now(1), now(0)), 4)


def test_node_eq_compares_pendings_by_identity():
    d = step_of(now(0))
    assert node_eq(d, d)
    assert not node_eq(step_of(now(0)), step_of(now(0)))
    assert node_eq(now(7), now(7))
