"""The example programs: recursion combinator, hesitant identity, fair coin
from a biased one, lazy random walks, and the lazy-list vocabulary they
share.

Everything is built by parsing concrete syntax, so the corpus doubles as a
parser workout and stays printable.  `corpus(name)` accepts the catalogue
names listed in CATALOGUE, with optional arguments in parentheses, e.g.
"geo", "geo(2/3)", "id_hes(15/16,Nat)", "randw(4)".
"""

from fractions import Fraction

from .parser import parse_term, parse_ty
from .rational import as_prob, parse_rat
from .syntax import (
    Ty, UnitT, NatT, FnT, MuT, TVarT, mu_unfold, render_ty, BOOL_T,
    Term, App, Num, Star, Lam, Var,
)

__all__ = [
    "CATALOGUE", "corpus", "y_comb", "id_hes", "fair_from", "geo_loop",
    "geo_chain", "diverge_term", "omega_nat",
    "LAZY_LIST", "nil_term", "cons_term", "head_term", "tail_term",
    "everysnd_term", "randw_fn", "randw2_fn", "force_k", "nth_head",
    "unitize",
]


def _pty(ty: Ty) -> str:
    """Self-delimiting rendering for splicing into source templates."""
    return "(%s)" % render_ty(ty)


def y_comb(a: Ty, b: Ty) -> Term:
    """Recursion combinator at a -> b, encoded through the recursive type
    mu X. X -> a -> b.  Applying the result of (Y f) costs a fixed prologue
    of delay steps per recursion round."""
    s, t = _pty(a), _pty(b)
    r = _pty(MuT(FnT(TVarT(0), FnT(a, b))))
    ef = ("(fn y : %s => let u = unfold y in f (fn x : %s => u y x))"
          % (r, s))
    return parse_term(
        "fn f : (%s -> %s) -> %s -> %s => fn z : %s => %s (fold[%s] %s) z"
        % (s, t, s, t, s, ef, r, ef))


def id_hes(p, ty: Ty = None) -> Term:
    """Hesitant identity: each round, return the argument with probability p
    or hand it to the next round."""
    ty = ty if ty is not None else NatT()
    p = as_prob(p)
    s = _pty(ty)
    helper = parse_term("fn f : %s -> %s => fn x : %s => choice %s x (f x)"
                        % (s, s, s, p))
    return Lam(ty, App(App(y_comb(ty, ty), helper), Var(0)))


def fair_from(p) -> Term:
    """Fair coin from a biased one: draw twice, output the first draw when
    they differ, retry when they agree.  The two case analyses cost the same
    on every path, so true and false stay exactly balanced depth by depth.
    Type Unit -> Unit + Unit."""
    p = as_prob(p)
    helper = parse_term(
        "fn g : Unit -> Unit + Unit => fn z : Unit =>"
        " let x = choice %s true false in"
        " let y = choice %s true false in"
        " if x then (if y then g z else x) else (if y then x else g z)"
        % (p, p))
    return App(y_comb(UnitT(), BOOL_T), helper)


def geo_loop(p) -> Term:
    """Geometric process as a lean self-application loop: three delay steps
    per round, first candidate value after two.  Type Nat."""
    p = as_prob(p)
    r = "(mu X. X -> Nat -> Nat)"
    w = "(fn w : %s => fn n : Nat => choice %s n ((unfold w) w (suc n)))" % (r, p)
    return parse_term("(%s (fold[%s] %s)) 0" % (w, r, w))


def omega_nat() -> Term:
    """Divergence at Nat in two steps per round."""
    r = "(mu X. X -> Nat)"
    w = "(fn w : %s => (unfold w) w)" % r
    return parse_term("%s (fold[%s] %s)" % (w, r, w))


def geo_chain(p, levels: int) -> Term:
    """Unrolled geometric chain: exactly one delay step between consecutive
    candidate values, so probterm(n) = 1 - (1-p)^(n+1) for n < levels; the
    tail past the last level diverges."""
    p = as_prob(p)
    t = omega_nat()
    for k in range(levels - 1, -1, -1):
        # let u = * in <next> costs exactly one step
        t = parse_term("choice %s %d (let u = * in next)" % (p, k),
                       defs={"next": t})
    return t


def diverge_term() -> Term:
    """(Y (fn f => fn z => f z)) * at Unit: never delivers."""
    loop = parse_term("fn f : Unit -> Unit => fn z : Unit => f z")
    return App(App(y_comb(UnitT(), UnitT()), loop), Star())


# --- lazy lists ---------------------------------------------------------------

LAZY_LIST = parse_ty("mu X. Unit + Nat * (Unit -> X)")

_LL = _pty(LAZY_LIST)
_LLU = _pty(mu_unfold(LAZY_LIST))

_NIL = "fold[%s] inl[%s] *" % (_LL, _LLU)
_CONS = "(fn n : Nat => fn f : Unit -> %s => fold[%s] inr[%s] (n, f))" \
    % (_LL, _LL, _LLU)
_HEAD = ("(fn l : %s => case unfold l of"
         " { inl u => inr[Nat + Unit] * ; inr c => inl[Nat + Unit] fst c })"
         % _LL)
_TAIL = ("(fn l : %s => case unfold l of { inl u => %s ; inr c => snd c * })"
         % (_LL, _NIL))


def nil_term() -> Term:
    return parse_term(_NIL)


def cons_term() -> Term:
    return parse_term(_CONS)


def head_term() -> Term:
    return parse_term(_HEAD)


def tail_term() -> Term:
    return parse_term(_TAIL)


def everysnd_term() -> Term:
    """Every second element of a lazy list, lazily."""
    helper = parse_term(
        "fn g : %s -> %s => fn l : %s =>"
        " case unfold l of"
        " { inl u => %s"
        " ; inr c => %s (fst c) (fn y : Unit => g (%s (snd c *))) }"
        % (_LL, _LL, _LL, _NIL, _CONS, _TAIL))
    return App(y_comb(LAZY_LIST, LAZY_LIST), helper)


def randw_fn() -> Term:
    """Lazy symmetric random walk: list the position, stop at zero, else
    step down or up with probability 1/2 each."""
    helper = parse_term(
        "fn g : Nat -> %s => fn n : Nat =>"
        " %s n (fn y : Unit =>"
        " ifz n then %s else (choice 1/2 (g (pred n)) (g (suc n))))"
        % (_LL, _CONS, _NIL))
    return App(y_comb(NatT(), LAZY_LIST), helper)


def randw2_fn() -> Term:
    """Lazy random walk with the two-step increments: stay with probability
    1/2, else move by two either way."""
    helper = parse_term(
        "fn g : Nat -> %s => fn n : Nat =>"
        " %s n (fn y : Unit =>"
        " ifz n then %s else"
        " (choice 1/2 (g n) (choice 1/2 (g (pred (pred n))) (g (suc (suc n))))))"
        % (_LL, _CONS, _NIL))
    return App(y_comb(NatT(), LAZY_LIST), helper)


def force_k(k: int) -> Term:
    """Unit-valued observer forcing the first k cells of a lazy list."""
    t = parse_term("fn l : %s => *" % _LL)
    for _ in range(k):
        t = parse_term(
            "fn l : %s => case unfold l of { inl u => * ; inr c => rest (snd c *) }"
            % _LL, defs={"rest": t})
    return t


def nth_head(j: int) -> Term:
    """Observer reading the j-th head (0-based): head after j tails.
    Type LazyList -> Nat + Unit."""
    src = "l"
    for _ in range(j):
        src = "tl (%s)" % src
    return parse_term("fn l : %s => hd (%s)" % (_LL, src),
                      defs={"hd": head_term(), "tl": tail_term()})


def unitize(t: Term, ty: Ty) -> Term:
    """Discard a result: (fn q : ty => *) t.  One extra step on delivery."""
    return App(Lam(ty, Star()), t)


# --- catalogue ----------------------------------------------------------------

CATALOGUE = (
    ("geo", "geo(p=1/2): geometric process at Nat, lean loop"),
    ("id_hes", "id_hes(p=1/2, ty=Nat): hesitant identity function"),
    ("fair_from", "fair_from(p=1/3): fair coin from a biased one, Unit -> Unit + Unit"),
    ("randw", "randw(n=2): lazy random walk from n"),
    ("randw2", "randw2(n=2): lazy two-step random walk from n"),
    ("everysnd", "everysnd: every second element of a lazy list"),
    ("lazylist-ops", "lazylist-ops: head (cons 3 nil-tail), exercising the list vocabulary"),
    ("diverge", "diverge: the hereditarily silent Unit program"),
)


def _parse_args(text):
    if not text:
        return []
    return [a.strip() for a in text.split(",")]


def corpus(name: str) -> Term:
    """Catalogue lookup; optional arguments in parentheses, see CATALOGUE."""
    base, _, rest = name.partition("(")
    base = base.strip()
    args = _parse_args(rest[:-1].strip()) if rest.endswith(")") else \
        _parse_args(rest.strip().rstrip(")"))
    if base == "geo":
        p = parse_rat(args[0]) if args else Fraction(1, 2)
        return geo_loop(p)
    if base == "id_hes":
        p = parse_rat(args[0]) if args else Fraction(1, 2)
        ty = parse_ty(args[1]) if len(args) > 1 else NatT()
        return id_hes(p, ty)
    if base == "fair_from":
        p = parse_rat(args[0]) if args else Fraction(1, 3)
        return fair_from(p)
    if base == "randw":
        n = int(args[0]) if args else 2
        return App(randw_fn(), Num(n))
    if base == "randw2":
        n = int(args[0]) if args else 2
        return App(randw2_fn(), Num(n))
    if base == "everysnd":
        return everysnd_term()
    if base == "lazylist-ops":
        return parse_term("hd (%s 3 (fn u : Unit => %s))" % (_CONS, _NIL),
                          defs={"hd": head_term()})
    if base == "diverge":
        return diverge_term()
    raise KeyError("unknown corpus entry %r" % name)
