"""Denotational semantics: environment-based interpretation into Delay.

Semantic values are ground data (units, naturals, pairs, injections),
closures (`FunV`, a Python function from semantic value to Delay), and
lazily filled recursive-type cells (`FoldV`).  Ground values compare
structurally and carry sort keys, so distributions over them canonicalize;
closures and cells compare by identity.

Two step disciplines:

  standard      a step is charged only when an unfold forces a fold cell;
                applications and case branches are silent
  step-faithful every cost site of the operational semantics is mirrored
                (function entry, case branch entry, unfold), making the
                interpretation step-for-step comparable with evaluation

`soundness_check` ties the two semantics together at first-order types:
evaluating and then reading values back coincides, level by level up to a
depth bound, with the step-faithful interpretation.
"""

from .delay import Delay, delay_bind, delay_map, dchoice, now, prefix_eq, step_fn
from .syntax import (
    Ty, UnitT, NatT, ProdT, SumT,
    Term, Star, Num, Var, Suc, Pred, Ifz, Pair, Fst, Snd,
    Inj, Case, Lam, App, Fold, Unfold, Choice, is_value,
)
from .typecheck import elaborate

__all__ = [
    "STANDARD", "STEP_FAITHFUL",
    "NatV", "UNIT", "PairV", "InlV", "InrV", "FunV", "FoldV",
    "SemDefect", "Interp", "val_interp", "is_ground_ty", "ground_eq",
    "soundness_check",
]

STANDARD = "standard"
STEP_FAITHFUL = "step-faithful"


class SemDefect(Exception):
    """A semantic value shape that typing rules out."""


class _UnitV:
    __slots__ = ()

    def dist_key(self):
        return ("unitv",)

    def __repr__(self):
        return "UNIT"


UNIT = _UnitV()


class NatV:
    __slots__ = ("n",)

    def __init__(self, n):
        self.n = n

    def __eq__(self, other):
        return isinstance(other, NatV) and self.n == other.n

    def __hash__(self):
        return hash(("natv", self.n))

    def dist_key(self):
        return ("natv", self.n)

    def __repr__(self):
        return "NatV(%d)" % self.n


class PairV:
    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a = a
        self.b = b

    def __eq__(self, other):
        return isinstance(other, PairV) and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash(("pairv", self.a, self.b))

    def dist_key(self):
        ka = _key_or_none(self.a)
        kb = _key_or_none(self.b)
        if ka is None or kb is None:
            return None
        return ("pairv", ka, kb)

    def __repr__(self):
        return "PairV(%r, %r)" % (self.a, self.b)


class _InjV:
    __slots__ = ("val",)
    _tag = ""

    def __init__(self, val):
        self.val = val

    def __eq__(self, other):
        return type(other) is type(self) and self.val == other.val

    def __hash__(self):
        return hash((self._tag, self.val))

    def dist_key(self):
        k = _key_or_none(self.val)
        return None if k is None else (self._tag, k)

    def __repr__(self):
        return "%s(%r)" % (type(self).__name__, self.val)


class InlV(_InjV):
    __slots__ = ()
    _tag = "inlv"


class InrV(_InjV):
    __slots__ = ()
    _tag = "inrv"


class FunV:
    """Closure: fn maps a semantic value to a Delay of semantic values.
    Identity equality; two closures are never merged."""
    __slots__ = ("fn",)

    def __init__(self, fn):
        self.fn = fn

    def __repr__(self):
        return "FunV(<%x>)" % id(self)


class _Cell:
    __slots__ = ("_fn", "_val")

    def __init__(self, fn):
        self._fn = fn
        self._val = None

    def force(self):
        if self._fn is not None:
            self._val = self._fn()
            self._fn = None
        return self._val


class FoldV:
    """Value of recursive type; content is computed on first unfold."""
    __slots__ = ("cell",)

    def __init__(self, fn):
        self.cell = _Cell(fn)

    def force(self):
        return self.cell.force()

    def __repr__(self):
        return "FoldV(<%x>)" % id(self)


def _key_or_none(v):
    dk = getattr(v, "dist_key", None)
    return dk() if dk is not None else None


def _defect(msg, v):
    raise SemDefect("%s: %r" % (msg, v))


class Interp:
    def __init__(self, mode=STANDARD):
        if mode not in (STANDARD, STEP_FAITHFUL):
            raise ValueError("unknown mode %r" % mode)
        self.mode = mode
        self._memo = {}

    def interp(self, t: Term, env=()) -> Delay:
        """Delay tree of semantic values; env is a tuple, innermost binding
        last.  Memoized per (term, env) since both are immutable."""
        if is_value(t):
            return now(self.val(t, env))
        key = (t, env)
        d = self._memo.get(key)
        if d is None:
            d = self._build(t, env)
            self._memo[key] = d
        return d

    def val(self, t: Term, env=()):
        """Semantic value of a value term."""
        if isinstance(t, Star):
            return UNIT
        if isinstance(t, Num):
            return NatV(t.n)
        if isinstance(t, Lam):
            body = t.body
            return FunV(lambda v: self.interp(body, env + (v,)))
        if isinstance(t, Pair):
            return PairV(self.val(t.a, env), self.val(t.b, env))
        if isinstance(t, Inj):
            inner = self.val(t.m, env)
            return InlV(inner) if t.side == "l" else InrV(inner)
        if isinstance(t, Fold):
            m = t.m
            return FoldV(lambda: self.val(m, env))
        raise SemDefect("not a value term: %r" % (t,))

    def _build(self, t: Term, env) -> Delay:
        itp = self.interp
        stepping = self.mode == STEP_FAITHFUL
        if isinstance(t, Var):
            return now(env[-1 - t.k])
        if isinstance(t, Suc):
            return delay_map(itp(t.m, env), _suc)
        if isinstance(t, Pred):
            return delay_map(itp(t.m, env), _pred)
        if isinstance(t, Ifz):
            zero, succ = t.zero, t.succ
            def branch(v):
                if not isinstance(v, NatV):
                    _defect("ifz scrutinee", v)
                return itp(zero, env) if v.n == 0 else itp(succ, env)
            return delay_bind(itp(t.cond, env), branch)
        if isinstance(t, Pair):
            b = t.b
            return delay_bind(itp(t.a, env),
                              lambda va: delay_map(itp(b, env),
                                                   lambda vb: PairV(va, vb)))
        if isinstance(t, Fst):
            return delay_map(itp(t.m, env), _fst)
        if isinstance(t, Snd):
            return delay_map(itp(t.m, env), _snd)
        if isinstance(t, Inj):
            mk = InlV if t.side == "l" else InrV
            return delay_map(itp(t.m, env), mk)
        if isinstance(t, Case):
            left, right = t.left, t.right
            def scrut(v):
                if isinstance(v, InlV):
                    br, w = left, v.val
                elif isinstance(v, InrV):
                    br, w = right, v.val
                else:
                    _defect("case scrutinee", v)
                if stepping:
                    return step_fn(lambda: itp(br, env + (w,)))
                return itp(br, env + (w,))
            return delay_bind(itp(t.scrut, env), scrut)
        if isinstance(t, App):
            arg = t.arg
            def applied(f):
                if not isinstance(f, FunV):
                    _defect("applied non-closure", f)
                if stepping:
                    return delay_bind(itp(arg, env),
                                      lambda v: step_fn(lambda: f.fn(v)))
                return delay_bind(itp(arg, env), f.fn)
            return delay_bind(itp(t.fn, env), applied)
        if isinstance(t, Fold):
            # non-value content: run it, then seal the result in a cell
            return delay_map(itp(t.m, env),
                             lambda v: FoldV(lambda: v))
        if isinstance(t, Unfold):
            def unfolded(v):
                if not isinstance(v, FoldV):
                    _defect("unfold of non-fold", v)
                return step_fn(lambda: now(v.force()))
            return delay_bind(itp(t.m, env), unfolded)
        if isinstance(t, Choice):
            return dchoice(t.p, itp(t.left, env), itp(t.right, env))
        if isinstance(t, Lam):
            raise SemDefect("unreachable, lambdas are values")
        raise TypeError("not a term: %r" % (t,))


def _suc(v):
    if not isinstance(v, NatV):
        _defect("suc of non-numeral", v)
    return NatV(v.n + 1)


def _pred(v):
    if not isinstance(v, NatV):
        _defect("pred of non-numeral", v)
    return NatV(v.n - 1 if v.n > 0 else 0)


def _fst(v):
    if not isinstance(v, PairV):
        _defect("fst of non-pair", v)
    return v.a


def _snd(v):
    if not isinstance(v, PairV):
        _defect("snd of non-pair", v)
    return v.b


def val_interp(t: Term, env=(), interp: Interp = None):
    """Semantic value of a value term; closures interpret their bodies in
    the given interpreter (a fresh standard-mode one by default)."""
    if interp is None:
        interp = Interp(STANDARD)
    return interp.val(t, env)


def is_ground_ty(ty: Ty) -> bool:
    """Unit/Nat closed under products and sums: the types whose semantic
    values carry no computation."""
    if isinstance(ty, (UnitT, NatT)):
        return True
    if isinstance(ty, (ProdT, SumT)):
        return is_ground_ty(ty.a) and is_ground_ty(ty.b)
    return False


def ground_eq(v, w) -> bool:
    """Structural equality of ground semantic values; rejects closures and
    fold cells, whose equality is not decidable here."""
    if isinstance(v, (FunV, FoldV)) or isinstance(w, (FunV, FoldV)):
        raise TypeError("ground_eq on a non-ground value")
    if isinstance(v, PairV) and isinstance(w, PairV):
        return ground_eq(v.a, w.a) and ground_eq(v.b, w.b)
    if isinstance(v, InlV) and isinstance(w, InlV):
        return ground_eq(v.val, w.val)
    if isinstance(v, InrV) and isinstance(w, InrV):
        return ground_eq(v.val, w.val)
    return v == w


def soundness_check(t: Term, depth: int) -> bool:
    """Evaluate-then-read-back vs step-faithful interpretation, compared as
    canonical trees through the given depth.  Requires a first-order type:
    the read-back of a lambda would need the full logical relation."""
    t2, ty = elaborate(t)
    if not is_ground_ty(ty):
        raise TypeError("soundness_check needs a ground-typed term, got %r"
                        % (ty,))
    from .opsem import Evaluator
    reader = Interp(STANDARD)
    left = delay_map(Evaluator().eval(t2), lambda v: reader.val(v, ()))
    right = Interp(STEP_FAITHFUL).interp(t2, ())
    return prefix_eq(left, right, depth)
