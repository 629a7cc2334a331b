"""Types and terms of the object language.

Terms use de Bruijn indices internally (surface names are resolved by the
parser), so alpha-equivalence is plain structural equality and substitution
of closed values needs no renaming.  Type variables are de Bruijn as well.

Every node caches its structural hash at construction; evaluator and
interpreter memo tables key on whole closed terms, so hashing must be O(1)
after build.  Source positions ride along outside equality.

Annotation policy: lambda binders, inl/inr (full sum type), and fold (the
recursive type) always carry their annotation; application argument types
and case scrutinee types are optional and are filled in by elaboration.
"""

from .rational import as_prob

__all__ = [
    "Ty", "UnitT", "NatT", "ProdT", "SumT", "FnT", "MuT", "TVarT",
    "ty_closed", "ty_shift", "ty_subst", "mu_unfold", "render_ty", "BOOL_T",
    "Term", "Star", "Num", "Var", "Suc", "Pred", "Ifz", "Pair", "Fst", "Snd",
    "Inj", "Case", "Lam", "App", "Fold", "Unfold", "Choice",
    "is_value", "subst", "true_term", "false_term",
]


class _Node:
    __slots__ = ("pos", "_h")
    _tag = ""
    _fields = ()

    def _init(self, pos):
        self.pos = pos
        self._h = hash((self._tag,) + tuple(getattr(self, f) for f in self._fields))

    def __hash__(self):
        return self._h

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or self._h != other._h:
            return False
        return all(getattr(self, f) == getattr(other, f) for f in self._fields)

    def __repr__(self):
        return "%s(%s)" % (type(self).__name__,
                           ", ".join(repr(getattr(self, f)) for f in self._fields))

    def _key(self):
        # None annotations encode as a tuple so keys at the same field slot
        # stay mutually comparable.
        def enc(f):
            if isinstance(f, _Node):
                return f._key()
            return ("none",) if f is None else f
        return (self._tag,) + tuple(enc(getattr(self, n)) for n in self._fields)


# --- types -----------------------------------------------------------------

class Ty(_Node):
    __slots__ = ()


class UnitT(Ty):
    __slots__ = ()
    _tag = "unit"

    def __init__(self, pos=None):
        self._init(pos)


class NatT(Ty):
    __slots__ = ()
    _tag = "nat"

    def __init__(self, pos=None):
        self._init(pos)


class ProdT(Ty):
    __slots__ = ("a", "b")
    _tag = "prod"
    _fields = ("a", "b")

    def __init__(self, a, b, pos=None):
        self.a = a
        self.b = b
        self._init(pos)


class SumT(Ty):
    __slots__ = ("a", "b")
    _tag = "sum"
    _fields = ("a", "b")

    def __init__(self, a, b, pos=None):
        self.a = a
        self.b = b
        self._init(pos)


class FnT(Ty):
    __slots__ = ("a", "b")
    _tag = "fn"
    _fields = ("a", "b")

    def __init__(self, a, b, pos=None):
        self.a = a
        self.b = b
        self._init(pos)


class MuT(Ty):
    __slots__ = ("body",)
    _tag = "mu"
    _fields = ("body",)

    def __init__(self, body, pos=None):
        self.body = body
        self._init(pos)


class TVarT(Ty):
    __slots__ = ("k",)
    _tag = "tvar"
    _fields = ("k",)

    def __init__(self, k, pos=None):
        self.k = k
        self._init(pos)


BOOL_T = SumT(UnitT(), UnitT())


def ty_closed(t: Ty, depth: int = 0) -> bool:
    if isinstance(t, TVarT):
        return t.k < depth
    if isinstance(t, (UnitT, NatT)):
        return True
    if isinstance(t, MuT):
        return ty_closed(t.body, depth + 1)
    return ty_closed(t.a, depth) and ty_closed(t.b, depth)


def ty_shift(t: Ty, d: int, cutoff: int = 0) -> Ty:
    if isinstance(t, TVarT):
        return TVarT(t.k + d) if t.k >= cutoff else t
    if isinstance(t, (UnitT, NatT)):
        return t
    if isinstance(t, MuT):
        return MuT(ty_shift(t.body, d, cutoff + 1))
    cls = type(t)
    return cls(ty_shift(t.a, d, cutoff), ty_shift(t.b, d, cutoff))


def ty_subst(t: Ty, s: Ty, j: int = 0) -> Ty:
    if isinstance(t, TVarT):
        if t.k == j:
            return ty_shift(s, j)
        return TVarT(t.k - 1) if t.k > j else t
    if isinstance(t, (UnitT, NatT)):
        return t
    if isinstance(t, MuT):
        return MuT(ty_subst(t.body, s, j + 1))
    cls = type(t)
    return cls(ty_subst(t.a, s, j), ty_subst(t.b, s, j))


def mu_unfold(t: MuT) -> Ty:
    """The content type of a fold at mu X. body, i.e. body[mu X. body / X]."""
    return ty_subst(t.body, t, 0)


def render_ty(t: Ty, _env=(), _prec=0) -> str:
    """Precedence-minimal concrete syntax; -> binds loosest (right assoc),
    then +, then * (both left assoc).  Bound type variables print as X0, X1,
    ... outermost first."""
    if isinstance(t, UnitT):
        return "Unit"
    if isinstance(t, NatT):
        return "Nat"
    if isinstance(t, TVarT):
        if t.k < len(_env):
            return _env[-1 - t.k]
        return "X?%d" % t.k
    if isinstance(t, MuT):
        name = "X%d" % len(_env)
        s = "mu %s. %s" % (name, render_ty(t.body, _env + (name,), 0))
        return "(%s)" % s if _prec > 0 else s
    if isinstance(t, FnT):
        s = "%s -> %s" % (render_ty(t.a, _env, 1), render_ty(t.b, _env, 0))
        return "(%s)" % s if _prec > 0 else s
    if isinstance(t, SumT):
        s = "%s + %s" % (render_ty(t.a, _env, 1), render_ty(t.b, _env, 2))
        return "(%s)" % s if _prec > 1 else s
    if isinstance(t, ProdT):
        s = "%s * %s" % (render_ty(t.a, _env, 2), render_ty(t.b, _env, 3))
        return "(%s)" % s if _prec > 2 else s
    raise TypeError("not a type: %r" % (t,))


# --- terms -------------------------------------------------------------------

class Term(_Node):
    __slots__ = ()

    def dist_key(self):
        """Syntactic terms are totally ordered by their structure, so value
        terms always count as keyed distribution elements."""
        return ("term", self._key())


class Star(Term):
    __slots__ = ()
    _tag = "star"

    def __init__(self, pos=None):
        self._init(pos)


class Num(Term):
    __slots__ = ("n",)
    _tag = "num"
    _fields = ("n",)

    def __init__(self, n, pos=None):
        if n < 0:
            raise ValueError("numerals are naturals")
        self.n = n
        self._init(pos)


class Var(Term):
    __slots__ = ("k",)
    _tag = "var"
    _fields = ("k",)

    def __init__(self, k, pos=None):
        self.k = k
        self._init(pos)


class Suc(Term):
    __slots__ = ("m",)
    _tag = "suc"
    _fields = ("m",)

    def __init__(self, m, pos=None):
        self.m = m
        self._init(pos)


class Pred(Term):
    __slots__ = ("m",)
    _tag = "pred"
    _fields = ("m",)

    def __init__(self, m, pos=None):
        self.m = m
        self._init(pos)


class Ifz(Term):
    __slots__ = ("cond", "zero", "succ")
    _tag = "ifz"
    _fields = ("cond", "zero", "succ")

    def __init__(self, cond, zero, succ, pos=None):
        self.cond = cond
        self.zero = zero
        self.succ = succ
        self._init(pos)


class Pair(Term):
    __slots__ = ("a", "b")
    _tag = "pair"
    _fields = ("a", "b")

    def __init__(self, a, b, pos=None):
        self.a = a
        self.b = b
        self._init(pos)


class Fst(Term):
    __slots__ = ("m",)
    _tag = "fst"
    _fields = ("m",)

    def __init__(self, m, pos=None):
        self.m = m
        self._init(pos)


class Snd(Term):
    __slots__ = ("m",)
    _tag = "snd"
    _fields = ("m",)

    def __init__(self, m, pos=None):
        self.m = m
        self._init(pos)


class Inj(Term):
    """inl/inr with its full sum type; side is 'l' or 'r'."""
    __slots__ = ("side", "m", "ann")
    _tag = "inj"
    _fields = ("side", "m", "ann")

    def __init__(self, side, m, ann, pos=None):
        if side not in ("l", "r"):
            raise ValueError("side must be 'l' or 'r'")
        self.side = side
        self.m = m
        self.ann = ann
        self._init(pos)


class Case(Term):
    """Branches each bind one variable (de Bruijn index 0 inside)."""
    __slots__ = ("scrut", "left", "right", "ann")
    _tag = "case"
    _fields = ("scrut", "left", "right", "ann")

    def __init__(self, scrut, left, right, ann=None, pos=None):
        self.scrut = scrut
        self.left = left
        self.right = right
        self.ann = ann
        self._init(pos)


class Lam(Term):
    __slots__ = ("var_ty", "body")
    _tag = "lam"
    _fields = ("var_ty", "body")

    def __init__(self, var_ty, body, pos=None):
        self.var_ty = var_ty
        self.body = body
        self._init(pos)


class App(Term):
    __slots__ = ("fn", "arg", "ann")
    _tag = "app"
    _fields = ("fn", "arg", "ann")

    def __init__(self, fn, arg, ann=None, pos=None):
        self.fn = fn
        self.arg = arg
        self.ann = ann
        self._init(pos)


class Fold(Term):
    __slots__ = ("m", "ann")
    _tag = "fold"
    _fields = ("m", "ann")

    def __init__(self, m, ann, pos=None):
        self.m = m
        self.ann = ann
        self._init(pos)


class Unfold(Term):
    __slots__ = ("m",)
    _tag = "unfold"
    _fields = ("m",)

    def __init__(self, m, pos=None):
        self.m = m
        self._init(pos)


class Choice(Term):
    __slots__ = ("p", "left", "right")
    _tag = "choice"
    _fields = ("p", "left", "right")

    def __init__(self, p, left, right, pos=None):
        self.p = as_prob(p)
        self.left = left
        self.right = right
        self._init(pos)


def true_term(pos=None):
    return Inj("l", Star(), BOOL_T, pos=pos)


def false_term(pos=None):
    return Inj("r", Star(), BOOL_T, pos=pos)


def is_value(t: Term) -> bool:
    if isinstance(t, (Star, Num, Lam)):
        return True
    if isinstance(t, Fold):
        return is_value(t.m)
    if isinstance(t, Pair):
        return is_value(t.a) and is_value(t.b)
    if isinstance(t, Inj):
        return is_value(t.m)
    return False


def subst(t: Term, v: Term, k: int = 0) -> Term:
    """Substitute the closed value v for index k, lowering higher frees."""
    if isinstance(t, Var):
        if t.k == k:
            return v
        return Var(t.k - 1) if t.k > k else t
    if isinstance(t, (Star, Num)):
        return t
    if isinstance(t, Suc):
        return Suc(subst(t.m, v, k))
    if isinstance(t, Pred):
        return Pred(subst(t.m, v, k))
    if isinstance(t, Ifz):
        return Ifz(subst(t.cond, v, k), subst(t.zero, v, k), subst(t.succ, v, k))
    if isinstance(t, Pair):
        return Pair(subst(t.a, v, k), subst(t.b, v, k))
    if isinstance(t, Fst):
        return Fst(subst(t.m, v, k))
    if isinstance(t, Snd):
        return Snd(subst(t.m, v, k))
    if isinstance(t, Inj):
        return Inj(t.side, subst(t.m, v, k), t.ann)
    if isinstance(t, Case):
        return Case(subst(t.scrut, v, k),
                    subst(t.left, v, k + 1),
                    subst(t.right, v, k + 1), t.ann)
    if isinstance(t, Lam):
        return Lam(t.var_ty, subst(t.body, v, k + 1))
    if isinstance(t, App):
        return App(subst(t.fn, v, k), subst(t.arg, v, k), t.ann)
    if isinstance(t, Fold):
        return Fold(subst(t.m, v, k), t.ann)
    if isinstance(t, Unfold):
        return Unfold(subst(t.m, v, k))
    if isinstance(t, Choice):
        return Choice(t.p, subst(t.left, v, k), subst(t.right, v, k))
    raise TypeError("not a term: %r" % (t,))
