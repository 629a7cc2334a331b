"""Finite distribution monad Dist as the free convex algebra.

A distribution is a finite weighted support with weights in (0,1] summing to
exactly 1.  Carriers split in two:

* keyed carriers (naturals, syntactic values, ground semantic values, sums
  and pairs of these) have a total order on elements; supports are merged by
  key and sorted, giving a canonical form with decidable equality.  This is
  the classical weighted-map reading of the free convex algebra on a set
  with decidable equality.

* unkeyed carriers (closures, thunks) keep a formal order-preserving support
  list.  Entries are never merged by value; the single exception is entries
  whose element is the *identical object*, which collapse by idempotency.
  That exception is what keeps memoized pending branches from duplicating.

The sum-type decomposition (LeftOnly / RightOnly / Mixed) is the constructive
content of the equivalence Dist(A+B) = Dist(A) + Dist(B) + Dist(A) x I x Dist(B).
"""

from fractions import Fraction

from .rational import ONE, as_prob

__all__ = [
    "Inl", "Inr", "key_of", "Dist", "dirac", "choice", "dist_bind", "dist_map",
    "prob_of", "LeftOnly", "RightOnly", "Mixed", "decompose_sum", "recompose",
    "dist_eq", "UnkeyedEqError",
]


class Inl:
    """Left injection of a sum carrier."""
    __slots__ = ("val",)

    def __init__(self, val):
        self.val = val

    def __repr__(self):
        return "Inl(%r)" % (self.val,)

    def __eq__(self, other):
        return isinstance(other, Inl) and self.val == other.val

    def __hash__(self):
        return hash(("inl", self.val))


class Inr:
    """Right injection of a sum carrier."""
    __slots__ = ("val",)

    def __init__(self, val):
        self.val = val

    def __repr__(self):
        return "Inr(%r)" % (self.val,)

    def __eq__(self, other):
        return isinstance(other, Inr) and self.val == other.val

    def __hash__(self):
        return hash(("inr", self.val))


def key_of(x):
    """Canonical sort key of a carrier element, or None if the element is
    unkeyed (thunks, closures, anything containing them).

    Keys are nested (tag, ...) tuples; the leading string tag keeps keys of
    different shapes comparable without cross-type comparisons.
    """
    if isinstance(x, bool):
        return ("bool", x)
    if isinstance(x, int):
        return ("int", x)
    if isinstance(x, str):
        return ("str", x)
    if isinstance(x, Fraction):
        return ("rat", x)
    if isinstance(x, tuple):
        parts = []
        for c in x:
            k = key_of(c)
            if k is None:
                return None
            parts.append(k)
        return ("tuple", tuple(parts))
    if isinstance(x, Inl):
        k = key_of(x.val)
        return None if k is None else ("inl", k)
    if isinstance(x, Inr):
        k = key_of(x.val)
        return None if k is None else ("inr", k)
    fn = getattr(x, "dist_key", None)
    if fn is not None:
        return fn()
    return None


def _canonical(entries):
    """Merge keyed entries (sorted block first), keep unkeyed formal entries
    in first-occurrence order, merging only identical objects."""
    keyed = {}
    unkeyed = {}      # id(elem) -> index into order list
    order = []        # list of [weight, elem]
    for w, v in entries:
        if w == 0:
            continue
        k = key_of(v)
        if k is not None:
            if k in keyed:
                keyed[k][0] += w
            else:
                keyed[k] = [w, v]
        else:
            i = unkeyed.get(id(v))
            if i is None:
                unkeyed[id(v)] = len(order)
                order.append([w, v])
            else:
                order[i][0] += w
    out = [(w, v) for _, (w, v) in sorted(keyed.items(), key=lambda kv: kv[0])]
    out.extend((w, v) for w, v in order)
    return tuple(out)


class Dist:
    """Finite distribution; construct through dirac/choice/dist_bind or from
    a raw weighted entry list (weights must sum to exactly 1)."""
    __slots__ = ("entries",)

    def __init__(self, entries):
        es = _canonical(entries)
        total = sum((w for w, _ in es), Fraction(0))
        if total != ONE:
            raise ValueError("distribution weights sum to %s, not 1" % total)
        object.__setattr__(self, "entries", es)

    def __setattr__(self, *a):
        raise AttributeError("Dist is immutable")

    def __repr__(self):
        return "Dist(%s)" % ", ".join("%s: %r" % (w, v) for w, v in self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def is_keyed(self):
        return all(key_of(v) is not None for _, v in self.entries)

    def scaled(self, c):
        """Entry list scaled by c (not a Dist; used for renormalization)."""
        return [(w * c, v) for w, v in self.entries]

    def to_json(self, render=None):
        render = render or (lambda v: repr(v))
        return {"dist": [{"w": str(w), "v": render(v)} for w, v in self.entries]}


def dirac(a) -> Dist:
    return Dist([(ONE, a)])


def choice(p, mu: Dist, nu: Dist) -> Dist:
    """Convex combination p*mu + (1-p)*nu, left entries first."""
    p = as_prob(p)
    return Dist([(p * w, v) for w, v in mu.entries]
                + [((ONE - p) * w, v) for w, v in nu.entries])


def dist_bind(mu: Dist, f) -> Dist:
    """Kleisli extension: f maps elements to distributions; the result is the
    convex-algebra homomorphism extending f."""
    out = []
    for w, v in mu.entries:
        out.extend((w * w2, v2) for w2, v2 in f(v).entries)
    return Dist(out)


def dist_map(f, mu: Dist) -> Dist:
    return Dist([(w, f(v)) for w, v in mu.entries])


def prob_of(mu: Dist, pred) -> Fraction:
    return sum((w for w, v in mu.entries if pred(v)), Fraction(0))


class LeftOnly:
    __slots__ = ("left",)

    def __init__(self, left):
        self.left = left

    def __repr__(self):
        return "LeftOnly(%r)" % (self.left,)


class RightOnly:
    __slots__ = ("right",)

    def __init__(self, right):
        self.right = right

    def __repr__(self):
        return "RightOnly(%r)" % (self.right,)


class Mixed:
    """Both summands present; p is the total original mass on the left."""
    __slots__ = ("left", "p", "right")

    def __init__(self, left, p, right):
        self.left = left
        self.p = p
        self.right = right

    def __repr__(self):
        return "Mixed(%r, %s, %r)" % (self.left, self.p, self.right)


def decompose_sum(mu: Dist):
    """Split a distribution over a sum carrier into its unique normal form:
    all-left, all-right, or a p-weighted pair of renormalized parts."""
    left, right = [], []
    for w, v in mu.entries:
        if isinstance(v, Inl):
            left.append((w, v.val))
        elif isinstance(v, Inr):
            right.append((w, v.val))
        else:
            raise TypeError("decompose_sum: support element %r is not Inl/Inr" % (v,))
    if not right:
        return LeftOnly(Dist(left))
    if not left:
        return RightOnly(Dist(right))
    p = sum((w for w, _ in left), Fraction(0))
    return Mixed(Dist([(w / p, v) for w, v in left]), p,
                 Dist([(w / (ONE - p), v) for w, v in right]))


def recompose(d) -> Dist:
    if isinstance(d, LeftOnly):
        return dist_map(Inl, d.left)
    if isinstance(d, RightOnly):
        return dist_map(Inr, d.right)
    return choice(d.p, dist_map(Inl, d.left), dist_map(Inr, d.right))


class UnkeyedEqError(TypeError):
    """dist_eq was asked to compare distributions over an unkeyed carrier."""


def dist_eq(mu: Dist, nu: Dist) -> bool:
    """Canonical equality; only defined on keyed carriers."""
    for d in (mu, nu):
        if not d.is_keyed():
            raise UnkeyedEqError("dist_eq on unkeyed support (closures/thunks)")
    if len(mu.entries) != len(nu.entries):
        return False
    return all(w1 == w2 and key_of(v1) == key_of(v2)
               for (w1, v1), (w2, v2) in zip(mu.entries, nu.entries))
