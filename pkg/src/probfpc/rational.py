"""Exact rational arithmetic and the probability ranges used everywhere else.

Rationals are stdlib ``fractions.Fraction`` values: always lowest terms,
positive denominator, structural equality.  Nothing in this package touches
floating point; limits are only ever compared through the bounded checkers
in ``delay``.

Two validated ranges appear in signatures:

* Prob   - strictly inside (0,1); the legal weights of a probabilistic choice.
* UProb  - the closed interval [0,1]; masses and termination probabilities.
"""

from fractions import Fraction

Rat = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class ProbRangeError(ValueError):
    """A probability literal or weight fell outside its required range."""


def as_prob(x) -> Fraction:
    """Coerce to an exact rational strictly between 0 and 1."""
    p = Fraction(x)
    if not (0 < p < 1):
        raise ProbRangeError("choice weight must satisfy 0 < p < 1, got %s" % p)
    return p


def as_uprob(x) -> Fraction:
    """Coerce to an exact rational in [0,1]."""
    p = Fraction(x)
    if not (0 <= p <= 1):
        raise ProbRangeError("probability must satisfy 0 <= p <= 1, got %s" % p)
    return p


def complement(p: Fraction) -> Fraction:
    """1 - p; an involution on (0,1)."""
    return ONE - p


def assoc_coeff(p: Fraction, q: Fraction) -> Fraction:
    """The reweighting coefficient (q - pq) / (1 - pq) of the convex
    associativity law

        q (+) (p (+) (a, b), c)  =  pq (+) (a, assoc_coeff(p,q) (+) (b, c))

    Defined for p, q strictly inside (0,1), where 1 - pq > 0, and the result
    is again strictly inside (0,1).
    """
    pq = p * q
    return (q - pq) / (ONE - pq)


def convex_combine(p: Fraction, x: Fraction, y: Fraction) -> Fraction:
    """p*x + (1-p)*y, exact."""
    return p * x + (ONE - p) * y


def parse_rat(text: str) -> Fraction:
    """Parse "p/q" or a decimal literal ("0.25" -> 1/4) exactly."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError("not a rational literal: %r (%s)" % (text, e))


def render_rat(x: Fraction) -> str:
    """Canonical "num/den" rendering; integers render without a denominator."""
    return str(x)
