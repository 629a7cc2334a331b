"""Couplings, relational lifting, and the refinement checker.

`max_coupling` decides, by exact rational max-flow, whether a distribution's
mass can be transported onto a (sub-)distribution along a relation, up to a
declared slack.  `lift_check` extends a value relation to delay trees: at
each level the value part must be coupled against what the right side has
delivered within some run horizon, and the delayed remainder recurses with
one unit of fuel less; fuel 0 accepts the truncated obligation, so Holds at
fuel F certifies the F-level approximation and Unknown is never a
refutation.

`logrel_val` is the type-indexed relation between semantic and syntactic
values: ground types by equality, pairs and sums structurally, recursive
types one unfolding per fuel unit, and function types tested on explicit
probe arguments (quantifying over all arguments is not decidable; the
checker is honest about what it probed).  `refine_check` ties it together:
interpret the left program, evaluate the right one, and lift the relation
at their common type.
"""

from fractions import Fraction

from .rational import ZERO, as_uprob
from .delay import Delay, _split, probterm_seq, run, zeta
from .dist import Dist, Inl, Inr
from .densem import (
    STANDARD, Interp, NatV, PairV, InlV, InrV, FunV, FoldV, UNIT, val_interp,
)
from .opsem import Evaluator
from .syntax import (
    UnitT, NatT, ProdT, SumT, FnT, MuT, mu_unfold, render_ty,
    Star, Num, Pair, Inj, Lam, Fold, is_value, subst,
)
from .typecheck import TypecheckError, elaborate

__all__ = [
    "Coupling", "max_coupling", "LiftVerdict", "lift_check",
    "RelateCfg", "default_probes", "logrel_val", "refine_check",
    "refine_probterm",
]


# --- exact max flow ---------------------------------------------------------

def _max_flow(supplies, caps, edges):
    """Maximum flow from left supplies to right capacities along the given
    (i, j) edges; exact Fractions.  Returns (value, {(i, j): flow})."""
    n, m = len(supplies), len(caps)
    src, snk = n + m, n + m + 1
    adj = [[] for _ in range(n + m + 2)]
    cap = {}

    def add(u, v, c):
        if (u, v) not in cap:
            adj[u].append(v)
            adj[v].append(u)
            cap[(u, v)] = ZERO
            cap[(v, u)] = ZERO
        cap[(u, v)] += c

    for i, s in enumerate(supplies):
        add(src, i, s)
    for j, c in enumerate(caps):
        add(n + j, snk, c)
    for i, j in edges:
        add(i, n + j, supplies[i])

    total = ZERO
    while True:
        parent = {src: src}
        queue = [src]
        while queue and snk not in parent:
            u = queue.pop(0)
            for v in adj[u]:
                if v not in parent and cap[(u, v)] > 0:
                    parent[v] = u
                    queue.append(v)
        if snk not in parent:
            break
        push = None
        v = snk
        while v != src:
            u = parent[v]
            c = cap[(u, v)]
            push = c if push is None or c < push else push
            v = u
        v = snk
        while v != src:
            u = parent[v]
            cap[(u, v)] -= push
            cap[(v, u)] += push
            v = u
        total += push
    flow = {}
    for i, j in edges:
        f = cap[(n + j, i)]  # residual of the reverse arc = pushed flow
        if f > 0:
            flow[(i, j)] = f
    return total, flow


class Coupling:
    """Transport plan: rows (a, supply, ((b, w), ...), leftover).  The left
    marginal is exact by construction; `matched` is the transported mass."""
    __slots__ = ("rows", "matched")

    def __init__(self, rows, matched):
        self.rows = tuple(rows)
        self.matched = matched

    def pairs(self):
        for a, _, alloc, _ in self.rows:
            for b, w in alloc:
                yield (a, b), w

    def left_marginal(self):
        return tuple((a, supply) for a, supply, _, _ in self.rows)

    def right_allocation(self):
        """Mass received per right element, in right-hand entry order of the
        allocation lists (callers aggregate as needed)."""
        got = {}
        for a, _, alloc, _ in self.rows:
            for b, w in alloc:
                got[id(b)] = (b, got.get(id(b), (b, ZERO))[1] + w)
        return tuple(got.values())


def max_coupling(mu, nu, rel, eps):
    """Best transport of mu onto the weighted list nu (mass <= 1) along rel;
    Some (a Coupling) iff matched mass >= total left mass - eps.  mu may be
    a Dist or a weighted list; decision is exact."""
    eps = as_uprob(eps)
    left = list(mu.entries) if isinstance(mu, Dist) else list(mu)
    right = list(nu.entries) if isinstance(nu, Dist) else list(nu)
    total = sum((w for w, _ in left), ZERO)
    edges = [(i, j) for i, (_, a) in enumerate(left)
             for j, (_, b) in enumerate(right) if rel(a, b)]
    value, flow = _max_flow([w for w, _ in left], [w for w, _ in right], edges)
    if value < total - eps:
        return None
    rows = []
    for i, (w, a) in enumerate(left):
        alloc = tuple((right[j][1], f) for (i2, j), f in flow.items() if i2 == i)
        sent = sum((f for _, f in alloc), ZERO)
        rows.append((a, w, alloc, w - sent))
    return Coupling(rows, value)


# --- relational lifting -----------------------------------------------------

class _RelCache:
    """Memoized relation; pins queried operands so id-keys stay valid."""
    __slots__ = ("fn", "seen")

    def __init__(self, fn):
        self.fn = fn
        self.seen = {}

    def __call__(self, a, b):
        key = (id(a), id(b))
        hit = self.seen.get(key)
        if hit is None:
            hit = (bool(self.fn(a, b)), a, b)
            self.seen[key] = hit
        return hit[0]


class LiftVerdict:
    """Holds carries the per-level trace; Unknown names the budget that ran
    out.  Unknown never refutes: it means the bounded search saw nothing."""
    __slots__ = ("holds", "reason", "trace")

    def __init__(self, holds, reason, trace):
        self.holds = holds
        self.reason = reason
        self.trace = trace

    def __bool__(self):
        return self.holds

    def __repr__(self):
        return "%s(%s)" % ("Holds" if self.holds else "Unknown", self.reason)

    def to_json(self):
        return {"holds": self.holds, "reason": self.reason, "trace": self.trace}


def lift_check(d: Delay, e: Delay, rel, fuel: int, horizon: int, eps) -> LiftVerdict:
    """Bounded check that rel's lifting relates d to e.

    Per level: split d into delivered values (mass p) and pending branches.
    Search m <= horizon such that the values delivered by running e for m
    levels admit a coupling of flow >= p - eps along rel; what that coupling
    does not consume of e joins e's pending branches as the residue, and d's
    combined continuation recurses against it (renormalized) at fuel - 1.
    The eps budget is per level, so it composes additively in fuel.  When e's
    explored mass cannot split at exactly p, the flow consumption splits
    explored leaves fractionally; this is a sound search, not a complete
    one.
    """
    eps = as_uprob(eps)
    if fuel <= 0:
        return LiftVerdict(True, "fuel exhausted; remaining obligation accepted",
                           {"case": "fuel"})
    # the horizon search asks about the same pairs at every m, and rel may
    # itself run nested checks, so answers are cached per pair identity
    if not isinstance(rel, _RelCache):
        rel = _RelCache(rel)
    vals, pend = _split(d)
    p = sum((w for w, _ in vals), ZERO)
    if p > 0:
        cur = e
        chosen = None
        best = ZERO
        for m in range(horizon + 1):
            evals, epend = _split(cur)
            value, flow = _max_flow(
                [w for w, _ in vals], [w for w, _ in evals],
                [(i, j) for i, (_, a) in enumerate(vals)
                 for j, (_, b) in enumerate(evals) if rel(a, b)])
            best = value if value > best else best
            if value >= p - eps:
                chosen = (m, evals, epend, value, flow)
                break
            cur = run(cur)
        if chosen is None:
            return LiftVerdict(
                False, "no coupling within horizon",
                {"case": "no-coupling", "fuel": fuel, "value_mass": str(p),
                 "best_flow": str(best), "horizon": horizon, "eps": str(eps)})
        m, evals, epend, flowval, flow = chosen
    else:
        evals, epend = _split(e)
        m, flowval, flow = 0, ZERO, {}
    level = {"case": "mixed" if (p > 0 and pend) else
                     ("value-only" if not pend else "delayed-only"),
             "fuel": fuel, "m": m, "value_mass": str(p), "flow": str(flowval),
             "coupled_pairs": len(flow)}
    if not pend:
        return LiftVerdict(True, "value part coupled", level)
    consumed = {}
    for (_, j), f in flow.items():
        consumed[j] = consumed.get(j, ZERO) + f
    resid = [(w - consumed.get(j, ZERO), Inl(b))
             for j, (w, b) in enumerate(evals) if w - consumed.get(j, ZERO) > 0]
    resid += [(w, Inr(t)) for w, t in epend]
    rmass = sum((w for w, _ in resid), ZERO)
    dmass = sum((w for w, _ in pend), ZERO)
    if rmass == 0:
        # right side fully consumed yet d still owes mass: nothing to couple
        # the continuation against
        return LiftVerdict(False, "right side exhausted before left",
                           dict(level, case="no-residue"))
    nu2 = Delay(Dist([(w / rmass, el) for w, el in resid]))
    dk = zeta(Dist([(w / dmass, t) for w, t in pend])).force()
    sub = lift_check(dk, nu2, rel, fuel - 1, horizon, eps)
    level["child"] = sub.trace
    return LiftVerdict(sub.holds, sub.reason if not sub.holds else "per-level couplings found",
                       level)


# --- the type-indexed relation ---------------------------------------------

class RelateCfg:
    """Budgets and probe sets for the logical relation."""
    __slots__ = ("fuel", "horizon", "eps", "probes", "interp", "evaluator")

    def __init__(self, fuel=6, horizon=64, eps=Fraction(1, 1024), probes=None):
        self.fuel = fuel
        self.horizon = horizon
        self.eps = as_uprob(eps)
        self.probes = probes
        self.interp = Interp(STANDARD)
        self.evaluator = Evaluator()

    def probes_for(self, ty):
        if self.probes is not None and ty in self.probes:
            return self.probes[ty]
        return default_probes(ty)


def default_probes(ty, cap=4):
    """Related (semantic, syntactic) argument pairs for a probe at this
    type: numerals 0..3 at Nat, the unit, both booleans, and componentwise
    products/sums of those, capped."""
    if isinstance(ty, NatT):
        return tuple((NatV(k), Num(k)) for k in range(cap))
    if isinstance(ty, UnitT):
        return ((UNIT, Star()),)
    if isinstance(ty, SumT):
        out = [(InlV(v), Inj("l", V, ty)) for v, V in default_probes(ty.a, cap)]
        out += [(InrV(v), Inj("r", V, ty)) for v, V in default_probes(ty.b, cap)]
        return tuple(out[:cap])
    if isinstance(ty, ProdT):
        out = [(PairV(va, vb), Pair(Va, Vb))
               for va, Va in default_probes(ty.a, cap)
               for vb, Vb in default_probes(ty.b, cap)]
        return tuple(out[:cap])
    return ()


def logrel_val(ty, v, V, cfg: RelateCfg, _fuel=None) -> LiftVerdict:
    """Is the semantic value v related to the closed syntactic value V at
    type ty?  Ground types decide; function types check the lifting on each
    configured probe; recursive types unfold once per fuel unit."""
    fuel = cfg.fuel if _fuel is None else _fuel
    if isinstance(ty, UnitT):
        if v is UNIT and isinstance(V, Star):
            return LiftVerdict(True, "unit", {"ty": "Unit"})
        return LiftVerdict(False, "unit mismatch", {"ty": "Unit"})
    if isinstance(ty, NatT):
        if isinstance(v, NatV) and isinstance(V, Num) and v.n == V.n:
            return LiftVerdict(True, "numeral %d" % v.n, {"ty": "Nat"})
        return LiftVerdict(False, "coupling infeasible at these numerals",
                           {"ty": "Nat", "den": repr(v), "op": repr(V)})
    if isinstance(ty, ProdT):
        if not (isinstance(v, PairV) and isinstance(V, Pair)):
            return LiftVerdict(False, "pair shape mismatch", {"ty": "product"})
        la = logrel_val(ty.a, v.a, V.a, cfg, fuel)
        if not la.holds:
            return la
        lb = logrel_val(ty.b, v.b, V.b, cfg, fuel)
        return LiftVerdict(lb.holds, lb.reason,
                           {"ty": "product", "fst": la.trace, "snd": lb.trace})
    if isinstance(ty, SumT):
        if isinstance(v, InlV) and isinstance(V, Inj) and V.side == "l":
            return logrel_val(ty.a, v.val, V.m, cfg, fuel)
        if isinstance(v, InrV) and isinstance(V, Inj) and V.side == "r":
            return logrel_val(ty.b, v.val, V.m, cfg, fuel)
        return LiftVerdict(False, "sum tag mismatch", {"ty": "sum"})
    if isinstance(ty, MuT):
        if not (isinstance(v, FoldV) and isinstance(V, Fold)):
            return LiftVerdict(False, "fold shape mismatch", {"ty": "mu"})
        if fuel <= 0:
            return LiftVerdict(True, "recursive depth budget exhausted",
                               {"ty": "mu", "case": "fuel"})
        return logrel_val(mu_unfold(ty), v.force(), V.m, cfg, fuel - 1)
    if isinstance(ty, FnT):
        if not (isinstance(v, FunV) and isinstance(V, Lam)):
            return LiftVerdict(False, "function shape mismatch", {"ty": "fn"})
        probes = cfg.probes_for(ty.a)
        if not probes:
            return LiftVerdict(False,
                               "no probes for argument type %s" % render_ty(ty.a),
                               {"ty": "fn", "case": "no-probes"})
        body = V.body
        res_ty = ty.b
        checks = []
        for w, W in probes:
            d = v.fn(w)
            e = cfg.evaluator.eval(subst(body, W))
            r = lift_check(d, e,
                           lambda x, Y: logrel_val(res_ty, x, Y, cfg).holds,
                           cfg.fuel, cfg.horizon, cfg.eps)
            checks.append({"probe": repr(W), "trace": r.trace})
            if not r.holds:
                return LiftVerdict(False, "probe %r: %s" % (W, r.reason),
                                   {"ty": "fn", "probes": checks})
        return LiftVerdict(True, "%d probes passed" % len(probes),
                           {"ty": "fn", "probes": checks})
    raise TypeError("no relation at type %r" % (ty,))


# --- drivers ----------------------------------------------------------------

def refine_check(a, b, cfg: RelateCfg = None) -> LiftVerdict:
    """Bounded refinement between two closed programs of one type: interpret
    the left, evaluate the right, relate at the type.  Two values short-cut
    to the value relation."""
    cfg = cfg if cfg is not None else RelateCfg()
    a2, ty_a = elaborate(a)
    b2, ty_b = elaborate(b)
    if ty_a != ty_b:
        raise TypecheckError("refinement needs one type on both sides: %s vs %s"
                             % (render_ty(ty_a), render_ty(ty_b)))
    if is_value(a2) and is_value(b2):
        return logrel_val(ty_a, val_interp(a2, (), cfg.interp), b2, cfg)
    d = cfg.interp.interp(a2)
    e = cfg.evaluator.eval(b2)
    return lift_check(d, e,
                      lambda x, Y: logrel_val(ty_a, x, Y, cfg).holds,
                      cfg.fuel, cfg.horizon, cfg.eps)


def refine_probterm(a, b, a_depth: int, b_depth: int, eps) -> bool:
    """Termination-probability refinement of Unit programs: every level of
    a's sequence is dominated, up to eps, by some level of b's."""
    from .delay import leqlim_upto
    a2, ty_a = elaborate(a)
    b2, ty_b = elaborate(b)
    if not isinstance(ty_a, UnitT) or not isinstance(ty_b, UnitT):
        raise TypecheckError("refine_probterm needs Unit programs")
    fa = probterm_seq(Evaluator().eval(a2), a_depth)
    fb = probterm_seq(Evaluator().eval(b2), b_depth)
    return leqlim_upto(fa, fb, eps)
