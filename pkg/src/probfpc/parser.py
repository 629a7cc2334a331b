"""Concrete syntax: lexer, parser, and pretty-printer.

Surface programs are a list of `def name = term ;` bindings followed by one
term.  Defs are closed macros, expanded at use sites (the shared subterm
keeps its identity, which the evaluator's memo table exploits).

Sugar handled here, all eliminated during parsing:
  let x = M in N        becomes  (fn x => N) M   with the binder type left
                                 for elaboration to fill in
  if B then M else N    becomes  case B of {inl _ => M ; inr _ => N}
  true / false          become   inl[Unit + Unit] * / inr[Unit + Unit] *
  case ... of { inr (n, f) => ... }   binds the pair once and turns n and f
                															into projections
Comments run from `--` to end of line.  The pretty-printer regenerates
canonical names (x0, x1, ... by binding depth) and reprints beta-redexes of
annotated lambdas as lets; reparsing a printed term elaborates back to the
same tree.
"""

from .rational import parse_rat, ProbRangeError
from .syntax import (
    UnitT, NatT, ProdT, SumT, FnT, MuT, TVarT, render_ty,
    Term, Star, Num, Var, Suc, Pred, Ifz, Pair, Fst, Snd,
    Inj, Case, Lam, App, Fold, Unfold, Choice, true_term, false_term,
)

__all__ = ["ParseError", "parse_program", "parse_term", "parse_ty",
           "load_file", "pretty", "pretty_ty"]

pretty_ty = render_ty

_KEYWORDS = {
    "fn", "let", "in", "if", "then", "else", "ifz", "case", "of",
    "inl", "inr", "fold", "unfold", "fst", "snd", "suc", "pred",
    "choice", "true", "false", "def", "mu", "Unit", "Nat",
}

_SYM2 = ("=>", "->")
_SYM1 = "()[]{},;:.=*+/"


class ParseError(Exception):
    def __init__(self, msg, line, col):
        self.msg = msg
        self.line = line
        self.col = col
        super().__init__("line %d, col %d: %s" % (line, col, msg))


class _Tok:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind      # "ident", "num", "sym", "eof"
        self.text = text
        self.line = line
        self.col = col

    def __repr__(self):
        return "%s(%r)" % (self.kind, self.text)


def _lex(src):
    toks = []
    i, line, col = 0, 1, 1
    n = len(src)
    while i < n:
        c = src[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if src.startswith("--", i):
            while i < n and src[i] != "\n":
                i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            # decimal literal only when a digit follows the dot, so the
            # dot of "mu X. t" stays a symbol
            if j + 1 < n and src[j] == "." and src[j + 1].isdigit():
                j += 1
                while j < n and src[j].isdigit():
                    j += 1
            toks.append(_Tok("num", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] in "_'"):
                j += 1
            toks.append(_Tok("ident", src[i:j], line, col))
            col += j - i
            i = j
            continue
        two = src[i:i + 2]
        if two in _SYM2:
            toks.append(_Tok("sym", two, line, col))
            i += 2
            col += 2
            continue
        if c in _SYM1:
            toks.append(_Tok("sym", c, line, col))
            i += 1
            col += 1
            continue
        raise ParseError("stray character %r" % c, line, col)
    toks.append(_Tok("eof", "", line, col))
    return toks


# tokens that may begin a prefix-level term, for application runs
_PREFIX_HEADS = {"fst", "snd", "suc", "pred", "inl", "inr", "fold", "unfold",
                 "true", "false"}


class _Parser:
    def __init__(self, src):
        self.toks = _lex(src)
        self.i = 0

    # --- token plumbing ---

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def at_sym(self, s):
        t = self.peek()
        return t.kind == "sym" and t.text == s

    def at_kw(self, w):
        t = self.peek()
        return t.kind == "ident" and t.text == w

    def eat_sym(self, s):
        if not self.at_sym(s):
            t = self.peek()
            raise ParseError("expected %r, found %r" % (s, t.text or "end of input"),
                             t.line, t.col)
        return self.next()

    def eat_kw(self, w):
        if not self.at_kw(w):
            t = self.peek()
            raise ParseError("expected %r, found %r" % (w, t.text or "end of input"),
                             t.line, t.col)
        return self.next()

    def eat_ident(self):
        t = self.peek()
        if t.kind != "ident" or t.text in _KEYWORDS:
            raise ParseError("expected a name, found %r" % (t.text or "end of input"),
                             t.line, t.col)
        return self.next()

    def eat_nat(self):
        t = self.peek()
        if t.kind != "num" or "." in t.text:
            raise ParseError("expected a numeral, found %r" % (t.text or "end of input"),
                             t.line, t.col)
        self.next()
        return int(t.text)

    # --- programs ---

    def program(self, defs=None):
        defs = dict(defs) if defs else {}
        while self.at_kw("def"):
            t = self.next()
            name = self.eat_ident()
            if name.text in defs:
                raise ParseError("duplicate def %r" % name.text, name.line, name.col)
            self.eat_sym("=")
            body = self.term((), defs)
            self.eat_sym(";")
            defs[name.text] = body
        t = self.term((), defs)
        e = self.peek()
        if e.kind != "eof":
            raise ParseError("trailing input after the top-level term: %r" % e.text,
                             e.line, e.col)
        return t

    # --- terms; env is a tuple of binder entries, innermost last ---

    def term(self, env, defs):
        t = self.peek()
        if t.kind == "ident":
            w = t.text
            if w == "fn":
                return self.lam(env, defs)
            if w == "let":
                return self.let(env, defs)
            if w == "if":
                return self.ifbool(env, defs)
            if w == "ifz":
                return self.ifzero(env, defs)
            if w == "case":
                return self.case(env, defs)
            if w == "choice":
                return self.choice(env, defs)
        return self.app(env, defs)

    def lam(self, env, defs):
        t = self.eat_kw("fn")
        name = self.eat_ident()
        self.eat_sym(":")
        ty = self.ty(())
        self.eat_sym("=>")
        body = self.term(env + (("var", name.text),), defs)
        return Lam(ty, body, pos=(t.line, t.col))

    def let(self, env, defs):
        t = self.eat_kw("let")
        name = self.eat_ident()
        self.eat_sym("=")
        rhs = self.term(env, defs)
        self.eat_kw("in")
        body = self.term(env + (("var", name.text),), defs)
        return App(Lam(None, body, pos=(t.line, t.col)), rhs, pos=(t.line, t.col))

    def ifbool(self, env, defs):
        t = self.eat_kw("if")
        cond = self.term(env, defs)
        self.eat_kw("then")
        yes = self.term(env + (("var", None),), defs)
        self.eat_kw("else")
        no = self.term(env + (("var", None),), defs)
        return Case(cond, yes, no, pos=(t.line, t.col))

    def ifzero(self, env, defs):
        t = self.eat_kw("ifz")
        cond = self.term(env, defs)
        self.eat_kw("then")
        zero = self.term(env, defs)
        self.eat_kw("else")
        succ = self.term(env, defs)
        return Ifz(cond, zero, succ, pos=(t.line, t.col))

    def case(self, env, defs):
        t = self.eat_kw("case")
        scrut = self.term(env, defs)
        self.eat_kw("of")
        self.eat_sym("{")
        self.eat_kw("inl")
        lpat = self.pattern()
        self.eat_sym("=>")
        left = self.term(env + (lpat,), defs)
        self.eat_sym(";")
        self.eat_kw("inr")
        rpat = self.pattern()
        self.eat_sym("=>")
        right = self.term(env + (rpat,), defs)
        self.eat_sym("}")
        return Case(scrut, left, right, pos=(t.line, t.col))

    def pattern(self):
        if self.at_sym("("):
            self.next()
            a = self.eat_ident()
            self.eat_sym(",")
            b = self.eat_ident()
            self.eat_sym(")")
            return ("pair", a.text, b.text)
        name = self.eat_ident()
        return ("var", name.text)

    def choice(self, env, defs):
        t = self.eat_kw("choice")
        p = self.prob()
        left = self.atom(env, defs)
        right = self.atom(env, defs)
        try:
            return Choice(p, left, right, pos=(t.line, t.col))
        except ProbRangeError as e:
            raise ParseError(str(e), t.line, t.col) from None

    def prob(self):
        t = self.peek()
        if t.kind != "num":
            raise ParseError("expected a probability, found %r"
                             % (t.text or "end of input"), t.line, t.col)
        self.next()
        text = t.text
        if self.at_sym("/"):
            self.next()
            d = self.peek()
            if d.kind != "num" or "." in d.text:
                raise ParseError("expected a denominator, found %r"
                                 % (d.text or "end of input"), d.line, d.col)
            self.next()
            text = "%s/%s" % (text, d.text)
        try:
            return parse_rat(text)
        except (ValueError, ZeroDivisionError):
            raise ParseError("bad probability %r" % text, t.line, t.col) from None

    def app(self, env, defs):
        t = self.prefix(env, defs)
        while self.starts_prefix():
            arg = self.prefix(env, defs)
            t = App(t, arg, pos=(arg.pos if arg.pos else t.pos))
        return t

    def starts_prefix(self):
        t = self.peek()
        if t.kind == "num":
            return "." not in t.text
        if t.kind == "ident":
            return t.text not in _KEYWORDS or t.text in _PREFIX_HEADS
        if t.kind == "sym":
            return t.text in ("*", "(")
        return False

    def prefix(self, env, defs):
        t = self.peek()
        if t.kind == "ident":
            w = t.text
            if w == "fst":
                self.next()
                return Fst(self.prefix(env, defs), pos=(t.line, t.col))
            if w == "snd":
                self.next()
                return Snd(self.prefix(env, defs), pos=(t.line, t.col))
            if w == "suc":
                self.next()
                return Suc(self.prefix(env, defs), pos=(t.line, t.col))
            if w == "pred":
                self.next()
                return Pred(self.prefix(env, defs), pos=(t.line, t.col))
            if w in ("inl", "inr"):
                self.next()
                self.eat_sym("[")
                ty = self.ty(())
                self.eat_sym("]")
                m = self.prefix(env, defs)
                return Inj(w[-1], m, ty, pos=(t.line, t.col))
            if w == "fold":
                self.next()
                self.eat_sym("[")
                ty = self.ty(())
                self.eat_sym("]")
                if not isinstance(ty, MuT):
                    raise ParseError("fold annotation must be a mu type",
                                     t.line, t.col)
                m = self.prefix(env, defs)
                return Fold(m, ty, pos=(t.line, t.col))
            if w == "unfold":
                self.next()
                return Unfold(self.prefix(env, defs), pos=(t.line, t.col))
        return self.atom(env, defs)

    def atom(self, env, defs):
        t = self.peek()
        if t.kind == "sym" and t.text == "*":
            self.next()
            return Star(pos=(t.line, t.col))
        if t.kind == "num":
            return Num(self.eat_nat(), pos=(t.line, t.col))
        if t.kind == "sym" and t.text == "(":
            self.next()
            inner = self.term(env, defs)
            if self.at_sym(","):
                self.next()
                second = self.term(env, defs)
                self.eat_sym(")")
                return Pair(inner, second, pos=(t.line, t.col))
            self.eat_sym(")")
            return inner
        if t.kind == "ident":
            if t.text == "true":
                self.next()
                return true_term(pos=(t.line, t.col))
            if t.text == "false":
                self.next()
                return false_term(pos=(t.line, t.col))
            if t.text not in _KEYWORDS:
                self.next()
                return self.resolve(t, env, defs)
        raise ParseError("expected a term, found %r" % (t.text or "end of input"),
                         t.line, t.col)

    def resolve(self, tok, env, defs):
        name = tok.text
        pos = (tok.line, tok.col)
        for k, entry in enumerate(reversed(env)):
            if entry[0] == "var":
                if entry[1] == name:
                    return Var(k, pos=pos)
            else:  # ("pair", first, second): one binder, projected on use
                if entry[1] == name:
                    return Fst(Var(k, pos=pos), pos=pos)
                if entry[2] == name:
                    return Snd(Var(k, pos=pos), pos=pos)
        if name in defs:
            return defs[name]
        raise ParseError("unknown name %r" % name, tok.line, tok.col)

    # --- types; tenv is a tuple of bound type-variable names ---

    def ty(self, tenv):
        left = self.ty_sum(tenv)
        if self.at_sym("->"):
            self.next()
            right = self.ty(tenv)
            return FnT(left, right)
        return left

    def ty_sum(self, tenv):
        left = self.ty_prod(tenv)
        while self.at_sym("+"):
            self.next()
            left = SumT(left, self.ty_prod(tenv))
        return left

    def ty_prod(self, tenv):
        left = self.ty_atom(tenv)
        while self.at_sym("*"):
            self.next()
            left = ProdT(left, self.ty_atom(tenv))
        return left

    def ty_atom(self, tenv):
        t = self.peek()
        if t.kind == "num" and t.text == "1":
            self.next()
            return UnitT()
        if t.kind == "sym" and t.text == "(":
            self.next()
            inner = self.ty(tenv)
            self.eat_sym(")")
            return inner
        if t.kind == "ident":
            if t.text == "Unit":
                self.next()
                return UnitT()
            if t.text == "Nat":
                self.next()
                return NatT()
            if t.text == "mu":
                self.next()
                name = self.eat_ident()
                self.eat_sym(".")
                return MuT(self.ty(tenv + (name.text,)))
            if t.text not in _KEYWORDS:
                self.next()
                for k, n in enumerate(reversed(tenv)):
                    if n == t.text:
                        return TVarT(k)
                raise ParseError("unknown type variable %r" % t.text,
                                 t.line, t.col)
        raise ParseError("expected a type, found %r" % (t.text or "end of input"),
                         t.line, t.col)


def parse_program(src: str, defs=None) -> Term:
    """Parse defs plus one top-level term; returns the unelaborated term."""
    return _Parser(src).program(defs)


def parse_term(src: str, defs=None) -> Term:
    return parse_program(src, defs)


def parse_ty(src: str):
    p = _Parser(src)
    t = p.ty(())
    e = p.peek()
    if e.kind != "eof":
        raise ParseError("trailing input after type: %r" % e.text, e.line, e.col)
    return t


def load_file(path) -> Term:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_program(fh.read())


# --- printing ----------------------------------------------------------------

_TRUE = true_term()
_FALSE = false_term()


def pretty(t: Term, _depth=0, _prec=0) -> str:
    """Minimal-paren concrete syntax with canonical binder names.

    Beta-redexes print as lets; bool injections print as true/false.
    Application/case annotations are dropped (elaboration restores them), so
    parse(pretty(elab(t))) elaborates to the same tree as t does.
    """
    def wrap(s, level):
        return "(%s)" % s if _prec > level else s

    if isinstance(t, Star):
        return "*"
    if isinstance(t, Num):
        return str(t.n)
    if isinstance(t, Var):
        return "x%d" % (_depth - 1 - t.k)
    if isinstance(t, Inj):
        if t == _TRUE:
            return "true"
        if t == _FALSE:
            return "false"
        return wrap("in%s[%s] %s" % (t.side, render_ty(t.ann),
                                     pretty(t.m, _depth, 2)), 1)
    if isinstance(t, Suc):
        return wrap("suc %s" % pretty(t.m, _depth, 2), 1)
    if isinstance(t, Pred):
        return wrap("pred %s" % pretty(t.m, _depth, 2), 1)
    if isinstance(t, Fst):
        return wrap("fst %s" % pretty(t.m, _depth, 2), 1)
    if isinstance(t, Snd):
        return wrap("snd %s" % pretty(t.m, _depth, 2), 1)
    if isinstance(t, Fold):
        return wrap("fold[%s] %s" % (render_ty(t.ann), pretty(t.m, _depth, 2)), 1)
    if isinstance(t, Unfold):
        return wrap("unfold %s" % pretty(t.m, _depth, 2), 1)
    if isinstance(t, Pair):
        return "(%s, %s)" % (pretty(t.a, _depth, 0), pretty(t.b, _depth, 0))
    if isinstance(t, Ifz):
        return wrap("ifz %s then %s else %s"
                    % (pretty(t.cond, _depth, 0), pretty(t.zero, _depth, 0),
                       pretty(t.succ, _depth, 0)), 0)
    if isinstance(t, Case):
        name = "x%d" % _depth
        return wrap("case %s of { inl %s => %s ; inr %s => %s }"
                    % (pretty(t.scrut, _depth, 0), name,
                       pretty(t.left, _depth + 1, 0), name,
                       pretty(t.right, _depth + 1, 0)), 0)
    if isinstance(t, Lam):
        name = "x%d" % _depth
        ann = render_ty(t.var_ty) if t.var_ty is not None else "?"
        return wrap("fn %s : %s => %s" % (name, ann,
                                          pretty(t.body, _depth + 1, 0)), 0)
    if isinstance(t, App):
        if isinstance(t.fn, Lam):
            name = "x%d" % _depth
            return wrap("let %s = %s in %s"
                        % (name, pretty(t.arg, _depth, 0),
                           pretty(t.fn.body, _depth + 1, 0)), 0)
        return wrap("%s %s" % (pretty(t.fn, _depth, 1),
                               pretty(t.arg, _depth, 2)), 1)
    if isinstance(t, Choice):
        return wrap("choice %s %s %s"
                    % (t.p, pretty(t.left, _depth, 3), pretty(t.right, _depth, 3)), 0)
    raise TypeError("not a term: %r" % (t,))
