"""Terms, formulas, parsing, printing, substitution, occurrence checks.

Concrete grammar (ASCII):

    formula  ::= imp
    imp      ::= or ('->' imp | '<->' imp)?
    or       ::= and (('|' | 'xor') and)*
    and      ::= unary ('&' unary)*
    unary    ::= '~' unary | '[]' unary | '<>' unary
               | 'K' '@' NUM unary
               | ('all' | 'ex') IDENT '.' imp
               | ('mu' | 'nu') IDENT '.' imp
               | term ':' unary | term ':@' IDENT unary
               | primary
    primary  ::= 'false' | IDENT
               | 'fix' '(' IDENT (';' imp (',' imp)*)? ')'
               | '(' imp ')'

    term     ::= app ('+' app)*
    app      ::= tunary ('*' tunary)*
    tunary   ::= '!' tunary | '??' tunary | '?' tunary | tprimary
    tprimary ::= IDENT | IDENT '(' IDENT (',' IDENT)* ')'
               | '(' term 'all' IDENT ')' | '(' term ')'

Binders (all, ex, mu, nu) take maximal right scope; parenthesize to stop
them.  '<>' abbreviates ~[]~ and 'nu p . A' abbreviates ~mu p . ~A[p := ~p];
both are expanded at parse time and never appear in trees.

Identifier roles in term position follow a lexical convention: a name whose
first character is one of s t u v w x y z is a variable, anything else is a
constant (or, in languages without constants, a 0-ary primitive term).
Primitive terms take variable names as arguments, f(x, y).  '#' is allowed
inside identifiers, so machine-generated names like c#3 stay parseable.

Formula equality is structural.  Printing is inverse to parsing within one
language profile.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional, Union


class ParseError(Exception):
    pass


class NotFreeFor(Exception):
    """Substitution would capture a variable or break term formation."""


class ProfileError(Exception):
    """Formula uses syntax outside the logic's language."""


class PositivityError(Exception):
    """mu binds a variable with a non-positive occurrence."""


# ---------------------------------------------------------------- terms

class Term:
    def __str__(self) -> str:
        return print_term(self)


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Const(Term):
    name: str


@dataclass(frozen=True)
class Prim(Term):
    """Primitive function term f(x1, ..., xn); args are variable names."""
    symbol: str
    args: tuple[str, ...] = ()


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class TSum(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Bang(Term):
    t: Term


@dataclass(frozen=True)
class Quest(Term):
    t: Term


@dataclass(frozen=True)
class WQuest(Term):
    t: Term


@dataclass(frozen=True)
class UAll(Term):
    """Uniform verifier (t all x); binds x inside t."""
    inner: Term
    var: str


@dataclass(frozen=True)
class TMeta(Term):
    """Schema metavariable standing for an arbitrary term."""
    name: str


# ------------------------------------------------------------- formulas

class Formula:
    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Falsum(Formula):
    pass


@dataclass(frozen=True)
class Neg(Formula):
    a: Formula


@dataclass(frozen=True)
class And(Formula):
    a: Formula
    b: Formula


@dataclass(frozen=True)
class Or(Formula):
    a: Formula
    b: Formula


@dataclass(frozen=True)
class Imp(Formula):
    a: Formula
    b: Formula


@dataclass(frozen=True)
class Iff(Formula):
    a: Formula
    b: Formula


@dataclass(frozen=True)
class Xor(Formula):
    a: Formula
    b: Formula


@dataclass(frozen=True)
class Box(Formula):
    a: Formula


@dataclass(frozen=True)
class Knows(Formula):
    """Time-stamped knowledge K@i.  time is an int, or '?name' in schemas."""
    time: Union[int, str]
    a: Formula


@dataclass(frozen=True)
class Just(Formula):
    """t : A, or t :@agent A in multi-agent languages."""
    t: Term
    agent: Optional[str]
    a: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    a: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    a: Formula


@dataclass(frozen=True)
class Mu(Formula):
    var: str
    a: Formula

    def __post_init__(self) -> None:
        if not occurrence_ok(self.a, self.var, "positive"):
            raise PositivityError(
                f"{self.var} has a non-positive occurrence in mu body")


@dataclass(frozen=True)
class FixApp(Formula):
    """Applied fixed-point operator fix(name; A1, ..., An)."""
    name: str
    args: tuple[Formula, ...] = ()


@dataclass(frozen=True)
class FMeta(Formula):
    """Schema metavariable standing for an arbitrary formula."""
    name: str


# ------------------------------------------------------------- profiles

@dataclass(frozen=True)
class LanguageProfile:
    """Which syntax a logic admits.  agents: 'single', 'multi' or 'any'."""
    name: str
    formula_nodes: frozenset[str]
    term_nodes: frozenset[str]
    agents: str = "single"

    def allows(self, cls_name: str) -> bool:
        return cls_name in self.formula_nodes or cls_name in self.term_nodes


_ALL_FORMULA_NODES = frozenset({
    "Atom", "Falsum", "Neg", "And", "Or", "Imp", "Iff", "Xor",
    "Box", "Knows", "Just", "Forall", "Exists", "Mu", "FixApp",
})
_ALL_TERM_NODES = frozenset({
    "Var", "Const", "Prim", "App", "TSum", "Bang", "Quest", "WQuest", "UAll",
})

FULL = LanguageProfile("full", _ALL_FORMULA_NODES, _ALL_TERM_NODES, "any")

_BOOLEAN_NODES = {"Atom", "Falsum", "Neg", "And", "Or", "Imp", "Iff", "Xor"}


def check_profile(f: Formula, profile: LanguageProfile) -> None:
    for g in walk(f):
        cls = type(g).__name__
        if cls == "FMeta":
            continue
        if cls not in profile.formula_nodes:
            raise ProfileError(f"{cls} not in language {profile.name}")
        if isinstance(g, Just):
            if profile.agents == "single" and g.agent is not None:
                raise ProfileError(f"agent label in single-agent language {profile.name}")
            if profile.agents == "multi" and g.agent is None:
                raise ProfileError(f"missing agent label in {profile.name}")
            for t in subterms(g.t):
                tcls = type(t).__name__
                if tcls != "TMeta" and tcls not in profile.term_nodes:
                    raise ProfileError(f"term {tcls} not in language {profile.name}")


# ----------------------------------------------------------- traversals

def walk(f: Formula) -> Iterator[Formula]:
    """Pre-order over all subformulas, including fix arguments."""
    yield f
    match f:
        case Neg(a) | Box(a) | Knows(_, a) | Forall(_, a) | Exists(_, a) | Mu(_, a):
            yield from walk(a)
        case And(a, b) | Or(a, b) | Imp(a, b) | Iff(a, b) | Xor(a, b):
            yield from walk(a)
            yield from walk(b)
        case Just(_, _, a):
            yield from walk(a)
        case FixApp(_, args):
            for g in args:
                yield from walk(g)
        case _:
            pass


def subterms(t: Term) -> Iterator[Term]:
    yield t
    match t:
        case App(a, b) | TSum(a, b):
            yield from subterms(a)
            yield from subterms(b)
        case Bang(s) | Quest(s) | WQuest(s):
            yield from subterms(s)
        case UAll(inner, _):
            yield from subterms(inner)
        case _:
            pass


def formula_terms(f: Formula) -> list[Term]:
    """Terms heading justification assertions, outermost first."""
    return [g.t for g in walk(f) if isinstance(g, Just)]


def term_vars(t: Term) -> frozenset[str]:
    match t:
        case Var(n):
            return frozenset({n})
        case Prim(_, args):
            return frozenset(args)
        case App(a, b) | TSum(a, b):
            return term_vars(a) | term_vars(b)
        case Bang(s) | Quest(s) | WQuest(s):
            return term_vars(s)
        case UAll(inner, v):
            return term_vars(inner) - {v}
        case _:
            return frozenset()


def free_vars(f: Formula) -> frozenset[str]:
    """Free individual (proof) variables."""
    match f:
        case Just(t, _, a):
            return term_vars(t) | free_vars(a)
        case Forall(v, a) | Exists(v, a):
            return free_vars(a) - {v}
        case Neg(a) | Box(a) | Knows(_, a) | Mu(_, a):
            return free_vars(a)
        case And(a, b) | Or(a, b) | Imp(a, b) | Iff(a, b) | Xor(a, b):
            return free_vars(a) | free_vars(b)
        case FixApp(_, args):
            out: frozenset[str] = frozenset()
            for g in args:
                out |= free_vars(g)
            return out
        case _:
            return frozenset()


def uall_vars(f: Formula) -> frozenset[str]:
    """Variables bound by a uniform verifier anywhere in f."""
    out: set[str] = set()
    for g in walk(f):
        if isinstance(g, Just):
            for t in subterms(g.t):
                if isinstance(t, UAll):
                    out.add(t.var)
    return frozenset(out)


def free_atoms(f: Formula) -> frozenset[str]:
    """Propositional letters, minus mu-bound ones."""
    match f:
        case Atom(n):
            return frozenset({n})
        case Mu(v, a):
            return free_atoms(a) - {v}
        case Neg(a) | Box(a) | Knows(_, a) | Forall(_, a) | Exists(_, a) | Just(_, _, a):
            return free_atoms(a)
        case And(a, b) | Or(a, b) | Imp(a, b) | Iff(a, b) | Xor(a, b):
            return free_atoms(a) | free_atoms(b)
        case FixApp(_, args):
            out: frozenset[str] = frozenset()
            for g in args:
                out |= free_atoms(g)
            return out
        case _:
            return frozenset()


def prim_symbols(f: Formula) -> frozenset[str]:
    out: set[str] = set()
    for g in walk(f):
        if isinstance(g, Just):
            for t in subterms(g.t):
                if isinstance(t, Prim):
                    out.add(t.symbol)
    return frozenset(out)


def const_names(f: Formula) -> frozenset[str]:
    out: set[str] = set()
    for g in walk(f):
        if isinstance(g, Just):
            for t in subterms(g.t):
                if isinstance(t, Const):
                    out.add(t.name)
    return frozenset(out)


def fix_names(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in walk(f) if isinstance(g, FixApp))


# ---------------------------------------------------------- occurrences

def occurrences(f: Formula, p: str) -> list[tuple[bool, bool, bool, int, bool]]:
    """(under_modal, under_just, under_exists_just, polarity, opaque) per
    free occurrence of atom p.  polarity is 1, -1 or 0 (both)."""
    occs: list[tuple[bool, bool, bool, int, bool]] = []

    def go(g: Formula, box: bool, just: bool, ejust: bool, pol: int, opq: bool) -> None:
        match g:
            case Atom(n):
                if n == p:
                    occs.append((box, just, ejust, pol, opq))
            case Neg(a):
                go(a, box, just, ejust, -pol, opq)
            case And(a, b) | Or(a, b):
                go(a, box, just, ejust, pol, opq)
                go(b, box, just, ejust, pol, opq)
            case Imp(a, b):
                go(a, box, just, ejust, -pol, opq)
                go(b, box, just, ejust, pol, opq)
            case Iff(a, b) | Xor(a, b):
                go(a, box, just, ejust, 0, opq)
                go(b, box, just, ejust, 0, opq)
            case Box(a) | Knows(_, a):
                go(a, True, just, ejust, pol, opq)
            case Just(_, _, a):
                go(a, box, True, ejust, pol, opq)
            case Exists(v, Just(Var(w), _, a)) if w == v:
                go(a, box, True, True, pol, opq)
            case Forall(_, a) | Exists(_, a):
                go(a, box, just, ejust, pol, opq)
            case Mu(q, a):
                if q != p:
                    go(a, box, just, ejust, pol, opq)
            case FixApp(_, args):
                for x in args:
                    go(x, box, just, ejust, pol, True)
            case _:
                pass

    go(f, False, False, False, 1, False)
    return occs


OCCURRENCE_MODES = ("modalized", "justified", "exists_justified",
                    "positive", "semi_positive")


def occurrence_ok(f: Formula, p: str, mode: str) -> bool:
    """Does every free occurrence of p in f sit in a position the mode
    demands?  Vacuous truth when p does not occur."""
    if mode not in OCCURRENCE_MODES:
        raise ValueError(f"unknown occurrence mode {mode!r}")
    for box, just, ejust, pol, opq in occurrences(f, p):
        if opq:
            return False
        if mode == "modalized" and not box:
            return False
        if mode == "justified" and not just:
            return False
        if mode == "exists_justified" and not ejust:
            return False
        if mode == "positive" and pol != 1:
            return False
        if mode == "semi_positive" and pol != 1 and not (box or just):
            return False
    return True


# --------------------------------------------------------- substitution

def subst_in_term(s: Term, x: str, t: Term) -> Term:
    match s:
        case Var(n):
            return t if n == x else s
        case Prim(sym, args):
            if x in args:
                if not isinstance(t, Var):
                    raise NotFreeFor(
                        f"cannot put compound term {t} in argument place of {sym}")
                return Prim(sym, tuple(t.name if a == x else a for a in args))
            return s
        case App(a, b):
            return App(subst_in_term(a, x, t), subst_in_term(b, x, t))
        case TSum(a, b):
            return TSum(subst_in_term(a, x, t), subst_in_term(b, x, t))
        case Bang(u):
            return Bang(subst_in_term(u, x, t))
        case Quest(u):
            return Quest(subst_in_term(u, x, t))
        case WQuest(u):
            return WQuest(subst_in_term(u, x, t))
        case UAll(inner, v):
            if v == x:
                return s
            if x in term_vars(inner) and v in term_vars(t):
                raise NotFreeFor(f"{t} not free for {x}: capture by verifier on {v}")
            return UAll(subst_in_term(inner, x, t), v)
        case _:
            return s


def subst_term_for_var(f: Formula, x: str, t: Term) -> Formula:
    """f[t/x].  Raises NotFreeFor when a binder would capture t."""
    tfv = term_vars(t)

    def go(g: Formula) -> Formula:
        match g:
            case Neg(a):
                return Neg(go(a))
            case And(a, b):
                return And(go(a), go(b))
            case Or(a, b):
                return Or(go(a), go(b))
            case Imp(a, b):
                return Imp(go(a), go(b))
            case Iff(a, b):
                return Iff(go(a), go(b))
            case Xor(a, b):
                return Xor(go(a), go(b))
            case Box(a):
                return Box(go(a))
            case Knows(i, a):
                return Knows(i, go(a))
            case Just(s, ag, a):
                return Just(subst_in_term(s, x, t), ag, go(a))
            case Forall(v, a):
                if v == x:
                    return g
                if x in free_vars(a) and v in tfv:
                    raise NotFreeFor(f"{t} not free for {x}: capture by all {v}")
                return Forall(v, go(a))
            case Exists(v, a):
                if v == x:
                    return g
                if x in free_vars(a) and v in tfv:
                    raise NotFreeFor(f"{t} not free for {x}: capture by ex {v}")
                return Exists(v, go(a))
            case Mu(q, a):
                return Mu(q, go(a))
            case FixApp(n, args):
                return FixApp(n, tuple(go(u) for u in args))
            case _:
                return g

    return go(f)


def subst_prop_multi(f: Formula, mapping: dict[str, Formula]) -> Formula:
    """Simultaneous substitution of formulas for propositional atoms."""
    def go(g: Formula, m: dict[str, Formula]) -> Formula:
        if not m:
            return g
        match g:
            case Atom(n):
                return m.get(n, g)
            case Neg(a):
                return Neg(go(a, m))
            case And(a, b):
                return And(go(a, m), go(b, m))
            case Or(a, b):
                return Or(go(a, m), go(b, m))
            case Imp(a, b):
                return Imp(go(a, m), go(b, m))
            case Iff(a, b):
                return Iff(go(a, m), go(b, m))
            case Xor(a, b):
                return Xor(go(a, m), go(b, m))
            case Box(a):
                return Box(go(a, m))
            case Knows(i, a):
                return Knows(i, go(a, m))
            case Just(t, ag, a):
                return Just(t, ag, go(a, m))
            case Forall(v, a) | Exists(v, a):
                live = {k: r for k, r in m.items() if k in free_atoms(a)}
                if any(v in free_vars(r) for r in live.values()):
                    raise NotFreeFor(f"substitution captured by quantifier on {v}")
                cls = Forall if isinstance(g, Forall) else Exists
                return cls(v, go(a, m))
            case Mu(q, a):
                m2 = {k: r for k, r in m.items() if k != q and k in free_atoms(a)}
                if any(q in free_atoms(r) for r in m2.values()):
                    raise NotFreeFor(f"substitution captured by mu {q}")
                return Mu(q, go(a, m2))
            case FixApp(n, args):
                return FixApp(n, tuple(go(u, m) for u in args))
            case _:
                return g

    return go(f, dict(mapping))


def subst_prop(f: Formula, p: str, g: Formula) -> Formula:
    return subst_prop_multi(f, {p: g})


def nu_formula(var: str, body: Formula) -> Formula:
    """Greatest fixed point as derived notation: ~mu var . ~body[var := ~var]."""
    return Neg(Mu(var, Neg(subst_prop(body, var, Neg(Atom(var))))))


def diamond(a: Formula) -> Formula:
    return Neg(Box(Neg(a)))


def big_and(parts: list[Formula]) -> Formula:
    if not parts:
        return Neg(Falsum())
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def imp_chain(premises: list[Formula], goal: Formula) -> Formula:
    out = goal
    for p in reversed(premises):
        out = Imp(p, out)
    return out


# -------------------------------------------------------------- parsing

_KEYWORDS = {"false", "xor", "all", "ex", "mu", "nu", "fix"}
_VAR_INITIALS = "stuvwxyz"

_TOKEN_RE = re.compile(
    r"(<->|->|:@|\?\?|\[\]|<>|[~&|().,;:*+!?@]|[A-Za-z_][A-Za-z0-9_#]*|\d+)")
_WS_RE = re.compile(r"\s*")


def _tokenize(text: str) -> list[tuple[str, int]]:
    toks: list[tuple[str, int]] = []
    pos = 0
    while pos < len(text):
        pos = _WS_RE.match(text, pos).end()
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"bad character {text[pos]!r} at {pos}")
        toks.append((m.group(0), pos))
        pos = m.end()
    return toks


def _is_ident(tok: str) -> bool:
    return bool(re.fullmatch(r"[A-Za-z_][A-Za-z0-9_#]*", tok)) and tok not in _KEYWORDS


def is_var_name(name: str) -> bool:
    return name[0] in _VAR_INITIALS


class _Parser:
    def __init__(self, text: str, profile: LanguageProfile):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0
        self.profile = profile

    def peek(self, ahead: int = 0) -> Optional[str]:
        i = self.pos + ahead
        return self.toks[i][0] if i < len(self.toks) else None

    def next(self) -> str:
        if self.pos >= len(self.toks):
            raise ParseError(f"unexpected end of input in {self.text!r}")
        tok = self.toks[self.pos][0]
        self.pos += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.next()
        if got != tok:
            raise ParseError(f"expected {tok!r}, got {got!r} in {self.text!r}")

    def ident(self) -> str:
        tok = self.next()
        if not _is_ident(tok):
            raise ParseError(f"expected identifier, got {tok!r} in {self.text!r}")
        return tok

    # formula levels

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek() == "->":
            self.next()
            return Imp(left, self.imp())
        if self.peek() == "<->":
            self.next()
            return Iff(left, self.imp())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.peek() in ("|", "xor"):
            op = self.next()
            right = self.conj()
            left = Or(left, right) if op == "|" else Xor(left, right)
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.peek() == "&":
            self.next()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "~":
            self.next()
            return Neg(self.unary())
        if tok == "[]":
            self.next()
            return Box(self.unary())
        if tok == "<>":
            self.next()
            return diamond(self.unary())
        if tok == "K" and self.peek(1) == "@":
            self.next()
            self.next()
            num = self.next()
            if not num.isdigit():
                raise ParseError(f"expected time after K@, got {num!r}")
            return Knows(int(num), self.unary())
        if tok in ("all", "ex"):
            self.next()
            v = self.ident()
            self.expect(".")
            body = self.imp()
            return Forall(v, body) if tok == "all" else Exists(v, body)
        if tok in ("mu", "nu"):
            self.next()
            p = self.ident()
            self.expect(".")
            body = self.imp()
            return Mu(p, body) if tok == "mu" else nu_formula(p, body)
        save = self.pos
        try:
            t = self.term()
            nxt = self.peek()
            if nxt == ":":
                self.next()
                return Just(t, None, self.unary())
            if nxt == ":@":
                self.next()
                ag = self.ident()
                return Just(t, ag, self.unary())
        except ParseError:
            pass
        self.pos = save
        return self.primary()

    def primary(self) -> Formula:
        tok = self.next()
        if tok == "false":
            return Falsum()
        if tok == "fix":
            self.expect("(")
            name = self.ident()
            args: list[Formula] = []
            if self.peek() == ";":
                self.next()
                args.append(self.imp())
                while self.peek() == ",":
                    self.next()
                    args.append(self.imp())
            self.expect(")")
            return FixApp(name, tuple(args))
        if tok == "(":
            f = self.imp()
            self.expect(")")
            return f
        if _is_ident(tok):
            return Atom(tok)
        raise ParseError(f"unexpected token {tok!r} in {self.text!r}")

    # term levels

    def term(self) -> Term:
        left = self.tapp()
        while self.peek() == "+":
            self.next()
            left = TSum(left, self.tapp())
        return left

    def tapp(self) -> Term:
        left = self.tunary()
        while self.peek() == "*":
            self.next()
            left = App(left, self.tunary())
        return left

    def tunary(self) -> Term:
        tok = self.peek()
        if tok == "!":
            self.next()
            return Bang(self.tunary())
        if tok == "??":
            self.next()
            return WQuest(self.tunary())
        if tok == "?":
            self.next()
            return Quest(self.tunary())
        return self.tprimary()

    def tprimary(self) -> Term:
        tok = self.next()
        if tok == "(":
            inner = self.term()
            if self.peek() == "all":
                self.next()
                v = self.ident()
                if not is_var_name(v):
                    raise ParseError(f"verifier binds a variable, got {v!r}")
                self.expect(")")
                return UAll(inner, v)
            self.expect(")")
            return inner
        if not _is_ident(tok):
            raise ParseError(f"expected term, got {tok!r} in {self.text!r}")
        if self.peek() == "(":
            self.next()
            args = [self.ident()]
            while self.peek() == ",":
                self.next()
                args.append(self.ident())
            self.expect(")")
            for a in args:
                if not is_var_name(a):
                    raise ParseError(f"primitive term argument must be a variable, got {a!r}")
            return Prim(tok, tuple(args))
        if is_var_name(tok):
            return Var(tok)
        if "Const" not in self.profile.term_nodes and "Prim" in self.profile.term_nodes:
            return Prim(tok, ())
        return Const(tok)


def parse_formula(text: str, profile: LanguageProfile = FULL) -> Formula:
    p = _Parser(text, profile)
    f = p.imp()
    if p.pos != len(p.toks):
        tok, at = p.toks[p.pos]
        raise ParseError(f"trailing input {tok!r} at {at} in {text!r}")
    check_profile(f, profile)
    return f


def parse_term(text: str, profile: LanguageProfile = FULL) -> Term:
    p = _Parser(text, profile)
    t = p.term()
    if p.pos != len(p.toks):
        tok, at = p.toks[p.pos]
        raise ParseError(f"trailing input {tok!r} at {at} in {text!r}")
    return t


# ------------------------------------------------------------- printing

def print_term(t: Term) -> str:
    return _pt(t, 0)


def _pt(t: Term, level: int) -> str:
    match t:
        case Var(n) | Const(n):
            return n
        case TMeta(n):
            return "?" + n
        case Prim(sym, args):
            return sym if not args else f"{sym}({', '.join(args)})"
        case TSum(a, b):
            s = _pt(a, 0) + " + " + _pt(b, 1)
            return f"({s})" if level > 0 else s
        case App(a, b):
            s = _pt(a, 1) + " * " + _pt(b, 2)
            return f"({s})" if level > 1 else s
        case Bang(u):
            return "!" + _pt(u, 2)
        case Quest(u):
            return "?" + _pt(u, 2)
        case WQuest(u):
            return "??" + _pt(u, 2)
        case UAll(inner, v):
            return f"({_pt(inner, 0)} all {v})"
    raise TypeError(f"not a term: {t!r}")


def print_formula(f: Formula) -> str:
    return _pf(f, 0, True)


def _pf(f: Formula, level: int, right: bool) -> str:
    # level: minimum precedence the position admits; right: whether the
    # position is rightmost, so right-open binders need no parentheses.
    match f:
        case Atom(n):
            return n
        case FMeta(n):
            return "?" + n
        case Falsum():
            return "false"
        case FixApp(name, args):
            if not args:
                return f"fix({name})"
            inner = ", ".join(_pf(a, 0, True) for a in args)
            return f"fix({name}; {inner})"
        case Imp(a, b) | Iff(a, b):
            op = " -> " if isinstance(f, Imp) else " <-> "
            if level > 0:
                return "(" + _pf(a, 1, False) + op + _pf(b, 0, True) + ")"
            return _pf(a, 1, False) + op + _pf(b, 0, right)
        case Or(a, b) | Xor(a, b):
            op = " | " if isinstance(f, Or) else " xor "
            if level > 1:
                return "(" + _pf(a, 1, False) + op + _pf(b, 2, True) + ")"
            return _pf(a, 1, False) + op + _pf(b, 2, right)
        case And(a, b):
            if level > 2:
                return "(" + _pf(a, 2, False) + " & " + _pf(b, 3, True) + ")"
            return _pf(a, 2, False) + " & " + _pf(b, 3, right)
        case Neg(a):
            return "~" + _pf(a, 3, right)
        case Box(a):
            return "[]" + _pf(a, 3, right)
        case Knows(i, a):
            return f"K@{i} " + _pf(a, 3, right)
        case Just(t, ag, a):
            sep = " : " if ag is None else f" :@{ag} "
            return print_term(t) + sep + _pf(a, 3, right)
        case Forall(v, a) | Exists(v, a) | Mu(v, a):
            kw = {"Forall": "all", "Exists": "ex", "Mu": "mu"}[type(f).__name__]
            body = f"{kw} {v} . " + _pf(a, 0, True)
            return body if right else "(" + body + ")"
    raise TypeError(f"not a formula: {f!r}")
