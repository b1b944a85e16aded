"""Logic registry: axiom schemas, rule vocabularies, and specifications.

Every logic the workbench knows is assembled here from a shared schema
table.  A schema is a pattern formula over metavariables (FMeta/TMeta for
formula/term slots, '?'-prefixed names for bound-variable, time, and agent
slots) plus side conditions on the resulting binding.  Matching is plain
first-order structural unification: metavariables bind whole subtrees, and
nothing matches through the defined connectives.

The tautological-consequence engine also lives here (the kernel and the
schema for Taut both need it, and the kernel already imports us).
"""

import dataclasses
from dataclasses import dataclass, field
from typing import Callable, Optional

from .syntax import (
    Term, Var, Const, Prim, App, TSum, Bang, Quest, WQuest, UAll, TMeta,
    Formula, Atom, Falsum, Neg, And, Or, Imp, Iff, Xor, Box, Knows, Just,
    Forall, Exists, Mu, FixApp, FMeta,
    LanguageProfile, check_profile, ProfileError,
    free_vars, term_vars, subst_prop, subst_term_for_var, NotFreeFor,
)


# ---------------------------------------------------------------------------
# propositional skeletons and tautological consequence

_TRUE = ('1',)
_FALSE = ('0',)


def skeleton(f: Formula, table: dict) -> tuple:
    """Boolean skeleton of f; non-boolean maximal subformulas become shared
    atoms via table (Formula -> index)."""
    if isinstance(f, Falsum):
        return _FALSE
    if isinstance(f, Neg):
        return ('-', skeleton(f.a, table))
    if isinstance(f, And):
        return ('&', skeleton(f.a, table), skeleton(f.b, table))
    if isinstance(f, Or):
        return ('|', skeleton(f.a, table), skeleton(f.b, table))
    if isinstance(f, Imp):
        return ('>', skeleton(f.a, table), skeleton(f.b, table))
    if isinstance(f, Iff):
        return ('=', skeleton(f.a, table), skeleton(f.b, table))
    if isinstance(f, Xor):
        return ('^', skeleton(f.a, table), skeleton(f.b, table))
    # Atom, Box, Knows, Just, Forall, Exists, Mu, FixApp: opaque
    if f not in table:
        table[f] = len(table)
    return ('v', table[f])


def _reduce(e: tuple) -> tuple:
    op = e[0]
    if op in ('v', '0', '1'):
        return e
    if op == '-':
        a = _reduce(e[1])
        if a == _TRUE:
            return _FALSE
        if a == _FALSE:
            return _TRUE
        return ('-', a)
    a = _reduce(e[1])
    b = _reduce(e[2])
    if op == '&':
        if a == _FALSE or b == _FALSE:
            return _FALSE
        if a == _TRUE:
            return b
        if b == _TRUE:
            return a
    elif op == '|':
        if a == _TRUE or b == _TRUE:
            return _TRUE
        if a == _FALSE:
            return b
        if b == _FALSE:
            return a
    elif op == '>':
        if a == _FALSE or b == _TRUE:
            return _TRUE
        if a == _TRUE:
            return b
        if b == _FALSE:
            return ('-', a)
    elif op == '=':
        if a == _TRUE:
            return b
        if b == _TRUE:
            return a
        if a == _FALSE:
            return _reduce(('-', b))
        if b == _FALSE:
            return _reduce(('-', a))
    elif op == '^':
        if a == _FALSE:
            return b
        if b == _FALSE:
            return a
        if a == _TRUE:
            return _reduce(('-', b))
        if b == _TRUE:
            return _reduce(('-', a))
    return (op, a, b)


def _assign(e: tuple, idx: int, val: bool) -> tuple:
    op = e[0]
    if op == 'v':
        if e[1] == idx:
            return _TRUE if val else _FALSE
        return e
    if op in ('0', '1'):
        return e
    if op == '-':
        return ('-', _assign(e[1], idx, val))
    return (op, _assign(e[1], idx, val), _assign(e[2], idx, val))


def _count_vars(e: tuple, acc: dict) -> None:
    op = e[0]
    if op == 'v':
        acc[e[1]] = acc.get(e[1], 0) + 1
    elif op == '-':
        _count_vars(e[1], acc)
    elif op not in ('0', '1'):
        _count_vars(e[1], acc)
        _count_vars(e[2], acc)


def _taut(e: tuple) -> bool:
    # Quine splitting on the most frequent atom, folding constants as we go
    e = _reduce(e)
    if e == _TRUE:
        return True
    if e == _FALSE:
        return False
    counts: dict = {}
    _count_vars(e, counts)
    v = max(counts, key=lambda k: (counts[k], -k))
    return _taut(_assign(e, v, False)) and _taut(_assign(e, v, True))


def taut_consequence(goal: Formula, premises: list) -> bool:
    """True iff goal follows truth-functionally from premises, atomizing
    maximal non-boolean subformulas consistently across all of them."""
    table: dict = {}
    e = skeleton(goal, table)
    for p in reversed(premises):
        e = ('>', skeleton(p, table), e)
    return _taut(e)


def is_tautology(f: Formula) -> bool:
    return taut_consequence(f, [])


# ---------------------------------------------------------------------------
# pattern matching

def _is_meta_name(name: str) -> bool:
    return name.startswith('?')


def match_term(pat: Term, t: Term, b: dict) -> bool:
    if isinstance(pat, TMeta):
        key = 'T:' + pat.name
        if key in b:
            return b[key] == t
        b[key] = t
        return True
    if isinstance(pat, Var) and _is_meta_name(pat.name):
        # a variable slot in term position: matches variables only
        if not isinstance(t, Var):
            return False
        key = 'v:' + pat.name[1:]
        if key in b:
            return b[key] == t.name
        b[key] = t.name
        return True
    if type(pat) is not type(t):
        return False
    if isinstance(pat, (Var, Const)):
        return pat.name == t.name
    if isinstance(pat, Prim):
        return pat.symbol == t.symbol and pat.args == t.args
    if isinstance(pat, App):
        return (match_term(pat.fn, t.fn, b)
                and match_term(pat.arg, t.arg, b))
    if isinstance(pat, TSum):
        return (match_term(pat.left, t.left, b)
                and match_term(pat.right, t.right, b))
    if isinstance(pat, (Bang, Quest, WQuest)):
        return match_term(pat.t, t.t, b)
    if isinstance(pat, UAll):
        if not _match_binder_var(pat.var, t.var, b):
            return False
        return match_term(pat.inner, t.inner, b)
    return False


def _match_binder_var(pat_var: str, var: str, b: dict) -> bool:
    if _is_meta_name(pat_var):
        key = 'v:' + pat_var[1:]
        if key in b:
            return b[key] == var
        b[key] = var
        return True
    return pat_var == var


def _match_time(pat_time, time, b: dict) -> bool:
    if isinstance(pat_time, str) and _is_meta_name(pat_time):
        key = 'i:' + pat_time[1:]
        if key in b:
            return b[key] == time
        b[key] = time
        return True
    return pat_time == time


def _match_agent(pat_agent, agent, b: dict) -> bool:
    if pat_agent is not None and _is_meta_name(pat_agent):
        key = 'a:' + pat_agent[1:]
        if key in b:
            return b[key] == agent
        b[key] = agent
        return True
    return pat_agent == agent


def match_formula(pat: Formula, f: Formula, b: dict) -> bool:
    if isinstance(pat, FMeta):
        key = 'F:' + pat.name
        if key in b:
            return b[key] == f
        b[key] = f
        return True
    if type(pat) is not type(f):
        return False
    if isinstance(pat, Atom):
        return pat.name == f.name
    if isinstance(pat, Falsum):
        return True
    if isinstance(pat, Neg):
        return match_formula(pat.a, f.a, b)
    if isinstance(pat, (And, Or, Imp, Iff, Xor)):
        return (match_formula(pat.a, f.a, b)
                and match_formula(pat.b, f.b, b))
    if isinstance(pat, Box):
        return match_formula(pat.a, f.a, b)
    if isinstance(pat, Knows):
        return _match_time(pat.time, f.time, b) and match_formula(pat.a, f.a, b)
    if isinstance(pat, Just):
        return (match_term(pat.t, f.t, b)
                and _match_agent(pat.agent, f.agent, b)
                and match_formula(pat.a, f.a, b))
    if isinstance(pat, (Forall, Exists, Mu)):
        if not _match_binder_var(pat.var, f.var, b):
            return False
        return match_formula(pat.a, f.a, b)
    if isinstance(pat, FixApp):
        if pat.name != f.name or len(pat.args) != len(f.args):
            return False
        return all(match_formula(p, a, b) for p, a in zip(pat.args, f.args))
    return False


def infer_term(template: Formula, instance: Formula, x: str) -> Optional[Term]:
    """Find t with template[t/x] == instance, walking both in parallel.

    Positions where template has a free occurrence of Var(x) may differ;
    everything else must agree.  The caller re-runs the substitution as the
    authoritative check, so this only has to propose a candidate.
    """
    cands: list = []

    def wt(u: Term, v: Term, bound: frozenset) -> bool:
        if isinstance(u, Var) and u.name == x and x not in bound:
            cands.append(v)
            return True
        if type(u) is not type(v):
            return False
        if isinstance(u, (Var, Const)):
            return u.name == v.name
        if isinstance(u, Prim):
            if u.symbol != v.symbol or len(u.args) != len(v.args):
                return False
            for p, q in zip(u.args, v.args):
                if p == x and x not in bound:
                    cands.append(Var(q))
                elif p != q:
                    return False
            return True
        if isinstance(u, App):
            return wt(u.fn, v.fn, bound) and wt(u.arg, v.arg, bound)
        if isinstance(u, TSum):
            return wt(u.left, v.left, bound) and wt(u.right, v.right, bound)
        if isinstance(u, (Bang, Quest, WQuest)):
            return wt(u.t, v.t, bound)
        if isinstance(u, UAll):
            if u.var != v.var:
                return False
            return wt(u.inner, v.inner, bound | {u.var})
        return False

    def wf(a: Formula, c: Formula, bound: frozenset) -> bool:
        if type(a) is not type(c):
            return False
        if isinstance(a, Atom):
            return a.name == c.name
        if isinstance(a, Falsum):
            return True
        if isinstance(a, Neg):
            return wf(a.a, c.a, bound)
        if isinstance(a, (And, Or, Imp, Iff, Xor)):
            return wf(a.a, c.a, bound) and wf(a.b, c.b, bound)
        if isinstance(a, Box):
            return wf(a.a, c.a, bound)
        if isinstance(a, Knows):
            return a.time == c.time and wf(a.a, c.a, bound)
        if isinstance(a, Just):
            if a.agent != c.agent:
                return False
            return wt(a.t, c.t, bound) and wf(a.a, c.a, bound)
        if isinstance(a, (Forall, Exists)):
            if a.var != c.var:
                return False
            return wf(a.a, c.a, bound | {a.var})
        if isinstance(a, Mu):
            return a.var == c.var and wf(a.a, c.a, bound)
        if isinstance(a, FixApp):
            if a.name != c.name or len(a.args) != len(c.args):
                return False
            return all(wf(p, q, bound) for p, q in zip(a.args, c.args))
        return False

    if not wf(template, instance, frozenset()):
        return None
    if not cands:
        return Var(x)  # x not free: identity instance
    t0 = cands[0]
    if any(t != t0 for t in cands):
        return None
    try:
        if subst_term_for_var(template, x, t0) != instance:
            return None
    except NotFreeFor:
        return None
    return t0


def sigma_match(base: Formula, target: Formula) -> Optional[dict]:
    """Match target as base[sigma] for a substitution sigma of base's free
    justification variables by terms.  Binders are not renamed; a candidate
    that would capture a bound variable is rejected.  Returns sigma (possibly
    empty, meaning base == target) or None."""
    sigma: dict = {}

    def wt(u: Term, v: Term, bound: frozenset) -> bool:
        if isinstance(u, Var) and u.name not in bound:
            if term_vars(v) & bound:
                return False  # capture
            if u.name in sigma:
                return sigma[u.name] == v
            sigma[u.name] = v
            return True
        if type(u) is not type(v):
            return False
        if isinstance(u, (Var, Const)):
            return u.name == v.name
        if isinstance(u, Prim):
            if u.symbol != v.symbol or len(u.args) != len(v.args):
                return False
            for p, q in zip(u.args, v.args):
                if p in bound:
                    if p != q:
                        return False
                elif p in sigma:
                    if sigma[p] != Var(q):
                        return False
                else:
                    sigma[p] = Var(q)
            return True
        if isinstance(u, App):
            return wt(u.fn, v.fn, bound) and wt(u.arg, v.arg, bound)
        if isinstance(u, TSum):
            return wt(u.left, v.left, bound) and wt(u.right, v.right, bound)
        if isinstance(u, (Bang, Quest, WQuest)):
            return wt(u.t, v.t, bound)
        if isinstance(u, UAll):
            if u.var != v.var:
                return False
            return wt(u.inner, v.inner, bound | {u.var})
        return False

    def wf(a: Formula, c: Formula, bound: frozenset) -> bool:
        if type(a) is not type(c):
            return False
        if isinstance(a, Atom):
            return a.name == c.name
        if isinstance(a, Falsum):
            return True
        if isinstance(a, Neg):
            return wf(a.a, c.a, bound)
        if isinstance(a, (And, Or, Imp, Iff, Xor)):
            return wf(a.a, c.a, bound) and wf(a.b, c.b, bound)
        if isinstance(a, Box):
            return wf(a.a, c.a, bound)
        if isinstance(a, Knows):
            return a.time == c.time and wf(a.a, c.a, bound)
        if isinstance(a, Just):
            if a.agent != c.agent:
                return False
            return wt(a.t, c.t, bound) and wf(a.a, c.a, bound)
        if isinstance(a, (Forall, Exists)):
            if a.var != c.var:
                return False
            return wf(a.a, c.a, bound | {a.var})
        if isinstance(a, Mu):
            return a.var == c.var and wf(a.a, c.a, bound)
        if isinstance(a, FixApp):
            if a.name != c.name or len(a.args) != len(c.args):
                return False
            return all(wf(p, q, bound) for p, q in zip(a.args, c.args))
        return False

    if not wf(base, target, frozenset()):
        return None
    return sigma


# ---------------------------------------------------------------------------
# axiom schemas

@dataclass(frozen=True)
class AxiomSchema:
    name: str
    pattern: Optional[Formula] = None
    conditions: tuple = ()          # callables binding -> bool
    custom: Optional[Callable] = None  # Formula -> Optional[binding]

    def match(self, f: Formula) -> Optional[dict]:
        if self.custom is not None:
            return self.custom(f)
        b: dict = {}
        if not match_formula(self.pattern, f, b):
            return None
        for cond in self.conditions:
            if not cond(b):
                return None
        return b


_A = FMeta('A')
_B = FMeta('B')
_s = TMeta('s')
_t = TMeta('t')


def _sum_match(f: Formula) -> Optional[dict]:
    # both Sum forms under one name: s:A -> (s+t):A and s:A -> (t+s):A
    for left in (TSum(_s, _t), TSum(_t, _s)):
        b: dict = {}
        pat = Imp(Just(_s, '?g', _A), Just(left, '?g', _A))
        if match_formula(pat, f, b):
            return b
    return None


def _q1_match(f: Formula) -> Optional[dict]:
    # (all x . A) -> A[t/x], t free for x in A
    if not (isinstance(f, Imp) and isinstance(f.a, Forall)):
        return None
    x = f.a.var
    t = infer_term(f.a.a, f.b, x)
    if t is None:
        return None
    return {'v:x': x, 'T:t': t}


def _q3_match(f: Formula) -> Optional[dict]:
    # A[t/x] -> (ex x . A), t free for x in A
    if not (isinstance(f, Imp) and isinstance(f.b, Exists)):
        return None
    x = f.b.var
    t = infer_term(f.b.a, f.a, x)
    if t is None:
        return None
    return {'v:x': x, 'T:t': t}


def _mu_cl_match(f: Formula) -> Optional[dict]:
    # A[mu p. A / p] <-> mu p. A
    if not (isinstance(f, Iff) and isinstance(f.b, Mu)):
        return None
    mu = f.b
    if subst_prop(mu.a, mu.var, mu) != f.a:
        return None
    return {'v:p': mu.var, 'F:A': mu.a}


def _taut_match(f: Formula) -> Optional[dict]:
    return {} if is_tautology(f) else None


def _tv(key):
    return lambda b: b[key]


def _fv_cond(var_key: str, formula_key: str, absent: bool = True):
    def cond(b):
        inside = b[var_key] in free_vars(b[formula_key])
        return not inside if absent else inside
    return cond


def _lt(key1: str, key2: str):
    return lambda b: b[key1] < b[key2]


def _box_n(n: int, f: Formula) -> Formula:
    for _ in range(n):
        f = Box(f)
    return f


SCHEMAS = {
    # modal
    'K': AxiomSchema('K', Imp(Box(Imp(_A, _B)), Imp(Box(_A), Box(_B)))),
    'T': AxiomSchema('T', Imp(Box(_A), _A)),
    'D': AxiomSchema('D', Imp(Box(_A), Neg(Box(Neg(_A))))),
    '4': AxiomSchema('4', Imp(Box(_A), Box(Box(_A)))),
    'B': AxiomSchema('B', Imp(Neg(_A), Box(Neg(Box(_A))))),
    '5': AxiomSchema('5', Imp(Neg(Box(_A)), Box(Neg(Box(_A))))),
    'lob': AxiomSchema('lob', Imp(Box(Imp(Box(_A), _A)), Box(_A))),
    # justification
    'jk': AxiomSchema('jk', Imp(Just(_s, '?g', Imp(_A, _B)),
                                Imp(Just(_t, '?g', _A),
                                    Just(App(_s, _t), '?g', _B)))),
    'sum': AxiomSchema('sum', custom=_sum_match),
    'jt': AxiomSchema('jt', Imp(Just(_t, '?g', _A), _A)),
    'jd': AxiomSchema('jd', Imp(Just(_t, '?g', Falsum()), Falsum())),
    'j4': AxiomSchema('j4', Imp(Just(_t, '?g', _A),
                                Just(Bang(_t), '?g', Just(_t, '?g', _A)))),
    'jb': AxiomSchema('jb', Imp(Neg(_A),
                                Just(WQuest(_t), '?g',
                                     Neg(Just(_t, '?g', _A))))),
    'j5': AxiomSchema('j5', Imp(Neg(Just(_t, '?g', _A)),
                                Just(Quest(_t), '?g',
                                     Neg(Just(_t, '?g', _A))))),
    'elob': AxiomSchema('elob', Imp(Just(_s, '?g', Imp(Just(_t, '?g', _A), _A)),
                                    Just(_t, '?g', _A))),
    # quantifiers
    'q1': AxiomSchema('q1', custom=_q1_match),
    'q2': AxiomSchema('q2', Imp(Forall('?x', Imp(_A, _B)),
                                Imp(_A, Forall('?x', _B))),
                      conditions=(_fv_cond('v:x', 'F:A'),)),
    'q3': AxiomSchema('q3', custom=_q3_match),
    'q4': AxiomSchema('q4', Imp(Forall('?x', Imp(_A, _B)),
                                Imp(Exists('?x', _A), _B)),
                      conditions=(_fv_cond('v:x', 'F:B'),)),
    'uf': AxiomSchema('uf', Imp(Exists('?y', Just(Var('?y'), '?g',
                                                  Forall('?x', Just(_t, '?g', _A)))),
                                Just(UAll(_t, '?x'), '?g', Forall('?x', _A))),
                      conditions=(
                          lambda b: b['v:y'] not in term_vars(b['T:t']),
                          _fv_cond('v:y', 'F:A'),
                      )),
    # uniform Barcan variant; registered for reference, in no stock logic
    'ub': AxiomSchema('ub', Imp(Forall('?x', Just(_t, '?g', _A)),
                                Just(UAll(_t, '?x'), '?g', Forall('?x', _A))),
                      conditions=(
                          lambda b: b['v:x'] not in term_vars(b['T:t']),
                      )),
    # timed knowledge
    'tk': AxiomSchema('tk', Imp(Knows('?i', Imp(_A, _B)),
                                Imp(Knows('?j', _A), Knows('?k', _B))),
                      conditions=(_lt('i:i', 'i:k'), _lt('i:j', 'i:k'))),
    'mon': AxiomSchema('mon', Imp(Knows('?i', _A), Knows('?j', _A)),
                       conditions=(_lt('i:i', 'i:j'),)),
    'tt': AxiomSchema('tt', Imp(Knows('?i', _A), _A)),
    't4': AxiomSchema('t4', Imp(Knows('?i', _A),
                                Knows('?j', Knows('?i', _A))),
                      conditions=(_lt('i:i', 'i:j'),)),
    # fixed points over mu
    'mu-cl': AxiomSchema('mu-cl', custom=_mu_cl_match),
    # last resort
    'taut': AxiomSchema('taut', custom=_taut_match),
}


def sacchetti_schema(n: int) -> AxiomSchema:
    if n < 1:
        raise ValueError("sacchetti index must be >= 1")
    return AxiomSchema('sacchetti-%d' % n,
                       Imp(Box(Imp(_box_n(n, _A), _A)), Box(_A)))


# ---------------------------------------------------------------------------
# logics

@dataclass(frozen=True)
class LogicSpec:
    name: str
    family: str                  # modal | tmel | jl | qlp
    profile: LanguageProfile
    axioms: tuple                # AxiomSchema, in match order, taut last
    rules: frozenset
    spec_kind: Optional[str]     # 'cs' | 'pts' | None
    fp: bool = False
    fp_mode: Optional[str] = None
    mu: bool = False


_PROP_NODES = frozenset({'Atom', 'Falsum', 'Neg', 'And', 'Or', 'Imp',
                         'Iff', 'Xor'})

_MODAL_AXIOMS = {
    'K': ('K',), 'T': ('K', 'T'), 'D': ('K', 'D'), 'K4': ('K', '4'),
    'KB': ('K', 'B'), 'K5': ('K', '5'), 'KB5': ('K', 'B', '5'),
    'K45': ('K', '4', '5'), 'D5': ('K', 'D', '5'), 'DB': ('K', 'D', 'B'),
    'D4': ('K', 'D', '4'), 'D45': ('K', 'D', '4', '5'),
    'TB': ('K', 'T', 'B'), 'S4': ('K', 'T', '4'), 'S5': ('K', 'T', '4', '5'),
    'GL': ('K', '4', 'lob'),
    'GLS': ('K', '4', 'lob', 'T'),
}

_JL_AXIOMS = {
    'J': ('jk', 'sum'),
    'JT': ('jk', 'sum', 'jt'),
    'JD': ('jk', 'sum', 'jd'),
    'J4': ('jk', 'sum', 'j4'),
    'JB': ('jk', 'sum', 'jb'),
    'J5': ('jk', 'sum', 'j5'),
    'LP': ('jk', 'sum', 'jt', 'j4'),
    'JD4': ('jk', 'sum', 'jd', 'j4'),
    'JT45': ('jk', 'sum', 'jt', 'j4', 'j5'),
    'EGL': ('jk', 'sum', 'j4', 'elob'),
}

# term operators demanded by each justification axiom
_TERM_OPS = {
    'jk': {'App'}, 'sum': {'TSum'}, 'j4': {'Bang'}, 'j5': {'Quest'},
    'jb': {'WQuest'}, 'elob': {'App'},
    'q1': set(), 'q2': set(), 'q3': set(), 'q4': set(), 'uf': {'UAll'},
    'jt': set(), 'jd': set(),
}

_MU_BASES = {'K', 'S4', 'S5', 'J', 'LP', 'JT45'}


def _modal_logic(base: str, fp: bool, mu: bool, extra_schema=None) -> LogicSpec:
    names = _MODAL_AXIOMS[base] if extra_schema is None else ('K',)
    schemas = [SCHEMAS[n] for n in names]
    if extra_schema is not None:
        schemas.append(extra_schema)
    fnodes = set(_PROP_NODES) | {'Box'}
    rules = {'ax', 'mp', 'nec', 'prop', 'reg', 'premise'}
    if fp:
        fnodes.add('FixApp')
        rules.add('fp')
    if mu:
        fnodes.add('Mu')
        rules |= {'mu-cl', 'mu-ind'}
        schemas.append(SCHEMAS['mu-cl'])
    schemas.append(SCHEMAS['taut'])
    name = (extra_schema.name.capitalize() if extra_schema is not None
            else base)
    profile = LanguageProfile('modal', frozenset(fnodes), frozenset(), 'single')
    return LogicSpec(name, 'modal', profile, tuple(schemas),
                     frozenset(rules), None, fp,
                     'modalized' if fp else None, mu)


def _jl_logic(base: str, fp: bool, mu: bool) -> LogicSpec:
    names = _JL_AXIOMS[base]
    schemas = [SCHEMAS[n] for n in names]
    tnodes = {'Var', 'Const', 'App', 'TSum'}
    for n in names:
        tnodes |= _TERM_OPS[n]
    fnodes = set(_PROP_NODES) | {'Just'}
    rules = {'ax', 'mp', 'ian', 'prop', 'premise', 'inline'}
    if 'j4' in names:
        rules.add('an')
    if fp:
        fnodes.add('FixApp')
        rules.add('fp')
    if mu:
        fnodes.add('Mu')
        rules |= {'mu-cl', 'mu-ind'}
        schemas.append(SCHEMAS['mu-cl'])
    schemas.append(SCHEMAS['taut'])
    profile = LanguageProfile('jl', frozenset(fnodes), frozenset(tnodes),
                              'single')
    return LogicSpec(base, 'jl', profile, tuple(schemas), frozenset(rules),
                     'cs', fp, 'justified' if fp else None, mu)


def _qlp_logic(minus: bool, multi: bool, fp: bool) -> LogicSpec:
    names = ['q1', 'q2', 'q3', 'q4', 'jk', 'jt', 'j4', 'sum']
    if not minus:
        names.append('uf')
    schemas = [SCHEMAS[n] for n in names]
    tnodes = {'Var', 'Prim', 'App', 'TSum', 'Bang'}
    if not minus:
        tnodes.add('UAll')
    fnodes = set(_PROP_NODES) | {'Just', 'Forall', 'Exists'}
    rules = {'ax', 'mp', 'gen', 'an', 'prop', 'premise', 'inline'}
    if not minus:
        rules.add('qnec')
    if fp:
        fnodes.add('FixApp')
        rules.add('fp')
    schemas.append(SCHEMAS['taut'])
    name = 'QLP-' if minus else 'QLP'
    if multi:
        name += '_n'
    profile = LanguageProfile('qlp', frozenset(fnodes), frozenset(tnodes),
                              'multi' if multi else 'single')
    return LogicSpec(name, 'qlp', profile, tuple(schemas), frozenset(rules),
                     'pts', fp, 'exists_justified' if fp else None, False)


def _tmel_logic(base: str, fp: bool) -> LogicSpec:
    names = {'tK': ('tk', 'mon'), 'tT': ('tk', 'mon', 'tt'),
             'tS4': ('tk', 'mon', 'tt', 't4')}[base]
    schemas = [SCHEMAS[n] for n in names]
    fnodes = set(_PROP_NODES) | {'Knows'}
    rules = {'ax', 'mp', 'prop', 'e', 'de', 'reg', 'premise'}
    if base == 'tS4':
        rules.add('admk')
    if fp:
        fnodes.add('FixApp')
        rules.add('fp')
    schemas.append(SCHEMAS['taut'])
    profile = LanguageProfile('tmel', frozenset(fnodes), frozenset(), 'single')
    return LogicSpec(base, 'tmel', profile, tuple(schemas), frozenset(rules),
                     None, fp, 'modalized' if fp else None, False)


_MODAL_IDS = set(_MODAL_AXIOMS)
_JL_IDS = set(_JL_AXIOMS)


def known_logics() -> list:
    ids = sorted(_MODAL_IDS - {'GLS'}) + ['GLS', 'Sacchetti-n']
    ids += sorted(_JL_IDS)
    ids += ['%s(mu)' % b for b in sorted(_MU_BASES)]
    ids += ['QLP', 'QLP-', 'QLP_n', 'QLP-_n', 'tK', 'tT', 'tS4']
    return ids


class UnknownLogic(Exception):
    pass


def get_logic(logic_id: str) -> LogicSpec:
    """Resolve a logic id, including (FP)/(mu) suffixes and the multi-agent
    QLP variants.  JT4 is accepted as an alias for LP."""
    name = logic_id.strip()
    fp = False
    mu = False
    if name.endswith('(FP)'):
        fp = True
        name = name[:-4]
    if name.endswith('(mu)'):
        mu = True
        name = name[:-4]
    if name == 'JT4':
        name = 'LP'
    if mu and name not in _MU_BASES:
        raise UnknownLogic("no mu extension registered for %r" % name)
    spec = None
    if name.startswith('Sacchetti-'):
        try:
            n = int(name[len('Sacchetti-'):])
        except ValueError:
            raise UnknownLogic(logic_id)
        base = _modal_logic('K', fp, mu, extra_schema=sacchetti_schema(n))
        spec = LogicSpec('Sacchetti-%d' % n, 'modal', base.profile,
                         base.axioms, base.rules, None, fp, base.fp_mode, mu)
    elif name in _MODAL_IDS:
        spec = _modal_logic(name, fp, mu)
    elif name in _JL_IDS:
        spec = _jl_logic(name, fp, mu)
    else:
        multi = name.endswith('_n')
        if multi:
            name = name[:-2]
        if name in ('QLP', 'QLP-'):
            spec = _qlp_logic(name == 'QLP-', multi, fp)
        elif not multi and name in ('tK', 'tT', 'tS4'):
            spec = _tmel_logic(name, fp)
    if spec is None:
        raise UnknownLogic(logic_id)
    # display name carries the extension suffixes
    disp = spec.name
    if mu:
        disp += '(mu)'
    if fp:
        disp += '(FP)'
    if disp != spec.name:
        spec = dataclasses.replace(spec, name=disp)
    return spec


def match_axiom(logic: LogicSpec, f: Formula):
    """First matching schema of the logic, or None.  Formulas outside the
    logic's profile never match."""
    try:
        check_profile(f, logic.profile)
    except ProfileError:
        return None
    for schema in logic.axioms:
        b = schema.match(f)
        if b is not None:
            return schema.name, b
    return None


# ---------------------------------------------------------------------------
# constant / primitive term specifications

@dataclass(frozen=True)
class Spec:
    """Constant specification (JL family) or primitive term specification
    (QLP family), depending on the host logic's spec_kind."""
    kind: str                               # 'total' | 'empty' | 'explicit'
    entries: frozenset = frozenset()        # Formulas, explicit only

    def __str__(self):
        if self.kind == 'explicit':
            return 'explicit(%d entries)' % len(self.entries)
        return self.kind


TOTAL = Spec('total')
EMPTY = Spec('empty')


class SpecError(Exception):
    pass


def _peel_constants(f: Formula):
    # strip c_n : ... : c_1 : A, returning (n, A)
    n = 0
    while isinstance(f, Just) and isinstance(f.t, Const):
        n += 1
        f = f.a
    return n, f


def spec_membership(spec: Spec, f: Formula, logic: LogicSpec,
                    is_axiom: Optional[Callable] = None) -> bool:
    """Is f a licensed necessitation output?  For symbolic-total specs the
    licensed shape is checked structurally: iterated constants (CS) or one
    primitive term (PTS) over an axiom instance.  is_axiom can widen what
    counts as an axiom (fixed-point axioms of declared operators)."""
    if spec.kind == 'empty':
        return False
    if spec.kind == 'explicit':
        return f in spec.entries
    if is_axiom is None:
        is_axiom = lambda g: match_axiom(logic, g) is not None
    if logic.spec_kind == 'pts':
        if not (isinstance(f, Just) and isinstance(f.t, Prim)):
            return False
        return is_axiom(f.a)
    n, core = _peel_constants(f)
    if n == 0:
        return False
    return is_axiom(core)
