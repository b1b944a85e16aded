"""Constructive proof transformations.

Everything here consumes an accepted derivation and emits a new one,
which is re-checked before being returned; a transform never hands back
an object the kernel would reject.  The constructions follow the usual
inductive arguments step by step, so the output derivations double as
machine-checked witnesses for the corresponding admissibility lemmas:

  deduction         discharge one premise into an implication
  lift              internalize a justification-logic proof (t : A)
  internalize_qlp   the quantified analogue, handling Gen and qNec steps
  substitute_proof  replace a justification variable by a term everywhere
  jug               justification-upgrade: t : A  to  (t all x) : all x . A
  restricted_qnec   existential introduction over an axiom instance
  jd_lemma          opposing evidence: s : ~A -> ~ t : A, via a falsum term
  project           forget terms: t : A becomes [] A, logics map J -> K etc.
  exists_translate  embed modal formulas by [] A -> ex x . x : A
  collapse_agents   erase agent labels, QLP_n -> QLP

Tautological-consequence steps are internalized through the implication
chain  F1 -> (F2 -> ... -> goal), which is itself a tautology, so a
single constant over that chain followed by application steps suffices;
no separate propositional search is needed.
"""

from dataclasses import dataclass
from typing import Optional

from .syntax import (
    Formula, Term, Atom, Falsum, Neg, And, Or, Imp, Iff, Xor, Box, Knows,
    Just, Forall, Exists, Mu, FixApp,
    Var, Const, Prim, App, TSum, Bang, Quest, WQuest, UAll,
    NotFreeFor, print_formula, print_term,
    free_vars, term_vars, subst_term_for_var, subst_in_term, imp_chain,
)
from .registry import (
    get_logic, match_axiom, Spec, TOTAL, EMPTY,
)
from .fixedpoint import FPOperator, make_operator, fp_axiom_instance
from . import kernel
from .kernel import Derivation, Step, Premise, check_derivation, elaborate


class TransformError(Exception):
    pass


@dataclass(frozen=True)
class LiftResult:
    term: Term
    derivation: Derivation


class _Build:
    def __init__(self):
        self.steps = []

    def add(self, formula, rule, refs=(), args=()):
        self.steps.append(Step(len(self.steps) + 1, formula, rule,
                               tuple(refs), tuple(args)))
        return len(self.steps)

    def tuple(self):
        return tuple(self.steps)


def _checked(d: Derivation, what: str) -> Derivation:
    rep = check_derivation(d)
    if not rep.ok:
        idx, why = rep.first_failure
        raise TransformError("%s produced a rejected derivation "
                             "(step %d: %s)" % (what, idx, why))
    return d


def _require_ok(d: Derivation, what: str):
    rep = check_derivation(d)
    if not rep.ok:
        idx, why = rep.first_failure
        raise TransformError("%s needs an accepted input derivation "
                             "(step %d: %s)" % (what, idx, why))
    return rep


class _Fresh:
    def __init__(self):
        self.n = {}

    def __call__(self, prefix: str) -> str:
        self.n[prefix] = self.n.get(prefix, 0) + 1
        return '%s#%d' % (prefix, self.n[prefix])


# -- deduction ---------------------------------------------------------------

def deduction(d: Derivation, name: str) -> Derivation:
    """Discharge the named premise: from  S, A |- B  build  S |- A -> B.

    Premise-free steps are copied verbatim.  Since the kernel restricts
    necessitation-like rules to premise-free steps, every step that does
    depend on the premise is a premise line, modus ponens, or a
    tautological-consequence step, and each of those turns into a single
    prop step over the wrapped images.
    """
    pre = next((p for p in d.premises if p.name == name), None)
    if pre is None:
        raise TransformError("no premise named %r" % name)
    rep = _require_ok(d, "deduction")
    a = pre.formula

    b = _Build()
    wrapped = {}
    for s in d.steps:
        if name not in rep.deps[s.index]:
            b.add(s.formula, s.rule, s.refs, s.args)
            wrapped[s.index] = False
            continue
        img = Imp(a, s.formula)
        if s.rule == 'premise':
            b.add(img, 'prop')
        elif s.rule in ('mp', 'prop'):
            b.add(img, 'prop', s.refs)
        elif s.rule == 'admk':
            raise TransformError(
                "admissible-knowledge steps cannot be discharged")
        else:
            raise TransformError(
                "step %d (%s) depends on %r but is not propositional"
                % (s.index, s.rule, name))
        wrapped[s.index] = True
    if not wrapped[d.steps[-1].index]:
        b.add(Imp(a, d.final), 'prop', (len(b.steps),))
    premises = tuple(p for p in d.premises if p.name != name)
    out = Derivation(d.logic_id, d.spec, d.spec_src, d.agents, d.ops,
                     premises, b.tuple())
    return _checked(out, "deduction")


# -- lifting -----------------------------------------------------------------

def _chain(b: _Build, state: dict, tau: dict, refs, goal: Formula,
           agent, fresh, intro_rule: str, mk_const):
    """Internalize a consequence  refs |- goal  through the implication
    chain tautology; returns the justification term for goal."""
    chain = imp_chain([tau[r][1] for r in refs], goal)
    t = mk_const(fresh)
    cur = b.add(Just(t, agent, chain), intro_rule)
    body = chain
    for r in refs:
        tr, fr = tau[r]
        nxt = body.b
        jk = Imp(Just(t, agent, body),
                 Imp(Just(tr, agent, fr), Just(App(t, tr), agent, nxt)))
        k = b.add(jk, 'ax', (), ('jk',))
        m1 = b.add(jk.b, 'mp', (cur, k))
        cur = b.add(jk.b.b, 'mp', (state[r], m1))
        t = App(t, tr)
        body = nxt
    return t, cur


def lift(d: Derivation) -> LiftResult:
    """Internalization for justification logics: from a derivation of A
    over premises A1..An, build one of  t : A  over  x#1 : A1, ...

    Axiom and specification steps become fresh constants, modus ponens
    becomes two applications of the jk schema, and prop steps go through
    the implication-chain construction.  Induction steps cannot be
    internalized this way.
    """
    logic = get_logic(d.logic_id)
    if logic.family != 'jl':
        raise TransformError("lift applies to justification logics, not %s"
                             % logic.name)
    if d.spec.kind != 'total':
        raise TransformError("lift requires the total specification, "
                             "which is closed under fresh constants")
    _require_ok(d, "lift")
    d = elaborate(d)

    fresh = _Fresh()
    b = _Build()
    state = {}   # original index -> step proving tau : F
    tau = {}     # original index -> (term, original formula)
    pvar = {p.name: Var(fresh('x')) for p in d.premises}
    premises = tuple(Premise(p.name, Just(pvar[p.name], None, p.formula))
                     for p in d.premises)

    for s in d.steps:
        f = s.formula
        if s.rule == 'premise':
            t = pvar[s.args[0]]
            state[s.index] = b.add(Just(t, None, f), 'premise', (), s.args)
        elif s.rule in ('ax', 'fp', 'mu-cl', 'ian', 'an'):
            t = Const(fresh('c'))
            state[s.index] = b.add(Just(t, None, f), 'ian')
        elif s.rule == 'mp':
            i, j = s.refs
            tj = App(tau[j][0], tau[i][0])
            jk = Imp(Just(tau[j][0], None, tau[j][1]),
                     Imp(Just(tau[i][0], None, tau[i][1]),
                         Just(tj, None, f)))
            k = b.add(jk, 'ax', (), ('jk',))
            m1 = b.add(jk.b, 'mp', (state[j], k))
            state[s.index] = b.add(jk.b.b, 'mp', (state[i], m1))
            t = tj
        elif s.rule == 'prop':
            t, state[s.index] = _chain(b, state, tau, s.refs, f, None,
                                       fresh, 'ian',
                                       lambda fr: Const(fr('c')))
        elif s.rule == 'mu-ind':
            raise TransformError("induction steps cannot be lifted")
        else:
            raise TransformError("unexpected rule %r in a justification "
                                 "derivation" % s.rule)
        tau[s.index] = (t, f)

    out = Derivation(d.logic_id, d.spec, d.spec_src, d.agents, d.ops,
                     premises, b.tuple())
    return LiftResult(tau[d.steps[-1].index][0], _checked(out, "lift"))


# -- quantified internalization ----------------------------------------------

def internalize_qlp(d: Derivation) -> LiftResult:
    """Internalization for the quantified logics.  Gen steps go through
    generalization, existential introduction over the lifted step, and
    the uniform-verifier axiom; qNec steps re-prefix with a proof checker
    and apply an existential axiom under a primitive justification.  In
    the restricted language (no uniform verifiers) Gen steps cannot be
    internalized and are refused.
    """
    logic = get_logic(d.logic_id)
    if logic.family != 'qlp':
        raise TransformError("quantified internalization applies to "
                             "quantified logics, not %s" % logic.name)
    if d.spec.kind != 'total':
        raise TransformError("internalization requires the total "
                             "specification")
    minus = 'qnec' not in logic.rules
    _require_ok(d, "internalize")
    d = elaborate(d)

    agent = d.agents[0] if d.agents else None
    fresh = _Fresh()
    b = _Build()
    state = {}
    tau = {}
    pvar = {p.name: Var(fresh('x')) for p in d.premises}
    premises = tuple(Premise(p.name, Just(pvar[p.name], agent, p.formula))
                     for p in d.premises)

    def prim():
        return Prim(fresh('f'), ())

    for s in d.steps:
        f = s.formula
        if s.rule == 'premise':
            t = pvar[s.args[0]]
            state[s.index] = b.add(Just(t, agent, f), 'premise', (), s.args)
        elif s.rule in ('ax', 'fp'):
            t = prim()
            state[s.index] = b.add(Just(t, agent, f), 'an')
        elif s.rule == 'an':
            # f is already  p : A  for a primitive p; re-prefix with the
            # proof checker instead of asking the specification for a
            # second layer
            t = Bang(f.t)
            a0 = b.add(f, 'an')
            j4 = Imp(f, Just(t, agent, f))
            k = b.add(j4, 'ax', (), ('j4',))
            state[s.index] = b.add(j4.b, 'mp', (a0, k))
        elif s.rule == 'mp':
            i, j = s.refs
            t = App(tau[j][0], tau[i][0])
            jk = Imp(Just(tau[j][0], agent, tau[j][1]),
                     Imp(Just(tau[i][0], agent, tau[i][1]),
                         Just(t, agent, f)))
            k = b.add(jk, 'ax', (), ('jk',))
            m1 = b.add(jk.b, 'mp', (state[j], k))
            state[s.index] = b.add(jk.b.b, 'mp', (state[i], m1))
        elif s.rule == 'prop':
            t, state[s.index] = _chain(b, state, tau, s.refs, f, agent,
                                       fresh, 'an',
                                       lambda fr: Prim(fr('f'), ()))
        elif s.rule == 'gen':
            if minus:
                raise TransformError(
                    "Gen step %d cannot be internalized without uniform "
                    "verifiers" % s.index)
            i, x = s.refs[0], s.args[0]
            u, g = tau[i]
            g1 = b.add(Forall(x, Just(u, agent, g)), 'gen', (state[i],), (x,))
            y = fresh('y')
            ex = Exists(y, Just(Var(y), agent, Forall(x, Just(u, agent, g))))
            g2 = b.add(ex, 'qnec', (g1,), (y,))
            t = UAll(u, x)
            uf = Imp(ex, Just(t, agent, f))
            g3 = b.add(uf, 'ax', (), ('uf',))
            state[s.index] = b.add(uf.b, 'mp', (g2, g3))
        elif s.rule == 'qnec':
            i, x = s.refs[0], s.args[0]
            u, g = tau[i]
            ju = Just(u, agent, g)
            j4 = Imp(ju, Just(Bang(u), agent, ju))
            k = b.add(j4, 'ax', (), ('j4',))
            m1 = b.add(j4.b, 'mp', (state[i], k))
            p = prim()
            q3 = Imp(ju, f)
            a1 = b.add(Just(p, agent, q3), 'an')
            t = App(p, Bang(u))
            jk = Imp(Just(p, agent, q3),
                     Imp(Just(Bang(u), agent, ju), Just(t, agent, f)))
            k2 = b.add(jk, 'ax', (), ('jk',))
            m2 = b.add(jk.b, 'mp', (a1, k2))
            state[s.index] = b.add(jk.b.b, 'mp', (m1, m2))
        else:
            raise TransformError("unexpected rule %r in a quantified "
                                 "derivation" % s.rule)
        tau[s.index] = (t, f)

    out = Derivation(d.logic_id, d.spec, d.spec_src, d.agents, d.ops,
                     premises, b.tuple())
    return LiftResult(tau[d.steps[-1].index][0],
                      _checked(out, "internalize"))


# -- substitution ------------------------------------------------------------

def substitute_proof(d: Derivation, x: str, t: Term) -> Derivation:
    """Apply [t/x] to every formula of the derivation.  Sound over the
    total and the empty specification; a declared-entry specification is
    refused since its entries need not be closed under substitution.
    Operator declarations are untouched: the rewritten axiom steps are
    accepted as substitution instances.
    """
    if d.spec.kind == 'explicit':
        raise TransformError("substitution is not sound over a declared "
                             "specification")
    _require_ok(d, "substitution")

    def fmap(f: Formula) -> Formula:
        try:
            return subst_term_for_var(f, x, t)
        except NotFreeFor as e:
            raise TransformError(str(e))

    steps = []
    for s in d.steps:
        args = s.args
        if s.rule == 'fp':
            args = (s.args[0], tuple(fmap(a) for a in s.args[1]))
        elif s.rule == 'inline' and s.args[0] == 'subst':
            try:
                args = ('subst', s.args[1], subst_in_term(s.args[2], x, t))
            except NotFreeFor as e:
                raise TransformError(str(e))
        steps.append(Step(s.index, fmap(s.formula), s.rule, s.refs, args))
    premises = tuple(Premise(p.name, fmap(p.formula)) for p in d.premises)
    out = Derivation(d.logic_id, d.spec, d.spec_src, d.agents, d.ops,
                     premises, tuple(steps))
    return _checked(out, "substitution")


# -- justification upgrade ---------------------------------------------------

def jug(d: Derivation, x: str) -> Derivation:
    """From a premise-free derivation of  t : A  build one of
    (t all x) : all x . A   (generalize, introduce the verifier
    existentially, then apply the uniform-verifier axiom)."""
    logic = get_logic(d.logic_id)
    if 'qnec' not in logic.rules:
        raise TransformError("the upgrade needs uniform verifiers and "
                             "existential introduction")
    if d.premises:
        raise TransformError("the upgrade applies to theorems only")
    rep = _require_ok(d, "upgrade")
    f = d.final
    if not isinstance(f, Just):
        raise TransformError("final formula must be a justification")
    u, agent, a = f.t, f.agent, f.a

    b = _Build()
    for s in d.steps:
        b.add(s.formula, s.rule, s.refs, s.args)
    n = len(b.steps)
    g1 = b.add(Forall(x, f), 'gen', (n,), (x,))
    y = 'y#1'
    while y in free_vars(f):
        y   = 'y#' + str(int(y.split('#')[1]) + 1)
    ex = Exists(y, Just(Var(y), agent, Forall(x, f)))
    g2 = b.add(ex, 'qnec', (g1,), (y,))
    goal = Just(UAll(u, x), agent, Forall(x, a))
    g3 = b.add(Imp(ex, goal), 'ax', (), ('uf',))
    b.add(goal, 'mp', (g2, g3))
    out = Derivation(d.logic_id, d.spec, d.spec_src, d.agents, d.ops,
                     d.premises, b.tuple())
    return _checked(out, "upgrade")


def restricted_qnec(a: Formula, x: str, logic_id: str = 'QLP-',
                    spec: Spec = TOTAL, agent: Optional[str] = None,
                    ops: tuple = ()) -> Derivation:
    """Existential introduction  ex x . x : A  for an axiom instance A,
    without the qNec rule: a primitive justification for A exists by the
    specification, and the existential axiom finishes."""
    logic = get_logic(logic_id)
    if x in free_vars(a):
        raise TransformError("%s is free in the formula" % x)
    if not kernel.make_axiom_test(logic, ops)(a):
        raise TransformError("restricted existential introduction applies "
                             "to axiom instances only")
    if spec.kind != 'total':
        raise TransformError("requires the total specification")
    b = _Build()
    p = Prim('f#1', ())
    s1 = b.add(Just(p, agent, a), 'an')
    goal = Exists(x, Just(Var(x), agent, a))
    s2 = b.add(Imp(Just(p, agent, a), goal), 'ax', (), ('q3',))
    b.add(goal, 'mp', (s1, s2))
    agents = (agent,) if agent else None
    out = Derivation(logic_id, spec, 'tcs', agents, tuple(ops), (), b.tuple())
    return _checked(out, "restricted existential introduction")


# -- opposing evidence -------------------------------------------------------

def jd_lemma(s: Term, t: Term, a: Formula, logic_id: str,
             agent: Optional[str] = None, ops: tuple = ()) -> Derivation:
    """s : ~A -> ~ t : A, via a constant over  ~A -> (A -> false)  and
    the seriality axiom at the combined falsum term."""
    b = _Build()
    c = Const('c#1')
    na = Neg(a)
    chain = Imp(na, Imp(a, Falsum()))
    s1 = b.add(Just(c, agent, chain), 'ian')
    u = App(c, s)
    jk1 = Imp(Just(c, agent, chain),
              Imp(Just(s, agent, na), Just(u, agent, Imp(a, Falsum()))))
    s2 = b.add(jk1, 'ax', (), ('jk',))
    s3 = b.add(jk1.b, 'mp', (s1, s2))
    w = App(u, t)
    jk2 = Imp(Just(u, agent, Imp(a, Falsum())),
              Imp(Just(t, agent, a), Just(w, agent, Falsum())))
    s4 = b.add(jk2, 'ax', (), ('jk',))
    s5 = b.add(Imp(Just(w, agent, Falsum()), Falsum()), 'ax', (), ('jd',))
    s6 = b.add(Imp(Just(u, agent, Imp(a, Falsum())), Neg(Just(t, agent, a))),
               'prop', (s4, s5))
    b.add(Imp(Just(s, agent, na), Neg(Just(t, agent, a))), 'prop', (s3, s6))
    agents = None
    d = get_logic(logic_id)
    if d.profile.agents == 'multi':
        agents = (agent,)
    out = Derivation(logic_id, TOTAL, 'tcs', agents, tuple(ops), (),
                     b.tuple())
    return _checked(out, "opposing-evidence lemma")


# -- forgetful projection ----------------------------------------------------

_PROJ_LOGIC = {
    'J': 'K', 'JT': 'T', 'JD': 'D', 'J4': 'K4', 'JB': 'KB', 'J5': 'K5',
    'LP': 'S4', 'JD4': 'D4', 'JT45': 'S5', 'EGL': 'GL',
}
_PROJ_AXIOM = {
    'jk': 'K', 'jt': 'T', 'j4': '4', 'jb': 'B', 'j5': '5', 'elob': 'lob',
}


def project_logic_id(logic_id: str) -> str:
    name = logic_id.strip()
    suffix = ''
    for tag in ('(FP)', '(mu)'):
        if name.endswith(tag):
            suffix = tag + suffix
            name = name[:-len(tag)]
    if name == 'JT4':
        name = 'LP'
    if name not in _PROJ_LOGIC:
        raise TransformError("no modal counterpart for %s" % logic_id)
    return _PROJ_LOGIC[name] + suffix


def project(f: Formula) -> Formula:
    """Forget justification terms:  t : A  becomes  [] A.  The image of
    an existentially quantified verifier  ex x . x : A  (x not free in A)
    is also  [] A, which makes the translation below a section."""
    match f:
        case Just(_, _, a):
            return Box(project(a))
        case Exists(x, Just(Var(n), _, a)) if n == x and x not in free_vars(a):
            return Box(project(a))
        case Atom() | Falsum():
            return f
        case Neg(a):
            return Neg(project(a))
        case And(a, b):
            return And(project(a), project(b))
        case Or(a, b):
            return Or(project(a), project(b))
        case Imp(a, b):
            return Imp(project(a), project(b))
        case Iff(a, b):
            return Iff(project(a), project(b))
        case Xor(a, b):
            return Xor(project(a), project(b))
        case Mu(v, a):
            return Mu(v, project(a))
        case FixApp(name, args):
            return FixApp(name, tuple(project(a) for a in args))
        case _:
            raise TransformError("projection undefined on %s"
                                 % type(f).__name__)


def _project_op(op: FPOperator) -> FPOperator:
    return make_operator(op.name, op.var, op.params, project(op.body),
                         'modalized')


def _peel(f: Formula):
    n = 0
    while isinstance(f, Just):
        f = f.a
        n += 1
    return n, f


def project_derivation(d: Derivation) -> Derivation:
    """Map a justification derivation to its modal counterpart, step by
    step.  Constant-specification steps become the image axiom followed
    by necessitation; the seriality schema needs a short detour since
    its modal form is derived rather than primitive."""
    logic = get_logic(d.logic_id)
    if logic.family != 'jl':
        raise TransformError("projection applies to justification logics")
    _require_ok(d, "projection")
    d = elaborate(d)
    target = project_logic_id(d.logic_id)

    b = _Build()
    last = {}

    def axiom_steps(g: Formula):
        """Emit steps proving project(g) for an axiom instance g; returns
        the concluding index."""
        img = project(g)
        name = None
        m = match_axiom(logic, g)
        if m:
            name = m[0]
        if name in _PROJ_AXIOM:
            return b.add(img, 'ax', (), (_PROJ_AXIOM[name],))
        if name in ('sum', 'taut'):
            return b.add(img, 'prop')
        if name == 'jd':
            nf = b.add(Neg(Falsum()), 'prop')
            bx = b.add(Box(Neg(Falsum())), 'nec', (nf,))
            dx = b.add(Imp(Box(Falsum()), Neg(Box(Neg(Falsum())))),
                       'ax', (), ('D',))
            return b.add(img, 'prop', (bx, dx))
        if name == 'mu-cl':
            return b.add(img, 'mu-cl')
        for op in d.ops:
            if fp_axiom_instance(op, g) is not None:
                assert isinstance(img, Iff) and isinstance(img.a, FixApp)
                return b.add(img, 'fp', (), (img.a.name, img.a.args))
        raise TransformError("axiom %s has no modal image"
                             % print_formula(g))

    for s in d.steps:
        f = s.formula
        if s.rule == 'ax':
            last[s.index] = axiom_steps(f)
        elif s.rule in ('ian', 'an'):
            n, core = _peel(f)
            k = axiom_steps(core)
            for _ in range(n):
                k = b.add(Box(b.steps[k - 1].formula), 'nec', (k,))
            last[s.index] = k
        elif s.rule == 'fp':
            name, args = s.args
            last[s.index] = b.add(project(f), 'fp', (),
                                  (name, tuple(project(a) for a in args)))
        elif s.rule == 'mu-cl':
            last[s.index] = b.add(project(f), 'mu-cl')
        elif s.rule == 'mu-ind':
            last[s.index] = b.add(project(f), 'mu-ind',
                                  (last[s.refs[0]],))
        elif s.rule == 'mp':
            last[s.index] = b.add(project(f), 'mp',
                                  tuple(last[r] for r in s.refs))
        elif s.rule == 'prop':
            last[s.index] = b.add(project(f), 'prop',
                                  tuple(last[r] for r in s.refs))
        elif s.rule == 'premise':
            last[s.index] = b.add(project(f), 'premise', (), s.args)
        else:
            raise TransformError("no modal image for rule %r" % s.rule)

    ops = tuple(_project_op(op) for op in d.ops)
    premises = tuple(Premise(p.name, project(p.formula))
                     for p in d.premises)
    out = Derivation(target, TOTAL, 'tcs', None, ops, premises, b.tuple())
    return _checked(out, "projection")


# -- existential translation -------------------------------------------------

def exists_translate(f: Formula) -> Formula:
    """Replace each box by an existentially quantified verifier, fresh
    variables numbered outermost-first.  A section of project()."""
    counter = [0]

    def go(g: Formula) -> Formula:
        match g:
            case Box(a):
                counter[0] += 1
                x = 'x#%d' % counter[0]
                return Exists(x, Just(Var(x), None, go(a)))
            case Atom() | Falsum():
                return g
            case Neg(a):
                return Neg(go(a))
            case And(a, c):
                return And(go(a), go(c))
            case Or(a, c):
                return Or(go(a), go(c))
            case Imp(a, c):
                return Imp(go(a), go(c))
            case Iff(a, c):
                return Iff(go(a), go(c))
            case Xor(a, c):
                return Xor(go(a), go(c))
            case _:
                raise TransformError("translation is defined on "
                                     "propositional modal formulas")
    return go(f)


# -- agent collapse ----------------------------------------------------------

def collapse_agents(f: Formula) -> Formula:
    match f:
        case Just(t, _, a):
            return Just(t, None, collapse_agents(a))
        case Atom() | Falsum():
            return f
        case Neg(a):
            return Neg(collapse_agents(a))
        case And(a, b):
            return And(collapse_agents(a), collapse_agents(b))
        case Or(a, b):
            return Or(collapse_agents(a), collapse_agents(b))
        case Imp(a, b):
            return Imp(collapse_agents(a), collapse_agents(b))
        case Iff(a, b):
            return Iff(collapse_agents(a), collapse_agents(b))
        case Xor(a, b):
            return Xor(collapse_agents(a), collapse_agents(b))
        case Forall(x, a):
            return Forall(x, collapse_agents(a))
        case Exists(x, a):
            return Exists(x, collapse_agents(a))
        case FixApp(name, args):
            return FixApp(name, tuple(collapse_agents(a) for a in args))
        case _:
            raise TransformError("agent collapse undefined on %s"
                                 % type(f).__name__)


def collapse_derivation(d: Derivation) -> Derivation:
    """Erase agent labels: a multi-agent quantified derivation becomes a
    single-agent one, rule for rule."""
    logic = get_logic(d.logic_id)
    if logic.profile.agents != 'multi':
        raise TransformError("input is already single-agent")
    _require_ok(d, "agent collapse")
    target = d.logic_id[:-2] if d.logic_id.endswith('_n') else d.logic_id
    spec = d.spec
    if spec.kind == 'explicit':
        spec = Spec('explicit',
                    frozenset(collapse_agents(e) for e in spec.entries))
    ops = tuple(make_operator(op.name, op.var, op.params,
                              collapse_agents(op.body), op.mode)
                for op in d.ops)
    premises = tuple(Premise(p.name, collapse_agents(p.formula))
                     for p in d.premises)
    steps = []
    for s in d.steps:
        args = s.args
        if s.rule == 'fp':
            args = (s.args[0], tuple(collapse_agents(a) for a in s.args[1]))
        steps.append(Step(s.index, collapse_agents(s.formula), s.rule,
                          s.refs, args))
    out = Derivation(target, spec, d.spec_src, None, ops, premises,
                     tuple(steps))
    return _checked(out, "agent collapse")
