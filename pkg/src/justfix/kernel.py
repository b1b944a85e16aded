"""Derivation checker and the .drv file format.

A derivation is a header block followed by numbered steps:

    logic: JT(FP)
    spec: tcs
    fix d p () := ~ x : p
    premise k1: K@1 (E1 | E2)

    1. fix(d) <-> ~ x : fix(d) ; fp d
    2. ...                     ; prop 1

Each step line is  <n>. <formula> ; <rule> [args]  where the separator is
the first semicolon at parenthesis depth zero (formulas may contain
semicolons inside fix(...) argument lists).  '#' starts a comment when it
opens a line or follows whitespace; identifiers may contain '#'.

The checker verifies every step, tracks which premises each step depends
on, and restricts necessitation-like rules to premise-free steps, which
keeps the deduction transform total.  Failed steps do not abort the run:
later steps are checked against the stated formulas, so one broken
citation yields one diagnostic rather than a cascade.
"""

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .syntax import (
    Formula, Term, Atom, Falsum, Neg, Imp, Iff, Box, Knows, Just,
    Forall, Exists, Mu, FixApp,
    Var, Const, Prim,
    ParseError, ProfileError,
    parse_formula, parse_term, print_formula, print_term,
    check_profile, free_vars, walk,
    subst_prop,
)
from .registry import (
    LogicSpec, get_logic, match_axiom, SCHEMAS,
    Spec, TOTAL, EMPTY, spec_membership, taut_consequence,
)
from .fixedpoint import FPOperator, make_operator, fp_axiom_instance


class DerivationError(Exception):
    """Malformed derivation file or headers."""


@dataclass(frozen=True)
class Premise:
    name: str
    formula: Formula


@dataclass(frozen=True)
class Step:
    index: int
    formula: Formula
    rule: str
    refs: tuple = ()
    args: tuple = ()


@dataclass(frozen=True)
class Derivation:
    logic_id: str
    spec: Spec
    spec_src: str = 'tcs'
    agents: Optional[tuple] = None
    ops: tuple = ()
    premises: tuple = ()
    steps: tuple = ()

    def step(self, i: int) -> Step:
        return self.steps[i - 1]

    @property
    def final(self) -> Formula:
        return self.steps[-1].formula


@dataclass
class StepVerdict:
    index: int
    ok: bool
    reason: Optional[str] = None
    flags: tuple = ()


@dataclass
class CheckReport:
    ok: bool
    logic: LogicSpec
    verdicts: list
    deps: dict                      # step index -> frozenset of premise names
    final: Optional[Formula]
    flags: tuple = ()

    @property
    def first_failure(self):
        for v in self.verdicts:
            if not v.ok:
                return (v.index, v.reason)
        return None

    @property
    def premises_used(self):
        if not self.deps:
            return frozenset()
        return self.deps[max(self.deps)]


# rules whose antecedent steps must not depend on premises
_NEC_LIKE = frozenset(('nec', 'gen', 'qnec', 'e', 'de', 'mu-ind', 'reg'))
# rules that never carry premise dependencies
_CLOSED = frozenset(('ax', 'ian', 'an', 'fp', 'mu-cl', 'inline')) | _NEC_LIKE


# -- parsing -----------------------------------------------------------------

_STEP_RE = re.compile(r'^(\d+)\.\s*(.*)$')


def _strip_comment(line: str) -> str:
    s = line.lstrip()
    if s.startswith('#'):
        return ''
    for k in range(1, len(line)):
        if line[k] == '#' and line[k - 1].isspace():
            return line[:k]
    return line


def _split_top(text: str, sep: str):
    """Split on sep occurrences at parenthesis depth zero."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == '(':
            depth += 1
        elif ch == ')':
            depth -= 1
        if ch == sep and depth == 0:
            parts.append(''.join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append(''.join(cur))
    return parts


def _parse_refs(tokens) -> tuple:
    refs = []
    for tok in tokens:
        for piece in tok.split(','):
            if piece:
                refs.append(int(piece))
    return tuple(refs)


def _parse_justification(text: str, profile) -> tuple:
    """Returns (rule, refs, args)."""
    head = _split_top(text, ';')
    toks = head[0].split()
    if not toks:
        raise DerivationError("empty justification")
    rule = toks[0]
    rest = toks[1:]
    if rule == 'ax':
        if len(rest) > 1:
            raise DerivationError("ax takes at most one schema id")
        return 'ax', (), (rest[0] if rest else None,)
    if rule == 'mp':
        r = _parse_refs(rest)
        if len(r) != 2:
            raise DerivationError("mp takes two step references")
        return 'mp', r, ()
    if rule in ('nec', 'mu-ind', 'reg'):
        r = _parse_refs(rest)
        if len(r) != 1:
            raise DerivationError("%s takes one step reference" % rule)
        return rule, r, ()
    if rule in ('gen', 'qnec'):
        if len(rest) != 2:
            raise DerivationError("%s takes a step reference and a variable" % rule)
        return rule, (int(rest[0]),), (rest[1],)
    if rule in ('ian', 'an', 'mu-cl'):
        if rest:
            raise DerivationError("%s takes no arguments" % rule)
        return rule, (), ()
    if rule == 'e':
        if len(rest) != 2:
            raise DerivationError("e takes a step reference and a time")
        return 'e', (int(rest[0]),), (int(rest[1]),)
    if rule == 'de':
        if len(rest) != 3:
            raise DerivationError("de takes a step reference and two times")
        return 'de', (int(rest[0]),), (int(rest[1]), int(rest[2]))
    if rule == 'fp':
        if len(rest) != 1:
            raise DerivationError("fp takes an operator name")
        args = ()
        if len(head) > 1:
            argsrc = ';'.join(head[1:])
            args = tuple(parse_formula(p.strip(), profile)
                         for p in _split_top(argsrc, ',') if p.strip())
        return 'fp', (), (rest[0], args)
    if rule == 'prop':
        return 'prop', _parse_refs(rest), ()
    if rule == 'admk':
        if len(rest) < 2:
            raise DerivationError("admk takes step references and a time")
        return 'admk', _parse_refs(rest[:-1]), (int(rest[-1]),)
    if rule == 'premise':
        if len(rest) != 1:
            raise DerivationError("premise takes a name")
        return 'premise', (), (rest[0],)
    if rule == 'inline':
        if not rest:
            raise DerivationError("inline requires a transform name")
        form = rest[0]
        if form == 'lift' or form == 'internalize':
            if len(rest) != 2:
                raise DerivationError("inline %s takes one step reference" % form)
            return 'inline', (int(rest[1]),), (form,)
        if form == 'subst':
            m = re.match(r'^subst\s+(\d+)\s+(\S+)\s*:=\s*(.+)$',
                         ' '.join(rest))
            if not m:
                raise DerivationError("inline subst syntax: subst <i> <x> := <term>")
            return ('inline', (int(m.group(1)),),
                    ('subst', m.group(2), parse_term(m.group(3), profile)))
        if form == 'jd':
            if len(rest) != 1:
                raise DerivationError("inline jd takes no arguments")
            return 'inline', (), ('jd',)
        raise DerivationError("unknown inline transform %r" % form)
    raise DerivationError("unknown rule %r" % rule)


def parse_spec_file(path: str, profile) -> Spec:
    with open(path) as fh:
        text = fh.read()
    entries = []
    for line in text.splitlines():
        line = _strip_comment(line).strip()
        if line:
            entries.append(parse_formula(line, profile))
    return Spec('explicit', frozenset(entries))


def parse_fix_decl(line: str, logic) -> FPOperator:
    """Parse `fix <name> <var> (<params>) := <body>` against a logic."""
    if not logic.fp:
        raise DerivationError(
            "logic %s has no fixed-point extension" % logic.name)
    m = re.match(r'^fix\s+(\S+)\s+(\S+)\s*\(([^)]*)\)\s*:=\s*(.+)$', line)
    if not m:
        raise DerivationError("bad fix declaration: %r" % line)
    params = tuple(p.strip() for p in m.group(3).split(',') if p.strip())
    body = parse_formula(m.group(4), logic.profile)
    return make_operator(m.group(1), m.group(2), params, body, logic.fp_mode)


def parse_derivation(text: str, base_dir: str = '.') -> Derivation:
    import os
    logic_id = None
    logic = None
    spec = TOTAL
    spec_src = 'tcs'
    agents = None
    ops = []
    premises = []
    steps = []
    for raw in text.splitlines():
        line = _strip_comment(raw).strip()
        if not line:
            continue
        m = _STEP_RE.match(line)
        if m:
            if logic is None:
                raise DerivationError("steps before logic header")
            n = int(m.group(1))
            if n != len(steps) + 1:
                raise DerivationError("step %d out of sequence" % n)
            body = m.group(2)
            parts = _split_top(body, ';')
            if len(parts) < 2:
                raise DerivationError("step %d lacks a justification" % n)
            formula = parse_formula(parts[0].strip(), logic.profile)
            rule, refs, args = _parse_justification(
                ';'.join(parts[1:]).strip(), logic.profile)
            if any(r < 1 or r >= n for r in refs):
                raise DerivationError("step %d cites an unavailable step" % n)
            steps.append(Step(n, formula, rule, refs, args))
            continue
        if line.startswith('logic:'):
            logic_id = line[len('logic:'):].strip()
            logic = get_logic(logic_id)
            continue
        if line.startswith('spec:'):
            spec_src = line[len('spec:'):].strip()
            if spec_src == 'tcs':
                spec = TOTAL
            elif spec_src == 'empty':
                spec = EMPTY
            elif spec_src.startswith('file'):
                if logic is None:
                    raise DerivationError("spec file before logic header")
                path = spec_src[len('file'):].strip()
                spec = parse_spec_file(os.path.join(base_dir, path),
                                       logic.profile)
            else:
                raise DerivationError("spec must be tcs, empty, or file <path>")
            continue
        if line.startswith('agents:'):
            names = line[len('agents:'):].replace(',', ' ').split()
            if len(names) == 1 and names[0].isdigit():
                agents = tuple('a%d' % (k + 1) for k in range(int(names[0])))
            else:
                agents = tuple(names)
            continue
        if line.startswith('fix '):
            if logic is None:
                raise DerivationError("fix declaration before logic header")
            ops.append(parse_fix_decl(line, logic))
            continue
        if line.startswith('premise '):
            if logic is None:
                raise DerivationError("premise before logic header")
            name, _, rhs = line[len('premise '):].partition(':')
            if not rhs:
                raise DerivationError("premise needs <name>: <formula>")
            premises.append(Premise(name.strip(),
                                    parse_formula(rhs.strip(), logic.profile)))
            continue
        raise DerivationError("unrecognized line: %r" % line)
    if logic is None:
        raise DerivationError("missing logic header")
    if not steps:
        raise DerivationError("no steps")
    return Derivation(logic_id, spec, spec_src, agents, tuple(ops),
                      tuple(premises), tuple(steps))


def load_derivation(path: str) -> Derivation:
    import os
    with open(path) as fh:
        return parse_derivation(fh.read(), os.path.dirname(path) or '.')


# -- serialization -----------------------------------------------------------

def _print_justification(s: Step) -> str:
    if s.rule == 'ax':
        return 'ax' if s.args[0] is None else 'ax %s' % s.args[0]
    if s.rule == 'fp':
        name, args = s.args
        if args:
            return 'fp %s; %s' % (name, ', '.join(print_formula(a)
                                                  for a in args))
        return 'fp %s' % name
    if s.rule in ('gen', 'qnec'):
        return '%s %d %s' % (s.rule, s.refs[0], s.args[0])
    if s.rule == 'e':
        return 'e %d %d' % (s.refs[0], s.args[0])
    if s.rule == 'de':
        return 'de %d %d %d' % (s.refs[0], s.args[0], s.args[1])
    if s.rule == 'admk':
        return 'admk %s %d' % (','.join(str(r) for r in s.refs), s.args[0])
    if s.rule == 'premise':
        return 'premise %s' % s.args[0]
    if s.rule == 'inline':
        form = s.args[0]
        if form in ('lift', 'internalize'):
            return 'inline %s %d' % (form, s.refs[0])
        if form == 'subst':
            return 'inline subst %d %s := %s' % (
                s.refs[0], s.args[1], print_term(s.args[2]))
        return 'inline jd'
    out = s.rule
    if s.refs:
        out += ' ' + ' '.join(str(r) for r in s.refs)
    return out


def print_derivation(d: Derivation) -> str:
    lines = ['logic: %s' % d.logic_id]
    if d.spec_src != 'tcs':
        lines.append('spec: %s' % d.spec_src)
    if d.agents:
        lines.append('agents: %s' % ' '.join(d.agents))
    for op in d.ops:
        lines.append('fix %s %s (%s) := %s' % (
            op.name, op.var, ', '.join(op.params), print_formula(op.body)))
    for p in d.premises:
        lines.append('premise %s: %s' % (p.name, print_formula(p.formula)))
    lines.append('')
    for s in d.steps:
        lines.append('%d. %s ; %s' % (s.index, print_formula(s.formula),
                                      _print_justification(s)))
    return '\n'.join(lines) + '\n'


# -- checking ----------------------------------------------------------------

def _operator(d: Derivation, name: str) -> Optional[FPOperator]:
    for op in d.ops:
        if op.name == name:
            return op
    return None


def make_axiom_test(logic: LogicSpec, ops: Sequence[FPOperator]):
    """Axiomhood test covering registered schemas and declared fixed-point
    operators; fed to spec membership so constants over fixed-point axioms
    are licensed."""
    def is_axiom(f: Formula) -> bool:
        if match_axiom(logic, f) is not None:
            return True
        for op in ops:
            if fp_axiom_instance(op, f) is not None:
                return True
        return False
    return is_axiom


def cone_indices(d: Derivation, i: int) -> list:
    seen = set()
    todo = [i]
    while todo:
        k = todo.pop()
        if k in seen:
            continue
        seen.add(k)
        todo.extend(d.step(k).refs)
    return sorted(seen)


def cone_derivation(d: Derivation, i: int) -> Derivation:
    """Sub-derivation ending at step i, reindexed from 1."""
    idx = cone_indices(d, i)
    remap = {old: new + 1 for new, old in enumerate(idx)}
    steps = []
    for old in idx:
        s = d.step(old)
        steps.append(Step(remap[old], s.formula, s.rule,
                          tuple(remap[r] for r in s.refs), s.args))
    names = {s.args[0] for s in steps if s.rule == 'premise'}
    premises = tuple(p for p in d.premises if p.name in names)
    return Derivation(d.logic_id, d.spec, d.spec_src, d.agents, d.ops,
                      premises, tuple(steps))


def _agent_ok(f: Formula, agents) -> Optional[str]:
    declared = set(agents) if agents else None
    for node in walk(f):
        if isinstance(node, Just):
            if declared is None:
                if node.agent is not None:
                    return "agent label %r in single-agent logic" % node.agent
            else:
                if node.agent is None:
                    return "missing agent label in multi-agent logic"
                if node.agent not in declared:
                    return "undeclared agent %r" % node.agent
    return None


def check_derivation(d: Derivation) -> CheckReport:
    logic = get_logic(d.logic_id)
    verdicts = []
    deps = {}
    flags = []
    gl = {}           # GLS: which steps are justified without the T axiom
    gls = logic.name.startswith('GLS')
    is_axiom = make_axiom_test(logic, d.ops)
    multi = logic.profile.agents == 'multi'
    if multi and not d.agents:
        raise DerivationError("logic %s requires an agents header"
                              % logic.name)

    for s in d.steps:
        ok, reason, sflags = _check_step(d, logic, s, deps, gl, gls, is_axiom)
        # dependency bookkeeping happens even for failed steps so later
        # diagnostics stay meaningful
        if s.rule == 'premise':
            deps[s.index] = frozenset((s.args[0],))
        elif s.rule in _CLOSED:
            deps[s.index] = frozenset()
        else:
            deps[s.index] = frozenset().union(
                *(deps[r] for r in s.refs)) if s.refs else frozenset()
        if gls:
            gl[s.index] = _gl_status(logic, s, gl)
        verdicts.append(StepVerdict(s.index, ok, reason, tuple(sflags)))
        flags.extend(sflags)
    all_ok = all(v.ok for v in verdicts)
    return CheckReport(all_ok, logic, verdicts, deps,
                       d.final if d.steps else None, tuple(dict.fromkeys(flags)))


def _gl_status(logic, s: Step, gl: dict) -> bool:
    if s.rule == 'ax':
        # every registered schema except reflection preserves provability-law
        # status; reflection is the one non-theorem axiom
        name = s.args[0]
        if name is None:
            m = match_axiom(logic, s.formula)
            name = m[0] if m else None
        return name != 'T'
    if s.rule in ('nec', 'reg'):
        return True
    if s.rule in ('mp', 'prop'):
        return all(gl.get(r, False) for r in s.refs)
    return False


def _check_step(d, logic, s, deps, gl, gls, is_axiom):
    f = s.formula
    flags = []
    try:
        check_profile(f, logic.profile)
    except ProfileError as e:
        return False, str(e), flags
    err = _agent_ok(f, d.agents)
    if err:
        return False, err, flags
    if s.rule not in logic.rules:
        return False, "rule %r not available in %s" % (s.rule, logic.name), flags
    if s.rule in _NEC_LIKE:
        for r in s.refs:
            if deps.get(r):
                return False, ("%s applied to step %d, which depends on "
                               "premises %s" % (s.rule, r,
                                                sorted(deps[r]))), flags

    ref = [d.step(r).formula for r in s.refs]

    if s.rule == 'ax':
        name = s.args[0]
        if name is not None:
            schema = next((a for a in logic.axioms if a.name == name), None)
            if schema is None:
                return False, "schema %r not registered in %s" % (
                    name, logic.name), flags
            if schema.match(f) is None:
                return False, "not an instance of %s" % name, flags
            return True, None, flags
        if match_axiom(logic, f) is None:
            return False, "matches no axiom schema of %s" % logic.name, flags
        return True, None, flags

    if s.rule == 'premise':
        name = s.args[0]
        pre = next((p for p in d.premises if p.name == name), None)
        if pre is None:
            return False, "premise %r not declared" % name, flags
        if f != pre.formula:
            return False, "formula differs from premise %r" % name, flags
        return True, None, flags

    if s.rule == 'mp':
        want = Imp(ref[0], f)
        if ref[1] != want:
            return False, ("step %d is not %s" % (s.refs[1],
                                                  print_formula(want))), flags
        return True, None, flags

    if s.rule == 'nec':
        if gls and not gl.get(s.refs[0], False):
            return False, ("necessitation in GLS requires a provability-law "
                           "step, step %d uses reflection" % s.refs[0]), flags
        if f != Box(ref[0]):
            return False, "conclusion is not [] of step %d" % s.refs[0], flags
        return True, None, flags

    if s.rule == 'gen':
        x = s.args[0]
        if f != Forall(x, ref[0]):
            return False, "conclusion is not all %s of step %d" % (
                x, s.refs[0]), flags
        return True, None, flags

    if s.rule == 'qnec':
        x = s.args[0]
        if x in free_vars(ref[0]):
            return False, "%s is free in step %d" % (x, s.refs[0]), flags
        agent = None
        if isinstance(f, Exists) and isinstance(f.a, Just):
            agent = f.a.agent
        if f != Exists(x, Just(Var(x), agent, ref[0])):
            return False, "conclusion is not ex %s . %s : A" % (x, x), flags
        return True, None, flags

    if s.rule in ('ian', 'an'):
        if s.rule == 'an' and d.spec.kind == 'total':
            # single justification prefix over an axiom instance
            if not isinstance(f, Just):
                return False, "an conclusion must be a justification", flags
            want = Prim if logic.spec_kind == 'pts' else Const
            if not isinstance(f.t, want):
                return False, ("an requires a %s justification term"
                               % want.__name__.lower()), flags
            if not is_axiom(f.a):
                return False, "body is not an axiom instance", flags
            return True, None, flags
        if not spec_membership(d.spec, f, logic, is_axiom):
            return False, "not licensed by the specification", flags
        return True, None, flags

    if s.rule == 'mu-cl':
        if SCHEMAS['mu-cl'].match(f) is None:
            return False, "not a closure instance", flags
        return True, None, flags

    if s.rule == 'mu-ind':
        if not (isinstance(f, Imp) and isinstance(f.a, Mu)):
            return False, "conclusion must be (mu p . A) -> B", flags
        m, b = f.a, f.b
        want = Imp(subst_prop(m.a, m.var, b), b)
        if ref[0] != want:
            return False, "step %d is not %s" % (s.refs[0],
                                                 print_formula(want)), flags
        return True, None, flags

    if s.rule == 'e':
        t = s.args[0]
        if t < 0:
            return False, "negative time", flags
        if f != Knows(t, ref[0]):
            return False, "conclusion is not K@%d of step %d" % (
                t, s.refs[0]), flags
        return True, None, flags

    if s.rule == 'de':
        t1, t2 = s.args
        if not t1 < t2:
            return False, "times must increase", flags
        if f != Imp(Knows(t1, ref[0]), Knows(t2, Knows(t1, ref[0]))):
            return False, "conclusion shape mismatch", flags
        return True, None, flags

    if s.rule == 'reg':
        if not isinstance(ref[0], Imp):
            return False, "step %d is not an implication" % s.refs[0], flags
        a, b = ref[0].a, ref[0].b
        if logic.family == 'tmel':
            if not (isinstance(f, Imp) and isinstance(f.a, Knows)
                    and isinstance(f.b, Knows)):
                return False, "conclusion must relate two knowledge times", flags
            if f.a.a != a or f.b.a != b:
                return False, "conclusion bodies differ from step %d" % (
                    s.refs[0]), flags
            if not f.a.time < f.b.time:
                return False, "times must increase", flags
            return True, None, flags
        if gls and not gl.get(s.refs[0], False):
            return False, ("regularity in GLS requires a provability-law "
                           "step, step %d uses reflection" % s.refs[0]), flags
        if f != Imp(Box(a), Box(b)):
            return False, "conclusion is not []A -> []B for step %d" % (
                s.refs[0]), flags
        return True, None, flags

    if s.rule == 'fp':
        name, given = s.args
        op = _operator(d, name)
        if op is None:
            return False, "no operator %r declared" % name, flags
        if given and (not isinstance(f, Iff) or f.a != FixApp(name, given)):
            return False, "stated arguments do not match the conclusion", flags
        if fp_axiom_instance(op, f) is None:
            return False, "not an instance of the %s axiom" % name, flags
        return True, None, flags

    if s.rule == 'prop':
        if not taut_consequence(f, ref):
            return False, "not a tautological consequence of cited steps", flags
        return True, None, flags

    if s.rule == 'admk':
        t = s.args[0]
        flags.append('admissible-knowledge rule used')
        if f != Knows(t, ref[-1]):
            return False, "conclusion is not K@%d of step %d" % (
                t, s.refs[-1]), flags
        prem = frozenset().union(*(deps.get(r, frozenset()) for r in s.refs)) \
            if s.refs else frozenset()
        for name in prem:
            pf = next((p.formula for p in d.premises if p.name == name), None)
            if pf is None or not (isinstance(pf, Knows) and pf.time < t):
                return False, ("premise %s is not knowledge earlier than "
                               "K@%d" % (name, t)), flags
        return True, None, flags

    if s.rule == 'inline':
        return _check_inline(d, logic, s, deps, flags)

    return False, "unknown rule %r" % s.rule, flags


def _check_inline(d, logic, s, deps, flags):
    from . import transforms
    form = s.args[0]
    f = s.formula
    try:
        if form == 'jd':
            if not (isinstance(f, Imp) and isinstance(f.a, Just)
                    and isinstance(f.a.a, Neg) and isinstance(f.b, Neg)
                    and isinstance(f.b.a, Just)
                    and f.a.agent == f.b.a.agent):
                return False, ("inline jd expects s : ~A -> ~ t : A"), flags
            if f.a.a.a != f.b.a.a:
                return False, "antecedent and consequent bodies differ", flags
            if d.spec.kind != 'total':
                return False, ("inline jd needs a total specification"), flags
            sub = transforms.jd_lemma(f.a.t, f.b.a.t, f.a.a.a,
                                      d.logic_id, f.a.agent, d.ops)
            if sub.final != f:
                return False, "generated lemma proves %s" % (
                    print_formula(sub.final)), flags
            return True, None, flags
        i = s.refs[0]
        if deps.get(i):
            return False, ("inline %s applied to step %d, which depends on "
                           "premises %s" % (form, i, sorted(deps[i]))), flags
        sub = cone_derivation(d, i)
        if form == 'lift':
            res = transforms.lift(sub)
            if res.derivation.final != f:
                return False, "lift of step %d proves %s" % (
                    i, print_formula(res.derivation.final)), flags
            return True, None, flags
        if form == 'internalize':
            if d.spec.kind == 'empty':
                flags.append('internalized under the total specification')
                sub = _with_spec(sub, TOTAL, 'tcs')
            res = transforms.internalize_qlp(sub)
            if res.derivation.final != f:
                return False, "internalization of step %d proves %s" % (
                    i, print_formula(res.derivation.final)), flags
            return True, None, flags
        if form == 'subst':
            x, t = s.args[1], s.args[2]
            img = transforms.substitute_proof(sub, x, t)
            if img.final != f:
                return False, "substitution image of step %d is %s" % (
                    i, print_formula(img.final)), flags
            return True, None, flags
    except transforms.TransformError as e:
        return False, "inline %s failed: %s" % (form, e), flags
    return False, "unknown inline transform %r" % form, flags


def _with_spec(d: Derivation, spec: Spec, src: str) -> Derivation:
    return Derivation(d.logic_id, spec, src, d.agents, d.ops, d.premises,
                      d.steps)


def elaborate(d: Derivation) -> Derivation:
    """Expand inline transform steps into their generated sub-derivations.
    The result contains only primitive rules and proves the same final
    formula; premise-bearing steps are untouched (inline steps are always
    premise-free)."""
    from . import transforms
    if not any(s.rule == 'inline' for s in d.steps):
        return d
    new_steps = []
    remap = {}

    def emit(formula, rule, refs, args):
        new_steps.append(Step(len(new_steps) + 1, formula, rule, refs, args))
        return len(new_steps)

    for s in d.steps:
        if s.rule != 'inline':
            remap[s.index] = emit(s.formula, s.rule,
                                  tuple(remap[r] for r in s.refs), s.args)
            continue
        form = s.args[0]
        if form == 'jd':
            f = s.formula
            sub = transforms.jd_lemma(f.a.t, f.b.a.t, f.a.a.a,
                                      d.logic_id, f.a.agent, d.ops)
        else:
            cone = cone_derivation(d, s.refs[0])
            if form == 'lift':
                sub = transforms.lift(cone).derivation
            elif form == 'internalize':
                if d.spec.kind == 'empty':
                    cone = _with_spec(cone, TOTAL, 'tcs')
                sub = transforms.internalize_qlp(cone).derivation
            else:
                sub = transforms.substitute_proof(cone, s.args[1], s.args[2])
        offset = len(new_steps)
        for t in sub.steps:
            if t.rule == 'inline':
                raise DerivationError("transform emitted an inline step")
            emit(t.formula, t.rule, tuple(r + offset for r in t.refs), t.args)
        if sub.steps[-1].formula != s.formula:
            raise DerivationError(
                "elaborated step %d proves a different formula" % s.index)
        remap[s.index] = len(new_steps)
    return Derivation(d.logic_id, d.spec, d.spec_src, d.agents, d.ops,
                      d.premises, tuple(new_steps))


def format_report(rep: CheckReport, verbose: bool = False) -> str:
    lines = []
    if verbose:
        for v in rep.verdicts:
            mark = 'ok' if v.ok else 'FAIL'
            extra = '' if v.ok else '  %s' % v.reason
            lines.append('step %d: %s%s' % (v.index, mark, extra))
    for fl in rep.flags:
        lines.append('note: %s' % fl)
    if rep.ok:
        used = rep.premises_used
        tail = (' [premises: %s]' % ', '.join(sorted(used))) if used else ''
        lines.append('OK: final = %s%s' % (print_formula(rep.final), tail))
    else:
        idx, why = rep.first_failure
        lines.append('FAIL step %d: %s' % (idx, why))
    return '\n'.join(lines)
