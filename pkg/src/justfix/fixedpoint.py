"""Fixed-point operators over guarded propositional positions.

An operator declaration names a defined connective delta, a recursion
variable p, a parameter list, and a body in the base language.  The body
must mention p only in guarded positions (which guard counts depends on
the host logic: boxed for modal logics, under a justification term for
JL, under an existentially quantified justification for QLP) and every
other atom of the body must be listed as a parameter.

The axiom attached to a declaration is the biconditional

    delta(args) <-> body[p := delta(args), params := args]

produced by simultaneous substitution.  Checking whether a formula is an
instance of this axiom is deliberately more liberal than re-building it:
images under justification-term substitution must still be recognized,
so the right-hand side may differ from the rebuilt body by a uniform
substitution of terms for the body's free justification variables (see
registry.sigma_match).
"""

from dataclasses import dataclass
from typing import Optional, Sequence

from .syntax import (
    Formula, Iff, Mu, FixApp, Atom,
    OCCURRENCE_MODES, occurrence_ok, free_atoms, walk,
    subst_prop, subst_prop_multi, nu_formula,
)
from .registry import sigma_match


class FixedPointError(Exception):
    pass


@dataclass(frozen=True)
class FPOperator:
    name: str
    var: str                      # recursion variable
    params: tuple                 # parameter atom names, in order
    body: Formula                 # base-language body
    mode: str                     # occurrence discipline the body satisfies


def make_operator(name: str, var: str, params: Sequence[str], body: Formula,
                  mode: str) -> FPOperator:
    """Validate and freeze an operator declaration."""
    if mode not in OCCURRENCE_MODES:
        raise FixedPointError("unknown occurrence mode %r" % mode)
    params = tuple(params)
    if len(set(params)) != len(params):
        raise FixedPointError("duplicate parameter in %r" % (params,))
    if var in params:
        raise FixedPointError("recursion variable %r listed as parameter" % var)
    for node in walk(body):
        if isinstance(node, (Mu, FixApp)):
            raise FixedPointError(
                "operator body must be in the base language, found %s"
                % type(node).__name__)
    if not occurrence_ok(body, var, mode):
        raise FixedPointError(
            "recursion variable %r not %s in operator body" % (var, mode))
    loose = free_atoms(body) - {var} - set(params)
    if loose:
        raise FixedPointError(
            "body atoms %s not covered by parameters" % sorted(loose))
    return FPOperator(name, var, params, body, mode)


def fp_axiom(op: FPOperator, args: Sequence[Formula]) -> Formula:
    """The defining biconditional for op at the given argument formulas."""
    args = tuple(args)
    if len(args) != len(op.params):
        raise FixedPointError(
            "%s expects %d arguments, got %d"
            % (op.name, len(op.params), len(args)))
    head = FixApp(op.name, args)
    env = {op.var: head}
    env.update(zip(op.params, args))
    return Iff(head, subst_prop_multi(op.body, env))


def fp_axiom_instance(op: FPOperator, f: Formula) -> Optional[dict]:
    """Recognize f as (a term-substitution image of) the defining axiom.

    Returns the witnessing substitution on the body's free justification
    variables (empty dict for the strict axiom itself), or None.  The
    argument formulas are read off the left-hand head, so images whose
    arguments were themselves rewritten are accepted too.
    """
    if not isinstance(f, Iff):
        return None
    head = f.a
    if not isinstance(head, FixApp) or head.name != op.name:
        return None
    if len(head.args) != len(op.params):
        return None
    env = {op.var: head}
    env.update(zip(op.params, head.args))
    base = subst_prop_multi(op.body, env)
    return sigma_match(base, f.b)


def mu_closure_instance(var: str, body: Formula) -> Formula:
    """The closure axiom A[mu p.A / p] <-> mu p.A."""
    m = Mu(var, body)
    return Iff(subst_prop(body, var, m), m)


def nu_expand(var: str, body: Formula) -> Formula:
    """Greatest fixed point as the dual mu formula."""
    return nu_formula(var, body)


def gl_obligation(op: FPOperator, candidate: Formula,
                  args: Sequence[Formula]) -> Formula:
    """Explicit-definability obligation for a boxed-position operator: the
    candidate formula must satisfy candidate <-> body[p := candidate].
    The returned biconditional is what a kernel check must accept."""
    args = tuple(args)
    if len(args) != len(op.params):
        raise FixedPointError(
            "%s expects %d arguments, got %d"
            % (op.name, len(op.params), len(args)))
    if not occurrence_ok(op.body, op.var, 'modalized'):
        raise FixedPointError(
            "explicit definability only applies to boxed recursion")
    env = {op.var: candidate}
    env.update(zip(op.params, args))
    return Iff(candidate, subst_prop_multi(op.body, env))
