"""Certified term rewriting for the Milnor-Witt presentation.

A :class:`Derivation` is a sequence of steps, each citing a named relation,
a position (term index, factor offset) and the variable bindings that
instantiate the relation.  Replaying a step checks the side conditions and the
positional match exactly, so derivations double as machine-checkable
certificates.  The extended Steinberg derivation follows the explicit
induction: combine the last two symbols via [u][v] = [u+v][-v/u] while their
sum is nonzero, fall back to [a][-a] = 0 when it vanishes, and finish with the
Steinberg relation or [1] = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from mwslice.fields import (
    FieldDescriptor,
    Unit,
    one,
    parse_unit,
    unit_add,
    unit_div,
    unit_inv,
    unit_mul,
    unit_neg,
)
from mwslice.milnor_witt import (
    SYM,
    MWAtom,
    MWExpression,
    MWMonomial,
    atom_literal,
    collect,
    eta_atom,
    expression_literal,
    mw_symbols,
    mw_zero,
    parse_expression,
    sym_atom,
    unit_literal,
)


class RuleConditionError(ValueError):
    """A rule instance violates its side conditions."""


class StepMismatchError(ValueError):
    """A step does not match the expression at its stated position."""


class PreconditionError(ValueError):
    """The derivation request violates its hypothesis."""


class SearchExhaustedError(RuntimeError):
    """No derivation found within the depth bound."""


def _mono(coeff: int, *atoms: MWAtom) -> MWMonomial:
    return MWMonomial(coeff, tuple(atoms))


def _expr(fld: FieldDescriptor, *monos: MWMonomial) -> MWExpression:
    return MWExpression(fld, tuple(monos))


def _sym(u: Unit) -> MWAtom:
    return sym_atom(u)


def _unit_binding(bindings: dict, name: str) -> Unit:
    try:
        v = bindings[name]
    except KeyError:
        raise RuleConditionError(f"missing binding {name!r}") from None
    if not isinstance(v, Unit):
        raise RuleConditionError(f"binding {name!r} must be a unit")
    return v


def _instantiate(rule: str, fld: FieldDescriptor, bindings: dict) -> tuple[MWExpression, MWExpression]:
    """The (lhs, rhs) expressions of a rule instance; checks side conditions."""
    e = eta_atom()
    if rule == "R-eta-comm":
        u = _unit_binding(bindings, "u")
        return _expr(fld, _mono(1, e, _sym(u))), _expr(fld, _mono(1, _sym(u), e))
    if rule == "R-steinberg":
        u = _unit_binding(bindings, "u")
        w = unit_add(one(fld), unit_neg(u))
        if w is None:
            raise RuleConditionError("Steinberg relation needs u != 1")
        return _expr(fld, _mono(1, _sym(u), _sym(w))), mw_zero(fld)
    if rule in ("R-product", "R-twisted"):
        a = _unit_binding(bindings, "u" if rule == "R-product" else "a")
        b = _unit_binding(bindings, "v" if rule == "R-product" else "b")
        ab = unit_mul(a, b)
        lhs = _expr(fld, _mono(1, _sym(ab)))
        rhs = _expr(
            fld, _mono(1, _sym(a)), _mono(1, _sym(b)), _mono(1, e, _sym(a), _sym(b))
        )
        return lhs, rhs
    if rule == "R-eta-hyp":
        minus_one = unit_neg(one(fld))
        lhs = _expr(fld, _mono(2, e), _mono(1, e, e, _sym(minus_one)))
        return lhs, mw_zero(fld)
    if rule == "R-central":
        z = bindings.get("z")
        if not isinstance(z, MWExpression) or z.field != fld:
            raise RuleConditionError("R-central needs a degree-0 expression binding 'z'")
        if z.degree() not in (0, None):
            raise RuleConditionError("R-central: 'z' must be homogeneous of degree 0")
        atom = bindings.get("atom")
        if not isinstance(atom, MWAtom):
            raise RuleConditionError("R-central needs an atom binding 'atom'")
        side = bindings.get("side", "left")
        left = collect(
            MWExpression(
                fld, tuple(MWMonomial(t.coeff, t.factors + (atom,)) for t in z.terms)
            )
        )
        right = collect(
            MWExpression(
                fld, tuple(MWMonomial(t.coeff, (atom,) + t.factors) for t in z.terms)
            )
        )
        if side == "left":
            return left, right
        if side == "right":
            return right, left
        raise RuleConditionError(f"R-central side must be left or right, got {side!r}")
    if rule == "R-inv":
        a = _unit_binding(bindings, "a")
        ainv = unit_inv(a)
        lhs = _expr(fld, _mono(1, _sym(ainv)))
        rhs = _expr(fld, _mono(-1, _sym(a)), _mono(-1, e, _sym(ainv), _sym(a)))
        return lhs, rhs
    if rule == "R-negself":
        a = _unit_binding(bindings, "a")
        return _expr(fld, _mono(1, _sym(a), _sym(unit_neg(a)))), mw_zero(fld)
    if rule == "R-one":
        return _expr(fld, _mono(1, _sym(one(fld)))), mw_zero(fld)
    if rule == "R-neginv":
        a = _unit_binding(bindings, "a")
        target = unit_neg(unit_inv(a))
        return _expr(fld, _mono(1, _sym(a), _sym(target))), mw_zero(fld)
    if rule == "R-sum":
        u = _unit_binding(bindings, "u")
        v = _unit_binding(bindings, "v")
        s = unit_add(u, v)
        if s is None:
            raise RuleConditionError("R-sum needs u + v != 0")
        t = unit_neg(unit_div(v, u))
        lhs = _expr(fld, _mono(1, _sym(u), _sym(v)))
        rhs = _expr(fld, _mono(1, _sym(s), _sym(t)))
        return lhs, rhs
    raise RuleConditionError(f"unknown rule {rule!r}")


RULE_NAMES = (
    "R-eta-comm",
    "R-steinberg",
    "R-product",
    "R-eta-hyp",
    "R-central",
    "R-twisted",
    "R-inv",
    "R-negself",
    "R-one",
    "R-neginv",
    "R-sum",
)


@dataclass(frozen=True)
class Step:
    rule: str
    term_index: int
    factor_index: int
    bindings: dict

    def __post_init__(self) -> None:
        object.__setattr__(self, "bindings", dict(self.bindings))


@dataclass(frozen=True)
class Derivation:
    field: FieldDescriptor
    start: MWExpression
    steps: tuple[Step, ...]
    end: MWExpression

    def to_json(self) -> dict:
        return {
            "field": str(self.field),
            "start": expression_literal(self.start),
            "steps": [
                {
                    "rule": s.rule,
                    "position": {"term": s.term_index, "factor": s.factor_index},
                    "bindings": _bindings_to_json(s.bindings),
                }
                for s in self.steps
            ],
            "end": expression_literal(self.end),
        }


def _bindings_to_json(bindings: dict) -> dict:
    out = {}
    for k, v in sorted(bindings.items()):
        if isinstance(v, Unit):
            out[k] = unit_literal(v)
        elif isinstance(v, MWExpression):
            out[k] = expression_literal(v)
        elif isinstance(v, MWAtom):
            out[k] = atom_literal(v)
        else:
            out[k] = v
    return out


def derivation_from_json(data: dict) -> Derivation:
    from mwslice.fields import parse_field

    fld = parse_field(data["field"])
    start = parse_expression(fld, data["start"])
    end = parse_expression(fld, data["end"])
    steps = []
    for s in data["steps"]:
        bindings = {}
        for k, v in s.get("bindings", {}).items():
            if k == "z":
                bindings[k] = parse_expression(fld, v)
            elif k == "atom":
                bindings[k] = (
                    eta_atom() if v == "eta" else sym_atom(parse_unit(fld, v[1:-1]))
                )
            elif k == "side":
                bindings[k] = v
            else:
                bindings[k] = parse_unit(fld, v)
        steps.append(Step(s["rule"], s["position"]["term"], s["position"]["factor"], bindings))
    return Derivation(fld, start, tuple(steps), end)


def apply_step(expr: MWExpression, step: Step) -> MWExpression:
    """Apply one certified step; raises on any mismatch."""
    lhs, rhs = _instantiate(step.rule, expr.field, step.bindings)
    if not lhs.terms:
        raise StepMismatchError(f"{step.rule} instantiates to an empty pattern")
    anchor = lhs.terms[0]
    if not (0 <= step.term_index < len(expr.terms)):
        raise StepMismatchError(f"term index {step.term_index} out of range")
    t = expr.terms[step.term_index]
    j = step.factor_index
    width = len(anchor.factors)
    if not (0 <= j <= len(t.factors) - width):
        raise StepMismatchError(f"factor index {j} out of range")
    if t.factors[j : j + width] != anchor.factors:
        raise StepMismatchError(
            f"{step.rule} does not match factors at term {step.term_index}, offset {j}"
        )
    if anchor.coeff == 0 or t.coeff % anchor.coeff != 0:
        raise StepMismatchError(
            f"coefficient {t.coeff} is not a multiple of the pattern's {anchor.coeff}"
        )
    c = t.coeff // anchor.coeff
    prefix, suffix = t.factors[:j], t.factors[j + width :]

    remaining = list(expr.terms)
    remaining[step.term_index] = None  # anchor term consumed
    # consume the other monomials of a multi-term pattern
    for extra in lhs.terms[1:]:
        want_factors = prefix + extra.factors + suffix
        want_coeff = c * extra.coeff
        for i, term in enumerate(remaining):
            if term is not None and term.factors == want_factors:
                left = term.coeff - want_coeff
                remaining[i] = MWMonomial(left, term.factors) if left else None
                break
        else:
            raise StepMismatchError(
                f"{step.rule} needs a companion term {want_coeff} x {want_factors}"
            )

    new_terms: list[MWMonomial] = []
    for i, term in enumerate(remaining):
        if i == step.term_index:
            for r in rhs.terms:
                new_terms.append(MWMonomial(c * r.coeff, prefix + r.factors + suffix))
        if term is not None:
            new_terms.append(term)
    return collect(MWExpression(expr.field, tuple(new_terms)))


@dataclass(frozen=True)
class VerificationResult:
    ok: bool
    failed_step: int | None = None
    reason: str | None = None
    final: MWExpression | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_derivation(d: Derivation) -> VerificationResult:
    """Replay every step; true iff the stated end expression is reached."""
    current = d.start
    for i, step in enumerate(d.steps):
        try:
            current = apply_step(current, step)
        except (RuleConditionError, StepMismatchError, ValueError) as exc:
            return VerificationResult(False, i, str(exc))
    if collect(current).terms != collect(d.end).terms:
        return VerificationResult(
            False, None, f"derivation ends at {current}, not {d.end}", current
        )
    return VerificationResult(True, final=current)


def derive_extended_steinberg(units: Sequence[Unit]) -> Derivation:
    """A certificate that [u_1]...[u_n] rewrites to 0 when the units sum to 1."""
    if not units:
        raise PreconditionError("at least one unit is required")
    fld = units[0].field
    total: Unit | None = None
    for u in units:
        if u.field != fld:
            raise PreconditionError("units must share one field")
        total = u if total is None else unit_add(total, u)
    if total != one(fld):
        raise PreconditionError(f"units must sum to 1, got {total}")

    start = mw_symbols(list(units))
    expr = start
    steps: list[Step] = []
    active = list(units)
    guard = 0
    while True:
        guard += 1
        if guard > len(units) + 2:
            raise SearchExhaustedError("recursion exceeded its structural bound")
        n = len(active)
        if n == 1:
            steps.append(Step("R-one", 0, 0, {}))
            expr = apply_step(expr, steps[-1])
            break
        if n == 2:
            steps.append(Step("R-steinberg", 0, 0, {"u": active[0]}))
            expr = apply_step(expr, steps[-1])
            break
        u, v = active[-2], active[-1]
        s = unit_add(u, v)
        if s is None:
            steps.append(Step("R-negself", 0, n - 2, {"a": u}))
            expr = apply_step(expr, steps[-1])
            break
        steps.append(Step("R-sum", 0, n - 2, {"u": u, "v": v}))
        expr = apply_step(expr, steps[-1])
        active = active[:-2] + [s]
    if expr.terms:
        raise SearchExhaustedError(f"derivation failed to reach 0, stuck at {expr}")
    return Derivation(fld, start, tuple(steps), mw_zero(fld))


def derive_by_search(expr: MWExpression, depth: int = 64) -> Derivation | None:
    """Bounded breadth-first search for a rewrite of expr to 0 (diagnostic only)."""
    from collections import deque

    fld = expr.field
    seen = {str(expr)}
    queue: deque[tuple[MWExpression, tuple[Step, ...]]] = deque([(collect(expr), ())])
    while queue:
        cur, steps = queue.popleft()
        if len(steps) >= depth:
            continue
        for step in _candidate_steps(cur):
            try:
                nxt = apply_step(cur, step)
            except (RuleConditionError, StepMismatchError):
                continue
            if not nxt.terms:
                return Derivation(fld, collect(expr), steps + (step,), mw_zero(fld))
            key = str(nxt)
            if key not in seen:
                seen.add(key)
                queue.append((nxt, steps + (step,)))
    return None


def _candidate_steps(expr: MWExpression):
    fld = expr.field
    e1 = one(fld)
    for ti, t in enumerate(expr.terms):
        for fi, atom in enumerate(t.factors):
            if atom.kind != SYM:
                continue
            u = atom.unit
            if u == e1:
                yield Step("R-one", ti, fi, {})
            nxt = t.factors[fi + 1] if fi + 1 < len(t.factors) else None
            if nxt is not None and nxt.kind == SYM:
                v = nxt.unit
                if unit_add(u, v) is None:
                    yield Step("R-negself", ti, fi, {"a": u})
                else:
                    if unit_add(u, v) == e1 and u != e1:
                        yield Step("R-steinberg", ti, fi, {"u": u})
                    if v == unit_neg(unit_inv(u)):
                        yield Step("R-neginv", ti, fi, {"a": u})
                    yield Step("R-sum", ti, fi, {"u": u, "v": v})
