"""Hypothesis strategies for random well-formed models.

The generator only builds models that resolve: names are drawn from the
declared signatures and fields, quantified formulas bind their own variables,
and arities line up by construction.  Declaration shapes (abstract, one,
extends) follow the legal combinations.
"""
from __future__ import annotations

from hypothesis import strategies as st

from boundsmith.lang.ast import (
    And, Binary, CardCmp, Command, Compare, FieldDecl, Model, NoneSet, Not,
    Or, Quant, SigDecl, SigRef, FieldRef, Unary, VarRef,
)
from boundsmith.lang.resolver import resolve_model

_SIG_NAMES = ("A", "B", "C")
_FIELD_NAMES = ("f", "g")


@st.composite
def sig_decls(draw):
    n = draw(st.integers(min_value=1, max_value=3))
    sigs = []
    for i in range(n):
        kind = draw(st.sampled_from(("plain", "plain", "plain", "one", "abstract", "extends")))
        parent = None
        is_one = is_abstract = False
        if kind == "one":
            is_one = True
        elif kind == "abstract":
            is_abstract = True
        elif kind == "extends" and i > 0:
            candidates = [s.name for s in sigs if not s.is_one]
            if candidates:
                parent = draw(st.sampled_from(candidates))
        sigs.append(SigDecl(_SIG_NAMES[i], is_abstract, is_one, parent, (), i))
    n_fields = draw(st.integers(min_value=0, max_value=2))
    for j in range(n_fields):
        owner = draw(st.integers(min_value=0, max_value=n - 1))
        target = draw(st.sampled_from(_SIG_NAMES[:n]))
        mult = draw(st.sampled_from(("lone", "lone", "one", "set", "some")))
        decl = FieldDecl(_FIELD_NAMES[j], mult, target)
        s = sigs[owner]
        sigs[owner] = SigDecl(
            s.name, s.is_abstract, s.is_one, s.parent, s.fields + (decl,), s.decl_index
        )
    return tuple(sigs)


@st.composite
def unary_exprs(draw, sigs, var=None):
    names = [s.name for s in sigs]
    choices = [SigRef(draw(st.sampled_from(names)))]
    if var is not None:
        choices.append(VarRef(var))
    base = draw(st.sampled_from(choices))
    fields = [f.name for s in sigs for f in s.fields]
    if fields and draw(st.booleans()):
        f = FieldRef(draw(st.sampled_from(fields)))
        if draw(st.booleans()):
            f = Unary(draw(st.sampled_from(("^", "*", "~"))), f)
        return Binary(".", base, f)
    if draw(st.booleans()):
        op = draw(st.sampled_from(("+", "&", "-")))
        other = SigRef(draw(st.sampled_from(names)))
        return Binary(op, base, other)
    return base


@st.composite
def formulas(draw, sigs):
    names = [s.name for s in sigs]
    kind = draw(st.sampled_from(("card", "card", "compare", "quant", "not")))
    if kind == "card":
        expr = draw(unary_exprs(sigs))
        op = draw(st.sampled_from(("=", "<=", ">=", "<", ">")))
        bound = draw(st.integers(min_value=0, max_value=2))
        return CardCmp(expr, op, bound)
    if kind == "compare":
        left = draw(unary_exprs(sigs))
        right = draw(
            st.sampled_from(
                [SigRef(n) for n in names] + [NoneSet()]
            )
        )
        return Compare(draw(st.sampled_from(("in", "="))), left, right)
    if kind == "quant":
        domain = SigRef(draw(st.sampled_from(names)))
        body_left = draw(unary_exprs(sigs, var="x"))
        body_right = draw(st.sampled_from([SigRef(n) for n in names] + [NoneSet(), VarRef("x")]))
        body = Compare(draw(st.sampled_from(("in", "!in"))), body_left, body_right)
        return Quant(draw(st.sampled_from(("all", "some", "no"))), "x", domain, body)
    return Not(draw(formulas(sigs)))


@st.composite
def models(draw):
    sigs = draw(sig_decls())
    n_facts = draw(st.integers(min_value=0, max_value=2))
    facts = tuple(draw(formulas(sigs)) for _ in range(n_facts))
    body_items = tuple(
        draw(formulas(sigs)) for _ in range(draw(st.integers(min_value=0, max_value=1)))
    )
    command = Command("go", And(body_items) if len(body_items) != 1 else body_items[0], 2)
    model = Model(sigs, {}, facts, (command,))
    return resolve_model(model)
