import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boundsmith.lang import (
    Binary, CardCmp, Compare, ParseError, PredCall, Quant, ResolveError,
    SigRef, Unary, VarRef, arity_of, parse_model, pretty_model, resolve_model,
    signature_order,
)
from conftest import model_source
from generators import models

SLL = model_source("sll")


def test_parse_sll_structure():
    m = parse_model(SLL)
    assert [s.name for s in m.sigs] == ["List", "Node"]
    assert m.sig("List").decl_index == 0
    assert m.sig("Node").decl_index == 1
    assert list(m.preds) == ["acyclic"]
    assert len(m.commands) == 1
    cmd = m.commands[0]
    assert cmd.name == "acyclic" and cmd.scope == 3
    assert isinstance(cmd.body, PredCall)


def test_parse_sll_fields():
    m = parse_model(SLL)
    header = m.sig("List").fields[0]
    assert (header.name, header.mult, header.target) == ("header", "lone", "Node")
    link = m.sig("Node").fields[0]
    assert (link.name, link.mult, link.target) == ("link", "lone", "Node")


def test_parse_empty_text():
    m = parse_model("")
    assert m.sigs == () and m.facts == () and m.commands == () and not m.preds


def test_parse_error_missing_field_target():
    with pytest.raises(ParseError) as err:
        parse_model("sig A { f: lone }")
    assert err.value.pos.line == 1
    assert "expected" in str(err.value)


def test_parse_error_has_position_and_expected_set():
    with pytest.raises(ParseError) as err:
        parse_model("sig A {}\nsig B {")
    assert err.value.pos.line == 2
    assert err.value.expected


def test_parse_comments_and_synonyms():
    m = parse_model(
        "// line comment\n"
        "sig A {} /* block\ncomment */ sig B {}\n"
        "fact { A in B && B in A || !(A != B) }\n"
        "run {} for 1\n"
    )
    assert len(m.sigs) == 2 and len(m.facts) == 1
    assert m.commands[0].name == "run$0"


def test_resolve_sll_types_closure():
    m = resolve_model(parse_model(SLL))
    body = m.preds["acyclic"]
    inner = body.body.body  # all l | all n | n !in n.^link
    assert isinstance(inner, Compare) and inner.op == "!in"
    assert isinstance(inner.left, VarRef)
    closure = inner.right
    assert isinstance(closure, Binary) and closure.op == "."
    assert isinstance(closure.right, Unary) and closure.right.op == "^"
    assert arity_of(closure) == 1


def test_resolve_unknown_sig():
    with pytest.raises(ResolveError) as err:
        resolve_model(parse_model("sig A {}\nfact { A in Tree }\nrun {} for 1"))
    assert err.value.kind == "unknown-name"
    assert err.value.pos.line == 2


def test_resolve_cyclic_extends():
    with pytest.raises(ResolveError) as err:
        resolve_model(parse_model("sig A extends B {} sig B extends A {}"))
    assert err.value.kind == "cyclic-extends"


def test_resolve_duplicate_names():
    with pytest.raises(ResolveError) as err:
        resolve_model(parse_model("sig A {} sig A {}"))
    assert err.value.kind == "duplicate-name"


def test_resolve_one_cannot_extend():
    with pytest.raises(ResolveError):
        resolve_model(parse_model("sig A {} one sig B extends A {}"))


def test_resolve_arity_mismatch():
    with pytest.raises(ResolveError) as err:
        resolve_model(parse_model("sig A {f: lone A}\nfact { A in f }\nrun {} for 1"))
    assert err.value.kind == "arity-mismatch"


def test_resolve_recursive_pred_rejected():
    src = "sig A {}\npred p { p }\nrun {p} for 1"
    with pytest.raises(ResolveError):
        resolve_model(parse_model(src))


def test_resolve_idempotent():
    m = resolve_model(parse_model(SLL))
    assert resolve_model(m) is m


def test_signature_order_examples():
    assert signature_order(resolve_model(parse_model(SLL))) == ["List", "Node"]
    m = resolve_model(parse_model("sig A {} one sig B {} sig C {}"))
    assert signature_order(m) == ["A", "C"]
    m = resolve_model(parse_model("sig Only {}"))
    assert signature_order(m) == ["Only"]


def test_signature_order_includes_abstract():
    m = resolve_model(parse_model(model_source("shapes")))
    assert signature_order(m) == ["Shape", "Circle", "Square"]


def test_roundtrip_sll():
    m = parse_model(SLL)
    assert parse_model(pretty_model(m)) == m


@settings(max_examples=60, deadline=None)
@given(models())
def test_roundtrip_random_models(model):
    # normalize through one print/parse cycle, then demand a fixpoint
    once = parse_model(pretty_model(model))
    assert parse_model(pretty_model(once)) == once


@settings(max_examples=40, deadline=None)
@given(models())
def test_signature_order_stable_under_reparse(model):
    reparsed = resolve_model(parse_model(pretty_model(model)))
    assert signature_order(reparsed) == signature_order(model)
    non_one = [s.name for s in model.sigs if not s.is_one]
    assert sorted(signature_order(model)) == sorted(non_one)


def test_cardcmp_parses():
    m = resolve_model(parse_model("sig A {}\nfact { #A <= 2 }\nrun {} for 3"))
    fact = m.facts[0]
    assert isinstance(fact, CardCmp) and fact.op == "<=" and fact.bound == 2
    assert isinstance(fact.expr, SigRef)


def test_quantifier_scope_checked():
    with pytest.raises(ResolveError):
        resolve_model(parse_model("sig A {}\nfact { all x : A | y in A }\nrun {} for 1"))


@settings(max_examples=150, deadline=None)
@given(st.text(max_size=120))
def test_parser_never_crashes_on_garbage(source):
    try:
        parse_model(source)
    except ParseError:
        pass
