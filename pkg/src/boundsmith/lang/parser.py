"""Recursive-descent parser producing an unresolved model."""
from __future__ import annotations

from . import ast
from .ast import (
    And, Binary, CardCmp, Command, Compare, Expr, FieldDecl, Formula, Iff,
    Implies, Model, NameRef, NoneSet, Not, Or, ParseError, Pos, PredCall,
    Quant, SigDecl, Unary,
)
from .lexer import Token, tokenize

_CMP_OPS = ("=", "<=", ">=", "<", ">")
_SYNONYMS = {"&&": "and", "||": "or", "=>": "implies", "<=>": "iff"}


class _Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.i = 0

    # ------------------------------------------------------------- helpers
    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def at(self, *kinds: str) -> bool:
        return self.peek().kind in kinds

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "EOF":
            self.i += 1
        return tok

    def expect(self, *kinds: str) -> Token:
        tok = self.peek()
        if tok.kind not in kinds:
            found = tok.text or "end of input"
            raise ParseError(f"unexpected {found!r}", tok.pos, expected=kinds)
        return self.advance()

    def accept(self, *kinds: str) -> Token | None:
        if self.at(*kinds):
            return self.advance()
        return None

    # ---------------------------------------------------------- paragraphs
    def model(self) -> Model:
        sigs: list[SigDecl] = []
        preds: dict[str, Formula] = {}
        facts: list[Formula] = []
        commands: list[Command] = []
        while not self.at("EOF"):
            tok = self.peek()
            if tok.kind in ("sig", "abstract", "one"):
                sigs.append(self.sig_decl(len(sigs)))
            elif tok.kind == "pred":
                name, body = self.pred_decl()
                if name in preds:
                    raise ParseError(f"duplicate predicate {name!r}", tok.pos)
                preds[name] = body
            elif tok.kind == "fact":
                facts.append(self.fact_decl())
            elif tok.kind == "run":
                commands.append(self.run_cmd(len(commands)))
            else:
                raise ParseError(
                    f"unexpected {tok.text!r}", tok.pos,
                    expected=("sig", "abstract", "one", "pred", "fact", "run"),
                )
        return Model(tuple(sigs), preds, tuple(facts), tuple(commands))

    def sig_decl(self, index: int) -> SigDecl:
        start = self.peek().pos
        is_abstract = is_one = False
        while self.at("abstract", "one"):
            tok = self.advance()
            if tok.kind == "abstract":
                if is_abstract:
                    raise ParseError("repeated 'abstract'", tok.pos)
                is_abstract = True
            else:
                if is_one:
                    raise ParseError("repeated 'one'", tok.pos)
                is_one = True
        self.expect("sig")
        name = self.expect("IDENT").text
        parent: str | None = None
        if self.accept("extends"):
            parent = self.expect("IDENT").text
        self.expect("{")
        fields: list[FieldDecl] = []
        if not self.at("}"):
            fields.append(self.field_decl())
            while self.accept(","):
                fields.append(self.field_decl())
        self.expect("}")
        return SigDecl(name, is_abstract, is_one, parent, tuple(fields), index, pos=start)

    def field_decl(self) -> FieldDecl:
        name_tok = self.expect("IDENT")
        self.expect(":")
        mult = self.expect("lone", "one", "some", "set").kind
        target = self.expect("IDENT").text
        return FieldDecl(name_tok.text, mult, target, pos=name_tok.pos)

    def pred_decl(self) -> tuple[str, Formula]:
        self.expect("pred")
        name = self.expect("IDENT").text
        return name, self.block()

    def fact_decl(self) -> Formula:
        self.expect("fact")
        self.accept("IDENT")  # optional fact name, kept only in source
        return self.block()

    def run_cmd(self, index: int) -> Command:
        start = self.expect("run").pos
        if self.at("IDENT"):
            tok = self.advance()
            body: Formula = PredCall(tok.text, pos=tok.pos)
            name = tok.text
        else:
            body = self.block()
            if isinstance(body, PredCall):
                name = body.name
            elif isinstance(body, And) and len(body.items) == 1 and isinstance(body.items[0], PredCall):
                body = body.items[0]
                name = body.name
            else:
                name = f"run${index}"
        self.expect("for")
        scope_tok = self.expect("INT")
        scope = int(scope_tok.text)
        if scope < 1:
            raise ParseError("scope must be at least 1", scope_tok.pos)
        span = (scope_tok.offset, scope_tok.offset + len(scope_tok.text))
        return Command(name, body, scope, scope_span=span, pos=start)

    def block(self) -> Formula:
        """A `{ formula* }` block; multiple formulas conjoin."""
        open_tok = self.expect("{")
        items: list[Formula] = []
        while not self.at("}"):
            items.append(self.formula())
        self.expect("}")
        if len(items) == 1:
            return items[0]
        return And(tuple(items), pos=open_tok.pos)

    # ------------------------------------------------------------ formulas
    def formula(self) -> Formula:
        if self.at("all", "some", "no") and self.peek(1).kind == "IDENT" and self.peek(2).kind == ":":
            tok = self.advance()
            var = self.expect("IDENT").text
            self.expect(":")
            domain = self.expr()
            self.expect("|")
            return Quant(tok.kind, var, domain, self.formula(), pos=tok.pos)
        return self.or_formula()

    def or_formula(self) -> Formula:
        left = self.iff_formula()
        items = [left]
        pos = None
        while True:
            tok = self.accept("or", "||")
            if tok is None:
                break
            pos = pos or tok.pos
            items.append(self.iff_formula())
        if len(items) == 1:
            return left
        return Or(tuple(items), pos=pos or left_pos(left))

    def iff_formula(self) -> Formula:
        left = self.implies_formula()
        while True:
            tok = self.accept("iff", "<=>")
            if tok is None:
                return left
            left = Iff(left, self.implies_formula(), pos=tok.pos)

    def implies_formula(self) -> Formula:
        left = self.and_formula()
        tok = self.accept("implies", "=>")
        if tok is None:
            return left
        return Implies(left, self.implies_formula(), pos=tok.pos)

    def and_formula(self) -> Formula:
        left = self.not_formula()
        items = [left]
        pos = None
        while True:
            tok = self.accept("and", "&&")
            if tok is None:
                break
            pos = pos or tok.pos
            items.append(self.not_formula())
        if len(items) == 1:
            return left
        return And(tuple(items), pos=pos or left_pos(left))

    # precedence, loosest to tightest: quantifier, or, iff, implies, and, not

    def not_formula(self) -> Formula:
        if self.at("not") or (self.at("!") and self.peek(1).kind not in ("in",)):
            tok = self.advance()
            return Not(self.not_formula(), pos=tok.pos)
        return self.comparison()

    def comparison(self) -> Formula:
        tok = self.peek()
        if tok.kind == "#":
            self.advance()
            expr = self.expr()
            op = self.expect(*_CMP_OPS).kind
            bound_tok = self.expect("INT")
            return CardCmp(expr, op, int(bound_tok.text), pos=tok.pos)
        if tok.kind == "(":
            # could be a parenthesized formula or a parenthesized expression
            save = self.i
            self.advance()
            try:
                inner = self.formula()
                self.expect(")")
                return inner
            except ParseError:
                self.i = save
        left = self.expr()
        if self.accept("in"):
            return Compare("in", left, self.expr(), pos=tok.pos)
        if self.at("!") and self.peek(1).kind == "in":
            self.advance()
            self.advance()
            return Compare("!in", left, self.expr(), pos=tok.pos)
        if self.at("not") and self.peek(1).kind == "in":
            self.advance()
            self.advance()
            return Compare("!in", left, self.expr(), pos=tok.pos)
        if self.accept("="):
            return Compare("=", left, self.expr(), pos=tok.pos)
        if self.accept("!="):
            return Compare("!=", left, self.expr(), pos=tok.pos)
        if isinstance(left, NameRef):
            # a bare name in formula position invokes a predicate
            return PredCall(left.name, pos=left.pos)
        raise ParseError(
            "expression is not a formula", tok.pos,
            expected=("in", "!in", "=", "!="),
        )

    # ---------------------------------------------------------- expressions
    def expr(self) -> Expr:
        left = self.inter_expr()
        while True:
            tok = self.accept("+", "-")
            if tok is None:
                return left
            left = Binary(tok.kind, left, self.inter_expr(), pos=tok.pos)

    def inter_expr(self) -> Expr:
        left = self.arrow_expr()
        while True:
            tok = self.accept("&")
            if tok is None:
                return left
            left = Binary("&", left, self.arrow_expr(), pos=tok.pos)

    def arrow_expr(self) -> Expr:
        left = self.join_expr()
        while True:
            tok = self.accept("->")
            if tok is None:
                return left
            left = Binary("->", left, self.join_expr(), pos=tok.pos)

    def join_expr(self) -> Expr:
        left = self.unary_expr()
        while True:
            tok = self.accept(".")
            if tok is None:
                return left
            left = Binary(".", left, self.unary_expr(), pos=tok.pos)

    def unary_expr(self) -> Expr:
        tok = self.accept("~", "^", "*")
        if tok is not None:
            return Unary(tok.kind, self.unary_expr(), pos=tok.pos)
        return self.atom_expr()

    def atom_expr(self) -> Expr:
        tok = self.peek()
        if tok.kind == "IDENT":
            self.advance()
            return NameRef(tok.text, pos=tok.pos)
        if tok.kind == "none":
            self.advance()
            return NoneSet(pos=tok.pos)
        if tok.kind == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(
            f"unexpected {tok.text or 'end of input'!r}", tok.pos,
            expected=("identifier", "none", "("),
        )


def left_pos(f: Formula) -> Pos:
    return getattr(f, "pos", ast.NO_POS)


def parse_model(source: str) -> Model:
    """Parse source text into an unresolved model, preserving declaration order."""
    return _Parser(source).model()
