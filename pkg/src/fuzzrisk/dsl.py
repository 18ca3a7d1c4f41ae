"""Line-oriented text format for FIS definitions (``.fis`` files).

Grammar, one statement per line, ``#`` starts a comment::

    model   := header input+ output rule+
    header  := "fis" STRING
    input   := "input" IDENT "range" NUM NUM term+
    output  := "output" IDENT "range" NUM NUM term+
    term    := "term" IDENT shape
    shape   := "tri" NUM NUM NUM | "trap" NUM NUM NUM NUM
    rule    := "rule" "if" clause ("and" clause)* "then" IDENT "is" IDENT
    clause  := IDENT "is" IDENT

Rules are numbered by order of appearance, starting at 1.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from .inference import FisDefinition, LinguisticVariable, Rule, missing_combinations
from .membership import Trapezoidal, Triangular

_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?\Z")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

SHAPES = {"tri": (Triangular, 3), "trap": (Trapezoidal, 4)}
RESERVED_SHAPES = ("gauss", "gauss2", "gbell", "sigmoid")


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: str
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


class ModelSyntaxError(ValueError):
    def __init__(self, diagnostics: list[ParseDiagnostic]) -> None:
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


@dataclass
class _Token:
    kind: str  # "ident" | "number" | "string"
    text: str
    line: int
    column: int

    @property
    def value(self):
        if self.kind == "number":
            return float(self.text)
        if self.kind == "string":
            return self.text[1:-1]
        return self.text


class _LineError(Exception):
    def __init__(self, column: int, message: str) -> None:
        self.column = column
        self.message = message


def _tokenize(text: str, lineno: int) -> list[_Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "#":
            break
        if ch == '"':
            end = text.find('"', i + 1)
            if end < 0:
                raise _LineError(i + 1, "unterminated string")
            tokens.append(_Token("string", text[i:end + 1], lineno, i + 1))
            i = end + 1
            continue
        j = i
        while j < n and not text[j].isspace() and text[j] not in '#"':
            j += 1
        word = text[i:j]
        if _IDENT.match(word):
            tokens.append(_Token("ident", word, lineno, i + 1))
        elif _NUMBER.match(word):
            if not math.isfinite(float(word)):
                raise _LineError(i + 1, f"number out of range {word!r}")
            tokens.append(_Token("number", word, lineno, i + 1))
        elif word[0] in "+-.0123456789":
            raise _LineError(i + 1, f"bad number {word!r}")
        else:
            raise _LineError(i + 1, f"unexpected token {word!r}")
        i = j
    return tokens


class _Cursor:
    def __init__(self, tokens: list[_Token], eol_column: int) -> None:
        self.tokens = tokens
        self.pos = 0
        self.eol_column = eol_column

    def _column(self) -> int:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos].column
        return self.eol_column

    def take(self, kind: str, what: str) -> _Token:
        if self.pos >= len(self.tokens):
            raise _LineError(self.eol_column, f"expected {what}, got end of line")
        tok = self.tokens[self.pos]
        if tok.kind != kind:
            raise _LineError(tok.column, f"expected {what}, got {tok.text!r}")
        self.pos += 1
        return tok

    def keyword(self, word: str) -> _Token:
        if self.pos < len(self.tokens) and self.tokens[self.pos].text == word:
            self.pos += 1
            return self.tokens[self.pos - 1]
        got = self.tokens[self.pos].text if self.pos < len(self.tokens) else "end of line"
        raise _LineError(self._column(), f"expected {word!r}, got {got!r}")

    def peek(self, word: str) -> bool:
        return self.pos < len(self.tokens) and self.tokens[self.pos].text == word

    def end(self) -> None:
        if self.pos < len(self.tokens):
            tok = self.tokens[self.pos]
            raise _LineError(tok.column, f"unexpected {tok.text!r} after end of statement")


@dataclass
class _VarDraft:
    name: str
    line: int
    universe: tuple[float, float]
    terms: list = field(default_factory=list)


class _Parser:
    def __init__(self) -> None:
        self.diags: list[ParseDiagnostic] = []
        self.name: str | None = None
        self.inputs: list[_VarDraft] = []
        self.output: _VarDraft | None = None
        self.current: _VarDraft | None = None
        self.rules: list[Rule] = []
        self.rule_lines: dict[tuple[str, ...], int] = {}
        self.first_rule_line = 0
        self.header_reported = False
        self.saw_rule = False

    def error(self, line: int, column: int, message: str) -> None:
        self.diags.append(ParseDiagnostic("error", line, column, message))

    def run(self, source: str) -> None:
        lines = source.splitlines()
        for lineno, text in enumerate(lines, start=1):
            try:
                tokens = _tokenize(text, lineno)
                if tokens:
                    self.statement(tokens, len(text.rstrip()) + 1)
            except _LineError as exc:
                self.error(lineno, exc.column, exc.message)
        self.finish(max(len(lines), 1))

    def statement(self, tokens: list[_Token], eol: int) -> None:
        head = tokens[0]
        cur = _Cursor(tokens, eol)
        cur.pos = 1
        if head.text != "fis" and self.name is None and not self.header_reported:
            self.header_reported = True
            self.error(head.line, head.column, "missing fis header")
        if head.text == "rule":
            self.saw_rule = True
        handler = getattr(self, f"_stmt_{head.text}", None) if head.kind == "ident" else None
        if handler is None:
            raise _LineError(
                head.column,
                f"expected 'fis', 'input', 'output', 'term' or 'rule', got {head.text!r}",
            )
        handler(head, cur)

    def _stmt_fis(self, head: _Token, cur: _Cursor) -> None:
        name = cur.take("string", "model name in double quotes")
        cur.end()
        if self.name is not None or self.header_reported:
            raise _LineError(head.column, "fis header must appear once, before anything else")
        self.name = name.value

    def _declare(self, head: _Token, cur: _Cursor) -> _VarDraft:
        ident = cur.take("ident", "variable name")
        cur.keyword("range")
        lo = cur.take("number", "lower bound")
        hi = cur.take("number", "upper bound")
        cur.end()
        names = [v.name for v in self.inputs] + ([self.output.name] if self.output else [])
        if ident.text in names:
            raise _LineError(ident.column, f"duplicate variable {ident.text!r}")
        if not lo.value < hi.value:
            raise _LineError(lo.column, f"range needs lower < upper, got {lo.text} {hi.text}")
        return _VarDraft(ident.text, head.line, (lo.value, hi.value))

    def _stmt_input(self, head: _Token, cur: _Cursor) -> None:
        if self.output is not None:
            raise _LineError(head.column, "inputs must be declared before the output")
        self.current = None
        var = self._declare(head, cur)
        self.inputs.append(var)
        self.current = var

    def _stmt_output(self, head: _Token, cur: _Cursor) -> None:
        if self.output is not None:
            raise _LineError(head.column, "only one output may be declared")
        if not self.inputs:
            raise _LineError(head.column, "output declared before any input")
        self.current = None
        var = self._declare(head, cur)
        self.output = var
        self.current = var

    def _stmt_term(self, head: _Token, cur: _Cursor) -> None:
        label = cur.take("ident", "term label")
        shape = cur.take("ident", "shape ('tri' or 'trap')")
        if shape.text in RESERVED_SHAPES:
            raise _LineError(shape.column, f"shape {shape.text!r} is reserved but not supported")
        if shape.text not in SHAPES:
            raise _LineError(shape.column, f"unknown shape {shape.text!r}; use 'tri' or 'trap'")
        cls, arity = SHAPES[shape.text]
        params = [cur.take("number", f"{arity} breakpoints for {shape.text}") for _ in range(arity)]
        cur.end()
        var = self.current
        if var is None:
            raise _LineError(head.column, "term must follow an input or output declaration")
        if any(existing == label.text for existing, _ in var.terms):
            raise _LineError(label.column, f"duplicate term {label.text!r} in {var.name}")
        try:
            mf = cls(*(p.value for p in params))
        except ValueError as exc:
            raise _LineError(params[0].column, str(exc)) from None
        var.terms.append((label.text, mf))

    def _stmt_rule(self, head: _Token, cur: _Cursor) -> None:
        cur.keyword("if")
        clauses = [self._clause(cur)]
        while cur.peek("and"):
            cur.pos += 1
            clauses.append(self._clause(cur))
        cur.keyword("then")
        out_var, out_term = self._clause(cur)
        cur.end()

        if self.output is None:
            raise _LineError(head.column, "rule before output declaration")
        self.current = None
        if not self.first_rule_line:
            self.first_rule_line = head.line
        if len(clauses) != len(self.inputs):
            raise _LineError(
                head.column,
                f"rule has {len(clauses)} antecedent(s), expected {len(self.inputs)} (one per input)",
            )
        for var, (name_tok, term_tok) in zip(self.inputs, clauses):
            if name_tok.text != var.name:
                known = any(v.name == name_tok.text for v in self.inputs)
                msg = (f"antecedents must follow input order: expected {var.name!r}, got {name_tok.text!r}"
                       if known else f"unknown input variable {name_tok.text!r}")
                raise _LineError(name_tok.column, msg)
            if term_tok.text not in [t for t, _ in var.terms]:
                raise _LineError(term_tok.column, f"unknown term {term_tok.text!r} for variable {var.name}")
        if out_var.text != self.output.name:
            raise _LineError(out_var.column, f"consequent must use output {self.output.name!r}, got {out_var.text!r}")
        if out_term.text not in [t for t, _ in self.output.terms]:
            raise _LineError(out_term.column, f"unknown term {out_term.text!r} for variable {self.output.name}")
        combo = tuple(t.text for _, t in clauses)
        if combo in self.rule_lines:
            raise _LineError(head.column, f"duplicate rule: same antecedents as line {self.rule_lines[combo]}")
        self.rule_lines[combo] = head.line
        self.rules.append(Rule(
            antecedents=tuple((n.text, t.text) for n, t in clauses),
            consequent=out_term.text,
            index=len(self.rules) + 1,
        ))

    def _clause(self, cur: _Cursor) -> tuple[_Token, _Token]:
        var = cur.take("ident", "variable name")
        cur.keyword("is")
        term = cur.take("ident", "term label")
        return var, term

    def finish(self, last_line: int) -> None:
        if self.name is None and not self.header_reported:
            self.error(1, 1, "missing fis header")
        if not self.inputs:
            self.error(last_line, 1, "missing input declaration")
        if self.output is None:
            self.error(last_line, 1, "missing output declaration")
        for var in [*self.inputs, *([self.output] if self.output else [])]:
            if not var.terms:
                self.error(var.line, 1, f"variable {var.name!r} has no terms")
        if not self.saw_rule:
            self.error(last_line, 1, "missing rule")


def check_model(source: str) -> tuple[FisDefinition | None, list[ParseDiagnostic]]:
    """Parse ``source``, returning the model (or ``None``) and every diagnostic.

    The model is ``None`` whenever any diagnostic is an error. An incomplete
    rule base only produces warnings.
    """
    parser = _Parser()
    parser.run(source)
    diags = parser.diags
    if any(d.severity == "error" for d in diags):
        return None, diags

    def variable(draft: _VarDraft) -> LinguisticVariable:
        return LinguisticVariable(draft.name, draft.universe, tuple(draft.terms))

    fis = FisDefinition(
        name=parser.name,
        inputs=tuple(variable(v) for v in parser.inputs),
        output=variable(parser.output),
        rules=tuple(parser.rules),
    )
    for combo in missing_combinations(fis):
        listing = ", ".join(f"{n}={t}" for n, t in zip(fis.input_names, combo))
        diags.append(ParseDiagnostic(
            "warning", parser.first_rule_line, 1, f"incomplete rule base: no rule for ({listing})"
        ))
    return fis, diags


def parse_model(source: str) -> FisDefinition:
    fis, diags = check_model(source)
    if fis is None:
        raise ModelSyntaxError([d for d in diags if d.severity == "error"])
    return fis


def load_model(path: str | Path) -> FisDefinition:
    return parse_model(Path(path).read_text(encoding="utf-8"))


def format_number(value: float) -> str:
    """Shortest text that parses back to exactly ``value``."""
    text = repr(float(value))
    return text[:-2] if text.endswith(".0") else text


def _shape(mf) -> str:
    kind = "tri" if isinstance(mf, Triangular) else "trap"
    return " ".join([kind, *(format_number(p) for p in mf.params)])


def _variable_lines(keyword: str, var: LinguisticVariable) -> list[str]:
    lo, hi = var.universe
    lines = [f"{keyword} {var.name} range {format_number(lo)} {format_number(hi)}"]
    lines += [f"  term {label} {_shape(mf)}" for label, mf in var.terms]
    return lines


def format_rule(fis: FisDefinition, rule: Rule) -> str:
    clauses = " and ".join(f"{v} is {t}" for v, t in rule.antecedents)
    return f"rule if {clauses} then {fis.output.name} is {rule.consequent}"


def serialize_model(fis: FisDefinition) -> str:
    lines = [f'fis "{fis.name}"']
    for var in fis.inputs:
        lines += _variable_lines("input", var)
    lines += _variable_lines("output", fis.output)
    lines.append("")
    lines += [format_rule(fis, r) for r in sorted(fis.rules, key=lambda r: r.index)]
    return "\n".join(lines) + "\n"
