"""Lexer, recursive-descent parser, and highlighter for query text.

The concrete syntax: labels are single-quoted (with ``''`` escaping a quote),
operators are case-sensitive keywords in short or long form, cardinalities
are written ``=k``, ``<=k``, ``>=k``, and Boolean composition uses
NOT / AND / OR with precedence NOT > AND > OR (parentheses override).  Every
accepted string has exactly one parse tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .ast import (
    And,
    CardOp,
    Cardinality,
    LabelSet,
    Leaf,
    LeafQuery,
    MAX_CARDINALITY,
    Not,
    Op,
    Or,
    Query,
    QueryStructureError,
    SetMode,
)


class ParseError(Exception):
    """Query text rejected; carries the position of the offending input."""

    def __init__(
        self,
        message: str,
        text: str,
        offset: int,
        expected: str | None = None,
    ) -> None:
        super().__init__(message)
        self.message = message
        self.offset = offset
        self.byte_offset = len(text[:offset].encode("utf-8"))
        prefix = text[:offset]
        self.line = prefix.count("\n") + 1
        self.column = offset - (prefix.rfind("\n") + 1) + 1
        self.expected = expected

    def to_json(self) -> dict:
        return {
            "offset": self.offset,
            "line": self.line,
            "column": self.column,
            "message": self.message,
        }


class ArityError(ParseError):
    """Operands are legal tokens but an illegal combination for the operator."""


class TokenType(Enum):
    LABEL = "label"
    INT = "int"
    OP = "op"
    ANY = "ANY"
    ALL = "ALL"
    AND = "AND"
    OR = "OR"
    NOT = "NOT"
    LBRACE = "{"
    RBRACE = "}"
    LPAREN = "("
    RPAREN = ")"
    COMMA = ","
    CARD_EQ = "="
    CARD_LE = "<="
    CARD_GE = ">="
    EOF = "eof"


@dataclass(frozen=True)
class Token:
    type: TokenType
    text: str
    start: int
    end: int
    value: object = None


_OPERATOR_KEYWORDS: dict[str, Op] = {}
for _op in Op:
    _OPERATOR_KEYWORDS[_op.value] = _op
    _OPERATOR_KEYWORDS[_op.long_name] = _op

_PLAIN_KEYWORDS = {
    "ANY": TokenType.ANY,
    "ALL": TokenType.ALL,
    "AND": TokenType.AND,
    "OR": TokenType.OR,
    "NOT": TokenType.NOT,
}

_PUNCT = {
    "{": TokenType.LBRACE,
    "}": TokenType.RBRACE,
    "(": TokenType.LPAREN,
    ")": TokenType.RPAREN,
    ",": TokenType.COMMA,
    "=": TokenType.CARD_EQ,
}


def _scan_label(text: str, i: int) -> tuple[str, int]:
    # i points at the opening quote; '' inside a label is an escaped quote.
    parts: list[str] = []
    j = i + 1
    while j < len(text):
        if text[j] == "'":
            if j + 1 < len(text) and text[j + 1] == "'":
                parts.append("'")
                j += 2
                continue
            return "".join(parts), j + 1
        parts.append(text[j])
        j += 1
    raise ParseError("unterminated label", text, i)


def tokenize(text: str) -> list[Token]:
    """Lex query text into tokens with character spans."""
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "'":
            value, end = _scan_label(text, i)
            tokens.append(Token(TokenType.LABEL, text[i:end], i, end, value))
            i = end
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token(TokenType.INT, text[i:j], i, j, int(text[i:j])))
            i = j
            continue
        if ch in "<>":
            if i + 1 < n and text[i + 1] == "=":
                tt = TokenType.CARD_LE if ch == "<" else TokenType.CARD_GE
                tokens.append(Token(tt, text[i : i + 2], i, i + 2))
                i += 2
                continue
            raise ParseError(
                f"unknown character {ch!r}", text, i, expected=f"'{ch}='"
            )
        if ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, i, i + 1))
            i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word in _OPERATOR_KEYWORDS:
                tokens.append(
                    Token(TokenType.OP, word, i, j, _OPERATOR_KEYWORDS[word])
                )
            elif word in _PLAIN_KEYWORDS:
                tokens.append(Token(_PLAIN_KEYWORDS[word], word, i, j))
            else:
                raise ParseError(
                    f"unknown keyword {word!r}",
                    text,
                    i,
                    expected="an operator, ANY, ALL, AND, OR or NOT",
                )
            i = j
            continue
        raise ParseError(f"unknown character {ch!r}", text, i)
    tokens.append(Token(TokenType.EOF, "", n, n))
    return tokens


_CARD_TOKENS = {
    TokenType.CARD_EQ: CardOp.EQ,
    TokenType.CARD_LE: CardOp.LEQ,
    TokenType.CARD_GE: CardOp.GEQ,
}


class _Parser:
    def __init__(self, text: str, tokens: list[Token]) -> None:
        self.text = text
        self.tokens = tokens
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, token: Token, expected: str | None = None):
        raise ParseError(message, self.text, token.start, expected=expected)

    def expect(self, tt: TokenType, what: str) -> Token:
        if self.cur.type is not tt:
            self.error(
                f"expected {what}, found {self.cur.text or 'end of input'!r}",
                self.cur,
                expected=what,
            )
        return self.advance()

    # Grammar: or_expr > and_expr > not_expr > atom; leaves inside atoms.

    def parse_or(self) -> Query:
        node = self.parse_and()
        while self.cur.type is TokenType.OR:
            self.advance()
            node = Or(node, self.parse_and())
        return node

    def parse_and(self) -> Query:
        node = self.parse_not()
        while self.cur.type is TokenType.AND:
            self.advance()
            node = And(node, self.parse_not())
        return node

    def parse_not(self) -> Query:
        if self.cur.type is TokenType.NOT:
            self.advance()
            return Not(self.parse_not())
        return self.parse_atom()

    def parse_atom(self) -> Query:
        if self.cur.type is TokenType.LPAREN:
            self.advance()
            node = self.parse_or()
            self.expect(TokenType.RPAREN, "')'")
            return node
        return self.parse_leaf()

    def parse_operand(self) -> LabelSet:
        tok = self.cur
        if tok.type is TokenType.LABEL:
            self.advance()
            if not tok.value:
                self.error("labels must not be empty", tok)
            return LabelSet.single(str(tok.value))
        if tok.type in (TokenType.ANY, TokenType.ALL):
            mode = SetMode.ANY if tok.type is TokenType.ANY else SetMode.ALL
            self.advance()
            self.expect(TokenType.LBRACE, "'{'")
            labels = [self.expect(TokenType.LABEL, "a label").value]
            while self.cur.type is TokenType.COMMA:
                self.advance()
                labels.append(self.expect(TokenType.LABEL, "a label").value)
            self.expect(TokenType.RBRACE, "'}'")
            return LabelSet(mode, tuple(str(x) for x in labels))
        self.error(
            f"expected a label or label set, found {tok.text or 'end of input'!r}",
            tok,
            expected="'label' or ANY{...} or ALL{...}",
        )
        raise AssertionError("unreachable")

    def parse_cardinality(self) -> Cardinality | None:
        if self.cur.type not in _CARD_TOKENS:
            return None
        op_tok = self.advance()
        k_tok = self.expect(TokenType.INT, "a non-negative integer")
        k = int(k_tok.value)  # type: ignore[arg-type]
        if k > MAX_CARDINALITY:
            self.error(f"cardinality {k} exceeds the maximum {MAX_CARDINALITY}", k_tok)
        return Cardinality(_CARD_TOKENS[op_tok.type], k)

    def parse_leaf(self) -> Query:
        left = self.parse_operand()
        op_tok = self.expect(TokenType.OP, "a control-flow operator")
        op: Op = op_tok.value  # type: ignore[assignment]
        right = None
        if not op.is_unary:
            right = self.parse_operand()
        card = self.parse_cardinality()
        try:
            return LeafQuery(Leaf(op=op, left=left, right=right, card=card))
        except QueryStructureError as exc:
            raise ArityError(str(exc), self.text, op_tok.start) from exc


def parse(text: str) -> Query:
    """Parse query text into its unique tree."""
    tokens = tokenize(text)
    if tokens[0].type is TokenType.EOF:
        raise ParseError("empty query", text, 0)
    parser = _Parser(text, tokens)
    node = parser.parse_or()
    if parser.cur.type is not TokenType.EOF:
        parser.error(
            f"expected end of input, found {parser.cur.text!r}", parser.cur
        )
    return node


# ---------------------------------------------------------------------------
# Highlighting

@dataclass(frozen=True)
class Span:
    start: int
    end: int
    cls: str


_KEYWORD_TYPES = {
    TokenType.OP,
    TokenType.ANY,
    TokenType.ALL,
    TokenType.AND,
    TokenType.OR,
    TokenType.NOT,
}

_PUNCT_TYPES = {
    TokenType.LBRACE,
    TokenType.RBRACE,
    TokenType.LPAREN,
    TokenType.RPAREN,
    TokenType.COMMA,
    TokenType.CARD_EQ,
    TokenType.CARD_LE,
    TokenType.CARD_GE,
}


def highlight(text: str) -> list[Span]:
    """Best-effort token classification; never raises.

    Lexing trouble becomes ``error`` spans: an unterminated label swallows
    the rest of the input, anything else covers the offending characters and
    scanning continues.
    """
    spans: list[Span] = []
    rest_from = 0
    while True:
        try:
            tokens = tokenize(text[rest_from:])
        except ParseError as exc:
            at = rest_from + exc.offset
            for tok in _tokens_before(text, rest_from, at):
                spans.append(tok)
            if exc.message == "unterminated label":
                spans.append(Span(at, len(text), "error"))
                return spans
            end = at + 1
            if "keyword" in exc.message:
                while end < len(text) and (text[end].isalnum() or text[end] == "_"):
                    end += 1
            spans.append(Span(at, end, "error"))
            rest_from = end
            continue
        for tok in tokens:
            if tok.type is TokenType.EOF:
                continue
            spans.append(
                Span(rest_from + tok.start, rest_from + tok.end, _classify(tok))
            )
        return spans


def _classify(tok: Token) -> str:
    if tok.type is TokenType.LABEL:
        return "label"
    if tok.type is TokenType.INT:
        return "number"
    if tok.type in _KEYWORD_TYPES:
        return "keyword"
    if tok.type in _PUNCT_TYPES:
        return "punct"
    return "error"


def _tokens_before(text: str, base: int, stop: int) -> list[Span]:
    # Re-lex the clean prefix so error recovery never drops good spans.
    try:
        tokens = tokenize(text[base:stop])
    except ParseError:
        return []
    return [
        Span(base + t.start, base + t.end, _classify(t))
        for t in tokens
        if t.type is not TokenType.EOF
    ]
