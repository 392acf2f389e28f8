"""Line-oriented declarative command parser.

Commands are the notebook-facing surface; they parse to exactly the same
nodes as the JSON surface. Grammar (EBNF core)::

    command    := load | select | coordinate | clear
                | "undo" | "checkout" INT
                | "synthesize" IDENT pipeline
                | transform
    load       := "load" STRING "as" IDENT ["text" "(" IDENT {"," IDENT} ")"]
    select     := "select" IDENT ("single"|"list"|"interval") "where" predicate
                  ["as" ("single"|"multi")]
    coordinate := "coordinate" IDENT "->" IDENT "on" IDENT ["as" ("single"|"multi")]
    clear      := "clear" [IDENT]
    transform  := OPNAME [IDENT] [ACTION] [UDF | pipeline] ["with" params]
    pipeline   := "[" transform {";" transform} "]"
    predicate  := IDENT ( ("=="|"!="|"<"|"<="|">"|">=") literal
                        | "contains" literal
                        | "in" "[" literal {"," literal} "]"
                        | "between" literal "and" literal )
    params     := IDENT "=" (literal | "[" literal {"," literal} "]")
                  {"," IDENT "=" ...}
    literal    := STRING | INT | FLOAT | "true" | "false"

OPNAME is either a transformation kind (``project``, ``mutate``, ``aggregate``,
``set``, ``visualize``, ``combine``), a built-in function name (``lowercase``,
``tfidf``, ...; the kind is implied), or the name of a registered composite
operator. ACTION is ``add``/``create``/``update``; omitted actions are filled
by the compiler. String literals are double-quoted with backslash escapes;
identifiers are ``[A-Za-z_][A-Za-z0-9_]*``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .errors import OperatorSyntaxError
from .nodes import (
    ACTIONS,
    OperatorNode,
    Predicate,
    SelectionSpec,
    _validate_predicate,
    validate_node,
)

# Built-in function names and the transformation kind each implies.
UDF_KINDS = {
    "lowercase": "project",
    "remove_stopwords": "project",
    "strip_punct": "project",
    "pca2": "project",
    "tokenize": "mutate",
    "tfidf": "mutate",
    "lda": "mutate",
    "cluster_assign": "mutate",
    "unique_tokens": "set",
    "mean": "aggregate",
    "sum": "aggregate",
    "count": "aggregate",
    "mean_score_per_token": "aggregate",
    "bar": "visualize",
    "scatter": "visualize",
}

_TRANSFORM_KIND_NAMES = ("project", "mutate", "aggregate", "set", "visualize", "combine")
_ACTION_NAMES = tuple(a for a in ACTIONS if a != "none")

_PUNCT = {
    "[": "LBRACKET",
    "]": "RBRACKET",
    "(": "LPAREN",
    ")": "RPAREN",
    ",": "COMMA",
    ";": "SEMI",
    "=": "EQ",
}
_COMPARE_OPS = ("==", "!=", "<=", ">=", "<", ">")


@dataclass(frozen=True)
class Token:
    type: str  # IDENT, STRING, INT, FLOAT, OP, punctuation names, EOF
    value: Any
    pos: int


def _tokenize(line: str) -> list[Token]:
    tokens: list[Token] = []
    i, n = 0, len(line)
    while i < n:
        ch = line[i]
        if ch.isspace():
            i += 1
            continue
        if ch == '"':
            value, i = _scan_string(line, i)
            tokens.append(Token("STRING", value, i))
            continue
        two = line[i : i + 2]
        if two == "->":
            tokens.append(Token("ARROW", "->", i))
            i += 2
            continue
        if two in ("==", "!=", "<=", ">="):
            tokens.append(Token("OP", two, i))
            i += 2
            continue
        if ch in "<>":
            tokens.append(Token("OP", ch, i))
            i += 1
            continue
        if ch in _PUNCT and ch != "=":
            tokens.append(Token(_PUNCT[ch], ch, i))
            i += 1
            continue
        if ch == "=":
            tokens.append(Token("EQ", "=", i))
            i += 1
            continue
        if ch.isdigit() or (ch in "+-." and i + 1 < n and (line[i + 1].isdigit() or line[i + 1] == ".")):
            tok, i = _scan_number(line, i)
            tokens.append(tok)
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (line[j].isalnum() or line[j] == "_"):
                j += 1
            tokens.append(Token("IDENT", line[i:j], i))
            i = j
            continue
        raise OperatorSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(Token("EOF", None, n))
    return tokens


def _scan_string(line: str, start: int) -> tuple[str, int]:
    out: list[str] = []
    i = start + 1
    escapes = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}
    while i < len(line):
        ch = line[i]
        if ch == '"':
            return "".join(out), i + 1
        if ch == "\\":
            if i + 1 >= len(line):
                raise OperatorSyntaxError("unterminated escape", i)
            nxt = line[i + 1]
            if nxt not in escapes:
                raise OperatorSyntaxError(f"unknown escape \\{nxt}", i)
            out.append(escapes[nxt])
            i += 2
            continue
        out.append(ch)
        i += 1
    raise OperatorSyntaxError("unterminated string literal", start)


def _scan_number(line: str, start: int) -> tuple[Token, int]:
    i = start
    if line[i] in "+-":
        i += 1
    digits = False
    while i < len(line) and line[i].isdigit():
        i += 1
        digits = True
    is_float = False
    if i < len(line) and line[i] == ".":
        is_float = True
        i += 1
        while i < len(line) and line[i].isdigit():
            i += 1
            digits = True
    if not digits:
        raise OperatorSyntaxError("malformed number", start)
    if i < len(line) and line[i] in "eE":
        j = i + 1
        if j < len(line) and line[j] in "+-":
            j += 1
        if j < len(line) and line[j].isdigit():
            is_float = True
            while j < len(line) and line[j].isdigit():
                j += 1
            i = j
    text = line[start:i]
    if is_float:
        return Token("FLOAT", float(text), start), i
    return Token("INT", int(text), start), i


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.cur
        self.i += 1
        return tok

    def expect(self, ttype: str, expected: tuple[str, ...] = ()) -> Token:
        if self.cur.type != ttype:
            raise OperatorSyntaxError(
                f"found {self.cur.value!r}", self.cur.pos, expected or (ttype,)
            )
        return self.advance()

    def accept_keyword(self, word: str) -> bool:
        if self.cur.type == "IDENT" and self.cur.value == word:
            self.advance()
            return True
        return False

    def expect_keyword(self, word: str) -> None:
        if not self.accept_keyword(word):
            raise OperatorSyntaxError(f"found {self.cur.value!r}", self.cur.pos, (word,))

    # --- grammar productions ---

    def command(self) -> OperatorNode:
        tok = self.cur
        if tok.type != "IDENT":
            raise OperatorSyntaxError(f"found {tok.value!r}", tok.pos, ("command",))
        word = tok.value
        if word == "load":
            node = self.load()
        elif word == "select":
            node = self.select()
        elif word == "coordinate":
            node = self.coordinate()
        elif word == "clear":
            node = self.clear()
        elif word == "undo":
            self.advance()
            node = OperatorNode(kind="undo")
        elif word == "checkout":
            self.advance()
            version = self.expect("INT", ("version number",))
            node = OperatorNode(kind="checkout", params={"version": version.value})
        elif word == "synthesize":
            node = self.synthesize()
        else:
            node = self.transform(top_level=True)
        self.expect("EOF", ("end of command",))
        validate_node(node)
        return node

    def load(self) -> OperatorNode:
        self.expect_keyword("load")
        path = self.expect("STRING", ("path string",))
        self.expect_keyword("as")
        alias = self.expect("IDENT", ("frame alias",))
        params: dict[str, Any] = {"path": path.value, "alias": alias.value}
        if self.accept_keyword("text"):
            self.expect("LPAREN", ("(",))
            cols = [self.expect("IDENT", ("column name",)).value]
            while self.cur.type == "COMMA":
                self.advance()
                cols.append(self.expect("IDENT", ("column name",)).value)
            self.expect("RPAREN", (")",))
            params["text_columns"] = tuple(cols)
        return OperatorNode(kind="load", params=params)

    def select(self) -> OperatorNode:
        self.expect_keyword("select")
        view = self.expect("IDENT", ("view id",)).value
        kind_tok = self.expect("IDENT", ("single", "list", "interval"))
        if kind_tok.value not in ("single", "list", "interval"):
            raise OperatorSyntaxError(
                f"found {kind_tok.value!r}", kind_tok.pos, ("single", "list", "interval")
            )
        self.expect_keyword("where")
        pred = self.predicate(kind_tok.value)
        mapping_tag = "single"
        if self.accept_keyword("as"):
            tag_tok = self.expect("IDENT", ("single", "multi"))
            if tag_tok.value not in ("single", "multi"):
                raise OperatorSyntaxError(
                    f"found {tag_tok.value!r}", tag_tok.pos, ("single", "multi")
                )
            mapping_tag = tag_tok.value
        selection = SelectionSpec(view, kind_tok.value, pred, mapping_tag)
        return OperatorNode(kind="select", view=view, selection=selection)

    def predicate(self, sel_kind: str) -> Predicate:
        field = self.expect("IDENT", ("field name",)).value
        tok = self.cur
        if tok.type == "OP":
            self.advance()
            value = self.literal()
            pred = Predicate(field, tok.value, value)
        elif tok.type == "IDENT" and tok.value == "contains":
            self.advance()
            pred = Predicate(field, "contains", self.literal())
        elif tok.type == "IDENT" and tok.value == "in":
            self.advance()
            self.expect("LBRACKET", ("[",))
            values = [self.literal()]
            while self.cur.type == "COMMA":
                self.advance()
                values.append(self.literal())
            self.expect("RBRACKET", ("]",))
            pred = Predicate(field, "in", tuple(values))
        elif tok.type == "IDENT" and tok.value == "between":
            self.advance()
            low = self.literal()
            self.expect_keyword("and")
            high = self.literal()
            pred = Predicate(field, "in", (low, high))
        else:
            raise OperatorSyntaxError(
                f"found {tok.value!r}", tok.pos, ("comparison", "contains", "in", "between")
            )
        _validate_predicate(pred, sel_kind, "$.selection")
        return pred

    def coordinate(self) -> OperatorNode:
        self.expect_keyword("coordinate")
        source = self.expect("IDENT", ("source view",)).value
        self.expect("ARROW", ("->",))
        target = self.expect("IDENT", ("target view",)).value
        self.expect_keyword("on")
        on_field = self.expect("IDENT", ("field name",)).value
        params: dict[str, Any] = {"target": target, "on": on_field}
        if self.accept_keyword("as"):
            tag_tok = self.expect("IDENT", ("single", "multi"))
            if tag_tok.value not in ("single", "multi"):
                raise OperatorSyntaxError(
                    f"found {tag_tok.value!r}", tag_tok.pos, ("single", "multi")
                )
            params["tag"] = tag_tok.value
        return OperatorNode(kind="coordinate", view=source, params=params)

    def clear(self) -> OperatorNode:
        self.expect_keyword("clear")
        view = None
        if self.cur.type == "IDENT":
            view = self.advance().value
        return OperatorNode(kind="clear", view=view)

    def synthesize(self) -> OperatorNode:
        self.expect_keyword("synthesize")
        name = self.expect("IDENT", ("new operator name",)).value
        children = self.pipeline()
        return OperatorNode(kind="synthesize", name=name, children=children)

    def transform(self, top_level: bool = False) -> OperatorNode:
        opname = self.expect("IDENT", ("operator name",)).value
        column = None
        action = "none"
        udf = None
        children: tuple[OperatorNode, ...] = ()

        if self.cur.type == "IDENT" and self.cur.value not in _ACTION_NAMES and self.cur.value != "with":
            column = self.advance().value
        if self.cur.type == "IDENT" and self.cur.value in _ACTION_NAMES:
            action = self.advance().value
        if self.cur.type == "LBRACKET":
            children = self.pipeline()
        elif self.cur.type == "IDENT" and self.cur.value != "with":
            udf = self.advance().value

        params = {}
        if self.accept_keyword("with"):
            params = self.params()

        if opname in _TRANSFORM_KIND_NAMES:
            kind = opname
            if (
                kind != "combine"
                and udf is None
                and not children
                and column is not None
                and action == "none"
            ):
                # `project lowercase`: the lone identifier is the function,
                # with the input column left for the compiler to resolve.
                column, udf = None, column
        elif opname in UDF_KINDS:
            # Function-name shorthand: the kind is implied, the name is the udf.
            if udf is not None:
                raise OperatorSyntaxError(
                    f"{opname} is a function name and takes no further function", self.cur.pos
                )
            kind, udf = UDF_KINDS[opname], opname
        else:
            kind = opname  # registered composite; resolved at compile time

        if kind == "combine":
            if not children:
                raise OperatorSyntaxError(
                    "combine requires a [ ... ] pipeline", self.cur.pos, ("[",)
                )
        elif children:
            raise OperatorSyntaxError(f"{opname} takes no pipeline", self.cur.pos)

        return OperatorNode(
            kind=kind, action=action, column=column, udf=udf, params=params, children=children
        )

    def pipeline(self) -> tuple[OperatorNode, ...]:
        self.expect("LBRACKET", ("[",))
        if self.cur.type == "RBRACKET":
            raise OperatorSyntaxError("empty pipeline", self.cur.pos)
        items = [self.transform()]
        while self.cur.type == "SEMI":
            self.advance()
            items.append(self.transform())
        self.expect("RBRACKET", ("]", ";"))
        return tuple(items)

    def params(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        while True:
            key = self.expect("IDENT", ("parameter name",)).value
            self.expect("EQ", ("=",))
            if self.cur.type == "LBRACKET":
                self.advance()
                values = [self.literal()]
                while self.cur.type == "COMMA":
                    self.advance()
                    values.append(self.literal())
                self.expect("RBRACKET", ("]",))
                out[key] = tuple(values)
            else:
                out[key] = self.literal()
            if self.cur.type != "COMMA":
                return out
            self.advance()

    def literal(self) -> Any:
        tok = self.cur
        if tok.type in ("STRING", "INT", "FLOAT"):
            self.advance()
            return tok.value
        if tok.type == "IDENT" and tok.value in ("true", "false"):
            self.advance()
            return tok.value == "true"
        raise OperatorSyntaxError(f"found {tok.value!r}", tok.pos, ("literal",))


def parse_command(line: str) -> OperatorNode:
    """Parse one command line into the same node form :func:`~vita.nodes.parse_json` yields."""
    return _Parser(_tokenize(line)).command()
