"""Concrete text syntax for feature models (`.fm` files).

Layout::

    feature Store {
      mandatory Catalog Cart Payment
      optional FraudDetection [ml: fqp_fraud]
      optional Moderation {
        xor { HumanAssisted FullyAutomated }
      }
      or(1..2) { Alpha Beta }
    }

    constraints {
      FullyAutomated IMPLIES ContentModeration;
    }

    profile fqp_fraud {
      ml_component "fraud_detection_V1.0"
      accuracy_range 0.88 0.95
      context domestic_transactions_during_week 0.95
      confidence high_confidence 0.85 1.0
    }

Each `mandatory`/`optional`/`or`/`xor` clause introduces one child group of
the enclosing feature. Constraint operators: NOT, AND, OR, IMPLIES, IFF;
IMPLIES is right-associative; trailing semicolons are optional. Comments
start with `//` and run to end of line.
"""
from __future__ import annotations

from typing import Optional

from .errors import ParseError
from .feature_model import (
    BinOp, CrossTreeConstraint, Expr, Feature, FeatureGroup, FeatureKind,
    FeatureModel, FeatureQualityProfile, GroupKind, Not, Var,
)

_PUNCT = {"{", "}", "(", ")", "[", "]", ":", ",", ";"}
_GROUP_KEYWORDS = {"mandatory", "optional", "or", "xor"}


class _Token:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind, value, line, col):
        self.kind = kind  # ident | number | string | punct | dotdot | eof
        self.value = value
        self.line = line
        self.col = col


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if text.startswith("..", i):
            tokens.append(_Token("dotdot", "..", start_line, start_col))
            i += 2
            col += 2
            continue
        if ch in _PUNCT:
            tokens.append(_Token("punct", ch, start_line, start_col))
            i += 1
            col += 1
            continue
        if ch == '"':
            j = i + 1
            buf = []
            while j < n and text[j] != '"':
                if text[j] == "\n":
                    raise ParseError("unterminated string", start_line, start_col)
                buf.append(text[j])
                j += 1
            if j >= n:
                raise ParseError("unterminated string", start_line, start_col)
            tokens.append(_Token("string", "".join(buf), start_line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < n and text[i + 1].isdigit()):
            j = i + 1
            while j < n and (text[j].isdigit() or text[j] == "."):
                # stop before a ".." range separator
                if text[j] == "." and text.startswith("..", j):
                    break
                j += 1
            lexeme = text[i:j]
            try:
                value = float(lexeme)
            except ValueError:
                raise ParseError(f"bad number {lexeme!r}", start_line, start_col)
            tokens.append(_Token("number", value, start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] in "_-./"):
                j += 1
            tokens.append(_Token("ident", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", start_line, start_col)
    tokens.append(_Token("eof", None, line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.features: list[Feature] = []
        self.groups: list[FeatureGroup] = []
        self.constraints: list[CrossTreeConstraint] = []
        self.profiles: list[FeatureQualityProfile] = []
        self.root: Optional[str] = None
        self.seen_ids: set[str] = set()

    # token helpers -------------------------------------------------------
    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, value=None) -> _Token:
        tok = self.next()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value if value is not None else kind
            raise ParseError(f"expected {want!r}, found {tok.value!r}", tok.line, tok.col)
        return tok

    def expect_ident(self, keyword: Optional[str] = None) -> _Token:
        return self.expect("ident", keyword)

    def at_punct(self, ch: str) -> bool:
        tok = self.peek()
        return tok.kind == "punct" and tok.value == ch

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and tok.value == word

    # grammar -------------------------------------------------------------
    def parse(self) -> FeatureModel:
        while self.peek().kind != "eof":
            tok = self.peek()
            if self.at_keyword("feature"):
                if self.root is not None:
                    raise ParseError("only one root feature block is allowed", tok.line, tok.col)
                self.parse_feature_decl(top_level=True)
            elif self.at_keyword("constraints"):
                self.parse_constraints_block()
            elif self.at_keyword("profile"):
                self.parse_profile_block()
            else:
                raise ParseError(
                    f"expected 'feature', 'constraints' or 'profile', found {tok.value!r}",
                    tok.line, tok.col)
        if self.root is None:
            raise ParseError("no root feature declared", 1, 1)
        return FeatureModel(
            root=self.root,
            features=tuple(self.features),
            groups=tuple(self.groups),
            constraints=tuple(self.constraints),
            profiles=tuple(self.profiles),
        )

    def declare_feature(self, tok: _Token, fid: str, profile_ref: Optional[str]) -> None:
        if fid in self.seen_ids:
            raise ParseError(f"duplicate feature id {fid}", tok.line, tok.col)
        self.seen_ids.add(fid)
        kind = FeatureKind.ML_BASED if profile_ref else FeatureKind.CLASSIC
        self.features.append(Feature(id=fid, name=fid, kind=kind, quality_profile_ref=profile_ref))

    def parse_feature_decl(self, top_level: bool = False) -> str:
        if top_level:
            self.expect_ident("feature")
        tok = self.expect("ident")
        fid = tok.value
        profile_ref = None
        if self.at_punct("["):
            self.next()
            self.expect_ident("ml")
            self.expect("punct", ":")
            profile_ref = self.expect("ident").value
            self.expect("punct", "]")
        self.declare_feature(tok, fid, profile_ref)
        if top_level:
            self.root = fid
        if self.at_punct("{"):
            self.parse_feature_body(fid)
        return fid

    def parse_feature_body(self, parent: str) -> None:
        self.expect("punct", "{")
        while not self.at_punct("}"):
            tok = self.peek()
            if tok.kind != "ident" or tok.value not in _GROUP_KEYWORDS:
                raise ParseError(
                    f"expected group keyword (mandatory/optional/or/xor), found {tok.value!r}",
                    tok.line, tok.col)
            self.parse_group(parent)
        self.expect("punct", "}")

    def parse_group(self, parent: str) -> None:
        kw = self.next().value
        if kw in ("mandatory", "optional"):
            members = self.parse_member_run()
            kind = GroupKind.MANDATORY if kw == "mandatory" else GroupKind.OPTIONAL
            self.groups.append(FeatureGroup.make(parent, members, kind))
        elif kw == "xor":
            members = self.parse_braced_members()
            self.groups.append(FeatureGroup.make(parent, members, GroupKind.XOR_GROUP))
        else:  # or(min..max) { ... }
            self.expect("punct", "(")
            lo = int(self.expect("number").value)
            self.expect("dotdot")
            hi = int(self.expect("number").value)
            self.expect("punct", ")")
            members = self.parse_braced_members()
            self.groups.append(
                FeatureGroup.make(parent, members, GroupKind.OR_GROUP, lo, hi))

    def parse_member_run(self) -> list[str]:
        """Features following mandatory/optional, until the next keyword or '}'."""
        members = []
        while True:
            tok = self.peek()
            if tok.kind != "ident" or tok.value in _GROUP_KEYWORDS:
                break
            members.append(self.parse_feature_decl())
            if self.at_punct(","):
                self.next()
        if not members:
            tok = self.peek()
            raise ParseError("empty group", tok.line, tok.col)
        return members

    def parse_braced_members(self) -> list[str]:
        self.expect("punct", "{")
        members = []
        while not self.at_punct("}"):
            members.append(self.parse_feature_decl())
            if self.at_punct(","):
                self.next()
        self.expect("punct", "}")
        if not members:
            tok = self.peek()
            raise ParseError("empty group", tok.line, tok.col)
        return members

    # constraints ---------------------------------------------------------
    def parse_constraints_block(self) -> None:
        self.expect_ident("constraints")
        self.expect("punct", "{")
        while not self.at_punct("}"):
            expr = self.parse_expr()
            self.constraints.append(CrossTreeConstraint(expr))
            if self.at_punct(";"):
                self.next()
        self.expect("punct", "}")

    def parse_expr(self) -> Expr:
        return self.parse_iff()

    def parse_iff(self) -> Expr:
        left = self.parse_implies()
        while self.at_keyword("IFF"):
            self.next()
            left = BinOp("IFF", left, self.parse_implies())
        return left

    def parse_implies(self) -> Expr:
        left = self.parse_or()
        if self.at_keyword("IMPLIES"):
            self.next()
            return BinOp("IMPLIES", left, self.parse_implies())
        return left

    def parse_or(self) -> Expr:
        left = self.parse_and()
        while self.at_keyword("OR"):
            self.next()
            left = BinOp("OR", left, self.parse_and())
        return left

    def parse_and(self) -> Expr:
        left = self.parse_unary()
        while self.at_keyword("AND"):
            self.next()
            left = BinOp("AND", left, self.parse_unary())
        return left

    def parse_unary(self) -> Expr:
        tok = self.peek()
        if self.at_keyword("NOT"):
            self.next()
            return Not(self.parse_unary())
        if self.at_punct("("):
            self.next()
            expr = self.parse_expr()
            self.expect("punct", ")")
            return expr
        if tok.kind == "ident":
            self.next()
            return Var(tok.value)
        raise ParseError(f"expected feature id, found {tok.value!r}", tok.line, tok.col)

    # profiles ------------------------------------------------------------
    def parse_profile_block(self) -> None:
        self.expect_ident("profile")
        pid = self.expect("ident").value
        self.expect("punct", "{")
        ml_component = ""
        accuracy_range = (0.0, 1.0)
        contexts: dict[str, float] = {}
        intervals: dict[str, tuple[float, float]] = {}
        while not self.at_punct("}"):
            key_tok = self.expect("ident")
            key = key_tok.value
            if key == "ml_component":
                tok = self.next()
                if tok.kind not in ("string", "ident"):
                    raise ParseError("expected component id", tok.line, tok.col)
                ml_component = tok.value
            elif key == "accuracy_range":
                lo = self.expect("number").value
                hi = self.expect("number").value
                accuracy_range = (lo, hi)
            elif key == "context":
                label = self.expect("ident").value
                contexts[label] = self.expect("number").value
            elif key == "confidence":
                label = self.expect("ident").value
                lo = self.expect("number").value
                hi = self.expect("number").value
                intervals[label] = (lo, hi)
            else:
                raise ParseError(f"unknown profile entry {key!r}", key_tok.line, key_tok.col)
        self.expect("punct", "}")
        self.profiles.append(FeatureQualityProfile(
            feature_id=pid,
            ml_component_id=ml_component,
            accuracy_range=accuracy_range,
            context_sensitivity=contexts,
            confidence_intervals=intervals,
        ))


def parse_feature_model(text: str) -> FeatureModel:
    """Parse `.fm` source; raises ParseError with line/column on bad syntax."""
    return _Parser(text).parse()


# --- serialization --------------------------------------------------------

def _fmt_num(x: float) -> str:
    return repr(int(x)) if float(x).is_integer() else repr(x)


def serialize_feature_model(model: FeatureModel) -> str:
    """Render a model back to `.fm` text; parse(serialize(m)) == m."""
    lines: list[str] = []
    groups_by_parent: dict[str, list[FeatureGroup]] = {}
    for g in model.groups:
        groups_by_parent.setdefault(g.parent, []).append(g)

    def feature_label(fid: str) -> str:
        f = model.feature(fid)
        if f.quality_profile_ref:
            return f"{fid} [ml: {f.quality_profile_ref}]"
        return fid

    def emit_member(fid: str, indent: int, prefix: str = "") -> None:
        pad = "  " * indent
        groups = groups_by_parent.get(fid, [])
        if not groups:
            lines.append(f"{pad}{prefix}{feature_label(fid)}")
            return
        lines.append(f"{pad}{prefix}{feature_label(fid)} {{")
        for g in groups:
            emit_group(g, indent + 1)
        lines.append(f"{pad}}}")

    def emit_group(g: FeatureGroup, indent: int) -> None:
        pad = "  " * indent
        if g.kind in (GroupKind.MANDATORY, GroupKind.OPTIONAL):
            kw = "mandatory" if g.kind is GroupKind.MANDATORY else "optional"
            # one group per keyword: first member carries the keyword, the
            # rest continue the same member run
            emit_member(g.members[0], indent, prefix=f"{kw} ")
            for m in g.members[1:]:
                emit_member(m, indent, prefix=" " * (len(kw) + 1))
        else:
            head = "xor {" if g.kind is GroupKind.XOR_GROUP \
                else f"or({g.min_card}..{g.max_card}) {{"
            lines.append(f"{pad}{head}")
            for m in g.members:
                emit_member(m, indent + 1)
            lines.append(f"{pad}}}")

    emit_member(model.root, 0, prefix="feature ")

    if model.constraints:
        lines.append("")
        lines.append("constraints {")
        for c in model.constraints:
            lines.append(f"  {c};")
        lines.append("}")

    for p in sorted(model.profiles, key=lambda p: p.feature_id):
        lines.append("")
        lines.append(f"profile {p.feature_id} {{")
        lines.append(f'  ml_component "{p.ml_component_id}"')
        lines.append(f"  accuracy_range {_fmt_num(p.accuracy_range[0])} {_fmt_num(p.accuracy_range[1])}")
        for label in sorted(p.context_sensitivity):
            lines.append(f"  context {label} {_fmt_num(p.context_sensitivity[label])}")
        for label, (lo, hi) in sorted(p.confidence_intervals.items(), key=lambda kv: kv[1][0]):
            lines.append(f"  confidence {label} {_fmt_num(lo)} {_fmt_num(hi)}")
        lines.append("}")
    return "\n".join(lines) + "\n"
