"""Recursive-descent parser and printer for the matrix DSL.

Example::

    matrix L {
      seq alpha class superlog values "alpha.csv";
      log_entry: q * seq(alpha) - (2*q + 1) * log(j)
    }

Expressions are linear combinations of basis references (``1``, ``log(j)``,
``j^theta``, ``seq(name)``) whose coefficients are rational polynomials in
``q``.  A product may contain at most one basis reference.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

import numpy as np

from .basis import CLASS_KEYWORDS, GrowthBasisFunction, GrowthClass, Kind
from .poly import CoefficientPoly
from .spec import KoetheMatrixSpec

_WS = re.compile(r"(?:\s+|#[^\n]*)+")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER = re.compile(r"\d+(?:\.\d+)?")
_INT = re.compile(r"\d+")
_BAREPATH = re.compile(r"[A-Za-z0-9_./\\-]+")
_STRING = re.compile(r'"([^"\n]*)"')


class DSLSyntaxError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


# A parsed linear combination: basis identity -> (function, coefficient).
_Combo = dict


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def where(self, pos: int | None = None) -> tuple[int, int]:
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, message: str, pos: int | None = None) -> DSLSyntaxError:
        return DSLSyntaxError(message, *self.where(pos))

    def skip(self) -> None:
        m = _WS.match(self.text, self.pos)
        if m:
            self.pos = m.end()

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def peek(self, literal: str) -> bool:
        self.skip()
        return self.text.startswith(literal, self.pos)

    def accept(self, literal: str) -> bool:
        if self.peek(literal):
            self.pos += len(literal)
            return True
        return False

    def expect(self, literal: str) -> None:
        if not self.accept(literal):
            found = self.text[self.pos:self.pos + 12] or "end of input"
            raise self.error(f"expected {literal!r}, found {found!r}")

    def match(self, pattern: re.Pattern) -> str | None:
        self.skip()
        m = pattern.match(self.text, self.pos)
        if not m:
            return None
        self.pos = m.end()
        return m.group(0)

    def peek_ident(self) -> str | None:
        self.skip()
        m = _IDENT.match(self.text, self.pos)
        return m.group(0) if m else None

    def keyword(self, word: str) -> bool:
        if self.peek_ident() == word:
            self.pos += len(word)
            return True
        return False

    def expect_keyword(self, word: str) -> None:
        if not self.keyword(word):
            raise self.error(f"expected keyword {word!r}")

    def ident(self) -> str:
        tok = self.match(_IDENT)
        if tok is None:
            raise self.error("expected identifier")
        return tok


class _Parser:
    def __init__(self, text: str, base_dir: Path | None, load_values: bool):
        self.s = _Scanner(text)
        self.base_dir = base_dir
        self.load_values = load_values
        self.seqs: dict[str, GrowthBasisFunction] = {}

    # file := matrix-block+
    def parse_file(self) -> list[KoetheMatrixSpec]:
        specs = []
        names = set()
        while not self.s.at_end():
            start = self.s.pos
            spec = self.block()
            if spec.name in names:
                raise self.s.error(f"duplicate matrix name {spec.name!r}", start)
            names.add(spec.name)
            specs.append(spec)
        if not specs:
            raise self.s.error("expected at least one 'matrix' block")
        return specs

    def block(self) -> KoetheMatrixSpec:
        self.s.expect_keyword("matrix")
        name = self.s.ident()
        self.s.expect("{")
        self.seqs = {}
        while self.s.peek_ident() == "seq":
            self.decl()
            self.s.accept(";")
        self.s.expect_keyword("log_entry")
        self.s.expect(":")
        combo = self.expr()
        self.s.accept(";")
        self.s.expect("}")
        terms = [(f, c) for f, c in combo.values()]
        used = {f.name for f, _ in terms if f.kind is Kind.SEQ}
        terms += [(f, CoefficientPoly()) for n, f in self.seqs.items() if n not in used]
        return KoetheMatrixSpec.from_terms(name, terms)

    # decl := "seq" IDENT "class" CLASS ["values" PATH]
    def decl(self) -> None:
        self.s.expect_keyword("seq")
        pos = self.s.pos
        name = self.s.ident()
        if name in self.seqs:
            raise self.s.error(f"duplicate basis function seq({name})", pos)
        self.s.expect_keyword("class")
        growth, theta = self.growth_class()
        path = None
        samples = None
        if self.s.keyword("values"):
            ppos = self.s.pos
            path = self.path()
            if self.load_values:
                samples = self._load(path, ppos)
        try:
            self.seqs[name] = GrowthBasisFunction.seq(name, growth, theta, samples, path)
        except ValueError as exc:
            raise self.s.error(str(exc), pos) from None

    def growth_class(self) -> tuple[GrowthClass, Fraction | None]:
        pos = self.s.pos
        word = self.s.ident()
        if word == "poly":
            self.s.expect("(")
            theta = self.rational()
            self.s.expect(")")
            if theta <= 0:
                raise self.s.error(f"non-positive power exponent {theta}", pos)
            return GrowthClass.POLY, theta
        if word not in CLASS_KEYWORDS:
            raise self.s.error(f"unknown basis class {word!r}", pos)
        return CLASS_KEYWORDS[word], None

    def path(self) -> str:
        self.s.skip()
        m = _STRING.match(self.s.text, self.s.pos)
        if m:
            self.s.pos = m.end()
            return m.group(1)
        tok = self.s.match(_BAREPATH)
        if tok is None:
            raise self.s.error("expected a path")
        return tok

    def _load(self, path: str, pos: int) -> np.ndarray:
        p = Path(path)
        if not p.is_absolute() and self.base_dir is not None:
            p = self.base_dir / p
        try:
            return load_sample_values(p)
        except (OSError, ValueError) as exc:
            raise self.s.error(f"cannot load values from {path!r}: {exc}", pos) from None

    def rational(self) -> Fraction:
        self.s.skip()
        neg = self.s.accept("-")
        tok = self.s.match(_NUMBER)
        if tok is None:
            raise self.s.error("expected a rational number")
        val = Fraction(tok)
        if "." not in tok:
            save = self.s.pos
            if self.s.accept("/"):
                den = self.s.match(_INT)
                if den is None:
                    self.s.pos = save
                else:
                    if int(den) == 0:
                        raise self.s.error("division by zero")
                    val = val / int(den)
        return -val if neg else val

    # expr := ["+"|"-"] term (("+"|"-") term)*
    def expr(self) -> _Combo:
        sign = 1
        if self.s.accept("-"):
            sign = -1
        else:
            self.s.accept("+")
        acc = _scale(self.term(), sign)
        while True:
            if self.s.accept("+"):
                acc = _add(acc, self.term())
            elif self.s.accept("-"):
                acc = _add(acc, _scale(self.term(), -1))
            else:
                return acc

    # term := factor (("*" factor) | ("/" NUMBER))*
    def term(self) -> _Combo:
        pos = self.s.pos
        acc = self.factor()
        while True:
            if self.s.accept("*"):
                rhs = self.factor()
                prod = _mul(acc, rhs)
                if prod is None:
                    raise self.s.error("a term may contain at most one basis function", pos)
                acc = prod
            elif self.s.peek("/"):
                self.s.expect("/")
                tok = self.s.match(_NUMBER)
                if tok is None:
                    raise self.s.error("only division by a number is supported")
                den = Fraction(tok)
                if den == 0:
                    raise self.s.error("division by zero")
                acc = _scale(acc, 1 / den)
            else:
                return acc

    def factor(self) -> _Combo:
        s = self.s
        s.skip()
        pos = s.pos
        if s.accept("("):
            inner = self.expr()
            s.expect(")")
            return inner
        num = s.match(_NUMBER)
        if num is not None:
            return _const_combo(CoefficientPoly.const(Fraction(num)))
        word = s.peek_ident()
        if word is None:
            found = s.text[s.pos:s.pos + 12] or "end of input"
            raise s.error(f"unexpected {found!r}")
        s.pos += len(word)
        if word == "q":
            power = 1
            if s.accept("^"):
                tok = s.match(_INT)
                if tok is None:
                    raise s.error("q takes a nonnegative integer power")
                power = int(tok)
            return _const_combo(CoefficientPoly.q() ** power)
        if word == "log":
            s.expect("(")
            s.expect_keyword("j")
            s.expect(")")
            return _basis_combo(GrowthBasisFunction.log())
        if word == "j":
            theta = Fraction(1)
            if s.accept("^"):
                epos = s.pos
                if s.accept("("):
                    theta = self.rational()
                    s.expect(")")
                else:
                    theta = self.rational()
                if theta <= 0:
                    raise s.error(f"non-positive power exponent {theta}", epos)
            return _basis_combo(GrowthBasisFunction.power(theta))
        if word == "seq":
            s.expect("(")
            npos = s.pos
            name = s.ident()
            s.expect(")")
            if name not in self.seqs:
                raise s.error(f"undeclared sequence {name!r}", npos)
            return _basis_combo(self.seqs[name])
        raise s.error(f"unknown identifier {word!r}", pos)


def _const_combo(c: CoefficientPoly) -> _Combo:
    f = GrowthBasisFunction.one()
    return {f.identity: (f, c)}


def _basis_combo(f: GrowthBasisFunction) -> _Combo:
    return {f.identity: (f, CoefficientPoly.const(1))}


def _scale(a: _Combo, s) -> _Combo:
    return {k: (f, c * s) for k, (f, c) in a.items()}


def _add(a: _Combo, b: _Combo) -> _Combo:
    out = dict(a)
    for k, (f, c) in b.items():
        out[k] = (f, out[k][1] + c) if k in out else (f, c)
    return out


def _is_scalar(a: _Combo) -> bool:
    return all(f.kind is Kind.ONE for f, _ in a.values())


def _mul(a: _Combo, b: _Combo) -> _Combo | None:
    if _is_scalar(a):
        a, b = b, a
    if not _is_scalar(b):
        return None
    scalar = sum((c for _, c in b.values()), CoefficientPoly())
    return {k: (f, c * scalar) for k, (f, c) in a.items()}


def load_sample_values(path) -> np.ndarray:
    """Sample values alpha_1, alpha_2, ... from JSON (list) or text/CSV."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        vals = np.asarray(json.loads(text), dtype=float)
    else:
        vals = np.asarray([float(t) for t in re.split(r"[\s,]+", text.strip()) if t], dtype=float)
    if vals.ndim != 1 or vals.size == 0:
        raise ValueError("expected a flat list of numbers")
    return vals


def parse_specs(text: str, base_dir=None, load_values: bool = True) -> list[KoetheMatrixSpec]:
    base = Path(base_dir) if base_dir is not None else None
    return _Parser(text, base, load_values).parse_file()


def parse_spec(text: str, base_dir=None, load_values: bool = True) -> KoetheMatrixSpec:
    """Parse source holding exactly one ``matrix`` block."""
    specs = parse_specs(text, base_dir, load_values)
    if len(specs) != 1:
        raise DSLSyntaxError(f"expected one matrix block, found {len(specs)}", 1, 1)
    return specs[0]


def parse_file(path, load_values: bool = True) -> list[KoetheMatrixSpec]:
    path = Path(path)
    return parse_specs(path.read_text(encoding="utf-8"), path.parent, load_values)


def _format_term(f: GrowthBasisFunction, c: CoefficientPoly) -> tuple[int, str]:
    if c.is_monomial():
        sign = -1 if c.leading < 0 else 1
        mag = c * sign
        if f.kind is Kind.ONE:
            return sign, str(mag)
        if mag == CoefficientPoly.const(1):
            return sign, f.ref()
        return sign, f"{mag} * {f.ref()}"
    body = f"({c})"
    return 1, body if f.kind is Kind.ONE else f"{body} * {f.ref()}"


def format_expr(spec: KoetheMatrixSpec) -> str:
    parts: list[str] = []
    for f, c in zip(spec.basis, spec.coeffs):
        if c.is_zero():
            continue
        sign, body = _format_term(f, c)
        if not parts:
            parts.append(("-" if sign < 0 else "") + body)
        else:
            parts.append(("- " if sign < 0 else "+ ") + body)
    return " ".join(parts) if parts else "0"


def format_spec(spec: KoetheMatrixSpec) -> str:
    lines = [f"matrix {spec.name} {{"]
    for f in spec.sequences():
        decl = f"  seq {f.name} class {f.class_text()}"
        if f.values_path is not None:
            decl += f' values "{f.values_path}"'
        lines.append(decl + ";")
    lines.append(f"  log_entry: {format_expr(spec)}")
    lines.append("}")
    return "\n".join(lines) + "\n"
