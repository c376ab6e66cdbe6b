"""Parser for the expression and inequality mini-language.

Grammar (whitespace is ignored everywhere):

    expr  := term (('+' | '-') term)*
    term  := number? atom                 # juxtaposition, no '*'
    atom  := 'H(' rvlist ('|' rvlist)? ')'
           | 'I(' rvlist ';' rvlist ('|' rvlist)? ')'
           | ident                        # an additional LP variable
    ineq  := expr ('<=' | '>=' | '=') number

Numbers are plain decimal literals; identifiers are alphanumeric and must
not start with a digit.  ``I(a;b;c)`` with three parts is rejected: only
binary mutual information exists in this language.
"""

from __future__ import annotations

import re
import warnings

from .errors import PdSyntaxError
from .model import (
    LinearExpr,
    SourcedExpr,
    expand_conditional_entropy,
    expand_mutual_information,
    varset,
)

_NUMBER = re.compile(r"\d+\.?\d*|\.\d+")
_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9]*")

IDENT_RE = re.compile(r"^[A-Za-z][A-Za-z0-9]*$")


def _fmt_coef(c):
    """Coefficient as written in a normalized expression: 1 -> '', 2 -> '2',
    3.2 -> '3.2'."""
    if c == int(c):
        return str(int(c))
    return repr(c)


class _Scanner:
    def __init__(self, src):
        self.src = src
        self.text = re.sub(r"\s+", "", src)
        self.pos = 0

    def error(self, msg):
        raise PdSyntaxError(f"{msg} in expression {self.src!r} (at offset {self.pos})")

    def eof(self):
        return self.pos >= len(self.text)

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch):
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def expect(self, ch):
        if not self.take(ch):
            self.error(f"expected {ch!r}")

    def number(self):
        m = _NUMBER.match(self.text, self.pos)
        if not m:
            return None
        self.pos = m.end()
        return float(m.group())

    def ident(self):
        m = _IDENT.match(self.text, self.pos)
        if not m:
            return None
        self.pos = m.end()
        return m.group()

    def until(self, stops):
        start = self.pos
        depth = 0
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "(":
                depth += 1
            elif ch == ")":
                if depth == 0:
                    break
                depth -= 1
            elif ch in stops and depth == 0:
                break
            self.pos += 1
        return self.text[start:self.pos]


def _name_list(chunk, rv_index, al_index, scanner, what):
    if not chunk:
        return []
    names = chunk.split(",")
    out = []
    for nm in names:
        if not IDENT_RE.match(nm):
            scanner.error(f"bad name {nm!r} in {what}")
        if nm not in rv_index:
            if nm in al_index:
                scanner.error(
                    f"{nm!r} is an additional LP variable, not a random "
                    f"variable, and cannot appear inside {what}"
                )
            scanner.error(f"unknown random variable {nm!r} in {what}")
        out.append(nm)
    return out


class Term:
    """One term of a parsed expression, kept for display purposes."""

    __slots__ = ("coef", "text", "expr")

    def __init__(self, coef, text, expr):
        self.coef = coef
        self.text = text
        self.expr = expr  # expansion of the bare atom (coefficient excluded)


def _parse_atom(sc, rv_index, al_index):
    """Parse one atom, returning (display_text, LinearExpr)."""
    start = sc.pos
    name = sc.ident()
    if name is None:
        sc.error("expected H(...), I(...) or a variable name")
    if name in ("H", "I") and sc.peek() == "(":
        sc.expect("(")
        if name == "H":
            left_txt = sc.until("|;")
            given_txt = ""
            if sc.take("|"):
                given_txt = sc.until("|;")
            if sc.peek() == ";":
                sc.error("';' is not allowed inside H(...)")
            sc.expect(")")
            left = _name_list(left_txt, rv_index, al_index, sc, "H(...)")
            given = _name_list(given_txt, rv_index, al_index, sc, "H(...)")
            if not left:
                sc.error("H(...) with an empty variable list")
            lmask = varset(left, rv_index)
            gmask = varset(given, rv_index)
            expr = expand_conditional_entropy(lmask, gmask)
            text = "H(" + ",".join(left) + ("|" + ",".join(given) if given else "") + ")"
            return text, expr
        a_txt = sc.until("|;")
        if not sc.take(";"):
            sc.error("I(...) requires exactly two ';'-separated parts")
        b_txt = sc.until("|;")
        if sc.peek() == ";":
            sc.error("I(...) requires exactly two ';'-separated parts")
        given_txt = ""
        if sc.take("|"):
            given_txt = sc.until("|;")
        sc.expect(")")
        a = _name_list(a_txt, rv_index, al_index, sc, "I(...)")
        b = _name_list(b_txt, rv_index, al_index, sc, "I(...)")
        given = _name_list(given_txt, rv_index, al_index, sc, "I(...)")
        if not a or not b:
            sc.error("I(...) with an empty variable list")
        expr = expand_mutual_information(
            varset(a, rv_index), varset(b, rv_index), varset(given, rv_index)
        )
        text = (
            "I(" + ",".join(a) + ";" + ",".join(b)
            + ("|" + ",".join(given) if given else "") + ")"
        )
        return text, expr
    # bare identifier: must be an additional LP variable
    if name in rv_index:
        sc.pos = start
        sc.error(
            f"{name!r} is a random variable; write H({name}) for its entropy"
        )
    if name not in al_index:
        sc.pos = start
        sc.error(f"unknown identifier {name!r}")
    expr = LinearExpr(al={al_index[name]: 1.0})
    return name, expr


def parse_expression(src, rv_index, al_index):
    """Parse an expression into a SourcedExpr (source, normalized rendering,
    expanded LinearExpr)."""
    sc = _Scanner(src)
    if sc.eof():
        raise PdSyntaxError("empty expression")
    terms = []
    first = True
    while not sc.eof():
        sign = 1.0
        if sc.take("+"):
            sign = 1.0
        elif sc.take("-"):
            sign = -1.0
        elif not first:
            sc.error("expected '+' or '-' between terms")
        num = sc.number()
        coef = sign * (num if num is not None else 1.0)
        if sc.peek() == "*":
            sc.error("'*' is not used; write the coefficient directly before the term")
        text, expr = _parse_atom(sc, rv_index, al_index)
        terms.append(Term(coef, text, expr))
        first = False
    total = LinearExpr()
    for t in terms:
        total.add(t.expr, t.coef)
    if total.is_empty():
        warnings.warn(f"expression {src!r} cancels to zero", stacklevel=2)
    return SourcedExpr(source=src, pretty=render_terms(terms), expr=total,
                       terms=tuple(terms))


def render_terms(terms):
    """Normalized display form: terms joined with ' + ' / ' - ', coefficient
    written only when it is not 1."""
    parts = []
    for k, t in enumerate(terms):
        mag = abs(t.coef)
        body = (_fmt_coef(mag) if mag != 1 else "") + t.text
        if k == 0:
            parts.append(("-" if t.coef < 0 else "") + body)
        else:
            parts.append((" - " if t.coef < 0 else " + ") + body)
    return "".join(parts)


_REL = re.compile(r"<=|>=|=")


def parse_inequality(src, rv_index, al_index):
    """Parse '<expr> (<=|>=|=) <number>' into (SourcedExpr, sense, rhs)."""
    rels = list(_REL.finditer(src))
    if not rels:
        raise PdSyntaxError(f"no relation symbol in {src!r}")
    if len(rels) > 1:
        raise PdSyntaxError(f"more than one relation symbol in {src!r}")
    m = rels[0]
    lhs_src, rhs_src = src[: m.start()], src[m.end():]
    try:
        rhs = float(rhs_src.strip())
    except ValueError:
        raise PdSyntaxError(
            f"right-hand side of {src!r} must be a number, got {rhs_src.strip()!r}"
        ) from None
    lhs = parse_expression(lhs_src, rv_index, al_index)
    return lhs, m.group(), rhs
