"""Recursive-descent parser for the identity language.

Grammar (whitespace-insensitive)::

    identity := expr ("=" expr)+ [";" clause ("," clause)*]
    clause   := var ">=" bound | var "in" lin ".." lin
    bound    := lin | "max(" lin ("," lin)* ")"
    expr     := ["-"] term (("+"|"-") term)*
    term     := factor ("*" factor)*
    factor   := base ["^" (uint | name | "(" lin ")")]
    base     := rational | "F[" lin "]" | "L[" lin "]" | "Fk{" lin "}[" lin "]"
              | "H{" int "," int "}[" lin "]" | "(-1)^(" lin ")" | "(-1)^" name
              | "C(" lin "," lin ")" | "Sum(" var "," lin "," lin "," expr ")"
              | "(" expr ")" | name
    lin      := ["+"|"-"] linterm (("+"|"-") linterm)*
    linterm  := uint [name] | name

Index variables are single lowercase letters; a run such as ``kn`` is the
product ``k*n``. A bare name in expression position stands for the integer
value of a declared parameter. A ``var in lo..hi`` clause declares a family
parameter.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .ast import (
    Add,
    Binom,
    Condition,
    Const,
    Expr,
    Fib,
    GenFib,
    Identity,
    IndexVal,
    KFib,
    Lucas,
    Meta,
    Mul,
    Neg,
    Param,
    Pow,
    Sign,
    Sum,
    children,
    free_vars,
    walk,
)
from .lin import LinForm

__all__ = [
    "DSLError",
    "DSLSyntaxError",
    "UnboundVariableError",
    "ShadowingError",
    "parse",
    "parse_expr",
    "parse_lin",
]


class DSLError(ValueError):
    """Base class for identity-language errors."""


class DSLSyntaxError(DSLError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line = line
        self.col = col


class UnboundVariableError(DSLError):
    pass


class ShadowingError(DSLError):
    pass


_PUNCT2 = {">=", ".."}
_PUNCT1 = set("+-*^/()[]{},=;")


class _Tok:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind: str, text: str, line: int, col: int):
        self.kind, self.text, self.line, self.col = kind, text, line, col

    def __repr__(self):
        return f"{self.kind}:{self.text!r}@{self.line}:{self.col}"


def _tokenize(src: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i, line, col = 0, 1, 1
    n = len(src)
    while i < n:
        ch = src[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        if ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            toks.append(_Tok("NUM", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and src[j].isalpha():
                j += 1
            toks.append(_Tok("NAME", src[i:j], line, col))
            col += j - i
            i = j
            continue
        two = src[i : i + 2]
        if two in _PUNCT2:
            toks.append(_Tok(two, two, line, col))
            i, col = i + 2, col + 2
            continue
        if ch in _PUNCT1:
            toks.append(_Tok(ch, ch, line, col))
            i, col = i + 1, col + 1
            continue
        raise DSLSyntaxError(f"unexpected character {ch!r}", line, col)
    toks.append(_Tok("EOF", "", line, col))
    return toks


def _is_var_name(text: str) -> bool:
    return text.isalpha() and text.islower()


class _Parser:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.i = 0

    # -- token helpers ----------------------------------------------------
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def accept(self, kind: str, text: Optional[str] = None) -> Optional[_Tok]:
        if self.at(kind, text):
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, kind: str, text: Optional[str] = None) -> _Tok:
        t = self.accept(kind, text)
        if t is None:
            want = text or kind
            got = self.tok.text or self.tok.kind
            raise self.error(f"expected {want!r}, found {got!r}")
        return t

    def error(self, msg: str, tok: Optional[_Tok] = None) -> DSLSyntaxError:
        t = tok or self.tok
        return DSLSyntaxError(msg, t.line, t.col)

    # -- index forms ------------------------------------------------------
    def lin(self) -> LinForm:
        start = self.tok
        acc = LinForm()
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        acc = acc + self.linterm() * sign
        while self.at("+") or self.at("-"):
            sign = -1 if self.accept("-") else 1
            self.accept("+")
            acc = acc + self.linterm() * sign
        if start is self.tok:
            raise self.error("expected index expression")
        return acc

    def linterm(self) -> LinForm:
        if self.at("NUM"):
            c = int(self.expect("NUM").text)
            if self.at("NAME") and _is_var_name(self.tok.text):
                name = self.expect("NAME").text
                return LinForm.from_dict({tuple(name): c})
            return LinForm((), c)
        if self.at("NAME") and _is_var_name(self.tok.text):
            name = self.expect("NAME").text
            return LinForm.from_dict({tuple(name): 1})
        raise self.error("expected index term")

    def var(self) -> str:
        t = self.expect("NAME")
        if len(t.text) != 1 or not t.text.islower():
            raise self.error(f"index variable must be a single lowercase letter, got {t.text!r}", t)
        return t.text

    def int_(self) -> int:
        neg = bool(self.accept("-"))
        v = int(self.expect("NUM").text)
        return -v if neg else v

    # -- expressions ------------------------------------------------------
    def expr(self) -> Expr:
        t0 = self.tok
        terms: list[Expr] = []
        if self.accept("-"):
            terms.append(Neg(self.term(), pos=(t0.line, t0.col)))
        else:
            terms.append(self.term())
        while self.at("+") or self.at("-"):
            op = self.tok
            self.i += 1
            t = self.term()
            terms.append(t if op.kind == "+" else Neg(t, pos=(op.line, op.col)))
        if len(terms) == 1:
            return terms[0]
        return Add(tuple(terms), pos=(t0.line, t0.col))

    def term(self) -> Expr:
        t0 = self.tok
        factors = [self.factor()]
        while self.accept("*"):
            factors.append(self.factor())
        if len(factors) == 1:
            return factors[0]
        return Mul(tuple(factors), pos=(t0.line, t0.col))

    def factor(self) -> Expr:
        t0 = self.tok
        base = self.base()
        if self.accept("^"):
            if self.at("NUM"):
                exp = LinForm((), int(self.expect("NUM").text))
            elif self.at("NAME") and _is_var_name(self.tok.text):
                exp = LinForm.from_dict({tuple(self.expect("NAME").text): 1})
            elif self.accept("("):
                exp = self.lin()
                self.expect(")")
            else:
                raise self.error("expected exponent")
            return Pow(base, exp, pos=(t0.line, t0.col))
        return base

    def _sign_ahead(self) -> bool:
        # "(" "-" NUM(1) ")" "^"
        return (
            self.at("(")
            and self.peek(1).kind == "-"
            and self.peek(2).kind == "NUM"
            and self.peek(2).text == "1"
            and self.peek(3).kind == ")"
            and self.peek(4).kind == "^"
        )

    def base(self) -> Expr:
        t = self.tok
        pos = (t.line, t.col)
        if t.kind == "NUM":
            self.i += 1
            num = int(t.text)
            if self.accept("/"):
                den = int(self.expect("NUM").text)
                if den == 0:
                    raise self.error("zero denominator", t)
                return Const(Fraction(num, den), pos=pos)
            return Const(Fraction(num), pos=pos)
        if self._sign_ahead():
            self.i += 5
            if self.accept("("):
                exp = self.lin()
                self.expect(")")
            elif self.at("NUM"):
                exp = LinForm((), int(self.expect("NUM").text))
            elif self.at("NAME") and _is_var_name(self.tok.text):
                exp = LinForm.from_dict({tuple(self.expect("NAME").text): 1})
            else:
                raise self.error("expected sign exponent")
            return Sign(exp, pos=pos)
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            return inner
        if t.kind == "NAME":
            name = t.text
            if name == "F" and self.peek().kind == "[":
                self.i += 2
                idx = self.lin()
                self.expect("]")
                return Fib(idx, pos=pos)
            if name == "L" and self.peek().kind == "[":
                self.i += 2
                idx = self.lin()
                self.expect("]")
                return Lucas(idx, pos=pos)
            if name == "Fk" and self.peek().kind == "{":
                self.i += 2
                k = self.lin()
                self.expect("}")
                self.expect("[")
                idx = self.lin()
                self.expect("]")
                return KFib(k, idx, pos=pos)
            if name == "H" and self.peek().kind == "{":
                self.i += 2
                h0 = self.int_()
                self.expect(",")
                h1 = self.int_()
                self.expect("}")
                self.expect("[")
                idx = self.lin()
                self.expect("]")
                return GenFib(h0, h1, idx, pos=pos)
            if name == "C" and self.peek().kind == "(":
                self.i += 2
                up = self.lin()
                self.expect(",")
                lo = self.lin()
                self.expect(")")
                return Binom(up, lo, pos=pos)
            if name == "Sum" and self.peek().kind == "(":
                self.i += 2
                var = self.var()
                self.expect(",")
                lo = self.lin()
                self.expect(",")
                hi = self.lin()
                self.expect(",")
                body = self.expr()
                self.expect(")")
                return Sum(var, lo, hi, body, pos=pos)
            if _is_var_name(name):
                self.i += 1
                return IndexVal(LinForm.from_dict({tuple(name): 1}), pos=pos)
            raise self.error(f"unknown name {name!r}")
        raise self.error(f"unexpected {t.text or t.kind!r}")

    # -- identity ---------------------------------------------------------
    def bound(self) -> tuple[LinForm, ...]:
        if self.at("NAME", "max") and self.peek().kind == "(":
            self.i += 2
            forms = [self.lin()]
            while self.accept(","):
                forms.append(self.lin())
            self.expect(")")
            return tuple(forms)
        return (self.lin(),)

    def clauses(self) -> tuple[list[Condition], list[Param]]:
        conds: list[Condition] = []
        params: list[Param] = []
        while True:
            t = self.tok
            name = self.var()
            if self.accept(">="):
                conds.append(Condition(name, self.bound()))
            elif self.accept("NAME", "in"):
                lo = self.lin()
                self.expect("..")
                hi = self.lin()
                params.append(Param(name, lo, hi))
            else:
                raise self.error(f"expected '>=' or 'in' after {name!r}")
            if any(c.var == name for c in conds[:-1]) or name in [p.name for p in params[:-1]]:
                raise self.error(f"variable {name!r} declared twice", t)
            if not self.accept(","):
                break
        return conds, params

    def identity(self) -> Identity:
        sides = [self.expr()]
        while self.accept("="):
            sides.append(self.expr())
        if len(sides) < 2:
            raise self.error("expected '='")
        conds: list[Condition] = []
        params: list[Param] = []
        explicit = False
        if self.accept(";"):
            explicit = True
            conds, params = self.clauses()
        self.expect("EOF")
        return _bind(tuple(sides), conds, params, explicit)


def _check_shadowing(e: Expr, declared: set[str]) -> None:
    def rec(node: Expr, bound: frozenset[str]) -> None:
        if isinstance(node, Sum):
            if node.var in bound or node.var in declared:
                where = f" at line {node.pos[0]}, column {node.pos[1]}" if node.pos else ""
                raise ShadowingError(f"sum variable {node.var!r} shadows an outer binding{where}")
            rec(node.body, bound | {node.var})
            return
        for c in children(node):
            rec(c, bound)

    rec(e, frozenset())
    # a sum variable must not also occur free elsewhere
    frees = free_vars(e)
    for node in walk(e):
        if isinstance(node, Sum) and node.var in frees:
            raise ShadowingError(f"sum variable {node.var!r} is also used as a free index")


def _bind(sides: tuple[Expr, ...], conds: list[Condition], params: list[Param], explicit: bool) -> Identity:
    declared = {c.var for c in conds} | {p.name for p in params}
    for s in sides:
        _check_shadowing(s, declared)
    used = set().union(*(free_vars(s) for s in sides))
    for c in conds:
        for b in c.bounds:
            used |= b.variables
    for p in params:
        used |= p.lo.variables | p.hi.variables
    if explicit:
        missing = sorted(used - declared)
        if missing:
            raise UnboundVariableError(f"unbound variable(s): {', '.join(missing)}")
    else:
        conds = [Condition(v, (LinForm(),)) for v in sorted(used)]
    pnames = {p.name for p in params}
    for s in sides:
        for node in walk(s):
            if isinstance(node, IndexVal) and not node.form.variables <= pnames:
                bad = ", ".join(sorted(node.form.variables - pnames))
                raise UnboundVariableError(f"bare index value {bad!r} must be a declared parameter")
    return Identity(sides, tuple(conds), tuple(params))


def parse(text: str, meta: Optional[Meta] = None) -> Identity:
    """Parse identity source text.

    Without a ``;`` clause every free variable gets the implicit condition
    ``>= 0``. With one, every free variable must be conditioned or declared.
    """
    ident = _Parser(text).identity()
    if meta is not None:
        ident = Identity(ident.sides, ident.conditions, ident.params, meta)
    return ident


def parse_expr(text: str) -> Expr:
    p = _Parser(text)
    e = p.expr()
    p.expect("EOF")
    return e


def parse_lin(text: str) -> LinForm:
    p = _Parser(text)
    lf = p.lin()
    p.expect("EOF")
    return lf
