"""Grammar front end: declaration context plus a recursive-descent parser.

Grammar (whitespace insignificant):

    expr   := ['-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' ['-'] integer)?
    base   := integer | name | name '_' jetletters | name '(' args ')'
            | 'Int' '[' expr ',' name ']'
            | 'D' '[' name ';' name (',' name)* ']'
            | '(' expr ')'

Jet suffix letters must be single-character arguments of the named dependent
variable; multi-character arguments use the D[...] form.
"""

from __future__ import annotations

import re

from .expr import (Expr, ExprError, KNOWN_FUNCTIONS, add, fun, integral, jet,
                   mul, pow_, rat, sym)



class ParseError(ExprError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class UnknownNameError(ParseError):
    pass


class Context:
    """Registry of independent variables, dependent variables with argument
    lists, and declared constants.  Names must be unique and underscore free.
    """

    def __init__(self):
        self.independents: tuple[str, ...] = ()
        self.dependents: dict[str, tuple[str, ...]] = {}
        self.constants: set[str] = set()

    def _check_new(self, name: str) -> None:
        if "_" in name or not re.fullmatch(r"[A-Za-z][A-Za-z0-9]*", name):
            raise ValueError(f"bad name {name!r}")
        if name in self:
            raise ValueError(f"name {name!r} already registered")
        if name in ("Int", "D", "I", "pi") or name in KNOWN_FUNCTIONS:
            raise ValueError(f"name {name!r} is reserved")

    def __contains__(self, name: str) -> bool:
        return (name in self.independents or name in self.dependents
                or name in self.constants)

    def add_independents(self, *names: str) -> "Context":
        for n in names:
            self._check_new(n)
            self.independents += (n,)
        return self

    def add_dependent(self, name: str, args=None) -> "Context":
        self._check_new(name)
        args = tuple(args) if args is not None else self.independents
        for a in args:
            if a not in self.independents and a not in self.dependents:
                raise ValueError(f"argument {a!r} of {name!r} not registered")
        self.dependents[name] = args
        return self

    def add_constants(self, *names: str) -> "Context":
        for n in names:
            self._check_new(n)
            self.constants.add(n)
        return self

    def copy(self) -> "Context":
        c = Context()
        c.independents = self.independents
        c.dependents = dict(self.dependents)
        c.constants = set(self.constants)
        return c

    # -- atom builders ----------------------------------------------------
    def var(self, name: str) -> Expr:
        if name in self.dependents:
            return self.jet(name)
        if name in self.independents or name in self.constants:
            return sym(name)
        raise KeyError(name)

    def jet(self, dep: str, **counts: int) -> Expr:
        args = self.dependents[dep]
        vec = [0] * len(args)
        for v, k in counts.items():
            vec[args.index(v)] += k
        return jet(dep, args, tuple(vec))

    def jet_suffix(self, dep: str, letters: str) -> Expr:
        args = self.dependents[dep]
        vec = [0] * len(args)
        for ch in letters:
            if ch not in args:
                raise ValueError(
                    f"{ch!r} is not an argument of {dep!r}")
            vec[args.index(ch)] += 1
        return jet(dep, args, tuple(vec))


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9]*(?:_[A-Za-z0-9]+)?)"
                    r"|(\^|\+|\-|\*|/|\(|\)|\[|\]|,|;))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.group(1):
            out.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2):
            out.append(("name", m.group(2), m.start(2)))
        else:
            out.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str, ctx: Context):
        self.toks = _tokenize(text)
        self.i = 0
        self.ctx = ctx

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op: str):
        kind, val, pos = self.next()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)

    def parse(self) -> Expr:
        e = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ParseError("trailing input", pos)
        return e

    def expr(self) -> Expr:
        terms = []
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.next()
            sign = -1
        terms.append(mul(rat(sign), self.term()))
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                terms.append(mul(rat(1 if val == "+" else -1), self.term()))
            else:
                break
        return add(*terms)

    def term(self) -> Expr:
        out = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.next()
                rhs = self.factor()
                out = mul(out, rhs) if val == "*" else mul(out, pow_(rhs, -1))
            else:
                break
        return out

    def factor(self) -> Expr:
        b = self.base()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.next()
            neg = False
            kind, val, pos = self.next()
            if kind == "op" and val == "-":
                neg = True
                kind, val, pos = self.next()
            if kind != "int":
                raise ParseError("integer exponent expected", pos)
            return pow_(b, -val if neg else val)
        return b

    def base(self) -> Expr:
        kind, val, pos = self.next()
        if kind == "int":
            return rat(val)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind != "name":
            raise ParseError("operand expected", pos)
        name = val
        if name == "Int":
            self.expect("[")
            body = self.expr()
            self.expect(",")
            k, v, p = self.next()
            if k != "name" or v not in self.ctx.independents:
                raise ParseError("independent variable expected in Int[...]", p)
            self.expect("]")
            return integral(body, v)
        if name == "D":
            self.expect("[")
            k, dep, p = self.next()
            if k != "name" or dep not in self.ctx.dependents:
                raise UnknownNameError(f"unknown dependent {dep!r}", p)
            self.expect(";")
            letters = []
            while True:
                k, v, p = self.next()
                if k != "name" or v not in self.ctx.dependents[dep]:
                    raise ParseError(f"{v!r} is not an argument of {dep!r}", p)
                letters.append(v)
                k, v, p = self.peek()
                if k == "op" and v == ",":
                    self.next()
                    continue
                break
            self.expect("]")
            args = self.ctx.dependents[dep]
            vec = [0] * len(args)
            for let in letters:
                vec[args.index(let)] += 1
            return jet(dep, args, tuple(vec))
        if "_" in name:
            dep, suffix = name.split("_", 1)
            if dep not in self.ctx.dependents:
                raise UnknownNameError(f"unknown dependent {dep!r}", pos)
            try:
                return self.ctx.jet_suffix(dep, suffix)
            except ValueError as exc:
                raise ParseError(str(exc), pos) from exc
        kind2, val2, _ = self.peek()
        if kind2 == "op" and val2 == "(":
            if name in KNOWN_FUNCTIONS:
                self.next()
                args = [self.expr()]
                while True:
                    k, v, _ = self.peek()
                    if k == "op" and v == ",":
                        self.next()
                        args.append(self.expr())
                    else:
                        break
                self.expect(")")
                return fun(name, *args)
            if name in self.ctx.dependents:
                # call form of a dependent with its exact argument list
                self.next()
                want = list(self.ctx.dependents[name])
                for i, w in enumerate(want):
                    k, v, p = self.next()
                    if k != "name" or v != w:
                        raise ParseError(
                            f"{name!r} must be applied to {want}", p)
                    if i < len(want) - 1:
                        self.expect(",")
                self.expect(")")
                return self.ctx.jet(name)
        try:
            return self.ctx.var(name)
        except KeyError:
            if name in ("I", "pi"):  # built-in constants
                return sym(name)
            raise UnknownNameError(f"unknown symbol {name!r}", pos) from None


def parse(text: str, ctx: Context) -> Expr:
    """Parse grammar text into a canonical expression."""
    return _Parser(text, ctx).parse()
