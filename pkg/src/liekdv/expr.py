"""Immutable symbolic expression trees over exact rationals.

Node kinds: rational constant, symbol, jet variable, sum, product, integer
power, function application, formal antiderivative.  Every public constructor
returns a fully canonical tree:

* sums and products are flattened and sorted by the global term order,
* like terms and like factors are merged, rational constants folded,
* integer powers of sums with positive exponent are expanded, so canonical
  polynomial expressions have a unique form,
* products of exp() factors merge into a single exp() of the summed argument.

Floats never enter symbolic expressions; numeric values appear only through
`numeric_eval`.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from typing import Iterator, Union


class ExprError(Exception):
    pass


class DomainError(ExprError):
    pass


class UnsupportedFunctionError(ExprError):
    pass


class NonDifferentiableError(ExprError):
    pass


RatLike = Union[int, Fraction, "Expr"]

# Display order for single-letter jet suffixes; anything else falls back to
# the declaration order of the dependent's arguments.
PREFERRED_VARS = ("x", "y", "z", "t")

KNOWN_FUNCTIONS = (
    "tanh", "cosh", "sinh", "sech", "exp", "ln", "sin", "cos",
    "arctanh", "abs", "Si", "sqrt", "WeierstrassP", "WeierstrassPPrime",
)

_INTERN_LEAVES = True


def set_interning(enabled: bool) -> None:
    """Toggle the leaf interning cache (semantics are identical either way)."""
    global _INTERN_LEAVES
    _INTERN_LEAVES = enabled


class Expr:
    __slots__ = ("_hash", "_keycache")

    def __hash__(self) -> int:
        return self._hash

    # -- arithmetic sugar ------------------------------------------------
    def __add__(self, other: RatLike) -> "Expr":
        return add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other: RatLike) -> "Expr":
        return add(self, mul(MINUS_ONE, _coerce(other)))

    def __rsub__(self, other: RatLike) -> "Expr":
        return add(_coerce(other), mul(MINUS_ONE, self))

    def __mul__(self, other: RatLike) -> "Expr":
        return mul(self, _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other: RatLike) -> "Expr":
        return mul(self, pow_(_coerce(other), -1))

    def __rtruediv__(self, other: RatLike) -> "Expr":
        return mul(_coerce(other), pow_(self, -1))

    def __pow__(self, n: int) -> "Expr":
        return pow_(self, n)

    def __neg__(self) -> "Expr":
        return mul(MINUS_ONE, self)

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {to_text(self)}>"

    def sort_key(self):
        k = self._keycache
        if k is None:
            k = self._make_key()
            object.__setattr__(self, "_keycache", k)
        return k

    def _make_key(self):  # pragma: no cover - overridden
        raise NotImplementedError

    @property
    def is_zero(self) -> bool:
        return isinstance(self, Rat) and self.value == 0

    @property
    def is_one(self) -> bool:
        return isinstance(self, Rat) and self.value == 1


def _coerce(v: RatLike) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, (int, Fraction)):
        return rat(v)
    raise TypeError(f"cannot coerce {v!r} into an expression")


class Rat(Expr):
    __slots__ = ("value",)

    def __init__(self, value: Fraction):
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "_hash", hash(("R", value)))
        object.__setattr__(self, "_keycache", None)

    def __setattr__(self, *a):
        raise AttributeError("expressions are immutable")

    def __eq__(self, other):
        return self is other or (
            isinstance(other, Rat) and self.value == other.value)

    __hash__ = Expr.__hash__

    def _make_key(self):
        return (0, self.value)


class Sym(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "_hash", hash(("S", name)))
        object.__setattr__(self, "_keycache", None)

    __setattr__ = Rat.__setattr__

    def __eq__(self, other):
        return self is other or (
            isinstance(other, Sym) and self.name == other.name)

    __hash__ = Expr.__hash__

    def _make_key(self):
        return (1, self.name)


class Jet(Expr):
    """A dependent variable with a derivative multi-index over its arguments.

    `args` is the declared argument tuple of the dependent variable and
    `counts` the aligned derivative counts; order 0 is the bare variable.
    """

    __slots__ = ("dep", "args", "counts")

    def __init__(self, dep: str, args: tuple, counts: tuple):
        if len(args) != len(counts):
            raise ValueError("multi-index does not match argument list")
        if any(c < 0 for c in counts):
            raise ValueError("negative derivative count")
        object.__setattr__(self, "dep", dep)
        object.__setattr__(self, "args", args)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "_hash", hash(("J", dep, args, counts)))
        object.__setattr__(self, "_keycache", None)

    __setattr__ = Rat.__setattr__

    def __eq__(self, other):
        return self is other or (
            isinstance(other, Jet)
            and self.dep == other.dep
            and self.args == other.args
            and self.counts == other.counts)

    __hash__ = Expr.__hash__

    def _make_key(self):
        return (2, self.dep, self.args, self.counts)

    @property
    def order(self) -> int:
        return sum(self.counts)

    def count(self, var: str) -> int:
        try:
            return self.counts[self.args.index(var)]
        except ValueError:
            return 0

    def bump(self, var: str, by: int = 1) -> "Jet":
        i = self.args.index(var)
        c = list(self.counts)
        c[i] += by
        if c[i] < 0:
            raise ValueError("negative derivative count")
        return jet(self.dep, self.args, tuple(c))

    def base(self) -> "Jet":
        return jet(self.dep, self.args, (0,) * len(self.args))

    def dominates(self, other: "Jet") -> bool:
        """Componentwise >= comparison against `other` (same dep and args)."""
        return (self.dep == other.dep and self.args == other.args
                and all(a >= b for a, b in zip(self.counts, other.counts)))


class Fun(Expr):
    __slots__ = ("name", "fargs")

    def __init__(self, name: str, fargs: tuple):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "fargs", fargs)
        object.__setattr__(self, "_hash", hash(("F", name, fargs)))
        object.__setattr__(self, "_keycache", None)

    __setattr__ = Rat.__setattr__

    def __eq__(self, other):
        return self is other or (
            isinstance(other, Fun)
            and self._hash == other._hash
            and self.name == other.name
            and self.fargs == other.fargs)

    __hash__ = Expr.__hash__

    def _make_key(self):
        return (3, self.name, tuple(a.sort_key() for a in self.fargs))


class IntNode(Expr):
    """Formal antiderivative d_var^{-1} applied to `body`."""

    __slots__ = ("body", "var")

    def __init__(self, body: Expr, var: str):
        object.__setattr__(self, "body", body)
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "_hash", hash(("I", body, var)))
        object.__setattr__(self, "_keycache", None)

    __setattr__ = Rat.__setattr__

    def __eq__(self, other):
        return self is other or (
            isinstance(other, IntNode)
            and self._hash == other._hash
            and self.var == other.var
            and self.body == other.body)

    __hash__ = Expr.__hash__

    def _make_key(self):
        return (4, self.var, self.body.sort_key())


class Pow(Expr):
    __slots__ = ("pbase", "exp")

    def __init__(self, pbase: Expr, exp: int):
        object.__setattr__(self, "pbase", pbase)
        object.__setattr__(self, "exp", exp)
        object.__setattr__(self, "_hash", hash(("P", pbase, exp)))
        object.__setattr__(self, "_keycache", None)

    __setattr__ = Rat.__setattr__

    def __eq__(self, other):
        return self is other or (
            isinstance(other, Pow)
            and self._hash == other._hash
            and self.exp == other.exp
            and self.pbase == other.pbase)

    __hash__ = Expr.__hash__

    def _make_key(self):
        return (5, self.pbase.sort_key(), self.exp)


class Mul(Expr):
    __slots__ = ("children",)

    def __init__(self, children: tuple):
        object.__setattr__(self, "children", children)
        object.__setattr__(self, "_hash", hash(("M", children)))
        object.__setattr__(self, "_keycache", None)

    __setattr__ = Rat.__setattr__

    def __eq__(self, other):
        return self is other or (
            isinstance(other, Mul)
            and self._hash == other._hash
            and self.children == other.children)

    __hash__ = Expr.__hash__

    def _make_key(self):
        return (6, tuple(c.sort_key() for c in self.children))


class Add(Expr):
    __slots__ = ("children",)

    def __init__(self, children: tuple):
        object.__setattr__(self, "children", children)
        object.__setattr__(self, "_hash", hash(("A", children)))
        object.__setattr__(self, "_keycache", None)

    __setattr__ = Rat.__setattr__

    def __eq__(self, other):
        return self is other or (
            isinstance(other, Add)
            and self._hash == other._hash
            and self.children == other.children)

    __hash__ = Expr.__hash__

    def _make_key(self):
        return (7, tuple(c.sort_key() for c in self.children))


# ---------------------------------------------------------------------------
# interned leaves and canonical constructors
# ---------------------------------------------------------------------------

_RAT_CACHE: dict = {}
_SYM_CACHE: dict = {}
_JET_CACHE: dict = {}


def rat(p, q: int = 1) -> Rat:
    v = Fraction(p, q) if q != 1 else (p if isinstance(p, Fraction) else Fraction(p))
    if _INTERN_LEAVES:
        e = _RAT_CACHE.get(v)
        if e is None:
            e = Rat(v)
            _RAT_CACHE[v] = e
        return e
    return Rat(v)


def sym(name: str) -> Sym:
    if _INTERN_LEAVES:
        e = _SYM_CACHE.get(name)
        if e is None:
            e = Sym(name)
            _SYM_CACHE[name] = e
        return e
    return Sym(name)


def jet(dep: str, args, counts) -> Jet:
    args = tuple(args)
    counts = tuple(counts)
    if _INTERN_LEAVES:
        k = (dep, args, counts)
        e = _JET_CACHE.get(k)
        if e is None:
            e = Jet(dep, args, counts)
            _JET_CACHE[k] = e
        return e
    return Jet(dep, args, counts)


ZERO = rat(0)
ONE = rat(1)
MINUS_ONE = rat(-1)

# Exact zero-argument folds, safe for canonicalization (value preserving).
_EXACT_AT_ZERO = {
    "tanh": ZERO, "sinh": ZERO, "sin": ZERO, "arctanh": ZERO, "Si": ZERO,
    "cosh": ONE, "sech": ONE, "cos": ONE, "exp": ONE, "sqrt": ZERO,
}


def fun(name: str, *fargs: RatLike) -> Expr:
    fargs = tuple(_coerce(a) for a in fargs)
    if len(fargs) == 1 and isinstance(fargs[0], Rat):
        v = fargs[0].value
        if v == 0 and name in _EXACT_AT_ZERO:
            return _EXACT_AT_ZERO[name]
        if name == "abs":
            return rat(abs(v))
        if name == "ln" and v == 1:
            return ZERO
        if name == "sqrt":
            if v == 1:
                return ONE
            if v >= 0:
                num, den = v.numerator, v.denominator
                rn, rd = _isqrt_exact(num), _isqrt_exact(den)
                if rn is not None and rd is not None:
                    return rat(Fraction(rn, rd))
    return Fun(name, fargs)


def _isqrt_exact(n: int):
    if n < 0:
        return None
    r = int(n ** 0.5)
    for c in (r - 1, r, r + 1):
        if c >= 0 and c * c == n:
            return c
    return None


def integral(body: RatLike, var: str) -> Expr:
    """Formal antiderivative with respect to `var`, dropping constants.

    Distributes over sums, pulls rational factors out, and collapses a jet
    carrying at least one `var` derivative (Int[q_xy, x] -> q_y).
    """
    body = _coerce(body)
    if body.is_zero:
        return ZERO
    if isinstance(body, Add):
        return add(*[integral(t, var) for t in body.children])
    if isinstance(body, Mul) and isinstance(body.children[0], Rat):
        rest = body.children[1:]
        inner = rest[0] if len(rest) == 1 else Mul(rest)
        return mul(body.children[0], integral(inner, var))
    if isinstance(body, Jet) and body.count(var) >= 1:
        return body.bump(var, -1)
    return IntNode(body, var)


def _term_decompose(e: Expr):
    """Canonical term -> (rational coefficient, factor tuple)."""
    if isinstance(e, Rat):
        return e.value, ()
    if isinstance(e, Mul):
        ch = e.children
        if isinstance(ch[0], Rat):
            return ch[0].value, ch[1:]
        return Fraction(1), ch
    return Fraction(1), (e,)


def _term_build(coeff: Fraction, factors: tuple) -> Expr:
    if coeff == 0:
        return ZERO
    if not factors:
        return rat(coeff)
    if coeff == 1 and len(factors) == 1:
        return factors[0]
    if coeff == 1:
        return Mul(factors)
    return Mul((rat(coeff),) + factors)


def _factor_split(f: Expr):
    if isinstance(f, Pow):
        return f.pbase, f.exp
    return f, 1


def _merge_factor_maps(dst: dict, factors, mult: int = 1):
    for f in factors:
        b, n = _factor_split(f)
        dst[b] = dst.get(b, 0) + n * mult


def _factors_from_map(pmap: dict):
    """Rebuild a sorted factor tuple from base->exponent, folding rationals
    and merging exp() factors.  Returns (extra rational coeff, factors)."""
    coeff = Fraction(1)
    exp_arg_terms = []
    out = []
    for b, n in pmap.items():
        if n == 0:
            continue
        if isinstance(b, Rat):
            coeff *= b.value ** n
            continue
        if isinstance(b, Fun) and b.name == "exp":
            exp_arg_terms.append(mul(rat(n), b.fargs[0]))
            continue
        out.append(b if n == 1 else Pow(b, n))
    if exp_arg_terms:
        ea = add(*exp_arg_terms)
        if not ea.is_zero:
            out.append(Fun("exp", (ea,)))
    out.sort(key=Expr.sort_key)
    return coeff, tuple(out)


def add(*args: RatLike) -> Expr:
    acc: dict = {}
    const = Fraction(0)
    stack = [_coerce(a) for a in args]
    for a in stack:
        terms = a.children if isinstance(a, Add) else (a,)
        for t in terms:
            c, f = _term_decompose(t)
            if not f:
                const += c
            else:
                acc[f] = acc.get(f, Fraction(0)) + c
    out = []
    for f, c in acc.items():
        if c != 0:
            out.append((f, c))
    out.sort(key=lambda fc: tuple(x.sort_key() for x in fc[0]))
    terms = [_term_build(c, f) for f, c in out]
    if const != 0:
        terms.insert(0, rat(const))
    if not terms:
        return ZERO
    if len(terms) == 1:
        return terms[0]
    return Add(tuple(terms))


def _collect_mul_piece(e: Expr, pmap: dict, mult: int = 1):
    """Accumulate base->exponent for one multiplicand; returns rational part."""
    if isinstance(e, Rat):
        return e.value ** mult if mult != 1 else e.value
    if isinstance(e, Mul):
        c = Fraction(1)
        for ch in e.children:
            c *= _collect_mul_piece(ch, pmap, mult)
        return c
    if isinstance(e, Pow):
        return _collect_mul_piece(e.pbase, pmap, mult * e.exp)
    pmap[e] = pmap.get(e, 0) + mult
    return Fraction(1)


def mul(*args: RatLike) -> Expr:
    coeff = Fraction(1)
    pmap: dict = {}
    for a in args:
        coeff *= _collect_mul_piece(_coerce(a), pmap)
        if coeff == 0:
            return ZERO
    extra, factors = _factors_from_map(pmap)
    coeff *= extra
    if coeff == 0:
        return ZERO
    sums = [(b, n) for b, n in pmap.items() if isinstance(b, Add) and n > 0]
    if not sums:
        return _term_build(coeff, factors)
    # polynomial expansion of positive powers of sums
    base_factors = tuple(f for f in factors
                         if not (isinstance(_factor_split(f)[0], Add)
                                 and _factor_split(f)[1] > 0))
    terms = [(coeff, base_factors)]
    for s, n in sums:
        sterms = [_term_decompose(t) for t in
                  (s.children if isinstance(s, Add) else (s,))]
        for _ in range(n):
            terms = _terms_product(terms, sterms)
    return add(*[_term_build(c, f) for c, f in terms])


def _terms_product(t1, t2):
    acc: dict = {}
    for c1, f1 in t1:
        m1: dict = {}
        _merge_factor_maps(m1, f1)
        for c2, f2 in t2:
            m = dict(m1)
            _merge_factor_maps(m, f2)
            extra, factors = _factors_from_map(m)
            c = c1 * c2 * extra
            if c == 0:
                continue
            acc[factors] = acc.get(factors, Fraction(0)) + c
    return [(c, f) for f, c in acc.items() if c != 0]


def pow_(b: RatLike, n: int) -> Expr:
    b = _coerce(b)
    if not isinstance(n, int):
        raise TypeError("exponents must be integers")
    if n == 0:
        return ONE
    if n == 1:
        return b
    if isinstance(b, Rat):
        if b.value == 0 and n < 0:
            raise DomainError("zero raised to a negative power")
        return rat(b.value ** n)
    if isinstance(b, Mul):
        return mul(*[pow_(c, n) for c in b.children])
    if isinstance(b, Pow):
        return pow_(b.pbase, b.exp * n)
    if isinstance(b, Fun) and b.name == "exp":
        return fun("exp", mul(rat(n), b.fargs[0]))
    if isinstance(b, Add) and n > 0:
        return mul(*([b] * n))
    return Pow(b, n)


def canonicalize(e: Expr) -> Expr:
    """Rebuild any expression tree through the canonical constructors."""
    if isinstance(e, Rat):
        return rat(e.value)
    if isinstance(e, Sym):
        return sym(e.name)
    if isinstance(e, Jet):
        return jet(e.dep, e.args, e.counts)
    if isinstance(e, Fun):
        return fun(e.name, *[canonicalize(a) for a in e.fargs])
    if isinstance(e, IntNode):
        return integral(canonicalize(e.body), e.var)
    if isinstance(e, Pow):
        return pow_(canonicalize(e.pbase), e.exp)
    if isinstance(e, Mul):
        return mul(*[canonicalize(c) for c in e.children])
    if isinstance(e, Add):
        return add(*[canonicalize(c) for c in e.children])
    raise TypeError(f"not an expression: {e!r}")


# ---------------------------------------------------------------------------
# structure helpers
# ---------------------------------------------------------------------------

def walk(e: Expr) -> Iterator[Expr]:
    yield e
    if isinstance(e, Fun):
        for a in e.fargs:
            yield from walk(a)
    elif isinstance(e, IntNode):
        yield from walk(e.body)
    elif isinstance(e, Pow):
        yield from walk(e.pbase)
    elif isinstance(e, (Mul, Add)):
        for c in e.children:
            yield from walk(c)


def atoms(e: Expr, cls) -> set:
    return {a for a in walk(e) if isinstance(a, cls)}


def jets_of(e: Expr, dep: str | None = None) -> set:
    return {a for a in atoms(e, Jet) if dep is None or a.dep == dep}


def free_symbols(e: Expr) -> set:
    return {a.name for a in atoms(e, Sym)}


def contains_fun(e: Expr, names) -> bool:
    names = set(names) if not isinstance(names, str) else {names}
    return any(isinstance(a, Fun) and a.name in names for a in walk(e))


def as_terms(e: Expr):
    """Canonical expression -> list of (coefficient, factor tuple)."""
    if isinstance(e, Add):
        return [_term_decompose(t) for t in e.children]
    if e.is_zero:
        return []
    return [_term_decompose(e)]


def from_terms(terms) -> Expr:
    return add(*[_term_build(c, tuple(f)) for c, f in terms])


def collect_by(e: Expr, pred):
    """Split each term's factors by `pred`; returns {key monomial: coeff Expr}.

    The key is the canonical product of factors whose base satisfies `pred`.
    """
    groups: dict = {}
    for c, factors in as_terms(e):
        keyf, restf = [], []
        for f in factors:
            b, _ = _factor_split(f)
            (keyf if pred(b) else restf).append(f)
        key = _term_build(Fraction(1), tuple(keyf))
        groups.setdefault(key, []).append(_term_build(c, tuple(restf)))
    return {k: add(*v) for k, v in groups.items()}


def replace_atoms(e: Expr, mapping: dict) -> Expr:
    """Simultaneously substitute atomic subexpressions (symbols, jets, ...).

    Keys are compared structurally at every tree node; the result is
    canonical.  This is the low-level engine behind the public substitution
    operations, which add the chain rule for dependent variables.
    """
    if not mapping:
        return e

    def go(x: Expr) -> Expr:
        hit = mapping.get(x)
        if hit is not None:
            return hit
        if isinstance(x, (Rat, Sym, Jet)):
            return x
        if isinstance(x, Fun):
            return fun(x.name, *[go(a) for a in x.fargs])
        if isinstance(x, IntNode):
            return integral(go(x.body), x.var)
        if isinstance(x, Pow):
            return pow_(go(x.pbase), x.exp)
        if isinstance(x, Mul):
            return mul(*[go(c) for c in x.children])
        if isinstance(x, Add):
            return add(*[go(c) for c in x.children])
        raise TypeError(f"not an expression: {x!r}")

    return go(e)


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

def _jet_text(j: Jet) -> str:
    if j.order == 0:
        return j.dep
    letters = []
    ordered = sorted(
        range(len(j.args)),
        key=lambda i: (PREFERRED_VARS.index(j.args[i])
                       if j.args[i] in PREFERRED_VARS else len(PREFERRED_VARS),
                       j.args[i]))
    for i in ordered:
        letters.extend([j.args[i]] * j.counts[i])
    if all(len(a) == 1 for a in j.args):
        return j.dep + "_" + "".join(letters)
    return "D[" + j.dep + "; " + ", ".join(letters) + "]"


def _frac_text(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _base_text(e: Expr) -> str:
    if isinstance(e, Rat):
        if e.value < 0 or e.value.denominator != 1:
            return "(" + _frac_text(e.value) + ")"
        return _frac_text(e.value)
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Jet):
        return _jet_text(e)
    if isinstance(e, Fun):
        return e.name + "(" + ", ".join(to_text(a) for a in e.fargs) + ")"
    if isinstance(e, IntNode):
        return "Int[" + to_text(e.body) + ", " + e.var + "]"
    return "(" + to_text(e) + ")"


def _factor_text(e: Expr) -> str:
    if isinstance(e, Pow):
        return _base_text(e.pbase) + "^" + str(e.exp)
    return _base_text(e)


def _term_text(coeff: Fraction, factors: tuple) -> str:
    pieces = [_factor_text(f) for f in factors]
    if coeff != 1 or not pieces:
        pieces.insert(0, _frac_text(coeff))
    return "*".join(pieces)


def to_text(e: Expr) -> str:
    terms = as_terms(e)
    if not terms:
        return "0"
    out = []
    for i, (c, f) in enumerate(terms):
        neg = c < 0
        body = _term_text(-c if neg else c, f)
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# ---------------------------------------------------------------------------
# numeric evaluation
# ---------------------------------------------------------------------------

def _si_quad(z: complex) -> complex:
    """Si(z) by adaptive Simpson quadrature of sin(s)/s along [0, z]."""
    if z == 0:
        return 0j

    def g(tau: float) -> complex:
        w = z * tau
        if abs(w) < 1e-8:
            return z * (1 - w * w / 6)
        return z * cmath.sin(w) / w

    def simpson(a, fa, b, fb, fm, whole, depth):
        m = (a + b) / 2
        lm, rm = (a + m) / 2, (m + b) / 2
        flm, frm = g(lm), g(rm)
        left = (m - a) / 6 * (fa + 4 * flm + fm)
        right = (b - m) / 6 * (fm + 4 * frm + fb)
        if depth > 40 or abs(left + right - whole) < 1e-13:
            return left + right + (left + right - whole) / 15
        return (simpson(a, fa, m, fm, flm, left, depth + 1)
                + simpson(m, fm, b, fb, frm, right, depth + 1))

    fa, fb = g(0.0), g(1.0)
    fm = g(0.5)
    whole = (fa + 4 * fm + fb) / 6
    return simpson(0.0, fa, 1.0, fb, fm, whole, 0)


_NUMERIC_FUNCS = {
    "tanh": cmath.tanh,
    "cosh": cmath.cosh,
    "sinh": cmath.sinh,
    "sech": lambda z: 1.0 / cmath.cosh(z),
    "exp": cmath.exp,
    "ln": cmath.log,
    "sin": cmath.sin,
    "cos": cmath.cos,
    "arctanh": cmath.atanh,
    "abs": abs,
    "sqrt": cmath.sqrt,
    "Si": _si_quad,
}

_NUMERIC_CONSTANTS = {"pi": complex(3.141592653589793), "I": 1j}


def _make_evaluator(assignment: dict):
    cache: dict = {}

    def ev(x: Expr) -> complex:
        got = cache.get(id(x))
        if got is not None:
            return got
        if isinstance(x, Rat):
            v = complex(x.value)
        elif isinstance(x, (Sym, Jet)):
            if x in assignment:
                v = complex(assignment[x])
            elif isinstance(x, Sym) and x.name in _NUMERIC_CONSTANTS:
                v = _NUMERIC_CONSTANTS[x.name]
            else:
                raise DomainError(f"unassigned atom {to_text(x)}")
        elif isinstance(x, Fun):
            fn = _NUMERIC_FUNCS.get(x.name)
            if fn is None or len(x.fargs) != 1:
                raise UnsupportedFunctionError(
                    f"cannot evaluate {x.name} numerically")
            try:
                v = fn(ev(x.fargs[0]))
            except (ValueError, OverflowError) as exc:
                raise DomainError(f"{x.name}: {exc}") from exc
        elif isinstance(x, IntNode):
            raise UnsupportedFunctionError(
                "formal antiderivative has no numeric value")
        elif isinstance(x, Pow):
            bv = ev(x.pbase)
            if bv == 0 and x.exp < 0:
                raise DomainError("division by zero")
            v = bv ** x.exp
        elif isinstance(x, Mul):
            v = complex(1)
            for c in x.children:
                v *= ev(c)
        elif isinstance(x, Add):
            v = complex(0)
            for c in x.children:
                v += ev(c)
        else:
            raise TypeError(f"not an expression: {x!r}")
        cache[id(x)] = v
        return v

    return ev


def numeric_eval(e: Expr, assignment: dict) -> complex:
    """Evaluate to an IEEE double complex under `assignment` (Sym/Jet keys)."""
    return _make_evaluator(assignment)(e)


def numeric_eval_with_scale(e: Expr, assignment: dict):
    """(value, largest |term| magnitude) in one pass with shared caching."""
    ev = _make_evaluator(assignment)
    if isinstance(e, Add):
        vals = [ev(t) for t in e.children]
        return sum(vals), max(abs(v) for v in vals)
    v = ev(e)
    return v, abs(v)


def rational_eval(e: Expr, assignment: dict) -> Fraction:
    """Exact rational evaluation; raises on transcendental content."""
    if isinstance(e, Rat):
        return e.value
    if isinstance(e, (Sym, Jet)):
        if e in assignment:
            return Fraction(assignment[e])
        raise DomainError(f"unassigned atom {to_text(e)}")
    if isinstance(e, Pow):
        b = rational_eval(e.pbase, assignment)
        if b == 0 and e.exp < 0:
            raise DomainError("division by zero")
        return b ** e.exp
    if isinstance(e, Mul):
        v = Fraction(1)
        for c in e.children:
            v *= rational_eval(c, assignment)
        return v
    if isinstance(e, Add):
        v = Fraction(0)
        for c in e.children:
            v += rational_eval(c, assignment)
        return v
    raise UnsupportedFunctionError(
        f"no exact rational value for {type(e).__name__}")


# ---------------------------------------------------------------------------
# randomized equality probing
# ---------------------------------------------------------------------------

class ProbeReport:
    def __init__(self, verdict: str, points):
        self.verdict = verdict  # "equal" | "probably-equal" | "different"
        self.points = points    # [(assignment-free transcript rows)]

    def __bool__(self) -> bool:
        return self.verdict in ("equal", "probably-equal")

    def __repr__(self):
        return f"<ProbeReport {self.verdict} ({len(self.points)} probes)>"


def probable_equal(e1: Expr, e2: Expr, rng, npoints: int = 25,
                   tol: float = 1e-9) -> ProbeReport:
    """Structural equality first; transcendental pairs fall back to numeric
    probing at random complex points, reported as probable equality."""
    a, b = canonicalize(e1), canonicalize(e2)
    if a == b:
        return ProbeReport("equal", [])
    diff = add(a, mul(MINUS_ONE, b))
    keys = sorted(atoms(diff, Sym) | atoms(diff, Jet), key=Expr.sort_key)
    rows = []
    done = 0
    attempts = 0
    while done < npoints and attempts < npoints * 20:
        attempts += 1
        asg = {k: complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for k in keys}
        try:
            v1 = numeric_eval(a, asg)
            v2 = numeric_eval(b, asg)
        except (DomainError, UnsupportedFunctionError, ZeroDivisionError, OverflowError):
            continue
        scale = max(abs(v1), abs(v2), 1.0)
        rel = abs(v1 - v2) / scale
        rows.append((sorted((to_text(k), str(v)) for k, v in asg.items()), rel))
        if rel > tol:
            return ProbeReport("different", rows)
        done += 1
    if done == 0:
        return ProbeReport("different", rows)
    return ProbeReport("probably-equal", rows)
