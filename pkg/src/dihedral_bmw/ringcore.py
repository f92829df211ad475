"""Exact rational functions over a small set of (possibly Laurent) variables.

A Scalar is num/den where num is a Laurent polynomial and den an ordinary
polynomial that no Laurent variable divides.  Both have integer coefficients.
Canonical form: gcd(num, den) = 1, the combined integer content is 1 and the
leading coefficient of den (graded lex) is positive.  Equality is then
structural equality.

Multivariate gcd is delegated to sympy's sparse polynomial rings; everything
else is plain dict arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Iterable, Mapping

from sympy.polys.domains import ZZ
from sympy.polys.rings import PolyRing

Poly = dict  # exponent tuple -> int


class PoleError(ZeroDivisionError):
    """Denominator vanishes at an evaluation point."""


class RingContext:
    """Variables, which of them are invertible, and the bar involution.

    conjugation[i] is 'neg' (x -> -x), 'inv' (x -> 1/x) or 'id'.
    """

    def __init__(self, case_tag: str, variables: Iterable[str],
                 conjugation: Iterable[str], laurent: Iterable[bool]):
        self.case_tag = case_tag
        self.variables = tuple(variables)
        self.conjugation = tuple(conjugation)
        self.laurent = tuple(laurent)
        nv = len(self.variables)
        if len(set(self.variables)) != nv:
            raise ValueError("duplicate variable names")
        if len(self.conjugation) != nv or len(self.laurent) != nv:
            raise ValueError("per-variable data has the wrong length")
        for rule, inv in zip(self.conjugation, self.laurent):
            if rule not in ("neg", "inv", "id"):
                raise ValueError(f"unknown conjugation rule {rule!r}")
            if rule == "inv" and not inv:
                raise ValueError("only Laurent variables can be inverted")
        self.nvars = nv
        self.zero_exp = (0,) * nv
        self._ring = None
        self._one = None
        self._zero = None

    def __repr__(self) -> str:
        return f"RingContext({self.case_tag}, {list(self.variables)})"

    def __reduce__(self):
        return (RingContext, (self.case_tag, self.variables, self.conjugation, self.laurent))

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, RingContext):
            return NotImplemented
        return (self.case_tag, self.variables, self.conjugation, self.laurent) == \
            (other.case_tag, other.variables, other.conjugation, other.laurent)

    def __hash__(self) -> int:
        return hash((self.case_tag, self.variables))

    @property
    def poly_ring(self) -> PolyRing:
        if self._ring is None:
            self._ring = PolyRing(self.variables, ZZ)
        return self._ring

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise KeyError(f"{name!r} is not a variable of {self!r}") from None

    # convenience constructors
    def one(self) -> "Scalar":
        if self._one is None:
            self._one = Scalar._raw(self, {self.zero_exp: 1}, {self.zero_exp: 1})
        return self._one

    def zero(self) -> "Scalar":
        if self._zero is None:
            self._zero = Scalar._raw(self, {}, {self.zero_exp: 1})
        return self._zero

    def const(self, value) -> "Scalar":
        return scalar_from_monomial(self, value, self.zero_exp)

    def var(self, name: str, power: int = 1) -> "Scalar":
        e = [0] * self.nvars
        e[self.index(name)] = power
        return scalar_from_monomial(self, 1, e)

    def __call__(self, value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, str):
            return parse_scalar(self, value)
        return self.const(value)


ODD = RingContext("Odd", ("m", "l"), ("neg", "inv"), (False, True))
EVEN = RingContext("Even", ("v0", "l0", "v1", "l1"), ("inv",) * 4, (True,) * 4)


# ---------------------------------------------------------------- polynomials

def _grlex_key(e: tuple) -> tuple:
    return (sum(e), e)


def _padd(a: Poly, b: Poly, sign: int = 1) -> Poly:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _pmul(a: Poly, b: Poly) -> Poly:
    if len(a) == 1 and len(b) == 1:
        (e1, c1), = a.items()
        (e2, c2), = b.items()
        return {tuple(x + y for x, y in zip(e1, e2)): c1 * c2}
    out: Poly = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                del out[e]
    return out


def _pscale(a: Poly, c: int) -> Poly:
    if c == 1:
        return a
    return {e: v * c for e, v in a.items()}


def _pshift(a: Poly, s: tuple) -> Poly:
    return {tuple(x + y for x, y in zip(e, s)): c for e, c in a.items()}


def _content(a: Poly) -> int:
    g = 0
    for c in a.values():
        g = gcd(g, c)
        if g == 1:
            break
    return g


def _min_exps(a: Poly, nv: int) -> list:
    mins = None
    for e in a:
        if mins is None:
            mins = list(e)
        else:
            for i in range(nv):
                if e[i] < mins[i]:
                    mins[i] = e[i]
    return mins if mins is not None else [0] * nv


def _is_unit_const(d: Poly, zero_exp: tuple) -> bool:
    return len(d) == 1 and d.get(zero_exp) == 1


def _to_sympy(ctx: RingContext, a: Poly):
    return ctx.poly_ring.from_dict({e: ZZ(c) for e, c in a.items()})


def _from_sympy(p) -> Poly:
    return {tuple(e): int(c) for e, c in p.items()}


def _make(ctx: RingContext, num: Poly, den: Poly) -> "Scalar":
    """Canonicalize num/den.  den may carry negative Laurent exponents."""
    z = ctx.zero_exp
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return ctx.zero()
    nv = ctx.nvars
    # pull monomial factors in Laurent variables out of the denominator
    dmin = _min_exps(den, nv)
    shift = [0] * nv
    for i in range(nv):
        if dmin[i] != 0:
            if dmin[i] < 0 and not ctx.laurent[i]:
                raise ValueError("negative exponent on a non-Laurent variable")
            if ctx.laurent[i]:
                shift[i] = -dmin[i]
    if any(shift):
        s = tuple(shift)
        den = _pshift(den, s)
        num = _pshift(num, s)
    if len(den) > 1 or z not in den:
        # nonconstant denominator: remove the polynomial gcd
        nmin = _min_exps(num, nv)
        nshift = tuple(-x if (ctx.laurent[i] and x < 0) else 0 for i, x in enumerate(nmin))
        pn = _to_sympy(ctx, _pshift(num, nshift) if any(nshift) else num)
        pd = _to_sympy(ctx, den)
        g = pn.gcd(pd)
        if not (g.is_ground and abs(g.LC) == 1):
            pn = pn.exquo(g)
            pd = pd.exquo(g)
            num = _from_sympy(pn)
            den = _from_sympy(pd)
            if any(nshift):
                num = _pshift(num, tuple(-x for x in nshift))
    c = gcd(_content(num), _content(den))
    lead = den[max(den, key=_grlex_key)]
    if lead < 0:
        c = -c
    if c != 1:
        num = {e: v // c for e, v in num.items()}
        den = {e: v // c for e, v in den.items()}
    return Scalar._raw(ctx, num, den)


# --------------------------------------------------------------------- Scalar

class Scalar:
    """Immutable canonical rational function in a RingContext."""

    __slots__ = ("ctx", "num", "den", "_hash")

    @classmethod
    def _raw(cls, ctx: RingContext, num: Poly, den: Poly) -> "Scalar":
        s = object.__new__(cls)
        s.ctx = ctx
        s.num = num
        s.den = den
        s._hash = None
        return s

    def __init__(self, *a, **k):
        raise TypeError("build Scalars through a RingContext or scalar_from_monomial")

    def __reduce__(self):
        return (_rebuild, (self.ctx, self.num, self.den))

    # predicates
    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_constant(self) -> bool:
        z = self.ctx.zero_exp
        return len(self.den) == 1 and z in self.den and (not self.num or (len(self.num) == 1 and z in self.num))

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        z = self.ctx.zero_exp
        return Fraction(self.num.get(z, 0), self.den[z])

    def is_laurent_polynomial(self) -> bool:
        """True when the denominator is an integer constant."""
        return len(self.den) == 1 and self.ctx.zero_exp in self.den

    # coercion
    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ValueError("Scalars from different contexts")
            return other
        if isinstance(other, (int, Rational)):
            return self.ctx.const(other)
        return NotImplemented

    # arithmetic
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.num:
            return self
        if not self.num:
            return o
        z = self.ctx.zero_exp
        if self.den == o.den:
            if _is_unit_const(self.den, z):
                n = _padd(self.num, o.num)
                return Scalar._raw(self.ctx, n, self.den) if n else self.ctx.zero()
            return _make(self.ctx, _padd(self.num, o.num), self.den)
        return _make(self.ctx, _padd(_pmul(self.num, o.den), _pmul(o.num, self.den)),
                     _pmul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        if not self.num:
            return self
        return Scalar._raw(self.ctx, {e: -c for e, c in self.num.items()}, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.num or not o.num:
            return self.ctx.zero()
        z = self.ctx.zero_exp
        if _is_unit_const(self.den, z) and _is_unit_const(o.den, z):
            return Scalar._raw(self.ctx, _pmul(self.num, o.num), self.den)
        return _make(self.ctx, _pmul(self.num, o.num), _pmul(self.den, o.den))

    __rmul__ = __mul__

    def invert(self) -> "Scalar":
        if not self.num:
            raise ZeroDivisionError("inverse of zero Scalar")
        return _make(self.ctx, dict(self.den), dict(self.num))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.invert()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.invert()

    def __pow__(self, k: int) -> "Scalar":
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.invert()
        k = abs(k)
        out = self.ctx.one()
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            other = self.ctx.const(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.ctx == other.ctx and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((frozenset(self.num.items()), frozenset(self.den.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Scalar({canonical_string(self)})"

    __str__ = lambda self: canonical_string(self)


def _rebuild(ctx, num, den):
    return Scalar._raw(ctx, num, den)


# ------------------------------------------------------------- public helpers

def scalar_from_monomial(ctx: RingContext, coeff, exponents) -> Scalar:
    exponents = tuple(int(e) for e in exponents)
    if len(exponents) != ctx.nvars:
        raise ValueError(f"expected {ctx.nvars} exponents, got {len(exponents)}")
    q = Fraction(coeff)
    if q == 0:
        return ctx.zero()
    for i, e in enumerate(exponents):
        if e < 0 and not ctx.laurent[i]:
            # a genuine denominator in a non-Laurent variable
            pos = tuple(0 if j != i else -e for j in range(ctx.nvars))
            rest = tuple(0 if j == i else x for j, x in enumerate(exponents))
            return scalar_from_monomial(ctx, coeff, rest) / _make(ctx, {pos: 1}, {ctx.zero_exp: 1})
    return _make(ctx, {exponents: q.numerator}, {ctx.zero_exp: q.denominator})


def add(a: Scalar, b: Scalar) -> Scalar:
    return a + b


def mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def negate(a: Scalar) -> Scalar:
    return -a


def invert(a: Scalar) -> Scalar:
    return a.invert()


def scalar_sum(terms: Iterable[Scalar], ctx: RingContext | None = None) -> Scalar:
    """Sum many Scalars, grouping by denominator to limit gcd work."""
    groups: dict = {}
    dens: dict = {}
    for t in terms:
        if ctx is None:
            ctx = t.ctx
        if not t.num:
            continue
        key = frozenset(t.den.items())
        if key in groups:
            groups[key] = _padd(groups[key], t.num)
        else:
            groups[key] = dict(t.num)
            dens[key] = t.den
    if ctx is None:
        raise ValueError("empty sum needs a context")
    out = ctx.zero()
    z = ctx.zero_exp
    for key, num in groups.items():
        if not num:
            continue
        den = dens[key]
        if _is_unit_const(den, z):
            s = Scalar._raw(ctx, num, den)
        else:
            s = _make(ctx, num, den)
        out = out + s
    return out


def conjugate(ctx: RingContext, s: Scalar) -> Scalar:
    if not s.num:
        return s
    rules = ctx.conjugation

    def conj_poly(p: Poly) -> Poly:
        out = {}
        for e, c in p.items():
            ne = list(e)
            for i, r in enumerate(rules):
                if r == "inv":
                    ne[i] = -e[i]
                elif r == "neg" and e[i] % 2:
                    c = -c
            out[tuple(ne)] = c
        return out

    return _make(ctx, conj_poly(s.num), conj_poly(s.den))


def _eval_poly(ctx: RingContext, p: Poly, vals: list) -> Fraction:
    total = Fraction(0)
    for e, c in p.items():
        t = Fraction(c)
        for v, k in zip(vals, e):
            if k:
                t *= v ** k
        total += t
    return total


def evaluate(s: Scalar, point: Mapping[str, object]) -> Fraction:
    ctx = s.ctx
    try:
        vals = [Fraction(point[v]) for v in ctx.variables]
    except KeyError as exc:
        raise KeyError(f"evaluation point misses variable {exc.args[0]!r}") from None
    for v, x in zip(ctx.variables, vals):
        if x == 0 and ctx.laurent[ctx.index(v)]:
            raise PoleError(f"Laurent variable {v} evaluated at 0")
    d = _eval_poly(ctx, s.den, vals)
    if d == 0:
        raise PoleError(f"denominator of {canonical_string(s)} vanishes at {dict(point)}")
    return _eval_poly(ctx, s.num, vals) / d


def substitute(s: Scalar, target: RingContext, mapping: Mapping[str, Scalar]) -> Scalar:
    """Ring map sending each variable to a Scalar of the target context."""
    ctx = s.ctx
    images = [target(mapping[v]) for v in ctx.variables]

    def image(p: Poly) -> Scalar:
        terms = []
        for e, c in p.items():
            t = target.const(c)
            for img, k in zip(images, e):
                if k:
                    t = t * img ** k
            terms.append(t)
        return scalar_sum(terms, target)

    return image(s.num) / image(s.den)


def permute_variables(s: Scalar, perm: Mapping[str, str]) -> Scalar:
    """Rename variables inside one context (e.g. the swap v0<->v1, l0<->l1)."""
    ctx = s.ctx
    idx = [ctx.index(perm.get(v, v)) for v in ctx.variables]

    def move(p: Poly) -> Poly:
        out = {}
        for e, c in p.items():
            ne = [0] * ctx.nvars
            for i, k in enumerate(e):
                ne[idx[i]] = k
            out[tuple(ne)] = c
        return out

    return _make(ctx, move(s.num), move(s.den))


# ------------------------------------------------------------ derived scalars

def tau_odd(ctx: RingContext = ODD) -> Scalar:
    if ctx.case_tag != "Odd":
        raise ValueError("tau_odd needs the Odd context")
    l = ctx.var("l")
    return (l - l.invert()) / ctx.var("m") + 1


def m_even(ctx: RingContext, i: int) -> Scalar:
    if ctx.case_tag != "Even":
        raise ValueError("m_even needs the Even context")
    v = ctx.var(f"v{i}")
    return v - v.invert()


def tau_even(ctx: RingContext, i: int) -> Scalar:
    l = ctx.var(f"l{i}")
    return (l - l.invert()) / m_even(ctx, i) + 1


def lambda_even(ctx: RingContext, odd_length: int) -> Scalar:
    if odd_length < 1 or odd_length % 2 == 0:
        raise ValueError("lambda_even is indexed by a positive odd length")
    i = (odd_length - 1) // 2
    base = ctx.var("v0", -1) + ctx.var("l0", -1)
    if i % 2 == 0:
        return m_even(ctx, 1) / m_even(ctx, 0) * base
    return base


# ------------------------------------------------------------------- printing

def _format_monomial(ctx: RingContext, e: tuple) -> str:
    parts = []
    for i in reversed(range(ctx.nvars)):
        k = e[i]
        if k == 1:
            parts.append(ctx.variables[i])
        elif k:
            parts.append(f"{ctx.variables[i]}^{k}")
    return "*".join(parts)


def _format_poly(ctx: RingContext, p: Poly) -> str:
    out = []
    for e in sorted(p, key=_grlex_key, reverse=True):
        c = p[e]
        mono = _format_monomial(ctx, e)
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out) if out else "0"


def canonical_string(s: Scalar) -> str:
    if s.is_constant():
        q = s.constant_value()
        return str(q)
    return f"({_format_poly(s.ctx, s.num)})/({_format_poly(s.ctx, s.den)})"


# -------------------------------------------------------------------- parsing

def parse_scalar(ctx: RingContext, text: str) -> Scalar:
    """Parse +, -, *, /, ^ expressions over integers and context variables."""
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take(expected=None):
        nonlocal pos
        t = peek()
        if t is None or (expected is not None and t != expected):
            raise ValueError(f"cannot parse scalar {text!r}")
        pos += 1
        return t

    def expr():
        if peek() in ("+", "-"):
            sign = take()
            val = term()
            if sign == "-":
                val = -val
        else:
            val = term()
        while peek() in ("+", "-"):
            op = take()
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term():
        val = power()
        while peek() in ("*", "/"):
            op = take()
            rhs = power()
            val = val * rhs if op == "*" else val / rhs
        return val

    def power():
        base = atom()
        if peek() == "^":
            take()
            sign = 1
            if peek() == "-":
                take()
                sign = -1
            k = take()
            if not k.isdigit():
                raise ValueError(f"cannot parse exponent in {text!r}")
            return base ** (sign * int(k))
        return base

    def atom():
        t = take()
        if t == "(":
            v = expr()
            take(")")
            return v
        if t == "-":
            return -power()
        if t.isdigit():
            return ctx.const(int(t))
        return ctx.var(t)

    val = expr()
    if pos != len(toks):
        raise ValueError(f"trailing input in scalar {text!r}")
    return val


def _tokenize(text: str) -> list:
    toks = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "+-*/^()":
            toks.append(ch)
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(text[i:j])
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(text[i:j])
            i = j
        else:
            raise ValueError(f"unexpected character {ch!r} in {text!r}")
    return toks


def parse_point(text: str) -> dict:
    """'m=1/2,l=3' -> {'m': Fraction(1, 2), 'l': Fraction(3)}"""
    out = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        name, _, val = part.partition("=")
        if not _:
            raise ValueError(f"bad point component {part!r}")
        out[name.strip()] = Fraction(val.strip())
    return out
