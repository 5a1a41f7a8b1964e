"""Exact arithmetic in characteristic-2 rational function fields.

A polynomial over F2 is stored as a frozenset of monomials: addition is
symmetric difference, so a polynomial is zero exactly when the set is
empty and every element is its own negative.  A monomial is a sorted
tuple of (variable, exponent) pairs with positive integer exponents; the
empty tuple is 1.

Field elements keep their denominator as a tuple of polynomial factors
that is never multiplied out.  The factors arising in practice are
binomials 1 + m for a monomial m, and products of those stay far sparser
factored than expanded.  Normalization drops factors equal to 1, cancels
shared monomial content, and runs exact-division passes of the numerator
against each factor until nothing cancels; equality is decided by
cross-multiplication, so the normal form only has to be deterministic,
not unique.
"""

from __future__ import annotations

from collections import Counter
from functools import reduce

ZERO = frozenset()
ONE = frozenset({()})


def mono(var, exp=1):
    """The monomial var**exp."""
    if exp < 0:
        raise ValueError("monomial exponents must be nonnegative")
    return ((var, exp),) if exp else ()


def mono_mul(a, b):
    exps = dict(a)
    for var, e in b:
        exps[var] = exps.get(var, 0) + e
    return tuple(sorted(exps.items()))


def mono_div(a, b):
    """a / b, or None when b does not divide a."""
    exps = dict(a)
    for var, e in b:
        r = exps.get(var, 0) - e
        if r < 0:
            return None
        if r:
            exps[var] = r
        else:
            exps.pop(var, None)
    return tuple(sorted(exps.items()))


def mono_gcd(a, b):
    eb = dict(b)
    out = []
    for var, e in a:
        if var in eb:
            out.append((var, min(e, eb[var])))
    return tuple(sorted(out))


def poly(*monomials):
    """Polynomial with the given monomials; repeats cancel in pairs."""
    c = Counter(monomials)
    return frozenset(m for m, n in c.items() if n % 2)


def poly_add(p, q):
    return p ^ q


def poly_mul(p, q):
    if not p or not q:
        return ZERO
    c = Counter()
    for a in p:
        for b in q:
            c[mono_mul(a, b)] += 1
    return frozenset(m for m, n in c.items() if n % 2)


def poly_vars(p):
    return {var for m in p for var, _ in m}


def _mono_key(m):
    return tuple((var, -e) for var, e in m)


def poly_divexact(p, d):
    """p / d when the division is exact, else None."""
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    if not p:
        return ZERO
    # lex order needs a fixed variable list to be multiplicative
    allvars = sorted(poly_vars(p) | poly_vars(d))

    def vec(m):
        e = dict(m)
        return tuple(e.get(v, 0) for v in allvars)

    lead_d = max(d, key=vec)
    quo = set()
    rem = set(p)
    while rem:
        t = mono_div(max(rem, key=vec), lead_d)
        if t is None:
            return None
        quo.add(t)
        rem ^= {mono_mul(t, m) for m in d}
    return frozenset(quo)


def poly_content(p):
    """Monomial gcd of all terms, () for the zero polynomial."""
    it = iter(p)
    try:
        g = next(it)
    except StopIteration:
        return ()
    for m in it:
        g = mono_gcd(g, m)
        if not g:
            break
    return g


def poly_shift_down(p, g):
    """Divide every term by the monomial g; g must divide the content."""
    out = set()
    for m in p:
        q = mono_div(m, g)
        if q is None:
            raise ValueError("monomial does not divide polynomial content")
        out.add(q)
    return frozenset(out)


def _poly_key(p):
    return (len(p), sorted(map(_mono_key, p)))


def _expand(factors):
    return reduce(poly_mul, factors, ONE)


class FieldElement:
    """Rational function over F2 with a factored denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=()):
        if any(not f for f in den):
            raise ZeroDivisionError("zero denominator factor")
        den = tuple(f for f in den if f != ONE)
        if not num:
            self.num, self.den = ZERO, ()
            return
        if den:
            c = poly_content(num)
            if c:
                newden = []
                for f in den:
                    g = mono_gcd(c, poly_content(f))
                    if g:
                        f = poly_shift_down(f, g)
                        num = poly_shift_down(num, g)
                        c = mono_div(c, g)
                    newden.append(f)
                den = tuple(f for f in newden if f != ONE)
        # cancel whole factors while any divides the numerator exactly
        changed = True
        while changed and den:
            changed = False
            for i, f in enumerate(den):
                q = poly_divexact(num, f)
                if q is not None:
                    num = q
                    den = den[:i] + den[i + 1 :]
                    changed = True
                    break
        self.num = num
        self.den = tuple(sorted(den, key=_poly_key))

    @staticmethod
    def var(name):
        return FieldElement(frozenset({mono(name)}))

    @staticmethod
    def from_int(n):
        return FieldElement(ONE if n % 2 else ZERO)

    @property
    def is_zero(self):
        return not self.num

    @property
    def is_one(self):
        return self.num == ONE and not self.den

    def __bool__(self):
        return bool(self.num)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num:
            return other
        if not other.num:
            return self
        ca, cb = Counter(self.den), Counter(other.den)
        lcm = ca | cb
        ea = _expand((lcm - ca).elements())
        eb = _expand((lcm - cb).elements())
        num = poly_mul(self.num, ea) ^ poly_mul(other.num, eb)
        return FieldElement(num, tuple(lcm.elements()))

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(poly_mul(self.num, other.num), self.den + other.den)

    __rmul__ = __mul__

    def inv(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return FieldElement(_expand(self.den), (self.num,))

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inv()

    def __pow__(self, n):
        if n < 0:
            return self.inv() ** (-n)
        out = FieldElement(ONE)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.num == other.num and self.den == other.den:
            return True
        left = poly_mul(self.num, _expand(other.den))
        right = poly_mul(other.num, _expand(self.den))
        return left == right

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    __hash__ = None

    def subst(self, sub):
        """Substitute variables by field elements; missing vars stay symbolic.

        Raises ZeroDivisionError when a denominator factor lands on zero.
        """
        num = poly_eval(self.num, sub)
        out_num, out_den = num.num, list(num.den)
        for f in self.den:
            v = poly_eval(f, sub)
            if not v.num:
                raise ZeroDivisionError("denominator vanishes under substitution")
            out_num = poly_mul(out_num, v.den and _expand(v.den) or ONE)
            out_den.append(v.num)
        return FieldElement(out_num, tuple(out_den))

    def variables(self):
        return poly_vars(self.num) | {v for f in self.den for v in poly_vars(f)}

    def __repr__(self):
        num = _poly_str(self.num)
        if not self.den:
            return num
        den = "*".join(f"({_poly_str(f)})" for f in self.den)
        return f"({num})/({den})" if len(self.num) > 1 else f"{num}/({den})"


def _coerce(x):
    if isinstance(x, FieldElement):
        return x
    if isinstance(x, int):
        return FieldElement(ONE if x % 2 else ZERO)
    return NotImplemented


def _mono_str(m):
    if not m:
        return "1"
    return "*".join(var if e == 1 else f"{var}^{e}" for var, e in m)


def _poly_str(p):
    if not p:
        return "0"
    return " + ".join(_mono_str(m) for m in sorted(p, key=_mono_key))


def poly_eval(p, sub):
    """Evaluate a polynomial at a variable -> FieldElement map."""
    total = FieldElement(ZERO)
    for m in p:
        term = FieldElement(ONE)
        sym = []
        for var, e in m:
            if var in sub:
                term = term * (sub[var] ** e)
            else:
                sym.append((var, e))
        if sym:
            term = term * FieldElement(frozenset({tuple(sorted(sym))}))
        total = total + term
    return total


def simple_fraction(m):
    """1/(1+m) for a monomial m, the basic building block of coefficients."""
    return FieldElement(ONE, (poly((), m),))


zero = FieldElement(ZERO)
one = FieldElement(ONE)
