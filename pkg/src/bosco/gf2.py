"""Fast characteristic-2 backends for specialized rank computations.

Univariate polynomials over GF(2) are Python ints, bit i holding the
coefficient of t**i, so addition is ^ and the bit tricks below give
multiplication and division without any coefficient bookkeeping.

GF(2**16) elements are 16-bit ints modulo a fixed primitive polynomial.
Ranks of matrices over that field are taken by blowing every entry up to
its 16x16 multiplication matrix over GF(2), packing the blocks into long
Python ints, and running ordinary bit elimination; the blown-up rank is
exactly 16 times the field rank.
"""

from __future__ import annotations

from functools import lru_cache


def pdeg(a):
    """Degree of a, -1 for the zero polynomial."""
    return a.bit_length() - 1


def pmul(a, b):
    if not a or not b:
        return 0
    if b.bit_count() > a.bit_count():
        a, b = b, a
    out = 0
    while b:
        low = b & -b
        out ^= a << (low.bit_length() - 1)
        b ^= low
    return out


def pdivmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = 0
    db = b.bit_length()
    while a.bit_length() >= db:
        sh = a.bit_length() - db
        q |= 1 << sh
        a ^= b << sh
    return q, a


def pdivexact(a, b):
    q, r = pdivmod(a, b)
    if r:
        raise ValueError("division is not exact")
    return q


def pgcd(a, b):
    while b:
        a, b = b, pdivmod(a, b)[1]
    return a


def ppow_mod(a, n, m):
    out = 1
    a = pdivmod(a, m)[1]
    while n:
        if n & 1:
            out = pdivmod(pmul(out, a), m)[1]
        a = pdivmod(pmul(a, a), m)[1]
        n >>= 1
    return out


class Frac1:
    """Reduced fraction of univariate GF(2) polynomials."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = 0, 1
            return
        g = pgcd(num, den)
        if g != 1:
            num, den = pdivexact(num, g), pdivexact(den, g)
        self.num, self.den = num, den

    @property
    def is_zero(self):
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        num = pmul(self.num, other.den) ^ pmul(other.num, self.den)
        return Frac1(num, pmul(self.den, other.den))

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Frac1(pmul(self.num, other.num), pmul(self.den, other.den))

    __rmul__ = __mul__

    def inv(self):
        return Frac1(self.den, self.num)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Frac1(pmul(self.num, other.den), pmul(self.den, other.num))

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.den == 1:
            return f"Frac1({self.num:#x})"
        return f"Frac1({self.num:#x}/{self.den:#x})"


def _coerce(x):
    if isinstance(x, Frac1):
        return x
    if isinstance(x, int):
        return Frac1(x & 1)
    return NotImplemented


def bitrank(rows):
    """Rank over GF(2) of rows given as Python ints."""
    pivots = {}
    rank = 0
    for r in rows:
        while r:
            p = r.bit_length() - 1
            q = pivots.get(p)
            if q is None:
                pivots[p] = r
                rank += 1
                break
            r ^= q
    return rank


@lru_cache(maxsize=1)
def gf16_modulus():
    """Smallest primitive degree-16 modulus over GF(2).

    A candidate passes when powers of t first return to 1 after exactly
    2**16 - 1 steps; that both proves irreducibility and makes t a
    generator, so nonzero powers t**e with 0 < e < 65535 never vanish.
    """
    for c in range(1, 1 << 16, 2):
        m = (1 << 16) | c
        e = 1
        period = 0
        for i in range(65535):
            e <<= 1
            if e >> 16:
                e ^= m
            period = i + 1
            if e == 1:
                break
        if e == 1 and period == 65535:
            return m
    raise RuntimeError("no primitive modulus found")


class GF16:
    """Arithmetic and rank computation over GF(2**16)."""

    ORDER = (1 << 16) - 1

    def __init__(self):
        self.mod = gf16_modulus()

    def xtime(self, a):
        a <<= 1
        return a ^ self.mod if a >> 16 else a

    def mul(self, a, b):
        out = 0
        while b:
            if b & 1:
                out ^= a
            a = self.xtime(a)
            b >>= 1
        return out

    def pow(self, a, n):
        n %= self.ORDER
        out = 1
        while n:
            if n & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            n >>= 1
        return out

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero in GF(2**16)")
        return self.pow(a, self.ORDER - 1)

    def powers_of_t(self, n):
        """Table of t**e for 0 <= e <= n."""
        out = [1]
        e = 1
        for _ in range(n):
            e = self.xtime(e)
            out.append(e)
        return out

    def rank(self, rows, ncols):
        """Rank of a matrix with GF(2**16) entries given as row lists."""
        pivots = {}
        rank16 = 0
        for row in rows:
            cur = list(row)
            for _ in range(16):
                big = 0
                for j, a in enumerate(cur):
                    if a:
                        big |= a << (16 * j)
                cur = [self.xtime(a) for a in cur]
                while big:
                    p = big.bit_length() - 1
                    q = pivots.get(p)
                    if q is None:
                        pivots[p] = big
                        rank16 += 1
                        break
                    big ^= q
        assert rank16 % 16 == 0
        return rank16 // 16


def draw_exponents(variables, rng):
    """Distinct exponents in 1..64 for each variable, seeded.

    The draw is a hand-rolled Fisher-Yates over getrandbits so identical
    seeds give identical maps on every Python version.
    """
    names = sorted(variables)
    if len(names) > 64:
        raise ValueError("more than 64 variables in one specialization")
    pool = list(range(1, 65))
    for i in range(len(pool) - 1, 0, -1):
        j = _randbelow(rng, i + 1)
        pool[i], pool[j] = pool[j], pool[i]
    return {v: pool[i] for i, v in enumerate(names)}


def _randbelow(rng, n):
    bits = (n - 1).bit_length()
    while True:
        r = rng.getrandbits(bits) if bits else 0
        if r < n:
            return r
