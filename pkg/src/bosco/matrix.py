"""Rank and kernel computations over exact fields and their specializations.

Three tiers. Exact Gauss-Jordan over field elements handles the small
symbolic questions (a dozen rows, say). Fraction-free Bareiss over the
underlying polynomial ring handles mid-size exact ranks and integer
determinants. Seeded evaluation over GF(2**16) handles everything large;
an evaluated rank is a certified lower bound for the generic rank, and
retries with fresh exponent draws only ever improve it.

The elimination routines assume characteristic 2 throughout: subtraction
is addition and cofactor signs are trivial. The Bareiss engine takes an
explicit ring adapter and is the one place that needs true subtraction,
so it works over the integers as well.
"""

from __future__ import annotations

import random

from .field import ONE, poly_add, poly_divexact, poly_mul
from .gf2 import GF16, Frac1, draw_exponents, pdivexact, pmul


class Ring:
    """Ring operations for the fraction-free elimination engine."""

    __slots__ = ("one", "sub", "mul", "divexact", "is_zero", "pivot_key")

    def __init__(self, one, sub, mul, divexact, is_zero, pivot_key):
        self.one = one
        self.sub = sub
        self.mul = mul
        self.divexact = divexact
        self.is_zero = is_zero
        self.pivot_key = pivot_key


def _int_divexact(a, b):
    q, r = divmod(a, b)
    if r:
        raise ValueError("Bareiss division not exact over the integers")
    return q


def _poly2_divexact(a, b):
    q = poly_divexact(a, b)
    if q is None:
        raise ValueError("Bareiss division not exact over F2 polynomials")
    return q


RING_INT = Ring(1, lambda a, b: a - b, lambda a, b: a * b, _int_divexact,
                lambda a: a == 0, abs)
RING_GF2T = Ring(1, lambda a, b: a ^ b, pmul, lambda a, b: pdivexact(a, b),
                 lambda a: a == 0, int.bit_length)
RING_POLY2 = Ring(ONE, poly_add, poly_mul, _poly2_divexact,
                  lambda p: not p, len)


def _bareiss(rows, ring):
    """Fraction-free elimination; returns (rank, sign, last_pivot)."""
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    prev = ring.one
    sign = 1
    rank = 0
    while rank < nrows and rank < ncols:
        best = None
        for i in range(rank, nrows):
            for j in range(rank, ncols):
                v = m[i][j]
                if not ring.is_zero(v):
                    key = (ring.pivot_key(v), i, j)
                    if best is None or key < best:
                        best = key
        if best is None:
            break
        _, pi, pj = best
        if pi != rank:
            m[rank], m[pi] = m[pi], m[rank]
            sign = -sign
        if pj != rank:
            for row in m:
                row[rank], row[pj] = row[pj], row[rank]
            sign = -sign
        piv = m[rank][rank]
        for i in range(rank + 1, nrows):
            mi = m[i]
            lead = mi[rank]
            for j in range(rank + 1, ncols):
                mi[j] = ring.divexact(
                    ring.sub(ring.mul(mi[j], piv), ring.mul(lead, m[rank][j])),
                    prev,
                )
        prev = piv
        rank += 1
    return rank, sign, prev


def bareiss_rank(rows, ring):
    return _bareiss(rows, ring)[0]


def int_det(rows):
    """Determinant of a square integer matrix, fraction-free."""
    n = len(rows)
    if n == 0:
        return 1
    rank, sign, last = _bareiss(rows, RING_INT)
    return sign * last if rank == n else 0


def exact_rref(rows, ncols):
    """Reduced row echelon form over a characteristic-2 field.

    Entries only need +, *, .inv() and truthiness, so both multivariate
    field elements and univariate fractions work.
    """
    m = [list(r) for r in rows]
    piv_cols = []
    r0 = 0
    for c in range(ncols):
        pr = next((i for i in range(r0, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        m[r0], m[pr] = m[pr], m[r0]
        inv = m[r0][c].inv()
        m[r0] = [v * inv for v in m[r0]]
        for i in range(len(m)):
            if i != r0 and m[i][c]:
                f = m[i][c]
                m[i] = [a + f * b for a, b in zip(m[i], m[r0])]
        piv_cols.append(c)
        r0 += 1
    return m[:r0], piv_cols


def exact_rank(rows, ncols):
    return len(exact_rref(rows, ncols)[1])


def kernel_basis(rows, ncols, one):
    """Basis of the right kernel over a characteristic-2 field."""
    ref, piv = exact_rref(rows, ncols)
    zero = one + one
    pivset = set(piv)
    basis = []
    for j in range(ncols):
        if j in pivset:
            continue
        v = [zero] * ncols
        v[j] = one
        for i, c in enumerate(piv):
            v[c] = ref[i][j]
        basis.append(v)
    return basis


def row_space_meet(rows, ncols, coords):
    """Basis of the meet of the row space with a coordinate subspace.

    coords lists the coordinate positions allowed to be nonzero. The
    dimension equals rank(M) minus the rank of M with those columns
    removed; the basis comes from an echelon form taken with the
    complementary columns first, keeping rows whose pivot falls inside
    the allowed block.
    """
    coordset = set(coords)
    comp = [j for j in range(ncols) if j not in coordset]
    order = comp + sorted(coordset)
    permuted = [[row[j] for j in order] for row in rows]
    ref, piv = exact_rref(permuted, ncols)
    basis = []
    for i, c in enumerate(piv):
        if c >= len(comp):
            v = [None] * ncols
            for pos, j in enumerate(order):
                v[j] = ref[i][pos]
            basis.append(v)
    return basis


def poly_bits(p, exponents):
    """Specialize a multivariate F2 polynomial to univariate bits."""
    out = 0
    for m in p:
        e = 0
        for var, k in m:
            e += k * exponents[var]
        out ^= 1 << e
    return out


def elem_frac1(elem, exponents):
    """Specialize a field element; raises ZeroDivisionError on a pole."""
    num = poly_bits(elem.num, exponents)
    den = 1
    for f in elem.den:
        fb = poly_bits(f, exponents)
        if not fb:
            raise ZeroDivisionError("denominator factor vanishes under specialization")
        den = pmul(den, fb)
    return Frac1(num, den)


def evaluation_rank(rows, ncols, exponents, gf=None):
    """Rank after specializing variables to powers of a GF(2**16) generator."""
    gf = gf or GF16()
    fracs = [[elem_frac1(e, exponents) for e in row] for row in rows]
    maxdeg = 0
    for row in fracs:
        for f in row:
            maxdeg = max(maxdeg, f.num.bit_length(), f.den.bit_length())
    pows = gf.powers_of_t(maxdeg)

    def ev(bits):
        out = 0
        while bits:
            low = bits & -bits
            out ^= pows[low.bit_length() - 1]
            bits ^= low
        return out

    values = []
    for row in fracs:
        vr = []
        for f in row:
            dv = ev(f.den)
            if not dv:
                raise ZeroDivisionError("denominator vanishes at the evaluation point")
            vr.append(gf.mul(ev(f.num), gf.inv(dv)))
        values.append(vr)
    return gf.rank(values, ncols)


def retry_rng(seed, attempt):
    """Deterministic per-attempt generator; attempts never share draws."""
    return random.Random(seed * 65537 + attempt)


def specialized_rank(rows, ncols, seed, retries, gf=None):
    """Best evaluated rank over seeded retries; a generic lower bound.

    Returns (best, per_attempt) where per_attempt holds each attempt's
    rank, or None when the draw hit a pole.
    """
    variables = set()
    for row in rows:
        for e in row:
            variables |= e.variables()
    gf = gf or GF16()
    best = 0
    attempts = []
    for a in range(retries):
        exps = draw_exponents(variables, retry_rng(seed, a))
        try:
            r = evaluation_rank(rows, ncols, exps, gf)
        except ZeroDivisionError:
            attempts.append(None)
            continue
        attempts.append(r)
        best = max(best, r)
    return best, attempts
