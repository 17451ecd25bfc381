"""Exact arithmetic in the cyclotomic-rational field Q(zeta_m).

Elements are residues in Q[x]/Phi_m(x) with arbitrary-precision rational
coordinates, always kept in canonical reduced form.  No floating point
is used anywhere; a float embedding exists for printing only.
"""
from __future__ import annotations

import functools
import itertools

try:
    from gmpy2 import mpq
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as mpq

from .errors import (
    DivisionByZero,
    FieldMismatch,
    OrderNotInField,
    Singular,
)

_ZERO = mpq(0)
_ONE = mpq(1)


def _int_poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # Exact division of integer polynomials, coefficients ascending.
    num = list(num)
    quot = [0] * (max(len(num) - len(den) + 1, 0))
    for shift in range(len(num) - len(den), -1, -1):
        lead = num[shift + len(den) - 1]
        q, r = divmod(lead, den[-1])
        if r:
            raise ValueError("inexact integer polynomial division")
        quot[shift] = q
        if q:
            for i, c in enumerate(den):
                num[shift + i] -= q * c
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return quot, num


@functools.lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """m-th cyclotomic polynomial as ascending integer coefficients.

    >>> cyclotomic_polynomial(1)
    (-1, 1)
    >>> cyclotomic_polynomial(4)
    (1, 0, 1)
    >>> cyclotomic_polynomial(8)
    (1, 0, 0, 0, 1)
    """
    if m < 1:
        raise ValueError("m must be positive")
    poly = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            poly, rem = _int_poly_divmod(poly, list(cyclotomic_polynomial(d)))
            assert rem == [0]
    return tuple(poly)


class FieldSpec:
    """The field Q(zeta_m), fixed per session.

    Holds the exact cyclotomic polynomial and the power-reduction table
    used to fold products back into canonical form.
    """

    __slots__ = ("m", "phi", "degree", "_reduce_rows", "zero", "one", "zeta")

    def __init__(self, m: int):
        self.m = m
        self.phi = cyclotomic_polynomial(m)
        d = len(self.phi) - 1
        self.degree = d
        # Rows give x^e mod Phi_m for e = d .. 2d-2 (integer entries since
        # Phi_m is monic over Z).
        rows: list[tuple[int, ...]] = []
        cur = [-c for c in self.phi[:d]]  # x^d
        rows.append(tuple(cur))
        for _ in range(d - 2):
            cur = [0] + cur
            top = cur.pop()
            if top:
                for i in range(d):
                    cur[i] += top * rows[0][i]
            rows.append(tuple(cur))
        self._reduce_rows = tuple(rows)
        self.zero = CycloScalar(self, (_ZERO,) * d)
        self.one = CycloScalar(self, (_ONE,) + (_ZERO,) * (d - 1))
        if d == 1:
            # zeta is rational: 1 for m=1, -1 for m=2
            self.zeta = self.scalar(1 if m == 1 else -1)
        else:
            self.zeta = CycloScalar(
                self, (_ZERO, _ONE) + (_ZERO,) * (d - 2)
            )

    def scalar(self, value) -> CycloScalar:
        """Coerce an int, rational, string or coefficient sequence."""
        if isinstance(value, CycloScalar):
            if value.spec is not self:
                raise FieldMismatch("scalar from a different field")
            return value
        if isinstance(value, str):
            parts = [mpq(p.strip()) for p in value.split(",")]
            if len(parts) > self.degree:
                raise ValueError("too many coordinates for this field")
            parts += [_ZERO] * (self.degree - len(parts))
            return CycloScalar(self, tuple(parts))
        if isinstance(value, (list, tuple)):
            if len(value) > self.degree:
                raise ValueError("too many coordinates for this field")
            coords = tuple(mpq(v) for v in value)
            coords += (_ZERO,) * (self.degree - len(coords))
            return CycloScalar(self, coords)
        return CycloScalar(
            self, (mpq(value),) + (_ZERO,) * (self.degree - 1)
        )

    def __repr__(self):
        return f"FieldSpec(m={self.m})"

    def __reduce__(self):  # keep interning through pickling
        return (field_make, (self.m,))


@functools.lru_cache(maxsize=None)
def field_make(m: int) -> FieldSpec:
    """Interned field constructor; scalars of equal m share their spec."""
    return FieldSpec(m)


class CycloScalar:
    """An element of Q(zeta_m) in canonical reduced form."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: FieldSpec, coeffs: tuple):
        self.spec = spec
        self.coeffs = coeffs

    # -- basic protocol -------------------------------------------------
    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, CycloScalar):
            return self.spec.m == other.spec.m and self.coeffs == other.coeffs
        if isinstance(other, (int, type(_ONE))):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        return hash((self.spec.m, self.coeffs))

    def __repr__(self):
        return f"CycloScalar({self.to_str()!r}, m={self.spec.m})"

    def to_str(self) -> str:
        """Canonical string "a0/b0, a1/b1, ..." (always explicit slash)."""
        return ", ".join(
            f"{c.numerator}/{c.denominator}" for c in self.coeffs
        )

    # -- ring operations ------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, CycloScalar):
            if other.spec is not self.spec and other.spec.m != self.spec.m:
                raise FieldMismatch(
                    f"m={self.spec.m} vs m={other.spec.m}"
                )
            return other
        if isinstance(other, (int, type(_ONE))):
            return self.spec.scalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycloScalar(
            self.spec, tuple(a + b for a, b in zip(self.coeffs, o.coeffs))
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycloScalar(
            self.spec, tuple(a - b for a, b in zip(self.coeffs, o.coeffs))
        )

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return CycloScalar(self.spec, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        spec = self.spec
        d = spec.degree
        a, b = self.coeffs, o.coeffs
        if d == 1:
            return CycloScalar(spec, (a[0] * b[0],))
        conv = [_ZERO] * (2 * d - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if bj:
                    conv[i + j] += ai * bj
        out = conv[:d]
        rows = spec._reduce_rows
        for e in range(d, 2 * d - 1):
            top = conv[e]
            if top:
                row = rows[e - d]
                for i in range(d):
                    if row[i]:
                        out[i] += top * row[i]
        return CycloScalar(spec, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> CycloScalar:
        """Multiplicative inverse via extended Euclid against Phi_m."""
        if not self:
            raise DivisionByZero("inverse of zero")
        spec = self.spec
        if spec.degree == 1:
            return CycloScalar(spec, (_ONE / self.coeffs[0],))
        # extended gcd of self (as poly) and Phi_m over Q
        r0 = [mpq(c) for c in spec.phi]
        r1 = list(self.coeffs)
        while len(r1) > 1 and not r1[-1]:
            r1.pop()
        s0: list = [_ZERO]
        s1: list = [_ONE]
        while True:
            # degree of r1 is len-1; stop when constant
            if len(r1) == 1:
                c = r1[0]
                inv_coeffs = [x / c for x in s1]
                inv_coeffs += [_ZERO] * (spec.degree - len(inv_coeffs))
                return CycloScalar(spec, tuple(inv_coeffs[: spec.degree]))
            q, r = _q_poly_divmod(r0, r1)
            # s_new = s0 - q*s1
            s_new = list(s0) + [_ZERO] * max(
                0, len(q) + len(s1) - 1 - len(s0)
            )
            for i, qi in enumerate(q):
                if qi:
                    for j, sj in enumerate(s1):
                        if sj:
                            s_new[i + j] -= qi * sj
            r0, r1 = r1, r
            s0, s1 = s1, s_new

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o:
            raise DivisionByZero("division by zero scalar")
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.spec.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- conveniences ----------------------------------------------------
    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("not a rational element")
        return self.coeffs[0]


def _q_poly_divmod(num: list, den: list) -> tuple[list, list]:
    # Polynomial division over Q, coefficients ascending, den != 0.
    num = list(num)
    while len(num) > 1 and not num[-1]:
        num.pop()
    dn = len(den) - 1
    if len(num) - 1 < dn:
        return [_ZERO], num
    quot = [_ZERO] * (len(num) - dn)
    lead = den[-1]
    for shift in range(len(num) - dn - 1, -1, -1):
        q = num[shift + dn] / lead
        quot[shift] = q
        if q:
            for i, c in enumerate(den):
                num[shift + i] -= q * c
    while len(num) > 1 and not num[-1]:
        num.pop()
    return quot, num


def scalar_arith(a: CycloScalar, b: CycloScalar, op: str) -> CycloScalar:
    """Dispatch form of field arithmetic: op in {add, sub, mul, div}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def root_of_unity(spec: FieldSpec, numerator: int, denominator: int) -> CycloScalar:
    """zeta_m^(m*numerator/denominator); exact root of x^denominator = 1."""
    if denominator <= 0 or spec.m % denominator != 0:
        raise OrderNotInField(
            f"order {denominator} does not divide m={spec.m}"
        )
    e = (spec.m // denominator) * numerator % spec.m
    return spec.zeta ** e


def roots_of_unity(spec: FieldSpec) -> list[CycloScalar]:
    """All roots of unity contained in Q(zeta_m), deduplicated."""
    seen = {}
    for j in range(spec.m):
        for sign in (1, -1):
            v = spec.zeta ** j if sign == 1 else -(spec.zeta ** j)
            seen.setdefault(v.coeffs, v)
    return list(seen.values())


def multiplicative_order(x: CycloScalar, bound: int) -> int | None:
    """Least j <= bound with x^j = 1, or None."""
    acc = x
    for j in range(1, bound + 1):
        if acc == 1:
            return j
        acc = acc * x
    return None


def imaginary_unit(spec: FieldSpec) -> CycloScalar:
    """The element i; requires 4 | m."""
    return root_of_unity(spec, 1, 4)


# ---------------------------------------------------------------------------
# k-th roots


def _int_kth_root(n: int, k: int) -> int | None:
    # Exact integer k-th root of n >= 0, or None.
    if n < 0:
        return None
    if n in (0, 1):
        return n
    lo, hi = 1, 1
    while hi ** k <= n:
        hi *= 2
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** k <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo if lo ** k == n else None


def _rational_kth_roots(q, k: int) -> list:
    # k-th roots of a rational q that are themselves rational.
    num, den = int(q.numerator), int(q.denominator)
    neg = num < 0
    if neg and k % 2 == 0:
        return []
    rn = _int_kth_root(abs(num), k)
    rd = _int_kth_root(den, k)
    if rn is None or rd is None:
        return []
    root = mpq(-rn if neg else rn, rd)
    roots = [root]
    if k % 2 == 0 and root:
        roots.append(-root)
    return roots


@functools.lru_cache(maxsize=4096)
def _kth_roots_cached(m: int, coeffs: tuple, k: int) -> tuple:
    spec = field_make(m)
    x = CycloScalar(spec, coeffs)
    roots: dict = {}

    def record(r):
        if r ** k == x:
            roots.setdefault(r.coeffs, r)

    if x.is_rational():
        for q in _rational_kth_roots(x.rational_value(), k):
            record(spec.scalar(q))
    # monomial candidates q * zeta^e
    nonzero = [i for i, c in enumerate(x.coeffs) if c]
    if len(nonzero) == 1:
        e, q = nonzero[0], x.coeffs[nonzero[0]]
        for rq in _rational_kth_roots(q, k) + _rational_kth_roots(-q, k):
            base = spec.scalar(rq)
            for ee in range(spec.m):
                record(base * spec.zeta ** ee)
            if roots:
                break
    if not roots:
        for r in _kth_roots_sympy(x, k):
            record(r)
    return tuple(roots.values())


def _kth_roots_sympy(x: CycloScalar, k: int) -> list[CycloScalar]:
    # Exact factorization of t^k - x over Q(zeta_m); the only use of sympy
    # in the toolkit.  Results are re-verified by the caller.
    import sympy

    spec = x.spec
    zeta = sympy.exp(2 * sympy.pi * sympy.I / spec.m)
    t = sympy.Symbol("t")
    expr = sympy.Integer(0)
    for i, c in enumerate(x.coeffs):
        if c:
            expr += sympy.Rational(int(c.numerator), int(c.denominator)) * zeta ** i
    try:
        poly = sympy.Poly(t ** k - expr, t, extension=[zeta])
    except (sympy.polys.polyerrors.PolynomialError, sympy.SympifyError):
        return []
    dom = poly.domain
    if not getattr(dom, "is_Algebraic", False):
        return []
    # The factor coefficients are represented in powers of the primitive
    # element; bail out unless that element is zeta itself (power basis).
    mod = [int(c) for c in dom.mod.to_list()]
    if mod != list(reversed(spec.phi)):
        return []
    out = []
    for fac, _mult in poly.factor_list()[1]:
        if fac.degree() != 1:
            continue
        a1, a0 = fac.rep.to_list()
        root = -a0 / a1
        dense = list(root.to_list()[::-1])  # ascending powers of zeta
        dense += [0] * (spec.degree - len(dense))
        coords = tuple(
            mpq(int(c.numerator), int(c.denominator)) for c in dense
        )
        out.append(CycloScalar(spec, coords))
    return out


def kth_root(x: CycloScalar, k: int) -> CycloScalar | None:
    """Some exact k-th root of x in its field, or None if none exists."""
    if k == 1:
        return x
    if not x:
        return x.spec.zero
    roots = _kth_roots_cached(x.spec.m, x.coeffs, k)
    return roots[0] if roots else None


def all_kth_roots(x: CycloScalar, k: int) -> list[CycloScalar]:
    """All exact k-th roots of x in its field."""
    if k == 1:
        return [x]
    if not x:
        return [x.spec.zero]
    return list(_kth_roots_cached(x.spec.m, x.coeffs, k))


# ---------------------------------------------------------------------------
# Exact linear algebra


class LinearSolution:
    """Outcome of an exact linear solve.

    status is one of "unique", "family", "inconsistent".  For solvable
    systems `particular` is one solution (free variables set to zero) and
    `basis` spans the homogeneous solutions, so the full set is
    particular + span(basis).
    """

    __slots__ = ("status", "particular", "basis")

    def __init__(self, status, particular=None, basis=None):
        self.status = status
        self.particular = particular
        self.basis = basis or []

    def __repr__(self):
        return f"LinearSolution({self.status}, free={len(self.basis)})"


def solve_linear_exact(A: list[list[CycloScalar]], b: list[CycloScalar]) -> LinearSolution:
    """Exact reduced-row-echelon solve of A x = b over the field."""
    if not A:
        return LinearSolution("unique", particular=[])
    spec = None
    for row in A:
        for entry in row:
            spec = entry.spec
            break
        if spec:
            break
    if spec is None:
        spec = b[0].spec if b else None
    n_rows = len(A)
    n_cols = len(A[0])
    M = [list(row) + [rhs] for row, rhs in zip(A, b)]
    for row in M:
        for entry in row:
            if isinstance(entry, CycloScalar) and entry.spec.m != spec.m:
                raise FieldMismatch("mixed fields in linear system")
    piv_cols: list[int] = []
    r = 0
    for c in range(n_cols):
        pivot = None
        for i in range(r, n_rows):
            if M[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        inv = M[r][c].inverse()
        M[r] = [v * inv for v in M[r]]
        for i in range(n_rows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [vi - f * vr for vi, vr in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
        if r == n_rows:
            break
    for i in range(r, n_rows):
        if M[i][n_cols]:
            return LinearSolution("inconsistent")
    zero = spec.zero
    particular = [zero] * n_cols
    for i, c in enumerate(piv_cols):
        particular[c] = M[i][n_cols]
    free_cols = [c for c in range(n_cols) if c not in piv_cols]
    basis = []
    for fc in free_cols:
        vec = [zero] * n_cols
        vec[fc] = spec.one
        for i, c in enumerate(piv_cols):
            vec[c] = -M[i][fc]
        basis.append(vec)
    status = "unique" if not free_cols else "family"
    return LinearSolution(status, particular=particular, basis=basis)


def invert_2x2(a, b, c, d):
    """Exact inverse of [[a, b], [c, d]]; raises Singular when det = 0."""
    det = a * d - b * c
    if not det:
        raise Singular("2x2 matrix not invertible")
    inv = det.inverse()
    return d * inv, -b * inv, -c * inv, a * inv
