"""Truncated bivariate series and formal maps of (C^2, 0).

BiSeries stores sparse coefficients keyed by exponent pairs (i, j) with
i + j bounded by the total-degree truncation.  Map2 pairs two BiSeries
without constant terms; the group structure (composition, inversion) is
exact at the truncation.
"""
from __future__ import annotations

from .errors import (
    BadLinearPart,
    NotFiniteOrder,
    NotInvertible,
    Singular,
    TruncMismatch,
)
from .field import CycloScalar, FieldSpec, invert_2x2, kth_root

try:
    from gmpy2 import mpq
except ImportError:  # pragma: no cover
    from fractions import Fraction as mpq


def _monomial_key(item):
    (i, j), _ = item
    return (i + j, j)


class BiSeries:
    """Sparse bivariate series truncated at a total degree."""

    __slots__ = ("spec", "trunc", "coeffs")

    def __init__(self, spec: FieldSpec, trunc: int, coeffs: dict | None = None):
        self.spec = spec
        self.trunc = trunc
        clean = {}
        if coeffs:
            for (i, j), v in coeffs.items():
                if i + j > trunc:
                    continue
                v = spec.scalar(v)
                if v:
                    clean[(i, j)] = v
        self.coeffs = clean

    def _new(self, coeffs: dict) -> BiSeries:
        s = object.__new__(BiSeries)
        s.spec = self.spec
        s.trunc = self.trunc
        s.coeffs = coeffs
        return s

    @staticmethod
    def zero(spec: FieldSpec, trunc: int) -> BiSeries:
        return BiSeries(spec, trunc)

    @staticmethod
    def coordinate(spec: FieldSpec, trunc: int, index: int) -> BiSeries:
        key = (1, 0) if index == 1 else (0, 1)
        return BiSeries(spec, trunc, {key: spec.one})

    def __eq__(self, other):
        if not isinstance(other, BiSeries):
            return NotImplemented
        return (
            self.spec.m == other.spec.m
            and self.trunc == other.trunc
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash(
            (self.spec.m, self.trunc, tuple(sorted(self.coeffs.items(), key=_monomial_key)))
        )

    def __repr__(self):
        items = sorted(self.coeffs.items(), key=_monomial_key)[:5]
        body = " + ".join(
            f"({v.to_str()})*z1^{i}*z2^{j}" for (i, j), v in items
        )
        more = "..." if len(self.coeffs) > 5 else ""
        return f"BiSeries({body or '0'}{more}, N={self.trunc})"

    def __bool__(self):
        return bool(self.coeffs)

    def _check(self, other: BiSeries):
        if self.trunc != other.trunc or self.spec.m != other.spec.m:
            raise TruncMismatch("mixed truncations or fields")

    def get(self, i: int, j: int) -> CycloScalar:
        return self.coeffs.get((i, j), self.spec.zero)

    def __add__(self, other: BiSeries) -> BiSeries:
        self._check(other)
        out = dict(self.coeffs)
        for key, v in other.coeffs.items():
            s = out.get(key)
            s = v if s is None else s + v
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return self._new(out)

    def __sub__(self, other: BiSeries) -> BiSeries:
        return self + (-other)

    def __neg__(self) -> BiSeries:
        return self._new({k: -v for k, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, CycloScalar)):
            s = self.spec.scalar(other)
            if not s:
                return self._new({})
            return self._new({k: v * s for k, v in self.coeffs.items()})
        self._check(other)
        n = self.trunc
        out: dict = {}
        for (i1, j1), a in self.coeffs.items():
            d1 = i1 + j1
            for (i2, j2), b in other.coeffs.items():
                if d1 + i2 + j2 > n:
                    continue
                key = (i1 + i2, j1 + j2)
                prod = a * b
                s = out.get(key)
                s = prod if s is None else s + prod
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return self._new(out)

    __rmul__ = __mul__

    def total_degree_part(self, d: int) -> BiSeries:
        return self._new(
            {k: v for k, v in self.coeffs.items() if k[0] + k[1] == d}
        )

    def min_degree(self) -> int | None:
        if not self.coeffs:
            return None
        return min(i + j for i, j in self.coeffs)

    def substitute(self, g1: BiSeries, g2: BiSeries) -> BiSeries:
        """Evaluate at (g1, g2); both must vanish at the origin."""
        n = self.trunc
        return _substitute_with_powers(
            self, _power_table(g1, n, n), _power_table(g2, n, n), n
        )


def _power_table(g: BiSeries, trunc: int, up_to: int) -> list[BiSeries]:
    # powers g^0..g^d with coefficients kept only up to degree up_to
    one = BiSeries(g.spec, trunc, {(0, 0): g.spec.one})
    if up_to < trunc:
        g = g._new(
            {k: v for k, v in g.coeffs.items() if k[0] + k[1] <= up_to}
        )
    table = [one]
    ordg = g.min_degree() or (trunc + 1)
    cur = one
    for e in range(1, up_to + 1):
        if e * ordg > up_to:
            break
        cur = _mul_limited(cur, g, up_to)
        table.append(cur)
    return table


def _mul_limited(a: BiSeries, b: BiSeries, up_to: int) -> BiSeries:
    out: dict = {}
    for (i1, j1), x in a.coeffs.items():
        d1 = i1 + j1
        for (i2, j2), y in b.coeffs.items():
            if d1 + i2 + j2 > up_to:
                continue
            key = (i1 + i2, j1 + j2)
            prod = x * y
            s = out.get(key)
            s = prod if s is None else s + prod
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return a._new(out)


def _substitute_with_powers(
    f: BiSeries, p1: list[BiSeries], p2: list[BiSeries], up_to: int
) -> BiSeries:
    # Group by the first exponent so each distinct i costs one product.
    spec, n = f.spec, f.trunc
    by_i: dict[int, dict] = {}
    for (i, j), c in f.coeffs.items():
        by_i.setdefault(i, {})[j] = c
    total = BiSeries.zero(spec, n)
    for i, row in by_i.items():
        if i >= len(p1):
            continue
        inner = BiSeries.zero(spec, n)
        for j, c in row.items():
            if j >= len(p2):
                continue
            inner = inner + p2[j] * c
        if inner:
            total = total + _mul_limited(p1[i], inner, up_to)
    return total


class LinearMap2:
    """An exact 2x2 matrix acting on (z1, z2)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = a, b, c, d

    @staticmethod
    def identity(spec: FieldSpec) -> LinearMap2:
        return LinearMap2(spec.one, spec.zero, spec.zero, spec.one)

    @staticmethod
    def diagonal(lam: CycloScalar, mu: CycloScalar) -> LinearMap2:
        z = lam.spec.zero
        return LinearMap2(lam, z, z, mu)

    @staticmethod
    def swap(spec: FieldSpec, scale=None) -> LinearMap2:
        s = spec.one if scale is None else spec.scalar(scale)
        return LinearMap2(spec.zero, s, s, spec.zero)

    @property
    def spec(self) -> FieldSpec:
        return self.a.spec

    def det(self) -> CycloScalar:
        return self.a * self.d - self.b * self.c

    def trace(self) -> CycloScalar:
        return self.a + self.d

    def __eq__(self, other):
        if not isinstance(other, LinearMap2):
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)

    def __repr__(self):
        return (
            f"LinearMap2([{self.a.to_str()} | {self.b.to_str()}] "
            f"[{self.c.to_str()} | {self.d.to_str()}])"
        )

    def __matmul__(self, other: LinearMap2) -> LinearMap2:
        return LinearMap2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> LinearMap2:
        return LinearMap2(*invert_2x2(self.a, self.b, self.c, self.d))

    def power(self, n: int) -> LinearMap2:
        if n < 0:
            return self.inverse().power(-n)
        result = LinearMap2.identity(self.spec)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def is_diagonal(self) -> bool:
        return not self.b and not self.c

    def to_map(self, trunc: int) -> Map2:
        spec = self.spec
        return Map2(
            BiSeries(spec, trunc, {(1, 0): self.a, (0, 1): self.b}),
            BiSeries(spec, trunc, {(1, 0): self.c, (0, 1): self.d}),
        )


class Map2:
    """Pair of truncated bivariate series without constant terms."""

    __slots__ = ("comp1", "comp2")

    def __init__(self, comp1: BiSeries, comp2: BiSeries):
        if comp1.trunc != comp2.trunc or comp1.spec.m != comp2.spec.m:
            raise TruncMismatch("components disagree on truncation or field")
        if (0, 0) in comp1.coeffs or (0, 0) in comp2.coeffs:
            raise ValueError("maps must vanish at the origin")
        self.comp1 = comp1
        self.comp2 = comp2

    @property
    def spec(self) -> FieldSpec:
        return self.comp1.spec

    @property
    def trunc(self) -> int:
        return self.comp1.trunc

    @staticmethod
    def identity(spec: FieldSpec, trunc: int) -> Map2:
        return Map2(
            BiSeries.coordinate(spec, trunc, 1),
            BiSeries.coordinate(spec, trunc, 2),
        )

    @staticmethod
    def diagonal(spec: FieldSpec, trunc: int, lam, mu) -> Map2:
        return LinearMap2.diagonal(spec.scalar(lam), spec.scalar(mu)).to_map(trunc)

    def __eq__(self, other):
        if not isinstance(other, Map2):
            return NotImplemented
        return self.comp1 == other.comp1 and self.comp2 == other.comp2

    def __repr__(self):
        return f"Map2({self.comp1!r}, {self.comp2!r})"

    def compose(self, other: Map2, up_to: int | None = None) -> Map2:
        """self o other, exact at the shared truncation.

        With up_to set, coefficients are only computed through that total
        degree (the rest are dropped); used by degree-by-degree solvers.
        """
        if self.trunc != other.trunc or self.spec.m != other.spec.m:
            raise TruncMismatch("mixed truncations or fields")
        n = self.trunc if up_to is None else min(up_to, self.trunc)
        p1 = _power_table(other.comp1, self.trunc, n)
        p2 = _power_table(other.comp2, self.trunc, n)
        return Map2(
            _substitute_with_powers(self.comp1, p1, p2, n),
            _substitute_with_powers(self.comp2, p1, p2, n),
        )

    def linear_part(self) -> LinearMap2:
        return LinearMap2(
            self.comp1.get(1, 0),
            self.comp1.get(0, 1),
            self.comp2.get(1, 0),
            self.comp2.get(0, 1),
        )

    def homogeneous_part(self, k: int) -> Map2:
        return Map2(
            self.comp1.total_degree_part(k), self.comp2.total_degree_part(k)
        )

    def inverse(self) -> Map2:
        """Compositional inverse, built degree by degree."""
        L = self.linear_part()
        if not L.det():
            raise NotInvertible("linear part is singular")
        n = self.trunc
        g = L.inverse().to_map(n)
        if n == 1:
            return g
        linv = L.inverse()
        ident = Map2.identity(self.spec, n)
        for d in range(2, n + 1):
            err = self.compose(g, up_to=d)
            e1 = err.comp1 - ident.comp1
            e2 = err.comp2 - ident.comp2
            d1 = e1.total_degree_part(d)
            d2 = e2.total_degree_part(d)
            if not d1 and not d2:
                continue
            # cancel the degree-d error through the linear part
            c1 = {}
            c2 = {}
            for key, v in d1.coeffs.items():
                c1[key] = v
            for key, v in d2.coeffs.items():
                c2[key] = v
            fix1 = {}
            fix2 = {}
            for key in set(c1) | set(c2):
                v1 = c1.get(key, self.spec.zero)
                v2 = c2.get(key, self.spec.zero)
                fix1[key] = -(linv.a * v1 + linv.b * v2)
                fix2[key] = -(linv.c * v1 + linv.d * v2)
            g = Map2(
                g.comp1 + BiSeries(self.spec, n, fix1),
                g.comp2 + BiSeries(self.spec, n, fix2),
            )
        assert self.compose(g) == Map2.identity(self.spec, n)
        return g

    def conjugate_by(self, w: Map2) -> Map2:
        """w^(-1) o self o w."""
        return w.inverse().compose(self.compose(w))

    def power(self, j: int) -> Map2:
        if j < 0:
            return self.inverse().power(-j)
        result = Map2.identity(self.spec, self.trunc)
        base = self
        while j:
            if j & 1:
                result = result.compose(base)
            base = base.compose(base)
            j >>= 1
        return result

    # -- resonance structure -------------------------------------------------
    def is_resonant(self) -> bool:
        """Every monomial of shape z1*p^j in comp1 and z2*p^j in comp2."""
        return all(i == j + 1 for (i, j) in self.comp1.coeffs) and all(
            j == i + 1 for (i, j) in self.comp2.coeffs
        )

    def is_inverse_resonant(self) -> bool:
        """Every monomial of shape z2*p^j in comp1 and z1*p^j in comp2."""
        return all(j == i + 1 for (i, j) in self.comp1.coeffs) and all(
            i == j + 1 for (i, j) in self.comp2.coeffs
        )


def type_decompose(s: BiSeries) -> dict[int, BiSeries]:
    """Split into components of type s = i - j; they sum back to the input."""
    parts: dict[int, dict] = {}
    for (i, j), v in s.coeffs.items():
        parts.setdefault(i - j, {})[(i, j)] = v
    return {
        t: BiSeries(s.spec, s.trunc, d) for t, d in sorted(parts.items())
    }


def product_coordinate(F: Map2) -> BiSeries:
    """The series comp1 * comp2, i.e. p after applying F."""
    return F.comp1 * F.comp2


def linearize_finite_order_2d(th: Map2, order: int) -> Map2:
    """Averaging conjugation H with H^(-1) o L(th) o H = th."""
    spec, n = th.spec, th.trunc
    T = th.linear_part()
    ident = Map2.identity(spec, n)
    if th.power(order) != ident:
        raise NotFiniteOrder(f"map does not have order {order} at trunc {n}")
    acc = ident
    total = ident
    for j in range(1, order):
        acc = acc.compose(th)
        Tm = T.power(-j)
        total = Map2(
            total.comp1 + acc.comp1 * Tm.a + acc.comp2 * Tm.b,
            total.comp2 + acc.comp1 * Tm.c + acc.comp2 * Tm.d,
        )
    inv_order = spec.scalar(mpq(1, order))
    H = Map2(total.comp1 * inv_order, total.comp2 * inv_order)
    assert T.to_map(n).compose(H) == H.compose(th)
    return H
