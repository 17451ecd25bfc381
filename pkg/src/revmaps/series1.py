"""Truncated univariate formal series and the one-variable theory.

A Series1 stores coefficients c_0..c_N exactly; coefficients beyond the
truncation are unknown, never assumed zero.  All identities asserted by
this module hold exactly at the stored truncation.
"""
from __future__ import annotations

import math

try:
    from gmpy2 import mpq
except ImportError:  # pragma: no cover
    from fractions import Fraction as mpq

from .certificates import Certificate
from .errors import (
    BadOmega,
    BadBranch,
    BadShape,
    ConstantTermInInner,
    HypothesisFails,
    IdentityInput,
    NotFiniteOrder,
    NotInvertible,
    NotReversibleClass,
    NotTangentToIdentity,
    NotUnit,
    RootNotInField,
    TruncMismatch,
    TruncationTooLow,
)
from .field import CycloScalar, FieldSpec, kth_root, multiplicative_order, roots_of_unity

INF = math.inf


class Series1:
    """Element of F[[t]] / t^(N+1) over a fixed cyclotomic field."""

    __slots__ = ("spec", "trunc", "coeffs")

    def __init__(self, spec: FieldSpec, trunc: int, coeffs):
        self.spec = spec
        self.trunc = trunc
        coeffs = list(coeffs)
        if len(coeffs) != trunc + 1:
            raise ValueError("coefficient vector must have length trunc+1")
        self.coeffs = tuple(spec.scalar(c) for c in coeffs)

    # -- constructors ----------------------------------------------------
    @staticmethod
    def zero(spec: FieldSpec, trunc: int) -> Series1:
        return Series1(spec, trunc, [0] * (trunc + 1))

    @staticmethod
    def one(spec: FieldSpec, trunc: int) -> Series1:
        return Series1(spec, trunc, [1] + [0] * trunc)

    @staticmethod
    def identity(spec: FieldSpec, trunc: int) -> Series1:
        """The series t."""
        return Series1(spec, trunc, [0, 1] + [0] * (trunc - 1))

    @staticmethod
    def monomial(spec: FieldSpec, trunc: int, degree: int, coeff=1) -> Series1:
        c = [0] * (trunc + 1)
        if degree <= trunc:
            c[degree] = coeff
        return Series1(spec, trunc, c)

    @staticmethod
    def from_terms(spec: FieldSpec, trunc: int, terms: dict) -> Series1:
        c = [spec.zero] * (trunc + 1)
        for d, v in terms.items():
            if d <= trunc:
                c[d] = spec.scalar(v)
        return Series1(spec, trunc, c)

    def _new(self, coeffs) -> Series1:
        s = object.__new__(Series1)
        s.spec = self.spec
        s.trunc = self.trunc
        s.coeffs = tuple(coeffs)
        return s

    # -- protocol ----------------------------------------------------------
    def __getitem__(self, j: int) -> CycloScalar:
        return self.coeffs[j]

    def __eq__(self, other):
        if not isinstance(other, Series1):
            return NotImplemented
        return (
            self.spec.m == other.spec.m
            and self.trunc == other.trunc
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.spec.m, self.trunc, self.coeffs))

    def __repr__(self):
        parts = []
        for j, c in enumerate(self.coeffs):
            if c:
                parts.append(f"({c.to_str()})*t^{j}")
            if len(parts) > 4:
                parts.append("...")
                break
        body = " + ".join(parts) if parts else "0"
        return f"Series1({body}, N={self.trunc})"

    def order(self) -> int | float:
        """Least j with c_j != 0, or inf when all retained terms vanish."""
        for j, c in enumerate(self.coeffs):
            if c:
                return j
        return INF

    def is_identity(self) -> bool:
        return self.order() != INF and self == Series1.identity(self.spec, self.trunc)

    def _check_compatible(self, other: Series1):
        if self.trunc != other.trunc:
            raise TruncMismatch(f"trunc {self.trunc} vs {other.trunc}")
        if self.spec.m != other.spec.m:
            raise TruncMismatch(f"field m={self.spec.m} vs m={other.spec.m}")

    # -- ring structure ------------------------------------------------------
    def __add__(self, other: Series1) -> Series1:
        self._check_compatible(other)
        return self._new(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other: Series1) -> Series1:
        self._check_compatible(other)
        return self._new(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self) -> Series1:
        return self._new(-a for a in self.coeffs)

    def __mul__(self, other):
        if isinstance(other, (int, CycloScalar)):
            s = self.spec.scalar(other)
            return self._new(a * s for a in self.coeffs)
        self._check_compatible(other)
        n = self.trunc
        zero = self.spec.zero
        out = [zero] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] = out[i + j] + a * b
        return self._new(out)

    __rmul__ = __mul__

    def scale_argument(self, s) -> Series1:
        """Substitute t -> s*t for a scalar s."""
        s = self.spec.scalar(s)
        out = []
        p = self.spec.one
        for c in self.coeffs:
            out.append(c * p)
            p = p * s
        return self._new(out)

    def derivative(self) -> Series1:
        """d/dt, with the top coefficient padded by zero."""
        n = self.trunc
        out = [self.coeffs[j + 1] * (j + 1) for j in range(n)]
        out.append(self.spec.zero)
        return self._new(out)

    # -- composition structure ------------------------------------------------
    def compose(self, inner: Series1) -> Series1:
        """self(inner); inner must vanish at the origin."""
        self._check_compatible(inner)
        if inner.coeffs[0]:
            raise ConstantTermInInner("inner series has a constant term")
        # fast paths: identity and pure scaling
        if not any(inner.coeffs[2:]):
            if inner.coeffs[1] == 1:
                return self
            return self.scale_argument(inner.coeffs[1])
        n = self.trunc
        acc = Series1.zero(self.spec, n)
        for j in range(n, -1, -1):
            acc = acc * inner
            cj = self.coeffs[j]
            if cj:
                acc = acc._new(
                    [acc.coeffs[0] + cj] + list(acc.coeffs[1:])
                )
        return acc

    def mul_inverse(self) -> Series1:
        """Reciprocal 1/self; requires a unit (nonzero constant term)."""
        c0 = self.coeffs[0]
        if not c0:
            raise NotUnit("series has zero constant term")
        inv0 = c0.inverse()
        n = self.trunc
        out = [inv0] + [self.spec.zero] * n
        for d in range(1, n + 1):
            acc = self.spec.zero
            for j in range(d):
                cj = self.coeffs[d - j]
                if cj and out[j]:
                    acc = acc + out[j] * cj
            out[d] = -acc * inv0
        return self._new(out)

    def __truediv__(self, other: Series1) -> Series1:
        return self * other.mul_inverse()

    def comp_inverse(self) -> Series1:
        """Compositional inverse; requires order exactly one."""
        if self.coeffs[0] or not self.coeffs[1]:
            raise NotInvertible("compositional inverse needs order 1")
        n = self.trunc
        t = Series1.identity(self.spec, n)
        g = t * self.coeffs[1].inverse()
        deriv = self.derivative()
        steps = max(1, n).bit_length() + 1
        for _ in range(steps):
            err = self.compose(g) - t
            if err.order() == INF:
                break
            g = g - err * deriv.compose(g).mul_inverse()
        if self.compose(g) != t:
            raise NotInvertible("Newton iteration failed to converge")
        return g

    def nth_root_unit(self, n: int, chosen_root: CycloScalar) -> Series1:
        """r with r^n = self and r(0) = chosen_root (a unit branch choice)."""
        c0 = self.coeffs[0]
        if not c0:
            raise NotUnit("n-th root needs a unit series")
        chosen_root = self.spec.scalar(chosen_root)
        if chosen_root ** n != c0:
            raise BadBranch("chosen_root^n differs from the constant term")
        # r = root * (1 + x)^(1/n) with x = self/c0 - 1
        x = self * c0.inverse() - Series1.one(self.spec, self.trunc)
        return binomial_series(mpq(1, n), x) * chosen_root

    def pow_int(self, n: int) -> Series1:
        if n < 0:
            return self.mul_inverse().pow_int(-n)
        result = Series1.one(self.spec, self.trunc)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def truncate(self, new_trunc: int) -> Series1:
        """Forget coefficients above new_trunc (explicit, never silent)."""
        if new_trunc > self.trunc:
            raise TruncationTooLow("cannot extend a truncated series")
        return Series1(self.spec, new_trunc, self.coeffs[: new_trunc + 1])


def ring_op(a: Series1, b: Series1, op: str) -> Series1:
    """Dispatch form of the ring operations: op in {add, sub, mul}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def binomial_series(exponent, x: Series1) -> Series1:
    """(1 + x)^exponent for rational exponent and x of positive order."""
    if x.order() < 1:
        raise BadShape("binomial series needs ord(x) >= 1")
    exponent = mpq(exponent)
    n = x.trunc
    result = Series1.one(x.spec, n)
    power = Series1.one(x.spec, n)
    coeff = mpq(1)
    ordx = x.order() if x.order() != INF else n + 1
    for j in range(1, n + 1):
        if j * ordx > n:
            break
        coeff = coeff * (exponent - (j - 1)) / j
        power = power * x
        if coeff:
            result = result + power * x.spec.scalar(coeff)
    return result


def log_unit(u: Series1) -> Series1:
    """Formal log of a unit with constant term 1."""
    if u.coeffs[0] != 1:
        raise BadShape("log needs constant term 1")
    x = u - Series1.one(u.spec, u.trunc)
    result = Series1.zero(u.spec, u.trunc)
    power = Series1.one(u.spec, u.trunc)
    ordx = x.order()
    if ordx == INF:
        return result
    for j in range(1, u.trunc + 1):
        if j * ordx > u.trunc:
            break
        power = power * x
        result = result + power * u.spec.scalar(mpq((-1) ** (j + 1), j))
    return result


def exp_series(y: Series1) -> Series1:
    """Formal exp of a series of positive order."""
    if y.order() < 1:
        raise BadShape("exp needs ord >= 1")
    result = Series1.one(y.spec, y.trunc)
    power = Series1.one(y.spec, y.trunc)
    fact = mpq(1)
    ordy = y.order()
    if ordy == INF:
        return result
    for j in range(1, y.trunc + 1):
        if j * ordy > y.trunc:
            break
        power = power * y
        fact = fact / j
        result = result + power * y.spec.scalar(fact)
    return result


# ---------------------------------------------------------------------------
# Normal forms and flows


def reversible_normal_form_1d(spec: FieldSpec, trunc: int, mu: int, lam: int, k: int) -> Series1:
    """mu*t*(1 + lam*t^k)^(-1/k) with mu = +-1 and lam in {0, 1}."""
    if mu not in (1, -1) or lam not in (0, 1):
        raise ValueError("mu must be +-1 and lam in {0, 1}")
    t = Series1.identity(spec, trunc)
    if lam == 0:
        return t * mu
    x = Series1.monomial(spec, trunc, k, lam)
    return t * binomial_series(mpq(-1, k), x) * mu


def reverser_family(spec: FieldSpec, trunc: int, k: int, omega, nu) -> Series1:
    """omega*t*(1 + nu*t^k)^(-1/k); requires omega^k = -1 exactly."""
    omega = spec.scalar(omega)
    nu = spec.scalar(nu)
    if omega ** k != -1:
        raise BadOmega("omega^k must equal -1")
    t = Series1.identity(spec, trunc)
    if not nu:
        return t * omega
    x = Series1.monomial(spec, trunc, k, nu)
    return t * binomial_series(mpq(-1, k), x) * omega


def parabolic_flow(spec: FieldSpec, trunc: int, k: int, alpha=1) -> Series1:
    """The time-alpha map t*(1 - k*alpha*t^k)^(-1/k) of the degree-(k+1) flow."""
    alpha = spec.scalar(alpha)
    t = Series1.identity(spec, trunc)
    if not alpha:
        return t
    x = Series1.monomial(spec, trunc, k, -(alpha * k))
    return t * binomial_series(mpq(-1, k), x)


def flow(v: Series1, alpha) -> Series1:
    """Time-alpha map of the formal vector field v(t) d/dt; ord(v) >= 2."""
    if v.order() < 2:
        raise BadShape("flow needs a field of order >= 2")
    spec, n = v.spec, v.trunc
    alpha = spec.scalar(alpha)
    term = Series1.identity(spec, n)
    result = term
    fact = mpq(1)
    apow = spec.one
    for j in range(1, n + 1):
        term = v * term.derivative()
        if term.order() == INF:
            break
        fact = fact / j
        apow = apow * alpha
        result = result + term * (apow * spec.scalar(fact))
    return result


def generator(f: Series1) -> Series1:
    """Vector field v with time-1 flow equal to f (f tangent to identity)."""
    if f.coeffs[0] or f.coeffs[1] != 1:
        raise NotTangentToIdentity("generator needs f = t + higher terms")
    spec, n = f.spec, f.trunc
    v = Series1.zero(spec, n)
    for d in range(2, n + 1):
        current = flow(v, 1)
        defect = f.coeffs[d] - current.coeffs[d]
        if defect:
            v = v + Series1.monomial(spec, n, d, defect)
    assert flow(v, 1) == f
    return v


def iterate(f: Series1, alpha) -> Series1:
    """Formal alpha-th iterate of a tangent-to-identity map."""
    return flow(generator(f), alpha)


# ---------------------------------------------------------------------------
# Conjugacy machinery


def conjugate(f: Series1, w: Series1) -> Series1:
    """w^(-1) o f o w."""
    return w.comp_inverse().compose(f.compose(w))


def _two_term_inverse(spec: FieldSpec, trunc: int, m: int, u) -> Series1:
    # Compositional inverse of t + u*t^m by Lagrange inversion:
    # [t^n] = binom(-n, j) u^j / n when n - 1 = j(m - 1), else 0.
    u = spec.scalar(u)
    coeffs = [spec.zero] * (trunc + 1)
    if trunc >= 1:
        coeffs[1] = spec.one
    for j in range(1, trunc + 1):
        n = j * (m - 1) + 1
        if n > trunc:
            break
        b = mpq(1, n)
        for i in range(j):
            b = b * (-n - i) / (i + 1)
        coeffs[n] = spec.scalar(b) * u ** j
    return Series1(spec, trunc, coeffs)


def _conjugate_two_term(f: Series1, m: int, u) -> Series1:
    # Conjugate by w = t + u t^m using the closed-form inverse of w.
    spec, n = f.spec, f.trunc
    w = Series1.monomial(spec, n, 1, 1) + Series1.monomial(spec, n, m, u)
    winv = _two_term_inverse(spec, n, m, u)
    return winv.compose(f.compose(w))


def _invariants_core(f: Series1):
    # Eliminate every non-residual term; return (k, a, b, w, clean) where
    # clean = t + a t^(k+1) + b t^(2k+1) exactly and w conjugates f to it.
    spec, n = f.spec, f.trunc
    if f.coeffs[0] or f.coeffs[1] != 1:
        raise NotTangentToIdentity("invariants need f = t + higher terms")
    t = Series1.identity(spec, n)
    diff_ord = (f - t).order()
    if diff_ord == INF:
        raise IdentityInput("invariants undefined for the identity")
    k = diff_ord - 1
    if 2 * k + 1 > n:
        raise TruncationTooLow(f"need trunc >= {2 * k + 1}, have {n}")
    g = f
    w = t
    a = g.coeffs[k + 1]
    for d in range(k + 2, n + 1):
        if d == 2 * k + 1:
            continue
        defect = g.coeffs[d]
        if not defect:
            continue
        m = d - k
        slope = a * (k + 1 - m)
        u = -defect / slope
        g = _conjugate_two_term(g, m, u)
        w = w.compose(
            Series1.monomial(spec, n, 1, 1) + Series1.monomial(spec, n, m, u)
        )
    b = g.coeffs[2 * k + 1]
    return k, a, b, w, g


class TangentIdInvariants:
    """Complete formal invariant (k, c) with a normalizing witness."""

    __slots__ = ("k", "c", "conjugator")

    def __init__(self, k: int, c: CycloScalar, conjugator: Series1):
        self.k = k
        self.c = c
        self.conjugator = conjugator

    def __repr__(self):
        return f"TangentIdInvariants(k={self.k}, c={self.c.to_str()})"


def tangent_invariants(f: Series1) -> TangentIdInvariants:
    """Invariants (k, c) of a tangent-to-identity map, with witness.

    The witness w satisfies w^(-1) o f o w = t + t^(k+1) + c t^(2k+1)
    exactly at the truncation.  Raises RootNotInField (carrying the
    unscaled coefficient pair) when the scaling step needs a k-th root
    the field does not contain.
    """
    k, a, b, w, _g = _invariants_core(f)
    c = b / (a * a)
    beta = kth_root(a.inverse(), k)
    if beta is None:
        raise RootNotInField(
            f"no k-th root of {a.inverse().to_str()} with k={k}",
            payload={"k": k, "leading": a, "residual": b},
        )
    spec, n = f.spec, f.trunc
    scale = Series1.monomial(spec, n, 1, beta)
    w = w.compose(scale)
    return TangentIdInvariants(k, c, w)


def residue_invariants(f: Series1) -> tuple[int, CycloScalar]:
    """(k, c) without any root extraction (c = b/a^2 is scale-free)."""
    k, a, b, _w, _g = _invariants_core(f)
    return k, b / (a * a)


def conjugate_to(f: Series1, target: Series1) -> Series1:
    """w with w^(-1) o f o w = target, for maps in one conjugacy class.

    Both maps must be tangent to the identity with the same k; raises
    NotReversibleClass when the residual invariants differ and
    RootNotInField when the leading-coefficient ratio has no k-th root.
    """
    spec, n = f.spec, f.trunc
    t = Series1.identity(spec, n)
    if f == target:
        return t
    k_f = (f - t).order() - 1
    k_t = (target - t).order() - 1
    if k_f != k_t:
        raise NotReversibleClass("different contact orders")
    k = k_f
    a_f = f.coeffs[k + 1]
    a_t = target.coeffs[k + 1]
    sigma = kth_root(a_t / a_f, k)
    if sigma is None:
        raise RootNotInField(
            "leading-coefficient ratio has no k-th root in the field",
            payload={"k": k, "ratio": a_t / a_f},
        )
    w = Series1.monomial(spec, n, 1, sigma)
    g = f.compose(w).scale_argument(sigma.inverse())  # (1/s) f(s t)
    for d in range(k + 2, n + 1):
        defect = g.coeffs[d] - target.coeffs[d]
        if not defect:
            continue
        m = d - k
        if m == k + 1:
            raise NotReversibleClass(
                "residual coefficients disagree; maps are not conjugate"
            )
        slope = a_t * (k + 1 - m)
        u = -defect / slope
        g = _conjugate_two_term(g, m, u)
        w = w.compose(
            Series1.monomial(spec, n, 1, 1) + Series1.monomial(spec, n, m, u)
        )
    assert g == target
    return w


# ---------------------------------------------------------------------------
# Finite order and averaging


def power_iterate(f: Series1, j: int) -> Series1:
    """j-fold composition of f with itself."""
    result = Series1.identity(f.spec, f.trunc)
    for _ in range(j):
        result = result.compose(f)
    return result


def composition_order(f: Series1, bound: int) -> int | None:
    """Least j <= bound with f^(oj) = t, or None."""
    t = Series1.identity(f.spec, f.trunc)
    acc = f
    for j in range(1, bound + 1):
        if acc == t:
            return j
        acc = acc.compose(f)
    return None


def linearize_finite_order(th: Series1, order: int) -> Series1:
    """Averaging conjugation H with H^(-1) o L o H = th, L = c1 t.

    Requires th^(o order) = t at the truncation.
    """
    spec, n = th.spec, th.trunc
    c1 = th.coeffs[1]
    if c1 ** order != 1:
        raise NotFiniteOrder("linear coefficient is not a root of unity")
    if power_iterate(th, order) != Series1.identity(spec, n):
        raise NotFiniteOrder(f"map does not have order {order} at trunc {n}")
    inv_c1 = c1.inverse()
    acc = Series1.identity(spec, n)
    total = acc
    scale = spec.one
    for _ in range(1, order):
        acc = acc.compose(th)
        scale = scale * inv_c1
        total = total + acc * scale
    h = total * spec.scalar(mpq(1, order))
    assert h * c1 == h.compose(th)
    return h


def invariance_dichotomy(phi: Series1, rho: Series1, max_order: int):
    """Either phi is constant or rho has finite order, given phi o rho = phi.

    Returns ("constant", None) or ("finite_order", j).
    """
    if rho.order() != 1:
        raise HypothesisFails("rho must have order 1")
    if phi.compose(rho) != phi:
        raise HypothesisFails("phi is not invariant under rho")
    nonconstant = any(phi.coeffs[1:])
    if not nonconstant:
        return ("constant", None)
    j = composition_order(rho, max_order)
    if j is None:
        raise TruncationTooLow(
            "phi non-constant but no finite order found within the bound"
        )
    return ("finite_order", j)


# ---------------------------------------------------------------------------
# One-variable reversibility


def _omega_for(spec: FieldSpec, k: int):
    # some omega in the field with omega^k = -1, or None
    if k % 2 == 1:
        return spec.scalar(-1)
    for w in roots_of_unity(spec):
        if w ** k == -1:
            return w
    return None


def reverses_1d(f: Series1, h: Series1) -> bool:
    """Does h reverse f, i.e. f o h o f = h exactly at the truncation."""
    return f.compose(h.compose(f)) == h


def is_reversible_1d(f: Series1) -> Certificate:
    """Decide reversibility of a one-variable map, with witness.

    The verdict follows the residue classification: linear maps need
    c1 = +-1; tangent-to-identity maps need c = (k+1)/2; maps with
    c1 = -1 must be involutions or have squares with invariants
    (k even, (k+1)/2).  Witnesses are verified by composition before
    being returned; when the field lacks the rotation needed for a
    witness the verdict stands and a note records the gap.
    """
    spec, n = f.spec, f.trunc
    if f.coeffs[0]:
        raise BadShape("maps must vanish at the origin")
    t = Series1.identity(spec, n)
    c1 = f.coeffs[1]
    notes: list[str] = []

    if not any(f.coeffs[2:]):  # linear at truncation
        if c1 == 1 or c1 == -1:
            return Certificate(True, n, witness=t, notes=["linear, c1 = +-1"])
        return Certificate(False, n, notes=["linear with c1 != +-1"])

    if c1 == 1:
        if 2 * (f - t).order() - 1 > n:
            raise TruncationTooLow("cannot read the residual coefficient")
        try:
            k, c = residue_invariants(f)
        except TruncationTooLow:
            raise
        half = spec.scalar(mpq(k + 1, 2))
        if c != half:
            return Certificate(
                False, n, notes=[f"invariants k={k}, c != (k+1)/2"]
            )
        witness = None
        omega = _omega_for(spec, k)
        if omega is None:
            notes.append("no omega with omega^k = -1 in the field")
        else:
            try:
                target = parabolic_flow(spec, n, k, f.coeffs[k + 1])
                w = conjugate_to(f, target)
                cand = w.compose((t * omega).compose(w.comp_inverse()))
                if reverses_1d(f, cand):
                    witness = cand
                else:  # pragma: no cover - construction is exact
                    notes.append("witness construction failed verification")
            except RootNotInField:
                notes.append("witness needs a k-th root missing from the field")
        return Certificate(True, n, witness=witness, notes=notes)

    if c1 == -1:
        square = f.compose(f)
        if square == t:
            return Certificate(True, n, witness=t, notes=["involution"])
        k, c = residue_invariants(square)
        half = spec.scalar(mpq(k + 1, 2))
        if k % 2 != 0 or c != half:
            return Certificate(
                False,
                n,
                notes=[f"square has invariants k={k}, parity/residue rule out"],
            )
        witness = None
        omega = _omega_for(spec, k)
        if omega is None:
            notes.append("no omega with omega^k = -1 in the field")
        else:
            witness = _mu_minus_witness(f, square, k, omega, notes)
        return Certificate(True, n, witness=witness, notes=notes)

    # nonlinear with c1 not +-1: linear part obstructs reversibility
    return Certificate(False, n, notes=["nonlinear with c1 != +-1"])


def _mu_minus_witness(f, square, k, omega, notes):
    # Split f = iota' o half with half the canonical square root of f o f,
    # straighten iota' to -t by averaging, then rotate in that frame.
    spec, n = f.spec, f.trunc
    t = Series1.identity(spec, n)
    try:
        half = flow(generator(square), mpq(1, 2))
        iota = f.compose(half.comp_inverse())
        if iota.compose(iota) != t:
            notes.append("square-root frame failed; no witness constructed")
            return None
        H = linearize_finite_order(iota, 2)
        v = H.comp_inverse()
        h_frame = conjugate(half, v)
        target = parabolic_flow(spec, n, k, h_frame.coeffs[k + 1])
        chi = conjugate_to(h_frame, target)
        frame = v.compose(chi)
        cand = frame.compose((t * omega).compose(frame.comp_inverse()))
        if reverses_1d(f, cand):
            return cand
        notes.append("rotation witness failed verification")
        return None
    except (RootNotInField, NotReversibleClass):
        notes.append("witness needs roots missing from the field")
        return None
