"""Truncated univariate power series over an exact Q-algebra.

A ``Series`` holds coefficients c0..cN (N = truncation order, inclusive) in
some coefficient domain.  Domains are small descriptor objects that know how
to mint 0 and 1, coerce rationals, invert units, and (optionally) normalize
elements after arithmetic; the elements themselves carry the ring operations
through the usual operators.  Binary operations truncate to the smaller of
the two orders, so a result never pretends to know more coefficients than
its inputs justify.
"""

from __future__ import annotations

from fractions import Fraction

from .rings import MultiPoly, PolyRing, RatFrac, Rational, _as_rational


class Domain:
    """Base coefficient-domain descriptor."""

    graded = False

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def from_rational(self, c):
        raise NotImplementedError

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return self.from_rational(_as_rational(x))
        return x

    def inv(self, x):
        raise NotImplementedError

    def normalize(self, x):
        return x

    def is_zero(self, x) -> bool:
        return not x


class RationalDomain(Domain):
    """Plain rational scalars."""

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_rational(self, c):
        return _as_rational(c)

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverting zero")
        return 1 / x

    def __eq__(self, other):
        return isinstance(other, RationalDomain)

    def __hash__(self):
        return hash(RationalDomain)

    def __repr__(self):
        return "QQ"


class PolyDomain(Domain):
    """Polynomials over a fixed weighted ring; only constants are units."""

    graded = True

    def __init__(self, ring: PolyRing):
        self.ring = ring

    def zero(self):
        return self.ring.zero()

    def one(self):
        return self.ring.one()

    def from_rational(self, c):
        return self.ring.const(c)

    def inv(self, x):
        if not isinstance(x, MultiPoly) or not x.is_constant():
            raise ZeroDivisionError(f"{x!r} is not a unit in {self.ring!r}")
        c = x.constant()
        if not c:
            raise ZeroDivisionError("inverting zero")
        return self.ring.const(1 / c)

    def __eq__(self, other):
        return isinstance(other, PolyDomain) and self.ring == other.ring

    def __hash__(self):
        return hash((PolyDomain, self.ring))

    def __repr__(self):
        return f"PolyDomain({self.ring!r})"


class FractionDomain(Domain):
    """Fractions of polynomials.  Elements are reduced after every series
    coefficient is produced, which keeps the gcd calls on small inputs."""

    def __init__(self, ring: PolyRing):
        self.ring = ring

    def zero(self):
        return RatFrac(self.ring.zero())

    def one(self):
        return RatFrac(self.ring.one())

    def from_rational(self, c):
        return RatFrac.from_scalar(self.ring, c)

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return self.from_rational(x)
        if isinstance(x, MultiPoly):
            return RatFrac(x)
        return x

    def inv(self, x):
        return x.inverse()

    def normalize(self, x):
        return x.reduced()

    def is_zero(self, x) -> bool:
        return x.is_zero()

    def __eq__(self, other):
        return isinstance(other, FractionDomain) and self.ring == other.ring

    def __hash__(self):
        return hash((FractionDomain, self.ring))

    def __repr__(self):
        return f"FractionDomain({self.ring!r})"


class Series:
    """Power series truncated at x**order (inclusive)."""

    __slots__ = ("domain", "coeffs", "order")

    def __init__(self, domain: Domain, coeffs, order: int = None):
        coeffs = [domain.coerce(c) for c in coeffs]
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("order must be >= 0")
        if len(coeffs) < order + 1:
            coeffs = coeffs + [domain.zero()] * (order + 1 - len(coeffs))
        else:
            coeffs = coeffs[:order + 1]
        self.domain = domain
        self.coeffs = coeffs
        self.order = order

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, domain, order):
        return cls(domain, [], order)

    @classmethod
    def one(cls, domain, order):
        return cls(domain, [domain.one()], order)

    @classmethod
    def identity(cls, domain, order):
        """The series x."""
        return cls(domain, [domain.zero(), domain.one()], order)

    @classmethod
    def exponential(cls, domain, order, scale=1):
        """exp(scale * x), scale a rational."""
        scale = _as_rational(scale)
        c, fact = [], Fraction(1)
        for n in range(order + 1):
            c.append(domain.from_rational(scale ** n / fact))
            fact *= n + 1
        return cls(domain, c, order)

    # -- basics -----------------------------------------------------------

    def __getitem__(self, n: int):
        if n < 0:
            raise IndexError("negative series index")
        if n > self.order:
            raise IndexError(f"coefficient {n} beyond truncation {self.order}")
        return self.coeffs[n]

    def is_zero(self) -> bool:
        return all(self.domain.is_zero(c) for c in self.coeffs)

    def valuation(self):
        """Index of the first nonzero coefficient (None for the zero series)."""
        for i, c in enumerate(self.coeffs):
            if not self.domain.is_zero(c):
                return i
        return None

    def truncate(self, order: int) -> "Series":
        if order >= self.order:
            return self
        return Series(self.domain, self.coeffs[:order + 1], order)

    def __eq__(self, other):
        if not isinstance(other, Series) or self.domain != other.domain:
            return NotImplemented
        n = min(self.order, other.order)
        return all(self.coeffs[i] == other.coeffs[i] for i in range(n + 1))

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:6])
        more = " ..." if self.order > 5 else ""
        return f"<Series [{shown}{more}] order={self.order}>"

    # -- linear structure ------------------------------------------------

    def _align(self, other):
        if not isinstance(other, Series):
            other = Series(self.domain, [self.domain.coerce(other)], self.order)
        elif other.domain != self.domain:
            raise ValueError("series over different domains")
        n = min(self.order, other.order)
        return other, n

    def __add__(self, other):
        other, n = self._align(other)
        return Series(self.domain,
                      [self.coeffs[i] + other.coeffs[i] for i in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return Series(self.domain, [-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        other, n = self._align(other)
        return Series(self.domain,
                      [self.coeffs[i] - other.coeffs[i] for i in range(n + 1)], n)

    def __rsub__(self, other):
        return -(self - other)

    def scale(self, c) -> "Series":
        c = self.domain.coerce(c)
        return Series(self.domain, [x * c for x in self.coeffs], self.order)

    def __mul__(self, other):
        if not isinstance(other, Series):
            return self.scale(other)
        other, n = self._align(other)
        dom = self.domain
        zero = dom.zero()
        out = [zero] * (n + 1)
        for i, a in enumerate(self.coeffs[:n + 1]):
            if dom.is_zero(a):
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if not dom.is_zero(b):
                    out[i + j] = out[i + j] + a * b
        return Series(dom, [dom.normalize(c) for c in out], n)

    __rmul__ = __mul__

    def shift(self, k: int) -> "Series":
        """Multiply by x**k (k may be negative if the valuation allows)."""
        if k >= 0:
            return Series(self.domain,
                          [self.domain.zero()] * k + self.coeffs, self.order + k)
        if any(not self.domain.is_zero(c) for c in self.coeffs[:-k]):
            raise ValueError("shift below valuation")
        return Series(self.domain, self.coeffs[-k:], self.order + k)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative series power")
        result = Series.one(self.domain, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- analytic toolbox ---------------------------------------------------

    def inverse(self) -> "Series":
        """Multiplicative inverse; requires an invertible constant term."""
        dom = self.domain
        c0 = dom.inv(self.coeffs[0])
        out = [c0]
        for n in range(1, self.order + 1):
            acc = dom.zero()
            for k in range(1, n + 1):
                a = self.coeffs[k]
                if not dom.is_zero(a):
                    acc = acc + a * out[n - k]
            out.append(dom.normalize(-(c0 * acc)))
        return Series(dom, out, self.order)

    def sqrt(self) -> "Series":
        """Square root with constant term 1."""
        dom = self.domain
        if self.coeffs[0] != dom.one():
            raise ValueError("sqrt requires constant term 1")
        half = Fraction(1, 2)
        out = [dom.one()]
        for n in range(1, self.order + 1):
            acc = self.coeffs[n]
            for k in range(1, n):
                acc = acc - out[k] * out[n - k]
            out.append(dom.normalize(acc * dom.from_rational(half)))
        return Series(dom, out, self.order)

    def derive(self) -> "Series":
        dom = self.domain
        out = [self.coeffs[k] * dom.from_rational(k)
               for k in range(1, self.order + 1)]
        return Series(dom, out, max(self.order - 1, 0))

    def integrate(self) -> "Series":
        """Antiderivative vanishing at 0; gains one order."""
        dom = self.domain
        out = [dom.zero()]
        for k, c in enumerate(self.coeffs):
            out.append(c * dom.from_rational(Fraction(1, k + 1)))
        return Series(dom, out, self.order + 1)

    def exp(self) -> "Series":
        """exp of a series with constant term 0."""
        dom = self.domain
        if not dom.is_zero(self.coeffs[0]):
            raise ValueError("exp requires constant term 0")
        out = [dom.one()]
        for n in range(1, self.order + 1):
            acc = dom.zero()
            for k in range(1, n + 1):
                a = self.coeffs[k]
                if not dom.is_zero(a):
                    acc = acc + a * out[n - k] * dom.from_rational(k)
            out.append(dom.normalize(acc * dom.from_rational(Fraction(1, n))))
        return Series(dom, out, self.order)

    def log(self) -> "Series":
        """log of a series with constant term 1."""
        dom = self.domain
        if self.coeffs[0] != dom.one():
            raise ValueError("log requires constant term 1")
        return (self.derive() * self.inverse().truncate(
            max(self.order - 1, 0))).integrate().truncate(self.order)

    def compose(self, inner: "Series") -> "Series":
        """self(inner); inner must have zero constant term."""
        dom = self.domain
        if not dom.is_zero(inner.coeffs[0]):
            raise ValueError("composition requires inner constant term 0")
        n = min(self.order, inner.order)
        result = Series(dom, [self.coeffs[n]], n)
        for k in range(n - 1, -1, -1):
            result = result * inner.truncate(n) + Series(dom, [self.coeffs[k]], n)
        return result

    def reversion(self) -> "Series":
        """Compositional inverse of g = x + O(x^2), via Lagrange inversion:
        the n-th coefficient is [x^(n-1)] (x/g)^n / n."""
        dom = self.domain
        if not dom.is_zero(self.coeffs[0]) or self.coeffs[1] != dom.one():
            raise ValueError("reversion requires g = x + O(x^2)")
        n = self.order
        unit = Series(dom, self.coeffs[1:], n - 1) if n >= 1 else None
        u = unit.inverse()  # x/g as a series with constant term 1
        out = [dom.zero(), dom.one()]
        power = u
        for k in range(2, n + 1):
            power = power * u
            out.append(dom.normalize(
                power[k - 1] * dom.from_rational(Fraction(1, k))))
        return Series(dom, out, n)


def quartic_flow_series(coeffs, order: int, domain: Domain) -> Series:
    """Solve (x*u' - u)^2 = u^4 + c1*u^3*x + c2*u^2*x^2 + c3*u*x^3 + c4*x^4
    for u = 1 + O(x), coefficient by coefficient.

    This is the regularized form (u = x*h) of the quartic differential
    equation h'(x)^2 = h^4 + c1*h^3 + c2*h^2 + c3*h + c4 for a function with
    a simple pole of residue 1 at the origin.  The x^n coefficient enters
    the defining relation with the factor -(2n + 2), so the recursion never
    divides by zero over a Q-algebra.
    """
    c1, c2, c3, c4 = (domain.coerce(c) for c in coeffs)
    u = [domain.one()] + [domain.zero()] * order

    def residual_at(n):
        # coefficient of x^n in u^4 + sum_i ci u^(4-i) x^i - (x u' - u)^2,
        # with the current (partial) u
        cur = Series(domain, u[:n + 1], n)
        u2 = cur * cur
        u3 = u2 * cur
        rhs = u2 * u2
        rhs = rhs + Series(domain, [domain.zero()] + u3.coeffs, n).scale(c1)
        rhs = rhs + Series(domain, [domain.zero()] * 2 + u2.coeffs, n).scale(c2)
        rhs = rhs + Series(domain, [domain.zero()] * 3 + cur.coeffs, n).scale(c3)
        rhs = rhs + Series(domain, [domain.zero()] * 4 + [c4], n)
        lhs_lin = Series(domain, [u[k] * domain.from_rational(k - 1)
                                  for k in range(n + 1)], n)
        lhs = lhs_lin * lhs_lin
        return (rhs - lhs)[n]

    # the unknown u_n enters the x^n residual with the factor 2n + 2
    for n in range(1, order + 1):
        d = residual_at(n)
        u[n] = domain.normalize(-d * domain.from_rational(Fraction(1, 2 * n + 2)))
    return Series(domain, u, order)


def char_series_from_flow_ode(coeffs, order: int, domain: Domain) -> Series:
    """Characteristic series x*h(x) for the genus whose r = -h'/h solves the
    quartic equation r'^2 = r^4 + c1 r^3 + c2 r^2 + c3 r + c4.

    With v = x*r = 1 + O(x) from the same recursion as quartic_flow_series,
    log h = -log x - integral of (r - 1/x), so x*h = exp(-sum v_n x^n / n).
    """
    v = quartic_flow_series(coeffs, order, domain)
    integrated = [domain.zero()]
    for n in range(1, order + 1):
        integrated.append(v[n] * domain.from_rational(Fraction(1, n)))
    return (-Series(domain, integrated, order)).exp()
