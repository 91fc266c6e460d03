"""Exact coefficient arithmetic: rationals, weighted polynomials, fractions.

Everything here is exact; floats never appear.  The scalar type is
``fractions.Fraction`` (aliased ``Rational``), which is always stored in
canonical form (positive denominator, reduced).

A ``MultiPoly`` is a sparse multivariate polynomial over ``Rational``:

    terms = {exponent_tuple: Fraction, ...}     # no zero coefficients

Each variable of the ambient ``PolyRing`` carries a fixed even weight
(possibly 0), and the weighted degree of a monomial is the dot product of
its exponent vector with the weight vector.  Weight-0 variables are exempt
from weighted truncation.

The canonical monomial order is graded lexicographic on (weighted degree,
exponent vector).  String output lists terms in descending order of that
grading, which makes the serialization of equal polynomials byte-identical.

A ``RatFrac`` is a quotient of two ``MultiPoly`` values.  Equality is
decided by cross-multiplication, so fractions need not be kept reduced;
``reduced()`` produces the canonical representative (gcd removed, integer
primitive denominator with positive leading coefficient).
"""

from __future__ import annotations

from fractions import Fraction

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _as_rational(value) -> Fraction:
    """Coerce an int/Fraction scalar, rejecting floats (exactness contract)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"not an exact scalar: {value!r}")


class PolyRing:
    """An ordered list of named variables, each with a fixed even weight >= 0."""

    __slots__ = ("names", "weights", "_pos")

    def __init__(self, names, weights):
        names = tuple(names)
        weights = tuple(int(w) for w in weights)
        if len(names) != len(weights):
            raise ValueError("names and weights differ in length")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names: {names}")
        for w in weights:
            if w < 0 or w % 2:
                raise ValueError(f"weights must be even and >= 0, got {w}")
        self.names = names
        self.weights = weights
        self._pos = {n: i for i, n in enumerate(names)}

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.names == other.names
                and self.weights == other.weights)

    def __hash__(self):
        return hash((self.names, self.weights))

    def __repr__(self):
        vs = ", ".join(f"{n}:{w}" for n, w in zip(self.names, self.weights))
        return f"PolyRing({vs})"

    @property
    def nvars(self) -> int:
        return len(self.names)

    def position(self, name: str) -> int:
        try:
            return self._pos[name]
        except KeyError:
            raise KeyError(f"no variable {name!r} in {self!r}") from None

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return self.const(1)

    def const(self, c) -> "MultiPoly":
        c = _as_rational(c)
        if not c:
            return MultiPoly(self, {})
        return MultiPoly(self, {(0,) * self.nvars: c})

    def var(self, name: str) -> "MultiPoly":
        exps = [0] * self.nvars
        exps[self.position(name)] = 1
        return MultiPoly(self, {tuple(exps): _ONE})

    def gens(self):
        return [self.var(n) for n in self.names]

    def monomial(self, exps, coeff=1) -> "MultiPoly":
        exps = tuple(int(e) for e in exps)
        if len(exps) != self.nvars:
            raise ValueError("exponent arity mismatch")
        c = _as_rational(coeff)
        return MultiPoly(self, {exps: c} if c else {})

    def weight_of(self, exps) -> int:
        return sum(e * w for e, w in zip(exps, self.weights))


class MultiPoly:
    """Sparse weighted multivariate polynomial over Rational.  Immutable."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms  # callers guarantee canonical form (no zeros)

    # -- constructors / predicates ------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1
                                  and not any(next(iter(self.terms))))

    def constant(self) -> Fraction:
        """The coefficient of the unit monomial."""
        return self.terms.get((0,) * self.ring.nvars, _ZERO)

    # -- degrees -------------------------------------------------------

    def weighted_degrees(self):
        """(min, max) weighted degree over stored terms; (0, 0) for zero."""
        if not self.terms:
            return (0, 0)
        ws = [self.ring.weight_of(e) for e in self.terms]
        return (min(ws), max(ws))

    def max_weighted_degree(self) -> int:
        return self.weighted_degrees()[1]

    def min_weighted_degree(self) -> int:
        return self.weighted_degrees()[0]

    def is_homogeneous(self, weight=None) -> bool:
        """True if all terms share one weighted degree (zero is homogeneous)."""
        if not self.terms:
            return True
        lo, hi = self.weighted_degrees()
        if lo != hi:
            return False
        return weight is None or lo == weight

    def degree_in(self, name: str) -> int:
        pos = self.ring.position(name)
        return max((e[pos] for e in self.terms), default=0)

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for exps, c in other.terms.items():
            s = out.get(exps, _ZERO) + c
            if s:
                out[exps] = s
            else:
                out.pop(exps, None)
        return MultiPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = _as_rational(other)
            if not c:
                return self.ring.zero()
            if c == 1:
                return self
            return MultiPoly(self.ring,
                             {e: v * c for e, v in self.terms.items()})
        if other.ring != self.ring:
            raise ValueError("polynomials from different rings")
        return self.mul_truncated(other, None)

    __rmul__ = __mul__

    def mul_truncated(self, other: "MultiPoly", max_weight) -> "MultiPoly":
        """Product, discarding terms of weighted degree > max_weight."""
        if not self.terms or not other.terms:
            return self.ring.zero()
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        weights = self.ring.weights
        out: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                exps = tuple(x + y for x, y in zip(ea, eb))
                if max_weight is not None:
                    if sum(e * w for e, w in zip(exps, weights)) > max_weight:
                        continue
                s = out.get(exps, _ZERO) + ca * cb
                if s:
                    out[exps] = s
                else:
                    del out[exps]
        return MultiPoly(self.ring, out)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __truediv__(self, other):
        c = _as_rational(other)
        return self * (1 / c)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == self.ring.const(other).terms
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- structure operations -------------------------------------------

    def truncate_weighted(self, max_weight: int) -> "MultiPoly":
        """Drop all terms of weighted degree > max_weight (idempotent)."""
        if max_weight < 0:
            return self.ring.zero()
        wof = self.ring.weight_of
        kept = {e: c for e, c in self.terms.items() if wof(e) <= max_weight}
        if len(kept) == len(self.terms):
            return self
        return MultiPoly(self.ring, kept)

    def homogeneous_component(self, weight: int) -> "MultiPoly":
        wof = self.ring.weight_of
        return MultiPoly(self.ring, {e: c for e, c in self.terms.items()
                                     if wof(e) == weight})

    def coefficient_in(self, name: str, power: int) -> "MultiPoly":
        """Coefficient of name**power, as a polynomial in the same ring."""
        pos = self.ring.position(name)
        out = {}
        for e, c in self.terms.items():
            if e[pos] == power:
                reduced = list(e)
                reduced[pos] = 0
                out[tuple(reduced)] = c
        return MultiPoly(self.ring, out)

    def substitute(self, mapping: dict, target: PolyRing) -> "MultiPoly":
        """Map variables into `target`: named entries of `mapping` may be
        scalars or target-ring polynomials; other variables that actually
        occur must exist in the target ring under the same name."""
        images: dict = {}

        def image_of(i: int) -> "MultiPoly":
            img = images.get(i)
            if img is None:
                name = self.ring.names[i]
                if name in mapping:
                    img = mapping[name]
                    if not isinstance(img, MultiPoly):
                        img = target.const(img)
                    elif img.ring != target:
                        raise ValueError("substitution image in wrong ring")
                else:
                    img = target.var(name)
                images[i] = img
            return img

        result = target.zero()
        power_cache: dict = {}
        for exps, c in self.terms.items():
            term = target.const(c)
            for i, e in enumerate(exps):
                if e:
                    pw = power_cache.get((i, e))
                    if pw is None:
                        pw = image_of(i) ** e
                        power_cache[(i, e)] = pw
                    term = term * pw
            result = result + term
        return result

    def embed(self, target: PolyRing) -> "MultiPoly":
        """Reinterpret in a larger ring containing the same variable names."""
        positions = [target.position(n) for n in self.ring.names]
        out = {}
        for exps, c in self.terms.items():
            new = [0] * target.nvars
            for pos, e in zip(positions, exps):
                new[pos] = e
            out[tuple(new)] = c
        return MultiPoly(target, out)

    def map_coefficients(self, fn) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            v = fn(c)
            if v:
                out[e] = v
        return MultiPoly(self.ring, out)

    # -- ordering and display -------------------------------------------

    def _sort_key(self, exps):
        return (self.ring.weight_of(exps), exps)

    def sorted_terms(self):
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(),
                      key=lambda item: self._sort_key(item[0]), reverse=True)

    def leading(self):
        """(exponents, coefficient) of the graded-lex leading term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exps = max(self.terms, key=self._sort_key)
        return exps, self.terms[exps]

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for exps, c in self.sorted_terms():
            mono = "*".join(
                n if e == 1 else f"{n}^{e}"
                for n, e in zip(self.ring.names, exps) if e)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            if not pieces:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self):
        return f"<MultiPoly {self}>"


# -- exact division and gcd ----------------------------------------------

def exact_div(num: MultiPoly, den: MultiPoly) -> MultiPoly:
    """Exact polynomial quotient num/den; raises if the division is inexact."""
    if den.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if den.is_constant():
        return num / den.constant()
    ring = num.ring
    quotient = ring.zero()
    rem = num
    den_exps, den_coeff = den.leading()
    while not rem.is_zero():
        r_exps, r_coeff = rem.leading()
        q_exps = tuple(a - b for a, b in zip(r_exps, den_exps))
        if any(e < 0 for e in q_exps):
            raise ValueError("inexact polynomial division")
        t = ring.monomial(q_exps, r_coeff / den_coeff)
        quotient = quotient + t
        rem = rem - t * den
    return quotient


def _int_normalize(p: MultiPoly) -> MultiPoly:
    """Scale to integer coefficients with content 1 and positive leading
    coefficient."""
    if p.is_zero():
        return p
    from math import gcd, lcm
    denoms = lcm(*[c.denominator for c in p.terms.values()])
    content = 0
    for c in p.terms.values():
        content = gcd(content, (c * denoms).numerator)
    factor = Fraction(denoms, content)
    if p.leading()[1] < 0:
        factor = -factor
    return p * factor


def _active_vars(p: MultiPoly):
    used = set()
    for exps in p.terms:
        for i, e in enumerate(exps):
            if e:
                used.add(i)
    return used


def _as_univariate(p: MultiPoly, pos: int):
    """Dense coefficient list in variable `pos`, entries in the full ring."""
    deg = max(e[pos] for e in p.terms)
    coeffs = [dict() for _ in range(deg + 1)]
    for exps, c in p.terms.items():
        stripped = list(exps)
        k = stripped[pos]
        stripped[pos] = 0
        coeffs[k][tuple(stripped)] = c
    return [MultiPoly(p.ring, d) for d in coeffs]


def _from_univariate(coeffs, pos: int, ring: PolyRing) -> MultiPoly:
    out = {}
    for k, c in enumerate(coeffs):
        for exps, v in c.terms.items():
            lifted = list(exps)
            lifted[pos] = k
            out[tuple(lifted)] = v
    return MultiPoly(ring, out)


def _pseudo_rem(a, b):
    """Pseudo-remainder of a by b, both dense coefficient lists (same var)."""
    db = len(b) - 1
    lead = b[db]
    r = list(a)
    while r and len(r) - 1 >= db:
        dr = len(r) - 1
        top = r[dr]
        r = [lead * ri for ri in r]
        for j in range(db + 1):
            r[dr - db + j] = r[dr - db + j] - top * b[j]
        r.pop()  # leading entry cancels by construction
        while r and r[-1].is_zero():
            r.pop()
    return r


def _make_primitive(coeffs):
    """Divide a dense coefficient list by the gcd of its entries."""
    cont = _gcd_list([c for c in coeffs if not c.is_zero()])
    if cont.is_constant():
        c = cont.constant()
        return [p / c for p in coeffs] if c != 1 else coeffs
    return [exact_div(p, cont) if not p.is_zero() else p for p in coeffs]


def _monomial_content(p: MultiPoly):
    """Componentwise minimum exponent vector over all terms."""
    it = iter(p.terms)
    mins = list(next(it))
    for exps in it:
        for i, e in enumerate(exps):
            if e < mins[i]:
                mins[i] = e
    return tuple(mins)


def _strip_monomial(p: MultiPoly, mono):
    if not any(mono):
        return p
    out = {tuple(e -m for e, m in zip(exps, mono)): c
           for exps, c in p.terms.items()}
    return MultiPoly(p.ring, out)


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Gcd over Q[vars], normalized integer-primitive with positive lead.

    Recursive: common monomial factors are stripped first, then content
    extraction in the last active variable and a primitive pseudo-remainder
    sequence for the univariate step.
    """
    if a.ring != b.ring:
        raise ValueError("polynomials from different rings")
    ring = a.ring
    if a.is_zero():
        return _int_normalize(b)
    if b.is_zero():
        return _int_normalize(a)
    if a.is_constant() or b.is_constant():
        return ring.one()
    if a.terms == b.terms:
        return _int_normalize(a)
    mono_a = _monomial_content(a)
    mono_b = _monomial_content(b)
    common = tuple(min(x, y) for x, y in zip(mono_a, mono_b))
    if any(mono_a) or any(mono_b):
        a = _strip_monomial(a, mono_a)
        b = _strip_monomial(b, mono_b)
        shared = ring.monomial(common) if any(common) else None
        g = poly_gcd(a, b)
        return g * shared if shared is not None else g
    active = _active_vars(a) | _active_vars(b)
    if not active:
        return ring.one()
    pos = max(active)

    ua, ub = _as_univariate(a, pos), _as_univariate(b, pos)
    cont_a = _gcd_list([c for c in ua if not c.is_zero()])
    cont_b = _gcd_list([c for c in ub if not c.is_zero()])
    pa = [exact_div(c, cont_a) if not c.is_zero() else c for c in ua]
    pb = [exact_div(c, cont_b) if not c.is_zero() else c for c in ub]
    cont = poly_gcd(cont_a, cont_b)

    if len(pa) < len(pb):
        pa, pb = pb, pa
    while True:
        r = _pseudo_rem(pa, pb)
        if not r:
            g = _from_univariate(pb, pos, ring)
            break
        if len(r) == 1:
            # primitive parts are coprime in the main variable
            return _int_normalize(cont)
        pa, pb = pb, _make_primitive(r)
    g_coeffs = _make_primitive(_as_univariate(g, pos))
    g = _from_univariate(g_coeffs, pos, ring)
    return _int_normalize(cont * g)


def _gcd_list(polys) -> MultiPoly:
    if not polys:
        raise ValueError("gcd of empty list")
    g = polys[0]
    if g.is_constant():
        return g.ring.one()
    if len(polys) == 1:
        return _int_normalize(g)
    for p in polys[1:]:
        g = poly_gcd(g, p)
        if g.is_constant():
            return g.ring.one()
    return g


class RatFrac:
    """A fraction of two MultiPoly values.  Lazily reduced.

    Arithmetic does not call gcd; equality is decided by cross-multiplication,
    which is valid because the polynomial ring is an integral domain.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly = None):
        if den is None:
            den = num.ring.one()
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.ring != den.ring:
            raise ValueError("numerator and denominator rings differ")
        self.num = num
        self.den = den

    @classmethod
    def from_scalar(cls, ring: PolyRing, c) -> "RatFrac":
        return cls(ring.const(c), ring.one())

    @property
    def ring(self) -> PolyRing:
        return self.num.ring

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _coerce(self, other) -> "RatFrac":
        if isinstance(other, RatFrac):
            return other
        if isinstance(other, MultiPoly):
            return RatFrac(other)
        return RatFrac.from_scalar(self.ring, other)

    def __add__(self, other):
        other = self._coerce(other)
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        if self.den == other.den:
            return RatFrac(self.num + other.num, self.den)
        if self.den.is_constant() or other.den.is_constant():
            return RatFrac(self.num * other.den + other.num * self.den,
                           self.den * other.den)
        # add over the lcm of the denominators to keep them from snowballing
        g = poly_gcd(self.den, other.den)
        if g.is_constant():
            return RatFrac(self.num * other.den + other.num * self.den,
                           self.den * other.den)
        d2 = exact_div(other.den, g)
        d1 = exact_div(self.den, g)
        return RatFrac(self.num * d2 + other.num * d1, self.den * d2)

    __radd__ = __add__

    def __neg__(self):
        return RatFrac(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        if self.num.is_zero() or other.num.is_zero():
            return RatFrac(self.ring.zero(), self.ring.one())
        if self.num == other.den:
            return RatFrac(other.num, self.den)
        if other.num == self.den:
            return RatFrac(self.num, other.den)
        num1, den1, num2, den2 = self.num, self.den, other.num, other.den
        if not num1.is_constant() and not den2.is_constant():
            g = poly_gcd(num1, den2)
            if not g.is_constant():
                num1 = exact_div(num1, g)
                den2 = exact_div(den2, g)
        if not num2.is_constant() and not den1.is_constant():
            g = poly_gcd(num2, den1)
            if not g.is_constant():
                num2 = exact_div(num2, g)
                den1 = exact_div(den1, g)
        return RatFrac(num1 * num2, den1 * den2)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero fraction")
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def inverse(self) -> "RatFrac":
        if self.is_zero():
            raise ZeroDivisionError("inverting zero fraction")
        return RatFrac(self.den, self.num)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFrac(self.num ** n, self.den ** n)

    def __eq__(self, other):
        if isinstance(other, (RatFrac, MultiPoly, int, Fraction)):
            other = self._coerce(other)
            return self.num * other.den == other.num * self.den
        return NotImplemented

    def __bool__(self):
        return not self.num.is_zero()

    def reduced(self) -> "RatFrac":
        """Canonical representative: gcd removed, denominator made integer
        primitive with positive leading coefficient."""
        if self.num.is_zero():
            return RatFrac(self.ring.zero(), self.ring.one())
        num, den = self.num, self.den
        if not den.is_constant():
            g = poly_gcd(num, den)
            if not g.is_constant():
                num = exact_div(num, g)
                den = exact_div(den, g)
        if den.is_constant():
            return RatFrac(num / den.constant(), self.ring.one())
        canon = _int_normalize(den)
        scale = exact_div(canon, den) if canon != den else None
        if scale is not None:
            num = num * scale.constant()
            den = canon
        return RatFrac(num, den)

    def substitute(self, mapping: dict, target: PolyRing) -> "RatFrac":
        num = self.num.substitute(mapping, target)
        den = self.den.substitute(mapping, target)
        if den.is_zero():
            raise ZeroDivisionError("substitution sends denominator to zero")
        return RatFrac(num, den)

    def as_poly(self) -> MultiPoly:
        """The underlying polynomial, when the reduced denominator is 1."""
        red = self.reduced()
        if not red.den.is_constant() or red.den.constant() != 1:
            raise ValueError(f"{self} is not polynomial")
        return red.num

    def __str__(self):
        red = self.reduced()
        if red.den.is_constant() and red.den.constant() == 1:
            return str(red.num)
        return f"({red.num})/({red.den})"

    def __repr__(self):
        return f"<RatFrac {self}>"
