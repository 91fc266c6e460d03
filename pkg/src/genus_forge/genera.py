"""Concrete genera: psi, chi_y, Krichever-Hoehn, Ochanine, degenerate psi.

Builders return fully populated Genus objects over the appropriate exact
coefficient ring:

  psi       over Q[q1,q2,q3,q4]      (weights 2,4,6,8), logarithm
            integral of (1 + q1 t + q2 t^2 + q3 t^3 + q4 t^4)^(-1/2)
  chi_y     over Q[y,t]              (weights 0,2)
  kh        over Q[p1,p2,p3,p4]      (weights 2,4,6,8), from the quartic
            flow equation on r = -h'/h
  ochanine  over Q[delta,epsilon]    (weights 4,8), odd logarithm
  psi_deg   over Q(s,y)[t]           (the q -> 0 limit of the q-expansion)
  ahat      over Q                   (psi_deg at s=-1, y=0, t=1/4)

The chi_y and psi_deg characteristic series carry the grading variable t
inside: the coefficient of x^k is multiplied by t^k, so that a manifold of
complex dimension n picks up the factor t^n.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .genus import Genus, genus_from_char, genus_from_log
from .rings import MultiPoly, PolyRing, RatFrac, exact_div
from .series import (Domain, FractionDomain, PolyDomain, RationalDomain,
                     Series, char_series_from_flow_ode, quartic_flow_series)

PSI_RING = PolyRing(["q1", "q2", "q3", "q4"], [2, 4, 6, 8])
KH_RING = PolyRing(["p1", "p2", "p3", "p4"], [2, 4, 6, 8])
CHI_Y_RING = PolyRing(["y", "t"], [0, 2])
OCH_RING = PolyRing(["delta", "epsilon"], [4, 8])
DEG_RING = PolyRing(["s", "y", "t"], [0, 0, 2])
SY_RING = PolyRing(["s", "y"], [0, 0])


def _twist_by(char: Series, tvar: MultiPoly) -> Series:
    """Multiply the x^k coefficient by t^k (the external grading variable)."""
    dom = char.domain
    out = []
    power = dom.one()
    for k in range(char.order + 1):
        if k:
            power = power * dom.coerce(tvar)
        out.append(char[k] * power)
    return Series(dom, out, char.order)


@lru_cache(maxsize=None)
def build_psi(order: int = 12) -> Genus:
    """The elliptic genus with logarithm
    integral_0^y dt / sqrt(1 + q1 t + q2 t^2 + q3 t^3 + q4 t^4)."""
    if order < 2:
        raise ValueError("order must be >= 2")
    dom = PolyDomain(PSI_RING)
    q1, q2, q3, q4 = PSI_RING.gens()
    radicand = Series(dom, [PSI_RING.one(), q1, q2, q3, q4], order)
    integrand = radicand.sqrt().inverse()
    g = integrand.integrate().truncate(order)
    return genus_from_log("psi", dom, g)


def psi_ode_char(order: int = 12) -> Series:
    """Independent construction of the psi characteristic series from the
    quartic flow equation (x u' - u)^2 = u^4 + q1 u^3 x + ... + q4 x^4."""
    dom = PolyDomain(PSI_RING)
    return quartic_flow_series(PSI_RING.gens(), order, dom)


@lru_cache(maxsize=None)
def build_kh(order: int = 12) -> Genus:
    """The complex elliptic genus whose r = -h'/h satisfies
    r'^2 = r^4 + p1 r^3 + p2 r^2 + p3 r + p4."""
    if order < 2:
        raise ValueError("order must be >= 2")
    dom = PolyDomain(KH_RING)
    char = char_series_from_flow_ode(KH_RING.gens(), order, dom)
    return genus_from_char("kh", dom, char)


@lru_cache(maxsize=None)
def build_chi_y(order: int = 12) -> Genus:
    """Hirzebruch's chi_y genus, graded into Q[y,t].

    The integrand x (1 + y e^-x) / (1 - e^-x) has constant term 1 + y; the
    normalized characteristic series is obtained by the substitution
    x -> (1+y) x followed by division by (1+y), which leaves the top-degree
    integrand (hence the genus) unchanged.  Both the numerator and the
    denominator are exactly divisible by (1+y) coefficient-wise.
    """
    if order < 2:
        raise ValueError("order must be >= 2")
    dom = PolyDomain(CHI_Y_RING)
    y = CHI_Y_RING.var("y")
    t = CHI_Y_RING.var("t")
    one_plus_y = y + 1
    # e^{-(1+y)x}, one order beyond the target to survive the /x shift
    coeffs, power, fact = [], CHI_Y_RING.one(), 1
    for k in range(order + 2):
        if k:
            power = power * (-one_plus_y)
            fact *= k
        coeffs.append(power / fact)
    ey = Series(dom, coeffs, order + 1)
    numerator = Series(dom, [(CHI_Y_RING.one() + y * c if k == 0 else y * c)
                             for k, c in enumerate(ey.coeffs)], order)
    denominator = Series(dom, [-c for c in ey.coeffs[1:]], order)  # (1-e)/x
    num_red = Series(dom, [exact_div(c, one_plus_y) for c in numerator.coeffs],
                     order)
    den_red = Series(dom, [exact_div(c, one_plus_y) for c in denominator.coeffs],
                     order)
    char = num_red * den_red.inverse()
    return genus_from_char("chi_y", dom, _twist_by(char, t))


@lru_cache(maxsize=None)
def build_ochanine(order: int = 12) -> Genus:
    """The elliptic genus with odd logarithm
    integral_0^y dt / sqrt(1 - 2 delta t^2 + epsilon t^4)."""
    if order < 2:
        raise ValueError("order must be >= 2")
    dom = PolyDomain(OCH_RING)
    delta, eps = OCH_RING.gens()
    radicand = Series(dom, [OCH_RING.one(), OCH_RING.zero(), delta * (-2),
                            OCH_RING.zero(), eps], order)
    g = radicand.sqrt().inverse().integrate().truncate(order)
    return genus_from_log("ochanine", dom, g)


def degenerate_char_series(order: int, with_t: bool = False) -> Series:
    """Characteristic series of the degenerate (q -> 0) genus:

        x * (1 + y e^-x)(1 + (s/y) e^-x)(1 - s)
          / [(1 - e^-x)(1 - s e^-x)(1 + s/y)(1 + y)]

    computed over Q(s,y) after clearing the 1/y factors, with the exponential
    pole (1 - e^-x) divided by x.  If with_t is set the result lives over
    Q(s,y)[t] with the x^k coefficient carrying t^k."""
    ring = DEG_RING if with_t else SY_RING
    dom = FractionDomain(ring)
    s = ring.var("s")
    y = ring.var("y")
    ex = Series.exponential(dom, order + 1, -1)  # e^{-x}
    a = Series.one(dom, order + 1) + ex.scale(y)        # 1 + y e^-x
    b = ex.scale(s) + RatFrac(y)                        # y + s e^-x
    d1 = Series(dom, [-c for c in ex.coeffs[1:]], order)  # (1 - e^-x)/x
    d2 = Series.one(dom, order) - ex.scale(s).truncate(order)
    num = (a * b).truncate(order).scale(RatFrac(ring.one() - s))
    den = (d1 * d2).scale(RatFrac((y + s) * (y + 1)))
    char = num * den.inverse()
    if char[0] != dom.one():
        raise AssertionError("degenerate characteristic series must start at 1")
    if with_t:
        char = _twist_by(char, ring.var("t"))
    return char


@lru_cache(maxsize=None)
def build_degenerate_psi(order: int = 12) -> Genus:
    """The degenerate genus over Q(s,y)[t]; values carry t^dim."""
    if order < 2:
        raise ValueError("order must be >= 2")
    dom = FractionDomain(DEG_RING)
    char = degenerate_char_series(order, with_t=True)
    return genus_from_char("psi_deg", dom, char)


@lru_cache(maxsize=None)
def build_ahat(order: int = 12) -> Genus:
    """The rational genus obtained from the degenerate one at
    s = -1, y = 0, t = 1/4."""
    return specialize(build_degenerate_psi(order),
                      {"s": -1, "y": 0, "t": Fraction(1, 4)},
                      RationalDomain(), name="ahat")


# -- specialization ----------------------------------------------------------


def _weight_ok(source_ring: PolyRing, name: str, image) -> bool:
    w = source_ring.weights[source_ring.position(name)]
    if isinstance(image, MultiPoly):
        return image.is_homogeneous(w)
    return True  # numeric evaluation is always allowed


def _map_scalar(value, mapping: dict, target_domain: Domain):
    """Push one coefficient through the substitution."""
    if isinstance(target_domain, RationalDomain):
        def ev(poly: MultiPoly) -> Fraction:
            total = Fraction(0)
            for exps, c in poly.terms.items():
                term = c
                for name, e in zip(poly.ring.names, exps):
                    if e:
                        term *= Fraction(mapping[name]) ** e
                total += term
            return total

        if isinstance(value, RatFrac):
            den = ev(value.den)
            if not den:
                raise ZeroDivisionError("substitution hits a denominator zero")
            return ev(value.num) / den
        return ev(value)
    tring = target_domain.ring
    if isinstance(value, RatFrac):
        return value.substitute(mapping, tring).reduced()
    out = value.substitute(mapping, tring)
    if isinstance(target_domain, FractionDomain):
        return RatFrac(out)
    return out


def specialize(genus: Genus, substitution: dict, target_domain: Domain = None,
               name: str = None) -> Genus:
    """A new genus with the named coefficient symbols replaced.

    Polynomial images must be homogeneous of the symbol's weight; numeric
    images are always admissible (they forget the grading).
    """
    source_ring = genus.domain.ring
    for sym, image in substitution.items():
        source_ring.position(sym)  # raises on unknown symbol
        if not _weight_ok(source_ring, sym, image):
            raise ValueError(f"substitution for {sym} violates its weight")
    if target_domain is None:
        target_domain = genus.domain
    if isinstance(target_domain, RationalDomain):
        missing = [n for n in source_ring.names if n not in substitution]
        if missing:
            raise ValueError(f"scalar specialization must cover {missing}")

    def push(series: Series) -> Series:
        return Series(target_domain,
                      [_map_scalar(c, substitution, target_domain)
                       for c in series.coeffs], series.order)

    new_name = name or f"{genus.name}|{','.join(sorted(substitution))}"
    char = push(genus.char)
    log = push(genus.log)
    from .genus import _detect_diagonal
    return Genus(new_name, target_domain, log, char,
                 _detect_diagonal(target_domain, char))


# -- the q/p comparison -------------------------------------------------------


def kh_psi_relation_check(order: int = 8) -> list:
    """Equate the psi and kh genera on CP^1..CP^4 and solve the triangular
    system for q1..q4 as polynomials in p1..p4; compare with the known
    closed forms.  Returns one report row per relation."""
    psi = build_psi(order)
    kh = build_kh(order)
    p1, p2, p3, p4 = KH_RING.gens()
    expected = {
        "q1": -p1,
        "q2": (p1 ** 2 * 3 - p2 * 4) / 8,
        "q3": (p1 ** 3 * (-3) + p1 * p2 * 12 - p3 * 16) / 48,
        "q4": (p1 ** 4 * 3 - p1 ** 2 * p2 * 24 + p1 * p3 * 32
               + p2 ** 2 * 48 - p4 * 192) / 768,
    }
    solved: dict = {}
    rows = []
    for m in range(1, 5):
        sym = f"q{m}"
        psi_val = psi.value_on_cp(m)       # -(1/2) q_m + rest(q_< m)
        kh_val = kh.value_on_cp(m)
        rest = psi_val + PSI_RING.var(sym) / 2
        rest_p = rest.substitute({**solved, sym: KH_RING.zero()}, KH_RING)
        q_m = (kh_val - rest_p) * (-2)
        solved[sym] = q_m
        ok = q_m == expected[sym]
        rows.append({"check": "kh-psi-relation", "params": {"symbol": sym},
                     "expected": str(expected[sym]), "got": str(q_m),
                     "verdict": "pass" if ok else "fail"})
    # consistency: p1 = p3 = 0 forces q1 = q3 = 0
    reduce_och = {n: (KH_RING.zero() if n in ("p1", "p3") else KH_RING.var(n))
                  for n in KH_RING.names}
    odd_vanish = all(solved[s].substitute(reduce_och, KH_RING).is_zero()
                     for s in ("q1", "q3"))
    rows.append({"check": "kh-psi-relation",
                 "params": {"symbol": "q1,q3 at p1=p3=0"},
                 "expected": "0", "got": "0" if odd_vanish else "nonzero",
                 "verdict": "pass" if odd_vanish else "fail"})
    return rows
