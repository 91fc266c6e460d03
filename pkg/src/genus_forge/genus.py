"""The Hirzebruch machine: genera, their evaluation, and Chern numbers.

A genus is stored through its two equivalent series presentations: the
logarithm g (with g = y + O(y^2), the y^(m+1) coefficient times m+1 being
the value on CP^m) and the characteristic series Q = x / g^(-1)(x) with
constant term 1.

Evaluation on a modeled manifold M never adjoins formal Chern roots:
writing log Q(x) = sum_m lam_m x^m, the product of Q over the roots equals
exp(sum_m lam_m p_m), where the power sums p_m are obtained from the Chern
classes of M by Newton's identities.  This works uniformly for non-split
tangent bundles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .manifolds import BundleModel, ManifoldModel, projectivize
from .rings import MultiPoly, PolyRing, exact_div
from .series import Domain, PolyDomain, Series


class TruncationError(ValueError):
    """A series was asked for coefficients beyond its truncation order."""


@dataclass
class Genus:
    name: str
    domain: Domain
    log: Series
    char: Series
    diagonal: bool = False
    _char_log: Series = field(default=None, repr=False, compare=False)

    def char_log(self) -> Series:
        """log of the characteristic series (cached)."""
        if self._char_log is None:
            self._char_log = self.char.log()
        return self._char_log

    def value_on_cp(self, m: int):
        """Genus of CP^m read off the logarithm."""
        return self.log[m + 1] * self.domain.from_rational(m + 1)


def _detect_diagonal(domain: Domain, char: Series) -> bool:
    if not isinstance(domain, PolyDomain):
        return False
    return all(char[k].is_homogeneous(2 * k) for k in range(char.order + 1))


def genus_from_log(name: str, domain: Domain, g: Series) -> Genus:
    if not domain.is_zero(g[0]) or g[1] != domain.one():
        raise ValueError("a genus logarithm must be y + O(y^2)")
    f = g.reversion()
    char = Series(domain, f.coeffs[1:], f.order - 1).inverse()
    return Genus(name, domain, g, char, _detect_diagonal(domain, char))


def genus_from_char(name: str, domain: Domain, q: Series) -> Genus:
    if q[0] != domain.one():
        raise ValueError("a characteristic series must start at 1")
    f = Series(domain, [domain.zero()] + q.inverse().coeffs, q.order + 1)
    g = f.reversion()
    return Genus(name, domain, g, q, _detect_diagonal(domain, q))


# -- symmetric-function utilities ------------------------------------------


def newton_power_sums(chern_classes, upto: int, model, rank=None):
    """Power sums p_1..p_upto from elementary symmetric classes e_j.

    Convention: p_1 = e_1 and
    p_k = e_1 p_(k-1) - e_2 p_(k-2) + ... + (-1)^(k-1) k e_k,
    normalized so that the top power sum of CP^m integrates to m+1.
    `chern_classes[j]` is e_j (index 0 unused); missing entries are zero.
    """
    def e(j):
        if j < len(chern_classes):
            return chern_classes[j]
        return model.ring.zero()

    p = [None] * (upto + 1)
    for k in range(1, upto + 1):
        acc = model.ring.zero()
        for i in range(1, k):
            term = model.mul(e(i), p[k - i])
            acc = acc + (term if i % 2 == 1 else -term)
        tail = e(k) * (k if k % 2 == 1 else -k)
        p[k] = model.reduce(acc + tail)
    return p


def complete_homogeneous(chern_classes, upto: int, model):
    """h_0..h_upto from the e_j via the generating identity
    (sum_j (-1)^j e_j t^j) * (sum_d h_d t^d) = 1."""
    def e(j):
        if j < len(chern_classes):
            return chern_classes[j]
        return model.ring.zero()

    h = [model.ring.one()]
    for d in range(1, upto + 1):
        acc = model.ring.zero()
        for j in range(1, d + 1):
            term = model.mul(e(j), h[d - j])
            acc = acc + (term if j % 2 == 1 else -term)
        h.append(model.reduce(acc))
    return h


def partitions(n: int):
    """Partitions of n as descending tuples, in ascending lexicographic
    order: (1,1,..,1) first, (n,) last."""
    out = []

    def rec(remaining, max_part, prefix):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for part in range(min(remaining, max_part), 0, -1):
            rec(remaining - part, part, prefix + [part])

    rec(n, n, [])
    return sorted(out)


def partition_label(p) -> str:
    """Display key, e.g. (2, 2, 1) -> "c1*c2^2" (ascending parts)."""
    counts = {}
    for part in p:
        counts[part] = counts.get(part, 0) + 1
    pieces = []
    for part in sorted(counts):
        k = counts[part]
        pieces.append(f"c{part}" if k == 1 else f"c{part}^{k}")
    return "*".join(pieces) if pieces else "1"


@dataclass
class ChernNumberTable:
    dim_c: int
    entries: dict  # partition tuple -> Fraction

    def labeled(self):
        return {partition_label(p): self.entries[p]
                for p in sorted(self.entries)}

    def to_dict(self):
        return {"dim": self.dim_c,
                "numbers": {k: str(v) for k, v in self.labeled().items()}}

    def __getitem__(self, p):
        return self.entries[tuple(sorted(p, reverse=True))]


def chern_numbers(M: ManifoldModel) -> ChernNumberTable:
    """All Chern numbers of M, one per partition of dim_c."""
    n = M.dim_c
    cache = {}
    entries = {}
    for p in partitions(n):
        prod = M.ring.one()
        for part in p:
            c = cache.get(part)
            if c is None:
                c = M.chern_class(part)
                cache[part] = c
            prod = M.model.mul(prod, c)
        entries[p] = M.integrate(prod)
    return ChernNumberTable(n, entries)


def milnor_number(M: ManifoldModel) -> Fraction:
    """Integral of the top power sum of the tangent Chern roots."""
    n = M.dim_c
    if n == 0:
        return Fraction(1)
    e = [M.ring.one()] + [M.chern_class(j) for j in range(1, n + 1)]
    p = newton_power_sums(e, n, M.model)
    return M.integrate(p[n])


def milnor_closed_form(E: BundleModel) -> Fraction:
    """Top power-sum Chern number of P(E) computed in the base alone.

    For rank k >= 2 over an n-fold base, with m = n + k - 1:

        s_m(P(E)) = (-1)^n * sum over exponent vectors (r_1..r_k), sum = n,
                    of [sum_l (-1)^(r_l) C(m-1, r_l)] * integral of
                    x_1^(r_1) ... x_k^(r_k)

    With explicit split roots the sum is evaluated literally (assignments
    hitting a vanishing root power are pruned).  Without roots the same sum
    is reorganized through symmetric functions: grouping by the slot l and
    its exponent j gives

        sum_j (-1)^j C(m-1, j) * (p_j h_(n-j) - p_(j+1) h_(n-j-1)),

    where p and h are the power sums and complete homogeneous classes of E,
    so only Chern classes of E are needed.
    """
    k = E.rank
    if k < 2:
        raise ValueError("closed form requires rank >= 2")
    base = E.base
    n = base.dim_c
    m = n + k - 1

    if E.split_roots is not None:
        nonzero = [r for r in E.split_roots if not r.is_zero()]
        slack = k - len(nonzero)  # roots that are literally zero
        total = Fraction(0)

        def rec(i, remaining, prod, weight):
            nonlocal total
            if i == len(nonzero):
                if remaining == 0:
                    total += (weight + slack) * base.integrate(prod)
                return
            power = prod
            for e in range(0, remaining + 1):
                if e > 0:
                    power = base.model.mul(power, nonzero[i])
                    if power.is_zero():
                        break
                w = comb(m - 1, e) * (-1 if e % 2 else 1)
                rec(i + 1, remaining - e, power, weight + w)

        rec(0, n, base.ring.one(), 0)
        return total * (-1 if n % 2 else 1)

    e = [base.ring.one()] + [E.chern_class(j) for j in range(1, n + 2)]
    p = [base.ring.const(k)] + newton_power_sums(e, n + 1, base.model)[1:]
    h = complete_homogeneous(e, n, base.model)
    acc = base.ring.zero()
    for j in range(0, n + 1):
        term = base.model.mul(p[j], h[n - j])
        if n - j - 1 >= 0:
            term = term - base.model.mul(p[j + 1], h[n - j - 1])
        sign = -1 if j % 2 else 1
        acc = acc + term * (sign * comb(m - 1, j))
    return base.integrate(acc) * (-1 if n % 2 else 1)


# -- evaluation -------------------------------------------------------------


def _relabel(p: MultiPoly, target: PolyRing, posmap) -> MultiPoly:
    out = {}
    for exps, c in p.terms.items():
        ne = [0] * target.nvars
        for i, e in enumerate(exps):
            if e:
                ne[posmap[i]] = e
        out[tuple(ne)] = c
    return MultiPoly(target, out)


class _GradedEvaluator:
    """Evaluation workspace for genera with polynomial coefficient rings.

    Genus variables and cohomology generators live in one combined weighted
    ring; cohomology relations act on the generator positions.  For a genus
    whose k-th characteristic coefficient is homogeneous of weight 2k, every
    surviving term satisfies (coefficient weight) = (cohomological degree),
    which prunes the products hard.
    """

    def __init__(self, genus: Genus, M: ManifoldModel, diagonal=None):
        gring = genus.domain.ring
        from .manifolds import _merge_names
        used = set(gring.names)
        hmap = _merge_names(used, M.ring.names)
        names = list(gring.names) + [hmap[n] for n in M.ring.names]
        weights = list(gring.weights) + [2] * M.ring.nvars
        self.ring = PolyRing(names, weights)
        self.gpos = list(range(gring.nvars))
        self.hpos = list(range(gring.nvars, len(names)))
        self.gring = gring
        self.M = M
        self.cap = 2 * M.dim_c
        self.diagonal = genus.diagonal if diagonal is None else diagonal
        self.bounds = M.model.bounds
        self.relations = {pos: self.lift_h(tail)
                          for pos, tail in M.model.relations.items()}

    def lift_g(self, p: MultiPoly) -> MultiPoly:
        return _relabel(p, self.ring, self.gpos)

    def lift_h(self, p: MultiPoly) -> MultiPoly:
        return _relabel(p, self.ring, self.hpos)

    def _keep(self, exps) -> bool:
        hdeg = 2 * sum(exps[i] for i in self.hpos)
        if hdeg > self.cap:
            return False
        if self.diagonal:
            gw = sum(exps[i] * self.ring.weights[i] for i in self.gpos)
            if gw != hdeg:
                return False
        return True

    def reduce(self, p: MultiPoly) -> MultiPoly:
        pending = list(p.terms.items())
        out: dict = {}
        offset = len(self.gpos)
        while pending:
            exps, c = pending.pop()
            offender = -1
            for i, bound in enumerate(self.bounds):
                if exps[offset + i] > bound:
                    offender = i
                    break
            if offender < 0:
                if self._keep(exps):
                    s = out.get(exps, 0) + c
                    if s:
                        out[exps] = s
                    else:
                        out.pop(exps, None)
                continue
            tail = self.relations.get(offender)
            if tail is None:
                continue
            rest = list(exps)
            rest[offset + offender] -= self.bounds[offender] + 1
            for texps, tc in tail.terms.items():
                pending.append((tuple(a + b for a, b in zip(rest, texps)),
                                c * tc))
        return MultiPoly(self.ring, out)

    def mul(self, a: MultiPoly, b: MultiPoly) -> MultiPoly:
        if not a.terms or not b.terms:
            return self.ring.zero()
        small, big = (a.terms, b.terms) if len(a.terms) <= len(b.terms) \
            else (b.terms, a.terms)
        out: dict = {}
        for ea, ca in small.items():
            for eb, cb in big.items():
                exps = tuple(x + y for x, y in zip(ea, eb))
                if not self._keep(exps):
                    continue
                s = out.get(exps, 0) + ca * cb
                if s:
                    out[exps] = s
                else:
                    del out[exps]
        return self.reduce(MultiPoly(self.ring, out))

    def exp(self, t: MultiPoly) -> MultiPoly:
        result = self.ring.one() + t
        power = t
        fact = 1
        for j in range(2, self.M.dim_c + 1):
            power = self.mul(power, t)
            if power.is_zero():
                break
            fact *= j
            result = result + power / fact
        return result

    def integrate(self, p: MultiPoly) -> MultiPoly:
        """Integrate the cohomology part, landing in the genus ring."""
        table = self.M.model.integrals
        out: dict = {}
        for exps, c in p.terms.items():
            h_exps = tuple(exps[i] for i in self.hpos)
            v = table.get(h_exps)
            if v is None:
                continue
            g_exps = tuple(exps[i] for i in self.gpos)
            s = out.get(g_exps, 0) + c * v
            if s:
                out[g_exps] = s
            else:
                del out[g_exps]
        return MultiPoly(self.gring, out)


def _evaluate_graded(genus: Genus, M: ManifoldModel):
    n = M.dim_c
    ev = _GradedEvaluator(genus, M)
    e = [M.ring.one()] + [M.chern_class(j) for j in range(1, n + 1)]
    p = newton_power_sums(e, n, M.model)
    lam = genus.char_log()
    t = ev.ring.zero()
    for m in range(1, n + 1):
        if p[m].is_zero():
            continue
        t = t + ev.mul(ev.lift_g(lam[m]), ev.lift_h(p[m]))
    return ev.integrate(ev.exp(t))


def _generic_reduce_cache(M: ManifoldModel):
    cache = getattr(M, "_mono_cache", None)
    if cache is None:
        cache = {}
        M._mono_cache = cache
    return cache


def _generic_mul(M: ManifoldModel, a: dict, b: dict, domain: Domain) -> dict:
    """Multiply elements of (coefficient ring) tensor H*(M), represented as
    {normal monomial exponents: coefficient}."""
    cache = _generic_reduce_cache(M)
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = (ea, eb)
            red = cache.get(key)
            if red is None:
                mono = MultiPoly(M.ring, {tuple(x + y for x, y in
                                                zip(ea, eb)): Fraction(1)})
                red = list(M.model.reduce(mono).terms.items())
                cache[key] = red
            if not red:
                continue
            coeff = ca * cb
            for exps, frac in red:
                prev = out.get(exps)
                term = coeff * frac
                out[exps] = term if prev is None else prev + term
    return {e: domain.normalize(c) for e, c in out.items()
            if not domain.is_zero(c)}


def _evaluate_generic(genus: Genus, M: ManifoldModel):
    n = M.dim_c
    domain = genus.domain
    e = [M.ring.one()] + [M.chern_class(j) for j in range(1, n + 1)]
    p = newton_power_sums(e, n, M.model)
    lam = genus.char_log()
    t: dict = {}
    for m in range(1, n + 1):
        lam_m = lam[m]
        if domain.is_zero(lam_m):
            continue
        for exps, frac in p[m].terms.items():
            prev = t.get(exps)
            term = lam_m * frac
            t[exps] = term if prev is None else prev + term
    unit = (0,) * M.ring.nvars
    result = {unit: domain.one()}
    acc = dict(t)
    result = _add_ext(result, acc, domain)
    fact = 1
    power = acc
    for j in range(2, n + 1):
        power = _generic_mul(M, power, t, domain)
        if not power:
            break
        fact *= j
        scaled = {k: v * Fraction(1, fact) for k, v in power.items()}
        result = _add_ext(result, scaled, domain)
    total = domain.zero()
    table = M.model.integrals
    for exps, coeff in result.items():
        v = table.get(exps)
        if v is not None:
            total = total + coeff * v
    return domain.normalize(total)


def _add_ext(a: dict, b: dict, domain: Domain) -> dict:
    out = dict(a)
    for k, v in b.items():
        prev = out.get(k)
        s = v if prev is None else prev + v
        if domain.is_zero(s):
            out.pop(k, None)
        else:
            out[k] = s
    return out


def evaluate(genus: Genus, M: ManifoldModel):
    """Value of the genus on a modeled manifold (exact).

    For graded polynomial coefficient rings the result is checked to be
    homogeneous of weighted degree 2 dim_c.
    """
    n = M.dim_c
    if genus.char.order < n:
        raise TruncationError(
            f"char series of {genus.name} truncated at {genus.char.order}, "
            f"need {n}")
    if n == 0:
        return genus.domain.one()
    if isinstance(genus.domain, PolyDomain):
        value = _evaluate_graded(genus, M)
        if genus.diagonal and not value.is_homogeneous(2 * n):
            raise AssertionError(
                f"{genus.name}({M.label}) is not homogeneous of weight {2*n}")
        return value
    return _evaluate_generic(genus, M)


# -- the projectivization formula -------------------------------------------


def _x_degree(exps, xpos) -> int:
    return sum(exps[i] for i in xpos)


def _truncate_x(p: MultiPoly, xpos, bound: int) -> MultiPoly:
    return MultiPoly(p.ring, {e: c for e, c in p.terms.items()
                              if _x_degree(e, xpos) <= bound})


def proj_fiber_sum(genus: Genus, k: int, deg: int) -> MultiPoly:
    """The symmetric expression sum_i prod_{j != i} h(x_j - x_i), expanded
    through total degree `deg` in formal variables x_1..x_k, where
    h(x) = Q(x)/x for the characteristic series Q of the genus.

    Each summand has poles along x_j = x_i, but the sum is regular: it is
    assembled over the common denominator prod_l prod_{j != l} (x_j - x_l)
    and the final exact division must leave no remainder.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    gring = genus.domain.ring if isinstance(genus.domain, PolyDomain) else None
    if gring is None:
        raise ValueError("formal fiber sum needs a polynomial coefficient ring")
    t_n = deg + k - 1
    if genus.char.order < t_n:
        raise TruncationError(
            f"char series order {genus.char.order} < required {t_n}")
    names = list(gring.names) + [f"x{i}" for i in range(1, k + 1)]
    ring = PolyRing(names, list(gring.weights) + [2] * k)
    gpos = list(range(gring.nvars))
    xpos = list(range(gring.nvars, len(names)))
    xs = [ring.var(f"x{i}") for i in range(1, k + 1)]
    u = [_relabel(c, ring, gpos) for c in genus.char.coeffs]

    if k == 1:
        return ring.one()  # empty product

    def u_at(arg: MultiPoly) -> MultiPoly:
        acc = ring.zero()
        power = ring.one()
        for d in range(t_n + 1):
            if d:
                power = _truncate_x(power * arg, xpos, t_n)
                if power.is_zero():
                    break
            if not u[d].is_zero():
                acc = acc + u[d] * power
        return acc

    d_l = []
    for l in range(k):
        prod = ring.one()
        for j in range(k):
            if j != l:
                prod = prod * (xs[j] - xs[l])
        d_l.append(prod)
    cap = deg + k * (k - 1)
    big_v = ring.one()
    for p in d_l:
        big_v = big_v * p
    numerator = ring.zero()
    for i in range(k):
        n_i = ring.one()
        for j in range(k):
            if j != i:
                n_i = _truncate_x(n_i * u_at(xs[j] - xs[i]), xpos, t_n)
        m_i = ring.one()
        for l in range(k):
            if l != i:
                m_i = m_i * d_l[l]
        numerator = numerator + _truncate_x(n_i * m_i, xpos, cap)
    numerator = _truncate_x(numerator, xpos, cap)
    quotient = exact_div(numerator, big_v)
    if not all(_x_degree(e, xpos) <= deg for e in quotient.terms):
        raise AssertionError("fiber sum kept spurious high-degree terms")
    return quotient


def evaluate_projectivization_via_H(genus: Genus, E: BundleModel):
    """Value of the genus on P(E), computed over the base alone through the
    fiber-sum formula.  Requires explicit split roots."""
    if E.split_roots is None:
        raise ValueError("projectivization formula needs split roots")
    base = E.base
    n = base.dim_c
    k = E.rank
    h_poly = proj_fiber_sum(genus, k, n)
    # fiber-sum terms carry coefficient weight 2(k-1) above their degree,
    # so the diagonal pruning of plain genus evaluation must stay off
    ev = _GradedEvaluator(genus, base, diagonal=False)
    mapping = {}
    for i in range(1, k + 1):
        mapping[f"x{i}"] = ev.lift_h(E.split_roots[i - 1])
    lifted = ev.reduce(h_poly.substitute(mapping, ev.ring))
    e = [base.ring.one()] + [base.chern_class(j) for j in range(1, n + 1)]
    p = newton_power_sums(e, n, base.model)
    lam = genus.char_log()
    t = ev.ring.zero()
    for m in range(1, n + 1):
        if not p[m].is_zero():
            t = t + ev.mul(ev.lift_g(lam[m]), ev.lift_h(p[m]))
    integrand = ev.mul(ev.exp(t), lifted)
    return ev.integrate(integrand)
