"""Finite cohomology models of manifolds and complex vector bundles.

A model is a quotient of a polynomial ring on degree-2 generators by
nilpotency bounds (g^(e+1) = 0) and, for projectivizations, one monic
relation per fiber class:

    y^k + c1(E) y^(k-1) + ... + ck(E) = 0

Every ring element has a unique normal form with all exponents within
bounds; integration is the linear functional that reads off the stored
values of the top-degree normal monomials and kills everything else.
These models are "just big enough": they only need to integrate products
of tangent/bundle characteristic classes correctly.
"""

from __future__ import annotations

from fractions import Fraction

from .rings import MultiPoly, PolyRing, Rational


class CohomModel:
    """Presentation of a cohomology ring with an integration functional."""

    def __init__(self, names, bounds, relations, integrals):
        self.ring = PolyRing(names, [2] * len(names))
        self.bounds = tuple(bounds)
        # var position -> tail polynomial t with var^(bound+1) = t
        self.relations = dict(relations)
        self.integrals = dict(integrals)

    def reduce(self, p: MultiPoly) -> MultiPoly:
        """Normal form: nilpotent powers dropped, relations substituted."""
        if p.ring != self.ring:
            raise ValueError("element from a different cohomology ring")
        bounds = self.bounds
        pending = list(p.terms.items())
        out: dict = {}
        while pending:
            exps, c = pending.pop()
            offender = -1
            for i, e in enumerate(exps):
                if e > bounds[i]:
                    offender = i
                    break
            if offender < 0:
                s = out.get(exps, 0) + c
                if s:
                    out[exps] = s
                else:
                    out.pop(exps, None)
                continue
            tail = self.relations.get(offender)
            if tail is None:
                continue  # plain nilpotent generator
            rest = list(exps)
            rest[offender] -= bounds[offender] + 1
            for texps, tc in tail.terms.items():
                pending.append((tuple(a + b for a, b in zip(rest, texps)),
                                c * tc))
        return MultiPoly(self.ring, out)

    def mul(self, a: MultiPoly, b: MultiPoly) -> MultiPoly:
        return self.reduce(a * b)

    def integrate(self, p: MultiPoly) -> Fraction:
        """Evaluate the top-degree component on the fundamental class."""
        total = Fraction(0)
        for exps, c in self.reduce(p).terms.items():
            v = self.integrals.get(exps)
            if v is not None:
                total += c * v
        return total

    def normal_monomials(self):
        """All normal-form exponent tuples, low degree first."""
        from itertools import product as iproduct
        ranges = [range(b + 1) for b in self.bounds]
        monos = list(iproduct(*ranges)) if ranges else [()]
        monos.sort(key=lambda e: (self.ring.weight_of(e), e))
        return monos


class ManifoldModel:
    """A modeled stably almost complex manifold: cohomology + tangent data."""

    def __init__(self, model: CohomModel, dim_c: int, tangent_chern: MultiPoly,
                 label: str = "?"):
        self.model = model
        self.dim_c = dim_c
        self.tangent_chern = model.reduce(
            tangent_chern.truncate_weighted(2 * dim_c))
        self.label = label
        self.bundle = None        # set by projectivize
        self.base = None          # set by projectivize
        self.fiber_pos = None     # set by projectivize
        self.factors = None       # set by product: [(ManifoldModel, name_map)]

    @property
    def ring(self) -> PolyRing:
        return self.model.ring

    def integrate(self, p: MultiPoly) -> Fraction:
        return self.model.integrate(p)

    def chern_class(self, j: int) -> MultiPoly:
        return self.tangent_chern.homogeneous_component(2 * j)

    def __repr__(self):
        return f"<Manifold {self.label} dim_c={self.dim_c}>"


class BundleModel:
    """A complex vector bundle presented by its total Chern class."""

    def __init__(self, base: ManifoldModel, rank: int, total_chern: MultiPoly,
                 split_roots=None, label: str = "?"):
        if rank < 0:
            raise ValueError("negative rank")
        total_chern = base.model.reduce(
            total_chern.truncate_weighted(2 * base.dim_c))
        if total_chern.constant() != 1:
            raise ValueError("total Chern class must have constant term 1")
        for j in range(rank + 1, base.dim_c + 1):
            if not total_chern.homogeneous_component(2 * j).is_zero():
                raise ValueError(f"c_{j} nonzero on a rank-{rank} bundle")
        self.base = base
        self.rank = rank
        self.total_chern = total_chern
        self.label = label
        if split_roots is not None:
            split_roots = [base.model.reduce(r) for r in split_roots]
            if len(split_roots) != rank:
                raise ValueError("need one root per rank")
            prod = base.model.ring.one()
            for r in split_roots:
                prod = base.model.mul(prod, r + 1)
            if prod != total_chern:
                raise ValueError("split roots do not multiply to the "
                                 "total Chern class")
        self.split_roots = split_roots

    def chern_class(self, j: int) -> MultiPoly:
        return self.total_chern.homogeneous_component(2 * j)

    def dual(self) -> "BundleModel":
        terms = {}
        wof = self.base.ring.weight_of
        for exps, c in self.total_chern.terms.items():
            sign = -1 if (wof(exps) // 2) % 2 else 1
            terms[exps] = c * sign
        chern = MultiPoly(self.base.ring, terms)
        roots = None
        if self.split_roots is not None:
            roots = [-r for r in self.split_roots]
        return BundleModel(self.base, self.rank, chern, roots,
                           label=f"dual({self.label})")

    def add_trivial(self, k: int) -> "BundleModel":
        roots = None
        if self.split_roots is not None:
            roots = list(self.split_roots) + [self.base.ring.zero()] * k
        return BundleModel(self.base, self.rank + k, self.total_chern, roots,
                           label=f"{self.label}+triv({k})")

    def whitney_sum(self, other: "BundleModel") -> "BundleModel":
        if other.base is not self.base:
            raise ValueError("Whitney sum needs a common base")
        roots = None
        if self.split_roots is not None and other.split_roots is not None:
            roots = list(self.split_roots) + list(other.split_roots)
        chern = self.base.model.mul(self.total_chern, other.total_chern)
        return BundleModel(self.base, self.rank + other.rank, chern, roots,
                           label=f"{self.label}(+){other.label}")

    def __repr__(self):
        return f"<Bundle {self.label} rank={self.rank} over {self.base.label}>"


def trivial_bundle(base: ManifoldModel, k: int) -> BundleModel:
    return BundleModel(base, k, base.ring.one(),
                       [base.ring.zero()] * k, label=f"triv({k})")


def point() -> ManifoldModel:
    return projective_space(0)


def projective_space(n: int) -> ManifoldModel:
    """CP^n: one generator x with x^(n+1) = 0, integral of x^n equal 1."""
    if n < 0:
        raise ValueError("dimension must be >= 0")
    model = CohomModel(["x"], [n], {}, {(n,): Fraction(1)})
    x = model.ring.var("x")
    chern = model.reduce((x + 1) ** (n + 1))
    return ManifoldModel(model, n, chern, label=f"cp({n})")


def hyperplane_bundle(space: ManifoldModel) -> BundleModel:
    """The dual of the tautological line bundle on a projective space."""
    if space.fiber_pos is not None or len(space.ring.names) != 1:
        raise ValueError("o1 is only defined over a single projective space")
    x = space.ring.var(space.ring.names[0])
    return BundleModel(space, 1, x + 1, [x], label=f"o1({space.label})")


def tangent_bundle(space: ManifoldModel) -> BundleModel:
    """The holomorphic tangent bundle, of rank dim_c."""
    roots = None
    if space.dim_c == 1 and len(space.ring.names) == 1:
        # the tangent bundle of a curve is the single root 2x
        roots = [space.ring.var(space.ring.names[0]) * 2]
    return BundleModel(space, space.dim_c, space.tangent_chern, roots,
                       label=f"tangent({space.label})")


def elliptic_cube_base():
    """A triple product of elliptic curves, modeled by the subring generated
    by the first Chern class u of the line bundle L (exterior tensor of three
    degree-one line bundles): u^4 = 0, integral of u^3 equal 6, and a
    complex-trivial tangent bundle.  Returns (base manifold, L)."""
    model = CohomModel(["u"], [3], {}, {(3,): Fraction(6)})
    base = ManifoldModel(model, 3, model.ring.one(), label="ecube()")
    u = model.ring.var("u")
    line = BundleModel(base, 1, u + 1, [u], label="L")
    return base, line


def _merge_names(used: set, names):
    """Deterministic collision renaming: x, x2, x3, ..."""
    mapping = {}
    for n in names:
        candidate = n
        idx = 2
        while candidate in used:
            candidate = f"{n}{idx}"
            idx += 1
        used.add(candidate)
        mapping[n] = candidate
    return mapping


def _embed_via(name_map: dict, target: PolyRing, p: MultiPoly) -> MultiPoly:
    renamed = {n: target.var(name_map[n]) for n in p.ring.names}
    return p.substitute(renamed, target)


def product(m1: ManifoldModel, m2: ManifoldModel) -> ManifoldModel:
    """Cartesian product: concatenated generators, Kuenneth integration."""
    used: set = set()
    map1 = _merge_names(used, m1.ring.names)
    map2 = _merge_names(used, m2.ring.names)
    names = [map1[n] for n in m1.ring.names] + [map2[n] for n in m2.ring.names]
    bounds = list(m1.model.bounds) + list(m2.model.bounds)
    model = CohomModel(names, bounds, {}, {})
    shift = m1.ring.nvars
    for pos, tail in m1.model.relations.items():
        model.relations[pos] = _embed_via(map1, model.ring, tail)
    for pos, tail in m2.model.relations.items():
        model.relations[pos + shift] = _embed_via(map2, model.ring, tail)
    for e1, v1 in m1.model.integrals.items():
        for e2, v2 in m2.model.integrals.items():
            model.integrals[tuple(e1) + tuple(e2)] = v1 * v2
    chern = model.mul(_embed_via(map1, model.ring, m1.tangent_chern),
                      _embed_via(map2, model.ring, m2.tangent_chern))
    out = ManifoldModel(model, m1.dim_c + m2.dim_c, chern,
                        label=f"prod({m1.label},{m2.label})")
    out.factors = [(m1, map1), (m2, map2)]
    return out


def pullback_to_product(bundle: BundleModel, prod: ManifoldModel,
                        factor: int) -> BundleModel:
    """Reinterpret a bundle over one factor of a product as a bundle over
    the product."""
    if prod.factors is None:
        raise ValueError("target is not a product model")
    source, name_map = prod.factors[factor]
    if bundle.base is not source:
        raise ValueError("bundle does not live over the requested factor")
    chern = _embed_via(name_map, prod.ring, bundle.total_chern)
    roots = None
    if bundle.split_roots is not None:
        roots = [_embed_via(name_map, prod.ring, r)
                 for r in bundle.split_roots]
    return BundleModel(prod, bundle.rank, chern, roots, label=bundle.label)


def external_sum(bundles) -> BundleModel:
    """Whitney sum of bundles over pairwise different bases, formed over the
    product of the bases (point bases are absorbed)."""
    bundles = list(bundles)
    if not bundles:
        raise ValueError("empty sum")
    real = [b for b in bundles if b.base.dim_c > 0]
    if not real:
        base = bundles[0].base
        total = sum(b.rank for b in bundles)
        return trivial_bundle(base, total)
    base = real[0].base
    pulled = [real[0]]
    for b in real[1:]:
        base_new = product(base, b.base)
        # re-pull previously collected bundles through the left factor
        pulled = [pullback_to_product(p, base_new, 0) for p in pulled]
        pulled.append(pullback_to_product(b, base_new, 1))
        base = base_new
    out = pulled[0]
    for b in pulled[1:]:
        out = out.whitney_sum(b)
    extra = sum(b.rank for b in bundles if b.base.dim_c == 0)
    if extra:
        out = out.add_trivial(extra)
    return out


def projectivize(bundle: BundleModel) -> ManifoldModel:
    """The projectivization P(E), modeled by adjoining the fiber class y with
    the monic relation y^k + c1 y^(k-1) + ... + ck = 0."""
    k = bundle.rank
    if k < 1:
        raise ValueError("cannot projectivize a rank-0 bundle")
    base = bundle.base
    if k == 1:
        # P(L) is the base itself; y = -c1(L) satisfies the rank-1 relation
        out = ManifoldModel(base.model, base.dim_c, base.tangent_chern,
                            label=f"proj({bundle.label})")
        out.bundle = bundle
        out.base = base
        return out
    used = set(base.ring.names)
    fiber = _merge_names(used, ["y"])["y"]
    names = list(base.ring.names) + [fiber]
    bounds = list(base.model.bounds) + [k - 1]
    model = CohomModel(names, bounds, {}, {})
    fiber_pos = len(names) - 1

    def lift(p: MultiPoly) -> MultiPoly:
        return p.embed(model.ring)

    for pos, tail in base.model.relations.items():
        model.relations[pos] = lift(tail)
    y = model.ring.var(fiber)
    tail = model.ring.zero()
    for j in range(1, k + 1):
        tail = tail - model.mul(lift(bundle.chern_class(j)), y ** (k - j))
    model.relations[fiber_pos] = model.reduce(tail)
    for exps, v in base.model.integrals.items():
        model.integrals[tuple(exps) + (k - 1,)] = v

    fiber_factor = model.ring.zero()
    for j in range(0, k + 1):
        fiber_factor = fiber_factor + model.mul(lift(bundle.chern_class(j)),
                                                (y + 1) ** (k - j))
    chern = model.mul(lift(base.tangent_chern), fiber_factor)
    out = ManifoldModel(model, base.dim_c + k - 1, chern,
                        label=f"proj({bundle.label})")
    out.bundle = bundle
    out.base = base
    out.fiber_pos = fiber_pos
    return out


def segre_class(bundle: BundleModel) -> MultiPoly:
    """Multiplicative inverse of the total Chern class in the base ring."""
    base = bundle.base
    nil = base.ring.one() - bundle.total_chern  # positive-degree part, negated
    out = base.ring.one()
    power = base.ring.one()
    for _ in range(base.dim_c):
        power = base.model.mul(power, nil)
        if power.is_zero():
            break
        out = out + power
    return out


def integrate_via_segre(proj: ManifoldModel, omega: MultiPoly,
                        m: int) -> Fraction:
    """Integrate omega * y^m over P(E) by Segre reduction: the value equals
    the base integral of the top-degree part of omega * s(E)."""
    bundle = proj.bundle
    if bundle is None:
        raise ValueError("not a projectivization model")
    base = bundle.base
    if omega.ring != base.ring:
        raise ValueError("omega must be a base class")
    top = 2 * proj.dim_c
    if omega.is_zero():
        return Fraction(0)
    lo, hi = omega.weighted_degrees()
    if lo != hi:
        raise ValueError("omega must have fixed degree")
    if hi + 2 * m != top:
        return Fraction(0)
    return base.integrate(base.model.mul(omega, segre_class(bundle)))
