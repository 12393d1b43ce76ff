"""Comprehension categories, weakening-and-contraction comonads and
generalised categories with families, with their morphisms and 2-cells."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

from .comonad import (
    AdjCell, AdjMorphism, Adjunction, Comonad, ComonadCell, ComonadMorphism,
    check_adj_cell, check_adj_morphism, check_adjunction, check_comonad,
    check_comonad_cell, check_comonad_morphism, mate, morphism_class,
)
from .fibration import (
    Fib2Cell, FibMorphism, Fibration, Square, SquareError, check_fib_2cell,
    check_fib_morphism, check_fibration, is_discrete, is_pullback, is_split, make_cleavage,
)
from .kernel import (
    Arr, BoundaryError, FinCategory, Functor, KernelError, NatTransf, Obj, Report,
    UniquenessError, check_functor, check_nat, compose_functors, identity_functor,
    is_monic, tag,
)

__all__ = [
    "arrow_category", "arrow_parts", "codomain_functor", "domain_functor", "arrow_functor",
    "arrow_nat", "codomain_fibration",
    "CompCat", "CompCatMorphism", "CompCat2Cell", "WCComonad", "WCMorphism", "WC2Cell",
    "Gcwf", "GcwfMorphism", "GcwfCell",
    "check_compcat", "check_compcat_morphism", "check_compcat_2cell",
    "check_wccmd", "check_wc_morphism", "check_wc_2cell",
    "check_gcwf", "check_gcwf_morphism", "check_gcwf_cell",
    "comultiplication_from_counit", "gcwf_lemma_suite", "is_cwf", "has_terminal",
    "compose_compcat_morphisms", "identity_compcat_morphism", "is_fully_faithful",
    "top_arrow",
]


# ---------------------------------------------------------------------------
# arrow categories

@lru_cache(maxsize=64)
def arrow_category(B: FinCategory) -> FinCategory:
    """Objects are the arrows of ``B``; an arrow ``sq(d,e,u,v)`` from ``d: X -> Y``
    to ``e: X' -> Y'`` is a commuting square ``e∘u = v∘d``."""
    arrows, parts = {}, {}
    for d in B.sorted_arrows:
        X, Y = B.arrows[d]
        for e in B.sorted_arrows:
            X2, Y2 = B.arrows[e]
            for u in B.hom(X, X2):
                eu = B.compose(e, u)
                for v in B.hom(Y, Y2):
                    if eu == B.compose(v, d):
                        s = tag("sq", d, e, u, v)
                        arrows[s] = (d, e)
                        parts[s] = (d, e, u, v)
    ids = {d: tag("sq", d, d, B.id(B.src(d)), B.id(B.tgt(d))) for d in B.sorted_arrows}

    def compose(s2, s1):
        _, e2, u2, v2 = parts[s2]
        d1, _, u1, v1 = parts[s1]
        return tag("sq", d1, e2, B.compose(u2, u1), B.compose(v2, v1))

    A = FinCategory.build(B.sorted_arrows, arrows, ids, compose, f"{B.name}^2")
    _PARTS[A] = parts
    return A


_PARTS: dict = {}


def arrow_parts(A: FinCategory, s: Arr) -> tuple[Arr, Arr, Arr, Arr]:
    """``(d, e, top, bottom)`` of a square in an arrow category."""
    return _PARTS[A][s]


def top_arrow(B: FinCategory, s: Arr) -> Arr:
    return arrow_parts(arrow_category(B), s)[2]


@lru_cache(maxsize=64)
def codomain_functor(B: FinCategory) -> Functor:
    A = arrow_category(B)
    return Functor(A, B, {d: B.tgt(d) for d in A.objects},
                   {s: arrow_parts(A, s)[3] for s in A.arrows}, f"cod_{B.name}")


@lru_cache(maxsize=64)
def domain_functor(B: FinCategory) -> Functor:
    A = arrow_category(B)
    return Functor(A, B, {d: B.src(d) for d in A.objects},
                   {s: arrow_parts(A, s)[2] for s in A.arrows}, f"dom_{B.name}")


@lru_cache(maxsize=64)
def codomain_fibration(B: FinCategory) -> Fibration:
    return make_cleavage(Fibration(codomain_functor(B), name=f"cod({B.name})"))


def arrow_functor(F: Functor) -> Functor:
    """``F^2`` on arrow categories."""
    A1, A2 = arrow_category(F.dom), arrow_category(F.cod)
    ar = {}
    for s in A1.arrows:
        d, e, u, v = arrow_parts(A1, s)
        ar[s] = tag("sq", F.ar(d), F.ar(e), F.ar(u), F.ar(v))
    return Functor(A1, A2, {d: F.ar(d) for d in A1.objects}, ar, f"{F.name}^2")


def arrow_nat(t: NatTransf) -> NatTransf:
    """``t^2: F^2 => G^2``; at ``d: X -> Y`` the square with sides ``t_X, t_Y``."""
    F, G = t.dom, t.cod
    B = F.dom
    comps = {d: tag("sq", F.ar(d), G.ar(d), t[B.src(d)], t[B.tgt(d)]) for d in B.arrows}
    return NatTransf(arrow_functor(F), arrow_functor(G), comps)


def _display_square(B: FinCategory, s: Arr) -> Square:
    d, e, u, v = arrow_parts(arrow_category(B), s)
    return Square(top=u, left=d, right=e, bottom=v)


def is_fully_faithful(F: Functor) -> bool:
    C, D = F.dom, F.cod
    for x in C.objects:
        for y in C.objects:
            images = [F.ar(f) for f in C.hom(x, y)]
            if len(set(images)) != len(images) or set(images) != set(D.hom(F.ob(x), F.ob(y))):
                return False
    return True


def has_terminal(B: FinCategory) -> bool:
    return any(all(len(B.hom(x, t)) == 1 for x in B.objects) for t in B.objects)


def _keyed(cls):
    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, cls):
            return NotImplemented
        return self._key == other._key

    cls.__eq__ = __eq__
    cls.__hash__ = lambda self: hash(self._key)
    return cls


# ---------------------------------------------------------------------------
# comprehension categories

@_keyed
@dataclass(frozen=True, eq=False)
class CompCat:
    fibration: Fibration
    chi: Functor          # total -> base^2
    name: str = ""

    @property
    def base(self) -> FinCategory:
        return self.fibration.base

    @property
    def total(self) -> FinCategory:
        return self.fibration.total

    def display(self, e: Obj) -> Arr:
        return self.chi.ob(e)

    @cached_property
    def full(self) -> bool:
        return is_fully_faithful(self.chi)

    @cached_property
    def _key(self):
        return (self.fibration, self.chi)

    def __repr__(self):
        return f"<CompCat {self.name or '?'}>"


def check_compcat(c: CompCat) -> Report:
    r = Report(f"comprehension category {c.name or '?'}")
    B = c.base
    if c.chi.dom != c.total or c.chi.cod != arrow_category(B):
        r.error("boundary mismatch", "comprehension")
        return r
    r.add(check_fibration(c.fibration))
    fc = check_functor(c.chi)
    if not fc.ok:
        r.add(fc)
    if not r.ok:
        return r
    cod = codomain_functor(B)
    if compose_functors(cod, c.chi) != c.fibration.functor:
        for x in c.total.objects:
            if cod.ob(c.chi.ob(x)) != c.fibration.ob(x):
                r.fail("comprehension not over base", x)
        for f in c.total.sorted_arrows:
            if cod.ar(c.chi.ar(f)) != c.fibration.ar(f):
                r.fail("comprehension not over base", f)
        return r
    for f in sorted(c.fibration.cartesian):
        if not is_pullback(B, _display_square(B, c.chi.ar(f))):
            r.fail("cartesian arrow not sent to a pullback", f, c.chi.ar(f))
    r.info["full"] = c.full
    r.info["discrete"] = is_discrete(c.fibration)
    if c.fibration.cleavage is not None:
        r.info["split"] = is_split(c.fibration)
    return r


@_keyed
@dataclass(frozen=True, eq=False)
class CompCatMorphism:
    """``(B, H, zeta)`` with ``zeta: B^2∘chi => chi'∘H`` having identity bottoms."""

    dom: CompCat
    cod: CompCat
    base: Functor
    total: Functor
    zeta: NatTransf
    name: str = ""

    def top(self, e: Obj) -> Arr:
        return arrow_parts(arrow_category(self.cod.base), self.zeta[e])[2]

    @property
    def klass(self) -> str:
        return morphism_class(self.zeta)

    @property
    def fib_morphism(self) -> FibMorphism:
        return FibMorphism(self.dom.fibration, self.cod.fibration, self.base, self.total)

    @cached_property
    def _key(self):
        return (self.dom, self.cod, self.base, self.total, self.zeta)


@_keyed
@dataclass(frozen=True, eq=False)
class CompCat2Cell:
    dom: CompCatMorphism
    cod: CompCatMorphism
    base: NatTransf
    total: NatTransf

    @cached_property
    def _key(self):
        return (self.dom, self.cod, self.base, self.total)


def check_compcat_morphism(m: CompCatMorphism) -> Report:
    r = Report(f"comprehension category morphism {m.name or '?'}")
    B2 = m.cod.base
    A2 = arrow_category(B2)
    fm = check_fib_morphism(m.fib_morphism)
    if not fm.ok:
        r.add(fm)
        return r
    want_dom = compose_functors(arrow_functor(m.base), m.dom.chi)
    want_cod = compose_functors(m.cod.chi, m.total)
    if m.zeta.dom != want_dom or m.zeta.cod != want_cod:
        r.error("boundary mismatch", "zeta")
        return r
    nc = check_nat(m.zeta)
    if not nc.ok:
        r.add(nc)
        return r
    for e in m.dom.total.objects:
        if not B2.is_identity(arrow_parts(A2, m.zeta[e])[3]):
            r.fail("zeta bottom not identity", e)
    r.info["class"] = m.klass
    return r


def check_compcat_2cell(t: CompCat2Cell) -> Report:
    r = Report("comprehension category 2-cell")
    m1, m2 = t.dom, t.cod
    if m1.dom != m2.dom or m1.cod != m2.cod:
        r.error("boundary mismatch", "morphisms not parallel")
        return r
    fc = check_fib_2cell(Fib2Cell(m1.fib_morphism, m2.fib_morphism, t.base, t.total))
    if not fc.ok:
        r.add(fc)
        return r
    B2 = m1.cod.base
    A2 = arrow_category(B2)
    psi2 = arrow_nat(t.base)
    chi, chi2 = m1.dom.chi, m1.cod.chi
    for e in m1.dom.total.objects:
        lhs = A2.compose(chi2.ar(t.total[e]), m1.zeta[e])
        rhs = A2.compose(m2.zeta[e], psi2[chi.ob(e)])
        if lhs != rhs:
            r.fail("2-cell condition", e)
    if m1.klass == "strict" and m2.klass == "strict":
        dom = domain_functor(B2)
        for e in m1.dom.total.objects:
            if dom.ar(chi2.ar(t.total[e])) != t.base[m1.dom.base.src(chi.ob(e))]:
                r.fail("2-cell domain equation", e)
    return r


def identity_compcat_morphism(c: CompCat) -> CompCatMorphism:
    IB, IE = identity_functor(c.base), identity_functor(c.total)
    A = arrow_category(c.base)
    return CompCatMorphism(c, c, IB, IE, NatTransf(
        compose_functors(arrow_functor(IB), c.chi), compose_functors(c.chi, IE),
        {e: A.id(c.chi.ob(e)) for e in c.total.objects}))


def compose_compcat_morphisms(m2: CompCatMorphism, m1: CompCatMorphism) -> CompCatMorphism:
    """``(B2 B1, H2 H1, (zeta2 H1)(B2^2 zeta1))``."""
    if m1.cod != m2.dom:
        raise BoundaryError("comprehension category morphisms are not composable")
    B = compose_functors(m2.base, m1.base)
    H = compose_functors(m2.total, m1.total)
    A3 = arrow_category(m2.cod.base)
    b2sq = arrow_functor(m2.base)
    comps = {e: A3.compose(m2.zeta[m1.total.ob(e)], b2sq.ar(m1.zeta[e])) for e in m1.dom.total.objects}
    return CompCatMorphism(m1.dom, m2.cod, B, H, NatTransf(
        compose_functors(arrow_functor(B), m1.dom.chi), compose_functors(m2.cod.chi, H), comps))


# ---------------------------------------------------------------------------
# weakening-and-contraction comonads

@_keyed
@dataclass(frozen=True, eq=False)
class WCComonad:
    fibration: Fibration
    comonad: Comonad
    name: str = ""

    @property
    def base(self) -> FinCategory:
        return self.fibration.base

    @property
    def total(self) -> FinCategory:
        return self.fibration.total

    @cached_property
    def _key(self):
        return (self.fibration, self.comonad)

    def __repr__(self):
        return f"<WCComonad {self.name or '?'}>"


def _wc_conditions(r: Report, p: Fibration, K: Functor, eps: NatTransf) -> None:
    E, B = p.total, p.base
    cart = p.cartesian
    for a in E.objects:
        if eps[a] not in cart:
            r.fail("counit not cartesian", a, eps[a])
    for f in sorted(cart):
        a, b = E.arrows[f]
        sq = Square(top=p.ar(eps[a]), left=p.ar(K.ar(f)), right=p.ar(f), bottom=p.ar(eps[b]))
        try:
            ok = is_pullback(B, sq)
        except SquareError:
            r.error("counit square does not commute", f)
            continue
        if not ok:
            r.fail("counit square not a pullback", f)


def check_wccmd(w: WCComonad) -> Report:
    r = Report(f"WC comonad {w.name or '?'}")
    if w.comonad.base != w.total:
        r.error("boundary mismatch", "comonad not on the total category")
        return r
    r.add(check_fibration(w.fibration))
    r.add(check_comonad(w.comonad))
    if not r.ok:
        return r
    _wc_conditions(r, w.fibration, w.comonad.functor, w.comonad.counit)
    return r


def comultiplication_from_counit(p: Fibration, K: Functor, eps: NatTransf, name: str = "") -> Comonad:
    """The comultiplication forced by a cartesian counit with pullback squares.

    ``nu_A`` is the unique arrow with ``eps_{KA}∘nu_A = id`` and ``K(eps_A)∘nu_A = id``.
    """
    pre = Report("copointed endofunctor")
    nc = check_nat(eps)
    if not nc.ok:
        raise KernelError(f"counit is not natural: {nc.first_failure()}")
    _wc_conditions(pre, p, K, eps)
    if not pre.ok:
        raise KernelError(f"copointed endofunctor fails the WC conditions: {pre.first_failure()}")
    E = p.total
    comps = {}
    for a in E.objects:
        ka = K.ob(a)
        kka = K.ob(ka)
        hits = [h for h in E.hom(ka, kka)
                if E.compose(eps[ka], h) == E.id(ka) and E.compose(K.ar(eps[a]), h) == E.id(ka)]
        if len(hits) != 1:
            raise UniquenessError(f"comultiplication at {a}", len(hits))
        comps[a] = hits[0]
    return Comonad(K, eps, NatTransf(K, compose_functors(K, K), comps, "comult"), name)


@_keyed
@dataclass(frozen=True, eq=False)
class WCMorphism:
    dom: WCComonad
    cod: WCComonad
    base: Functor
    total: Functor
    theta: NatTransf
    name: str = ""

    @property
    def comonad_morphism(self) -> ComonadMorphism:
        return ComonadMorphism(self.dom.comonad, self.cod.comonad, self.total, self.theta)

    @property
    def fib_morphism(self) -> FibMorphism:
        return FibMorphism(self.dom.fibration, self.cod.fibration, self.base, self.total)

    @property
    def klass(self) -> str:
        return morphism_class(self.theta)

    @cached_property
    def _key(self):
        return (self.dom, self.cod, self.base, self.total, self.theta)


@_keyed
@dataclass(frozen=True, eq=False)
class WC2Cell:
    dom: WCMorphism
    cod: WCMorphism
    base: NatTransf
    total: NatTransf

    @cached_property
    def _key(self):
        return (self.dom, self.cod, self.base, self.total)


def check_wc_morphism(m: WCMorphism) -> Report:
    r = Report(f"WC morphism {m.name or '?'}")
    r.add(check_fib_morphism(m.fib_morphism))
    if r.ok:
        r.add(check_comonad_morphism(m.comonad_morphism))
    if r.ok:
        r.info["class"] = m.klass
    return r


def check_wc_2cell(t: WC2Cell) -> Report:
    r = Report("WC 2-cell")
    r.add(check_fib_2cell(Fib2Cell(t.dom.fib_morphism, t.cod.fib_morphism, t.base, t.total)))
    if r.ok:
        r.add(check_comonad_cell(ComonadCell(t.dom.comonad_morphism, t.cod.comonad_morphism, t.total)))
    return r


# ---------------------------------------------------------------------------
# generalised categories with families

@_keyed
@dataclass(frozen=True, eq=False)
class Gcwf:
    """Types ``u``, terms ``du`` and an adjunction ``Sigma ⊣ Delta`` between their totals."""

    types: Fibration
    terms: Fibration
    adjunction: Adjunction
    name: str = ""

    @property
    def sigma(self) -> Functor:
        return self.adjunction.left

    @property
    def delta(self) -> Functor:
        return self.adjunction.right

    @property
    def base(self) -> FinCategory:
        return self.types.base

    @property
    def sigma_morphism(self) -> FibMorphism:
        return FibMorphism(self.terms, self.types, identity_functor(self.base), self.sigma)

    @cached_property
    def _key(self):
        return (self.types, self.terms, self.adjunction)

    def __repr__(self):
        return f"<Gcwf {self.name or '?'}>"


def check_gcwf(g: Gcwf) -> Report:
    r = Report(f"gcwf {g.name or '?'}")
    if g.types.base != g.terms.base:
        r.error("boundary mismatch", "fibrations over different bases")
    if g.sigma.dom != g.terms.total or g.sigma.cod != g.types.total:
        r.error("boundary mismatch", "Sigma")
    if r.errors:
        return r
    r.add(check_fibration(g.types))
    r.add(check_fibration(g.terms))
    r.add(check_adjunction(g.adjunction))
    if not r.ok:
        return r
    r.add(check_fib_morphism(g.sigma_morphism))
    a = g.adjunction
    for x in g.terms.total.objects:
        if not g.terms.is_cartesian(a.unit[x]):
            r.fail("unit not cartesian", x, a.unit[x])
    for x in g.types.total.objects:
        if not g.types.is_cartesian(a.counit[x]):
            r.fail("counit not cartesian", x, a.counit[x])
    r.info["discrete"] = is_cwf(g) if r.ok else False
    return r


@_keyed
@dataclass(frozen=True, eq=False)
class GcwfMorphism:
    """``(C, H, Hdot, zeta)`` with ``zeta: Sigma'∘Hdot => H∘Sigma``."""

    dom: Gcwf
    cod: Gcwf
    base: Functor
    total: Functor
    terms: Functor
    zeta: NatTransf
    name: str = ""

    @property
    def adj_morphism(self) -> AdjMorphism:
        return AdjMorphism(self.dom.adjunction, self.cod.adjunction, self.total, self.terms, self.zeta)

    @property
    def flavor(self) -> str:
        return self.adj_morphism.flavor

    @property
    def klass(self) -> str:
        return morphism_class(mate(self.adj_morphism))

    @cached_property
    def _key(self):
        return (self.dom, self.cod, self.base, self.total, self.terms, self.zeta)


@_keyed
@dataclass(frozen=True, eq=False)
class GcwfCell:
    dom: GcwfMorphism
    cod: GcwfMorphism
    base: NatTransf
    total: NatTransf
    terms: NatTransf

    @cached_property
    def _key(self):
        return (self.dom, self.cod, self.base, self.total, self.terms)


def check_gcwf_morphism(m: GcwfMorphism) -> Report:
    r = Report(f"gcwf morphism {m.name or '?'}")
    r.add(check_fib_morphism(FibMorphism(m.dom.types, m.cod.types, m.base, m.total)))
    r.add(check_fib_morphism(FibMorphism(m.dom.terms, m.cod.terms, m.base, m.terms)))
    if r.ok:
        r.add(check_adj_morphism(m.adj_morphism))
    if r.ok:
        r.info["flavor"] = m.flavor
        r.info["class"] = m.klass
    return r


def check_gcwf_cell(t: GcwfCell) -> Report:
    r = Report("gcwf 2-cell")
    d, c = t.dom, t.cod
    r.add(check_fib_2cell(Fib2Cell(FibMorphism(d.dom.types, d.cod.types, d.base, d.total),
                                   FibMorphism(c.dom.types, c.cod.types, c.base, c.total), t.base, t.total)))
    r.add(check_fib_2cell(Fib2Cell(FibMorphism(d.dom.terms, d.cod.terms, d.base, d.terms),
                                   FibMorphism(c.dom.terms, c.cod.terms, c.base, c.terms), t.base, t.terms)))
    if r.ok:
        r.add(check_adj_cell(AdjCell(d.adj_morphism, c.adj_morphism, t.total, t.terms)))
    return r


def is_cwf(g: Gcwf) -> bool:
    return is_discrete(g.types) and is_discrete(g.terms)


def gcwf_lemma_suite(g: Gcwf) -> Report:
    """Exhaustive checks of the standard consequences of the gcwf axioms.

    Each lemma runs on its own; one that hits an undefined composite (possible
    only on invalid input) records an error and the rest still run.
    """
    r = Report(f"gcwf lemmas {g.name or '?'}")
    a = g.adjunction
    S, D = g.sigma, g.delta
    Et, Eu = g.terms.total, g.types.total
    B = g.base
    u, du = g.types, g.terms

    def unit_monic(rep):
        for x in Et.objects:
            if not is_monic(Et, a.unit[x]):
                rep.fail("unit not monic", x, a.unit[x])

    def sigma_bijection(rep):
        for x in Et.objects:
            for y in Et.objects:
                images = [S.ar(f) for f in Et.hom(x, y)]
                if len(set(images)) != len(images):
                    rep.fail("Sigma not injective on hom-set", x, y)
                ex, ey = a.unit[x], a.unit[y]
                expected = {f for f in Eu.hom(S.ob(x), S.ob(y))
                            if Eu.compose(S.ar(ey), f) == Eu.compose(S.ar(D.ar(f)), S.ar(ex))}
                if set(images) != expected:
                    rep.fail("Sigma image differs from characterisation", x, y)

    def delta_cartesian(rep):
        for f in sorted(u.cartesian):
            if D.ar(f) not in du.cartesian:
                rep.fail("Delta-cartesian", f, D.ar(f))

    def sigma_reflects(rep):
        for f in Et.sorted_arrows:
            if S.ar(f) in u.cartesian and f not in du.cartesian:
                rep.fail("Sigma does not reflect cartesian", f)

    def base_pullback(rep):
        for f in sorted(u.cartesian):
            x, y = Eu.arrows[f]
            sq = Square(top=u.ar(a.counit[x]), left=du.ar(D.ar(f)), right=u.ar(f), bottom=u.ar(a.counit[y]))
            try:
                ok = is_pullback(B, sq)
            except SquareError:
                rep.error("base square does not commute", f)
                continue
            if not ok:
                rep.fail("base square not a pullback", f)

    for title, lemma in (("unit monic", unit_monic), ("Sigma hom-set bijection", sigma_bijection),
                         ("Delta preserves cartesian", delta_cartesian),
                         ("Sigma reflects cartesian", sigma_reflects), ("base pullback", base_pullback)):
        rep = r.add(Report(title))
        try:
            lemma(rep)
        except (KernelError, KeyError) as exc:
            rep.error("lemma could not be evaluated", str(exc))
    return r
