"""Comonads, adjunctions, their morphisms, and the coalgebra construction.

Conventions: an :class:`Adjunction` has ``left: D -> C`` and ``right: C -> D``
with ``unit: Id_D => right∘left`` and ``counit: left∘right => Id_C``.  A
morphism of adjunctions ``(F, G, zeta)`` has ``F: C -> C'``, ``G: D -> D'`` and
``zeta: left'∘G => F∘left``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

from .kernel import (
    Arr, BoundaryError, FinCategory, Functor, KernelError, NatTransf, Obj, Report,
    check_functor, check_nat, compose_functors, identity_functor, inverse,
    is_iso, tag,
)

__all__ = [
    "Comonad", "ComonadMorphism", "ComonadCell", "Adjunction", "AdjMorphism", "AdjCell",
    "EilenbergMoore", "morphism_class",
    "check_comonad", "check_comonad_morphism", "check_comonad_cell",
    "check_adjunction", "check_adj_morphism", "check_adj_cell", "adj_cell_squares",
    "identity_comonad", "identity_comonad_morphism", "compose_comonad_morphisms",
    "identity_adjunction", "identity_adj_morphism", "compose_adj_morphisms",
    "mate", "inverse_mate", "eilenberg_moore", "coal_of_morphism", "coal_of_cell",
    "lift_theta", "comonad_of_adjunction", "reflector_on_morphism", "reflector_on_cell",
    "em_morphism", "em_cell", "comparison_functor", "unit_morphism", "lift_unit_iso",
    "check_triangle_identities_2refl",
]


def _nat(F: Functor, G: Functor, comps: dict, name: str = "") -> NatTransf:
    return NatTransf(F, G, comps, name)


def morphism_class(t: NatTransf) -> str:
    """``strict`` if every component is an identity, ``pseudo`` if every one is
    invertible, ``lax`` otherwise."""
    D = t.dom.cod
    comps = t.components.values()
    if all(D.is_identity(a) for a in comps):
        return "strict"
    if all(is_iso(D, a) for a in comps):
        return "pseudo"
    return "lax"


def _keyed_eq(cls):
    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, cls):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    cls.__eq__ = __eq__
    cls.__hash__ = __hash__
    return cls


# ---------------------------------------------------------------------------
# comonads

@_keyed_eq
@dataclass(frozen=True, eq=False)
class Comonad:
    functor: Functor
    counit: NatTransf
    comult: NatTransf
    name: str = ""

    @property
    def base(self) -> FinCategory:
        return self.functor.dom

    def ob(self, x: Obj) -> Obj:
        return self.functor.ob(x)

    def ar(self, f: Arr) -> Arr:
        return self.functor.ar(f)

    @cached_property
    def _key(self):
        return (self.functor, self.counit, self.comult)


@_keyed_eq
@dataclass(frozen=True, eq=False)
class ComonadMorphism:
    """``(H, theta)`` with ``theta: H∘K => K'∘H``."""

    dom: Comonad
    cod: Comonad
    functor: Functor
    theta: NatTransf
    name: str = ""

    @property
    def klass(self) -> str:
        return morphism_class(self.theta)

    @cached_property
    def _key(self):
        return (self.dom, self.cod, self.functor, self.theta)


@_keyed_eq
@dataclass(frozen=True, eq=False)
class ComonadCell:
    dom: ComonadMorphism
    cod: ComonadMorphism
    nat: NatTransf

    @cached_property
    def _key(self):
        return (self.dom, self.cod, self.nat)


def identity_comonad(c: FinCategory) -> Comonad:
    I = identity_functor(c)
    ids = {x: c.id(x) for x in c.objects}
    return Comonad(I, _nat(I, I, ids), _nat(I, compose_functors(I, I), ids), f"Id_{c.name}")


def check_comonad(K: Comonad) -> Report:
    r = Report(f"comonad {K.name or '?'}")
    C = K.base
    F = K.functor
    if F.cod != C:
        r.error("boundary mismatch", "functor is not an endofunctor")
        return r
    if K.counit.dom != F or K.counit.cod != identity_functor(C):
        r.error("boundary mismatch", "counit")
    if K.comult.dom != F or K.comult.cod != compose_functors(F, F):
        r.error("boundary mismatch", "comultiplication")
    if r.errors:
        return r
    for sub in (check_functor(F), check_nat(K.counit), check_nat(K.comult)):
        if not sub.ok:
            r.add(sub)
    if not r.ok:
        return r
    eps, nu = K.counit, K.comult
    for a in C.objects:
        ka = F.ob(a)
        if C.compose(eps[ka], nu[a]) != C.id(ka):
            r.fail("left counit law", a)
        if C.compose(F.ar(eps[a]), nu[a]) != C.id(ka):
            r.fail("right counit law", a)
        if C.compose(nu[ka], nu[a]) != C.compose(F.ar(nu[a]), nu[a]):
            r.fail("coassociativity", a)
    return r


def check_comonad_morphism(m: ComonadMorphism) -> Report:
    r = Report(f"comonad morphism {m.name or '?'}")
    K, K2, H = m.dom, m.cod, m.functor
    if H.dom != K.base or H.cod != K2.base:
        r.error("boundary mismatch", "functor")
        return r
    if m.theta.dom != compose_functors(H, K.functor) or m.theta.cod != compose_functors(K2.functor, H):
        r.error("boundary mismatch", "theta")
        return r
    for sub in (check_functor(H), check_nat(m.theta)):
        if not sub.ok:
            r.add(sub)
    if not r.ok:
        return r
    C2 = K2.base
    th = m.theta
    for a in K.base.objects:
        ha = H.ob(a)
        if C2.compose(K2.counit[ha], th[a]) != H.ar(K.counit[a]):
            r.fail("counit diagram", a)
        lhs = C2.compose(K2.comult[ha], th[a])
        rhs = C2.compose(K2.ar(th[a]), th[K.ob(a)], H.ar(K.comult[a]))
        if lhs != rhs:
            r.fail("comultiplication diagram", a)
    r.info["class"] = m.klass
    return r


def check_comonad_cell(c: ComonadCell) -> Report:
    r = Report("comonad 2-cell")
    m1, m2 = c.dom, c.cod
    if m1.dom != m2.dom or m1.cod != m2.cod:
        r.error("boundary mismatch", "morphisms not parallel")
        return r
    if c.nat.dom != m1.functor or c.nat.cod != m2.functor:
        r.error("boundary mismatch", "transformation")
        return r
    sub = check_nat(c.nat)
    if not sub.ok:
        r.add(sub)
        return r
    C2, K, K2 = m1.cod.base, m1.dom, m1.cod
    for a in K.base.objects:
        if C2.compose(K2.ar(c.nat[a]), m1.theta[a]) != C2.compose(m2.theta[a], c.nat[K.ob(a)]):
            r.fail("2-cell diagram", a)
    return r


def identity_comonad_morphism(K: Comonad) -> ComonadMorphism:
    I = identity_functor(K.base)
    KF = K.functor
    return ComonadMorphism(K, K, I, _nat(compose_functors(I, KF), compose_functors(KF, I),
                                         {x: K.base.id(KF.ob(x)) for x in K.base.objects}))


def compose_comonad_morphisms(m2: ComonadMorphism, m1: ComonadMorphism) -> ComonadMorphism:
    """``(H2 H1, (theta2 H1)(H2 theta1))``."""
    if m1.cod != m2.dom:
        raise BoundaryError("comonad morphisms are not composable")
    H = compose_functors(m2.functor, m1.functor)
    C3 = m2.cod.base
    comps = {a: C3.compose(m2.theta[m1.functor.ob(a)], m2.functor.ar(m1.theta[a]))
             for a in m1.dom.base.objects}
    return ComonadMorphism(m1.dom, m2.cod, H,
                           _nat(compose_functors(H, m1.dom.functor), compose_functors(m2.cod.functor, H), comps))


# ---------------------------------------------------------------------------
# adjunctions

@_keyed_eq
@dataclass(frozen=True, eq=False)
class Adjunction:
    left: Functor
    right: Functor
    unit: NatTransf
    counit: NatTransf
    name: str = ""

    @property
    def C(self) -> FinCategory:
        """Codomain of the left adjoint."""
        return self.left.cod

    @property
    def D(self) -> FinCategory:
        return self.left.dom

    @cached_property
    def _key(self):
        return (self.left, self.right, self.unit, self.counit)


@_keyed_eq
@dataclass(frozen=True, eq=False)
class AdjMorphism:
    dom: Adjunction
    cod: Adjunction
    F: Functor
    G: Functor
    zeta: NatTransf
    name: str = ""

    @property
    def flavor(self) -> str:
        D = self.zeta.dom.cod
        return "tight" if self.zeta.dom == self.zeta.cod and all(
            D.is_identity(a) for a in self.zeta.components.values()) else "loose"

    @property
    def klass(self) -> str:
        return morphism_class(mate(self))

    @cached_property
    def _key(self):
        return (self.dom, self.cod, self.F, self.G, self.zeta)


@_keyed_eq
@dataclass(frozen=True, eq=False)
class AdjCell:
    dom: AdjMorphism
    cod: AdjMorphism
    phi: NatTransf   # F1 => F2
    psi: NatTransf   # G1 => G2

    @cached_property
    def _key(self):
        return (self.dom, self.cod, self.phi, self.psi)


def identity_adjunction(c: FinCategory) -> Adjunction:
    I = identity_functor(c)
    ids = {x: c.id(x) for x in c.objects}
    II = compose_functors(I, I)
    return Adjunction(I, I, _nat(I, II, ids), _nat(II, I, ids), f"Id_{c.name}")


def check_adjunction(a: Adjunction) -> Report:
    r = Report(f"adjunction {a.name or '?'}")
    L, R = a.left, a.right
    if L.cod != R.dom or R.cod != L.dom:
        r.error("boundary mismatch", "functors not opposed")
        return r
    if a.unit.dom != identity_functor(a.D) or a.unit.cod != compose_functors(R, L):
        r.error("boundary mismatch", "unit")
    if a.counit.dom != compose_functors(L, R) or a.counit.cod != identity_functor(a.C):
        r.error("boundary mismatch", "counit")
    if r.errors:
        return r
    for sub in (check_functor(L), check_functor(R), check_nat(a.unit), check_nat(a.counit)):
        if not sub.ok:
            r.add(sub)
    if not r.ok:
        return r
    C, D = a.C, a.D
    for d in D.objects:
        if C.compose(a.counit[L.ob(d)], L.ar(a.unit[d])) != C.id(L.ob(d)):
            r.fail("left triangle", d)
    for c in C.objects:
        if D.compose(R.ar(a.counit[c]), a.unit[R.ob(c)]) != D.id(R.ob(c)):
            r.fail("right triangle", c)
    return r


def mate(m: AdjMorphism) -> NatTransf:
    """``zeta#: G∘R => R'∘F``, at ``c`` the composite ``R'F(eps_c) · R'(zeta_{Rc}) · eta'_{GRc}``."""
    a, b = m.dom, m.cod
    R, R2, F, G = a.right, b.right, m.F, m.G
    D2 = b.D
    comps = {}
    for c in a.C.objects:
        rc = R.ob(c)
        comps[c] = D2.compose(R2.ar(F.ar(a.counit[c])), R2.ar(m.zeta[rc]), b.unit[G.ob(rc)])
    return _nat(compose_functors(G, R), compose_functors(R2, F), comps)


def inverse_mate(dom: Adjunction, cod: Adjunction, F: Functor, G: Functor, xi: NatTransf) -> NatTransf:
    """Back from ``xi: G∘R => R'∘F`` to ``left'∘G => F∘left``."""
    L, L2 = dom.left, cod.left
    C2 = cod.C
    comps = {}
    for d in dom.D.objects:
        ld = L.ob(d)
        comps[d] = C2.compose(cod.counit[F.ob(ld)], L2.ar(xi[ld]), L2.ar(G.ar(dom.unit[d])))
    return _nat(compose_functors(L2, G), compose_functors(F, L), comps)


def check_adj_morphism(m: AdjMorphism, *, loose: bool = True) -> Report:
    r = Report(f"adjunction morphism {m.name or '?'}")
    a, b, F, G = m.dom, m.cod, m.F, m.G
    if F.dom != a.C or F.cod != b.C or G.dom != a.D or G.cod != b.D:
        r.error("boundary mismatch", "functors")
        return r
    if m.zeta.dom != compose_functors(b.left, G) or m.zeta.cod != compose_functors(F, a.left):
        r.error("boundary mismatch", "zeta")
        return r
    for sub in (check_functor(F), check_functor(G), check_nat(m.zeta)):
        if not sub.ok:
            r.add(sub)
    if not r.ok:
        return r
    C2, D2 = b.C, b.D
    if loose:
        for d in a.D.objects:
            if not is_iso(C2, m.zeta[d]):
                r.fail("zeta not invertible", d)
    sharp = mate(m)
    for d in a.D.objects:
        ld = a.left.ob(d)
        if D2.compose(b.right.ar(m.zeta[d]), b.unit[G.ob(d)]) != D2.compose(sharp[ld], G.ar(a.unit[d])):
            r.fail("unit square", d)
    for c in a.C.objects:
        if C2.compose(F.ar(a.counit[c]), m.zeta[a.right.ob(c)]) != \
                C2.compose(b.counit[F.ob(c)], b.left.ar(sharp[c])):
            r.fail("counit square", c)
    r.info["flavor"] = m.flavor
    r.info["class"] = morphism_class(sharp)
    return r


def adj_cell_squares(c: AdjCell) -> tuple[bool, bool]:
    """(left square holds, right square holds) for a candidate 2-cell."""
    m1, m2 = c.dom, c.cod
    a, b = m1.dom, m1.cod
    C2, D2 = b.C, b.D
    left = all(
        C2.compose(c.phi[a.left.ob(d)], m1.zeta[d]) == C2.compose(m2.zeta[d], b.left.ar(c.psi[d]))
        for d in a.D.objects)
    s1, s2 = mate(m1), mate(m2)
    right = all(
        D2.compose(b.right.ar(c.phi[x]), s1[x]) == D2.compose(s2[x], c.psi[a.right.ob(x)])
        for x in a.C.objects)
    return left, right


def check_adj_cell(c: AdjCell) -> Report:
    r = Report("adjunction 2-cell")
    m1, m2 = c.dom, c.cod
    if m1.dom != m2.dom or m1.cod != m2.cod:
        r.error("boundary mismatch", "morphisms not parallel")
        return r
    if c.phi.dom != m1.F or c.phi.cod != m2.F or c.psi.dom != m1.G or c.psi.cod != m2.G:
        r.error("boundary mismatch", "transformations")
        return r
    for sub in (check_nat(c.phi), check_nat(c.psi)):
        if not sub.ok:
            r.add(sub)
    if not r.ok:
        return r
    a, b = m1.dom, m1.cod
    C2 = b.C
    for d in a.D.objects:
        if C2.compose(c.phi[a.left.ob(d)], m1.zeta[d]) != C2.compose(m2.zeta[d], b.left.ar(c.psi[d])):
            r.fail("2-cell square", d)
    return r


def identity_adj_morphism(a: Adjunction) -> AdjMorphism:
    IC, ID = identity_functor(a.C), identity_functor(a.D)
    return AdjMorphism(a, a, IC, ID, _nat(compose_functors(a.left, ID), compose_functors(IC, a.left),
                                          {d: a.C.id(a.left.ob(d)) for d in a.D.objects}))


def compose_adj_morphisms(m2: AdjMorphism, m1: AdjMorphism) -> AdjMorphism:
    """``(F2 F1, G2 G1, (F2 zeta1)(zeta2 G1))``."""
    if m1.cod != m2.dom:
        raise BoundaryError("adjunction morphisms are not composable")
    F = compose_functors(m2.F, m1.F)
    G = compose_functors(m2.G, m1.G)
    C3 = m2.cod.C
    comps = {d: C3.compose(m2.F.ar(m1.zeta[d]), m2.zeta[m1.G.ob(d)]) for d in m1.dom.D.objects}
    return AdjMorphism(m1.dom, m2.cod, F, G,
                       _nat(compose_functors(m2.cod.left, G), compose_functors(F, m1.dom.left), comps))


# ---------------------------------------------------------------------------
# coalgebras

@dataclass(frozen=True, eq=False)
class EilenbergMoore:
    """Coalgebras of ``comonad`` with the forgetful/cofree adjunction.

    Objects are named ``coal(A,a)`` and arrows ``cmap(a,b,f)``, so the same
    comonad always yields identical tables.
    """

    comonad: Comonad
    category: FinCategory
    forgetful: Functor
    cofree: Functor
    adjunction: Adjunction
    carriers: dict = field(repr=False)
    structures: dict = field(repr=False)

    def coalgebra(self, carrier: Obj, structure: Arr) -> Obj:
        return tag("coal", carrier, structure)

    def cmap(self, a: Arr, b: Arr, f: Arr) -> Arr:
        return tag("cmap", a, b, f)

    def structure(self, x: Obj) -> Arr:
        return self.structures[x]

    def carrier(self, x: Obj) -> Obj:
        return self.carriers[x]


def _is_coalgebra(K: Comonad, a_obj: Obj, a: Arr) -> bool:
    C = K.base
    return C.compose(K.counit[a_obj], a) == C.id(a_obj) and \
        C.compose(K.comult[a_obj], a) == C.compose(K.ar(a), a)


@lru_cache(maxsize=128)
def eilenberg_moore(K: Comonad) -> EilenbergMoore:
    C = K.base
    name = f"Coal({K.name})" if K.name else "Coal"
    coalgebras = []
    for A in C.objects:
        for a in C.hom(A, K.ob(A)):
            if _is_coalgebra(K, A, a):
                coalgebras.append((A, a))
    objects = [tag("coal", A, a) for A, a in coalgebras]
    carriers = {tag("coal", A, a): A for A, a in coalgebras}
    structures = {tag("coal", A, a): a for A, a in coalgebras}
    arrows, under = {}, {}
    for A, a in coalgebras:
        for B, b in coalgebras:
            for f in C.hom(A, B):
                if C.compose(b, f) == C.compose(K.ar(f), a):
                    h = tag("cmap", a, b, f)
                    arrows[h] = (tag("coal", A, a), tag("coal", B, b))
                    under[h] = (a, b, f)
    ids = {tag("coal", A, a): tag("cmap", a, a, C.id(A)) for A, a in coalgebras}

    def compose(h2, h1):
        b, c, g = under[h2]
        a, _, f = under[h1]
        return tag("cmap", a, c, C.compose(g, f))

    E = FinCategory.build(objects, arrows, ids, compose, name)
    U = Functor(E, C, carriers, {h: under[h][2] for h in arrows}, "U")
    nu = K.comult
    R = Functor(C, E, {A: tag("coal", K.ob(A), nu[A]) for A in C.objects},
                {f: tag("cmap", nu[C.src(f)], nu[C.tgt(f)], K.ar(f)) for f in C.arrows}, "R")
    for A in C.objects:
        if R.ob(A) not in carriers:
            raise KernelError(f"comultiplication at {A} is not a coalgebra; is the comonad valid?")
    IE = identity_functor(E)
    RU = compose_functors(R, U)
    unit = _nat(IE, RU, {x: tag("cmap", structures[x], nu[carriers[x]], structures[x]) for x in objects}, "unit")
    counit = _nat(compose_functors(U, R), identity_functor(C), dict(K.counit.components), "counit")
    adj = Adjunction(U, R, unit, counit, f"EM({K.name})" if K.name else "EM")
    return EilenbergMoore(K, E, U, R, adj, carriers, structures)


def coal_of_morphism(m: ComonadMorphism) -> Functor:
    """Coalgebras along ``(H, theta)``: ``(A, a) |-> (HA, theta_A · Ha)``."""
    em1, em2 = eilenberg_moore(m.dom), eilenberg_moore(m.cod)
    H, th, C2 = m.functor, m.theta, m.cod.base
    new_struct = {}
    ob = {}
    for x in em1.category.objects:
        A, a = em1.carriers[x], em1.structures[x]
        s = C2.compose(th[A], H.ar(a))
        y = tag("coal", H.ob(A), s)
        if y not in em2.carriers:
            raise KernelError(f"image of {x} is not a coalgebra; is the morphism valid?")
        ob[x] = y
        new_struct[a] = s
    ar = {}
    for h in em1.category.arrows:
        x, y = em1.category.arrows[h]
        f = em1.forgetful.ar(h)
        ar[h] = tag("cmap", new_struct[em1.structures[x]], new_struct[em1.structures[y]], H.ar(f))
    return Functor(em1.category, em2.category, ob, ar, f"Coal({m.name})" if m.name else "Coal")


def lift_theta(m: ComonadMorphism) -> NatTransf:
    """``theta`` lifted to coalgebras: ``Coal(H,theta)∘R => R'∘H`` with underlying ``theta``."""
    em1, em2 = eilenberg_moore(m.dom), eilenberg_moore(m.cod)
    G = coal_of_morphism(m)
    H, th, C2 = m.functor, m.theta, m.cod.base
    comps = {}
    for E in m.dom.base.objects:
        src_struct = C2.compose(th[m.dom.ob(E)], H.ar(m.dom.comult[E]))
        comps[E] = tag("cmap", src_struct, m.cod.comult[H.ob(E)], th[E])
    return _nat(compose_functors(G, em1.cofree), compose_functors(em2.cofree, H), comps)


def coal_of_cell(c: ComonadCell) -> NatTransf:
    G1, G2 = coal_of_morphism(c.dom), coal_of_morphism(c.cod)
    em2 = eilenberg_moore(c.dom.cod)
    comps = {}
    for x in G1.dom.objects:
        a1 = em2.structures[G1.ob(x)]
        a2 = em2.structures[G2.ob(x)]
        comps[x] = tag("cmap", a1, a2, c.nat[eilenberg_moore(c.dom.dom).carriers[x]])
    return _nat(G1, G2, comps)


def comonad_of_adjunction(a: Adjunction) -> Comonad:
    """``(L R, counit, L unit R)``."""
    L, R = a.left, a.right
    LR = compose_functors(L, R)
    nu = {c: L.ar(a.unit[R.ob(c)]) for c in a.C.objects}
    eps = _nat(LR, identity_functor(a.C), dict(a.counit.components), "counit")
    return Comonad(LR, eps, _nat(LR, compose_functors(LR, LR), nu, "comult"),
                   f"LR({a.name})" if a.name else "")


def em_morphism(m: ComonadMorphism) -> AdjMorphism:
    """The tight morphism ``(H, Coal(H,theta), id)`` between coalgebra adjunctions."""
    em1, em2 = eilenberg_moore(m.dom), eilenberg_moore(m.cod)
    G = coal_of_morphism(m)
    U1, U2, H = em1.forgetful, em2.forgetful, m.functor
    comps = {x: m.cod.base.id(H.ob(U1.ob(x))) for x in em1.category.objects}
    return AdjMorphism(em1.adjunction, em2.adjunction, H, G,
                       _nat(compose_functors(U2, G), compose_functors(H, U1), comps))


def em_cell(c: ComonadCell) -> AdjCell:
    return AdjCell(em_morphism(c.dom), em_morphism(c.cod), c.nat, coal_of_cell(c))


def reflector_on_morphism(m: AdjMorphism) -> ComonadMorphism:
    """``(F, L'zeta# · zeta^{-1} R)`` between the induced comonads."""
    a, b = m.dom, m.cod
    sharp = mate(m)
    C2 = b.C
    comps = {}
    for c in a.C.objects:
        z = m.zeta[a.right.ob(c)]
        zi = inverse(C2, z)
        if zi is None:
            raise KernelError(f"zeta at {a.right.ob(c)} is not invertible; the reflector needs a loose morphism")
        comps[c] = C2.compose(b.left.ar(sharp[c]), zi)
    K1, K2 = comonad_of_adjunction(a), comonad_of_adjunction(b)
    return ComonadMorphism(K1, K2, m.F,
                           _nat(compose_functors(m.F, K1.functor), compose_functors(K2.functor, m.F), comps))


def reflector_on_cell(c: AdjCell) -> ComonadCell:
    return ComonadCell(reflector_on_morphism(c.dom), reflector_on_morphism(c.cod), c.phi)


def comparison_functor(a: Adjunction) -> Functor:
    """``d |-> (Ld, L(eta_d))`` into coalgebras of ``L R``."""
    em = eilenberg_moore(comonad_of_adjunction(a))
    L = a.left
    struct = {d: L.ar(a.unit[d]) for d in a.D.objects}
    ob = {d: tag("coal", L.ob(d), struct[d]) for d in a.D.objects}
    ar = {g: tag("cmap", struct[a.D.src(g)], struct[a.D.tgt(g)], L.ar(g)) for g in a.D.arrows}
    for d, x in ob.items():
        if x not in em.carriers:
            raise KernelError(f"comparison image of {d} is not a coalgebra")
    return Functor(a.D, em.category, ob, ar, "comparison")


def unit_morphism(a: Adjunction) -> AdjMorphism:
    """``(Id, comparison, id)`` from ``a`` to the coalgebra adjunction of its comonad."""
    em = eilenberg_moore(comonad_of_adjunction(a))
    Kc = comparison_functor(a)
    I = identity_functor(a.C)
    comps = {d: a.C.id(a.left.ob(d)) for d in a.D.objects}
    return AdjMorphism(a, em.adjunction, I, Kc,
                       _nat(compose_functors(em.forgetful, Kc), compose_functors(I, a.left), comps))


def lift_unit_iso(m: AdjMorphism) -> NatTransf:
    """``zeta`` as a map of coalgebras ``K'∘G => Coal(M m)∘K``."""
    a, b = m.dom, m.cod
    Mm = reflector_on_morphism(m)
    K1, K2 = comparison_functor(a), comparison_functor(b)
    coal = coal_of_morphism(Mm)
    C2 = b.C
    comps = {}
    for d in a.D.objects:
        s_src = b.left.ar(b.unit[m.G.ob(d)])
        ld = a.left.ob(d)
        s_tgt = C2.compose(Mm.theta[ld], m.F.ar(a.left.ar(a.unit[d])))
        comps[d] = tag("cmap", s_src, s_tgt, m.zeta[d])
    return _nat(compose_functors(K2, m.G), compose_functors(coal, K1), comps)


def check_triangle_identities_2refl(*, comonads=(), adjunctions=(), morphisms=(), cells=()) -> Report:
    """Reflecting the coalgebra embedding gives back its input, and the
    reflector sends each adjunction's unit to an identity.

    Inputs that fail their own checker are reported as errors and skipped.
    """
    r = Report("bireflection triangle identities")

    def valid(kind, x, checker, name):
        sub = checker(x)
        if not sub.ok:
            r.error(f"invalid {kind}", name, detail=str(sub.first_failure()))
        return sub.ok

    for K in comonads:
        if not valid("comonad", K, check_comonad, K.name or "?"):
            continue
        em = eilenberg_moore(K)
        if comonad_of_adjunction(em.adjunction) != K:
            r.fail("reflector after coalgebras is not the identity", K.name or "?")
        if comparison_functor(em.adjunction) != identity_functor(em.category):
            r.fail("unit at a coalgebra adjunction is not the identity", K.name or "?")
    for m in morphisms:
        if not valid("comonad morphism", m, check_comonad_morphism, m.name or "?"):
            continue
        if reflector_on_morphism(em_morphism(m)) != m:
            r.fail("reflector after coalgebras changes a morphism", m.name or "?")
    for c in cells:
        if not valid("comonad 2-cell", c, check_comonad_cell, "cell"):
            continue
        if reflector_on_cell(em_cell(c)) != c:
            r.fail("reflector after coalgebras changes a 2-cell", "cell")
    for a in adjunctions:
        if not valid("adjunction", a, check_adjunction, a.name or "?"):
            continue
        reflected = reflector_on_morphism(unit_morphism(a))
        if reflected != identity_comonad_morphism(comonad_of_adjunction(a)):
            r.fail("reflected unit is not the identity", a.name or "?")
    r.info["checked"] = len(comonads) + len(adjunctions) + len(morphisms) + len(cells)
    return r
