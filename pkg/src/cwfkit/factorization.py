"""Identity-on-objects / fully faithful factorisation and what it does to
comprehension categories."""
from __future__ import annotations

from dataclasses import dataclass

from .fibration import Fibration, is_split, preserves_cleavage
from .kernel import (
    FinCategory, Functor, KernelError, NatTransf, Report, SearchBudget, compose_functors,
    enumerate_functors, enumerate_nats, identity_functor, is_iso, tag,
)
from .structures import (
    CompCat, CompCatMorphism, Gcwf, arrow_category, arrow_functor, arrow_parts,
    codomain_functor, compose_compcat_morphisms, is_cwf,
)
from .translations import gcwf_to_compcat

__all__ = [
    "Factorization", "factor", "check_factorization", "heart", "heart_unit",
    "enumerate_compcat_morphisms", "heart_reflection_check", "split_to_discrete",
    "split_to_discrete_compcat", "pseudo_cwf_homset", "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 200_000


@dataclass(frozen=True)
class Factorization:
    left: Functor    # identity on objects
    right: Functor   # fully faithful
    original: Functor

    @property
    def image(self) -> FinCategory:
        return self.left.cod


def factor(F: Functor) -> Factorization:
    """Split ``F`` through the category with ``F``'s domain objects and hom-sets
    ``hom(X, Y) := hom(FX, FY)``; arrows there are named ``im(X,Y,g)``."""
    C, D = F.dom, F.cod
    arrows, under = {}, {}
    for x in C.objects:
        for y in C.objects:
            for g in D.hom(F.ob(x), F.ob(y)):
                a = tag("im", x, y, g)
                arrows[a] = (x, y)
                under[a] = g
    ids = {x: tag("im", x, x, D.id(F.ob(x))) for x in C.objects}

    def compose(a2, a1):
        x, _ = arrows[a1]
        _, z = arrows[a2]
        return tag("im", x, z, D.compose(under[a2], under[a1]))

    image = FinCategory.build(C.objects, arrows, ids, compose, f"im({F.name})" if F.name else "im")
    left = Functor(C, image, {x: x for x in C.objects},
                   {f: tag("im", C.src(f), C.tgt(f), F.ar(f)) for f in C.arrows}, "a")
    right = Functor(image, D, dict(F.obj_map), under, "o")
    return Factorization(left, right, F)


def check_factorization(fac: Factorization) -> Report:
    r = Report("factorization")
    L, R, F = fac.left, fac.right, fac.original
    if L.cod != R.dom or R.cod != F.cod or L.dom != F.dom:
        r.error("boundary mismatch", "factors")
        return r
    for x in F.dom.objects:
        if R.ob(L.ob(x)) != F.ob(x):
            r.fail("factors do not compose to the original", x)
    for f in F.dom.sorted_arrows:
        if R.ar(L.ar(f)) != F.ar(f):
            r.fail("factors do not compose to the original", f)
    seen: dict = {}
    for x in F.dom.objects:
        y = L.ob(x)
        if y in seen:
            r.fail("left factor not injective on objects", seen[y], x)
        seen.setdefault(y, x)
    C, D = R.dom, R.cod
    for x in C.objects:
        for y in C.objects:
            images = [R.ar(f) for f in C.hom(x, y)]
            if len(set(images)) != len(images) or set(images) != set(D.hom(R.ob(x), R.ob(y))):
                r.fail("right factor not fully faithful", x, y)
    return r


def heart(c: CompCat) -> CompCat:
    """The full comprehension category obtained by factoring the comprehension."""
    fac = factor(c.chi)
    p = compose_functors(codomain_functor(c.base), fac.right)
    cl = None
    if c.fibration.cleavage is not None:
        cl = {k: fac.left.ar(f) for k, f in c.fibration.cleavage.items()}
    name = f"heart({c.name})" if c.name else "heart"
    return CompCat(Fibration(p, cl, name), fac.right, name)


def heart_unit(c: CompCat) -> CompCatMorphism:
    """``(Id, a, id)`` from ``c`` to its heart."""
    h = heart(c)
    a = factor(c.chi).left
    IB = identity_functor(c.base)
    A = arrow_category(c.base)
    zeta = NatTransf(compose_functors(arrow_functor(IB), c.chi), compose_functors(h.chi, a),
                     {e: A.id(c.chi.ob(e)) for e in c.total.objects})
    return CompCatMorphism(c, h, IB, a, zeta, "heart unit")


def enumerate_compcat_morphisms(c: CompCat, d: CompCat, *, klass: str = "pseudo",
                                budget: int | SearchBudget | None = DEFAULT_BUDGET):
    """All comprehension category morphisms ``c -> d`` of at least the given class."""
    counter = budget if isinstance(budget, SearchBudget) else SearchBudget(budget, "morphism enumeration")
    p, q = c.fibration, d.fibration
    B2 = d.base
    A2 = arrow_category(B2)
    over: dict = {}
    for y in d.total.objects:
        over.setdefault(q.ob(y), []).append(y)
    cart_c, cart_d = p.cartesian, q.cartesian

    for Bf in enumerate_functors(c.base, d.base, budget=counter):
        def obj_candidates(x, Bf=Bf):
            return over.get(Bf.ob(p.ob(x)), [])

        def arr_candidates(f, X, Y, Bf=Bf):
            want = Bf.ar(p.ar(f))
            return [h for h in d.total.hom(X, Y) if q.ar(h) == want]

        for H in enumerate_functors(c.total, d.total, obj_candidates=obj_candidates,
                                    arr_candidates=arr_candidates, budget=counter):
            if any(H.ar(f) not in cart_d for f in cart_c):
                continue
            dom_f = compose_functors(arrow_functor(Bf), c.chi)
            cod_f = compose_functors(d.chi, H)

            def ok(x, s):
                _, _, top, bottom = arrow_parts(A2, s)
                if not B2.is_identity(bottom):
                    return False
                if klass == "strict":
                    return B2.is_identity(top)
                if klass == "pseudo":
                    return is_iso(B2, top)
                return True

            for z in enumerate_nats(dom_f, cod_f, component_filter=ok, budget=counter):
                yield CompCatMorphism(c, d, Bf, H, z)


def heart_reflection_check(c: CompCat, target: CompCat, *,
                           budget: int | SearchBudget | None = DEFAULT_BUDGET) -> Report:
    """Precomposition with the heart unit is a bijection on pseudo morphisms into ``target``."""
    if not target.full:
        raise ValueError("heart_reflection_check needs a full target")
    r = Report(f"heart reflection {c.name or '?'} -> {target.name or '?'}")
    counter = budget if isinstance(budget, SearchBudget) else SearchBudget(budget, "heart reflection")
    unit = heart_unit(c)
    from_heart = list(enumerate_compcat_morphisms(unit.cod, target, budget=counter))
    from_c = set(enumerate_compcat_morphisms(c, target, budget=counter))
    images = [compose_compcat_morphisms(m, unit) for m in from_heart]
    r.info["from_heart"] = len(from_heart)
    r.info["from_input"] = len(from_c)
    r.info["steps"] = counter.steps
    if len(set(images)) != len(images):
        r.fail("precomposition not injective")
    missing = from_c - set(images)
    extra = set(images) - from_c
    if missing:
        r.fail("precomposition not surjective", str(len(missing)))
    if extra:
        r.fail("precomposition leaves the pseudo morphisms", str(len(extra)))
    return r


def split_to_discrete(p: Fibration) -> Fibration:
    """The wide subfibration on the chosen lifts of a split cleavage."""
    if p.cleavage is None or not is_split(p):
        raise ValueError("split_to_discrete needs a split cleavage")
    E = p.total
    keep = set(p.cleavage.values())
    arrows = {f: E.arrows[f] for f in E.sorted_arrows if f in keep}
    comp = {(g, f): h for (g, f), h in E.composition.items() if g in keep and f in keep}
    if any(h not in keep for h in comp.values()):
        raise KernelError("chosen lifts are not closed under composition")
    sub = FinCategory(E.objects, arrows, E.identities, comp, f"{E.name}_split" if E.name else "")
    fn = Functor(sub, p.base, dict(p.functor.obj_map), {f: p.ar(f) for f in arrows}, p.functor.name)
    return Fibration(fn, p.cleavage, f"disc({p.name})" if p.name else "disc")


def split_to_discrete_compcat(c: CompCat) -> CompCat:
    q = split_to_discrete(c.fibration)
    chi = Functor(q.total, c.chi.cod, dict(c.chi.obj_map),
                  {f: c.chi.ar(f) for f in q.total.arrows}, c.chi.name)
    return CompCat(q, chi, f"disc({c.name})" if c.name else "disc")


def pseudo_cwf_homset(g: Gcwf, g2: Gcwf, *, budget: int | SearchBudget | None = DEFAULT_BUDGET):
    """Pseudo morphisms between the hearts of the comprehension categories of
    two cwfs, each paired with whether it preserves the chosen lifts."""
    if not (is_cwf(g) and is_cwf(g2)):
        raise ValueError("pseudo_cwf_homset needs discrete gcwfs")
    h1, h2 = heart(gcwf_to_compcat(g)), heart(gcwf_to_compcat(g2))
    out = []
    for m in enumerate_compcat_morphisms(h1, h2, budget=budget):
        out.append((m, preserves_cleavage(m.fib_morphism)))
    return out
