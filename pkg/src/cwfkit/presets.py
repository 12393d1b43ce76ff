"""Small named fixtures: posets, groups, comprehension categories, WC comonads,
cwfs from presheaves, sample morphisms, and deliberately broken variants."""
from __future__ import annotations

from collections.abc import Callable, Mapping
from functools import lru_cache
import itertools

from .comonad import AdjMorphism, Adjunction, identity_comonad
from .fibration import (
    Fibration, PresheafPair, grothendieck, make_cleavage,
)
from .kernel import (
    FinCategory, Functor, KernelError, NatTransf, SearchBudget, chaotic_category,
    compose_functors, enumerate_functors, enumerate_nats, group_category,
    identity_functor, is_iso, poset, product_category, tag, terminal_category, unique_arrow,
)
from .structures import (
    CompCat, CompCat2Cell, CompCatMorphism, Gcwf, WCComonad, arrow_category, arrow_functor,
    arrow_parts, codomain_fibration, codomain_functor, identity_compcat_morphism,
)

__all__ = [
    "MAX_POSET_RANK", "PresetError",
    "terminal", "walking_arrow", "walking_cospan", "boolean_poset", "chain", "z2",
    "cod_compcat", "display_map", "predicate_compcat", "chaotic_compcat", "rechoose_lift",
    "identity_wc", "chaotic_gcwf", "presheaf_cwf", "dcwf1", "two_cwf", "two_type_cwf",
    "empty_cwf", "lattice_swap", "swap_morphism", "display_inclusion",
    "initial_to_identities", "chaotic_swap", "chaotic_swap_cell",
    "loose_morphisms", "corrupt_b2", "corrupt_cod_compcat",
]

MAX_POSET_RANK = 3


class PresetError(ValueError):
    """Parameters outside the supported desk-scale range."""


def terminal() -> FinCategory:
    return terminal_category("One")


def walking_arrow() -> FinCategory:
    return poset(["0", "1"], lambda x, y: x <= y, "Two")


def walking_cospan() -> FinCategory:
    return poset(["x", "y", "z"], lambda s, t: s == t or t == "z", "Cospan")


def chain(n: int) -> FinCategory:
    if not 1 <= n <= 6:
        raise PresetError("chain length must be between 1 and 6")
    names = [str(i) for i in range(n)]
    return poset(names, lambda x, y: int(x) <= int(y), f"Chain{n}")


def _subset_name(s: frozenset) -> str:
    return "".join(sorted(s)) or "0"


@lru_cache(maxsize=8)
def boolean_poset(n: int) -> FinCategory:
    """Subsets of the first ``n`` letters ordered by inclusion; ``0`` is the empty set."""
    if not 0 <= n <= MAX_POSET_RANK:
        raise PresetError(f"boolean_poset supports n <= {MAX_POSET_RANK}")
    letters = "abc"[:n]
    subsets = [frozenset(c) for k in range(n + 1) for c in itertools.combinations(letters, k)]
    names = {_subset_name(s): s for s in subsets}
    return poset(list(names), lambda x, y: names[x] <= names[y], f"B{n}")


def z2() -> FinCategory:
    return group_category(["e", "g"], lambda x, y: "e" if x == y else "g", "e", name="Z2")


# ---------------------------------------------------------------------------
# comprehension categories

def cod_compcat(B: FinCategory) -> CompCat:
    """The codomain fibration with the identity comprehension."""
    return CompCat(codomain_fibration(B), identity_functor(arrow_category(B)), f"cod({B.name})")


def _meet(B: FinCategory, x: str, y: str) -> str | None:
    lower = [z for z in B.objects if B.hom(z, x) and B.hom(z, y)]
    for z in lower:
        if all(B.hom(w, z) for w in lower):
            return z
    return None


def _display_class(B: FinCategory, klass: str) -> Callable[[str], bool]:
    if klass == "all":
        return lambda d: True
    if klass == "identities":
        return B.is_identity
    if klass == "initial":
        initial = {x for x in B.objects if all(len(B.hom(x, y)) == 1 for y in B.objects)}
        return lambda d: B.src(d) in initial
    if klass.startswith("meet:"):
        s = klass[5:]
        if s not in B.identities:
            raise PresetError(f"unknown object {s} in display class")
        return lambda d: _meet(B, B.tgt(d), s) == B.src(d)
    raise PresetError(f"unknown display class {klass!r}; use all, identities, initial or meet:<object>")


def display_map(B: FinCategory, klass: str = "all") -> CompCat:
    """The full subcategory of the arrow category on a class of display maps."""
    keep = _display_class(B, klass)
    A = arrow_category(B)
    objs = [d for d in A.objects if keep(d)]
    objset = set(objs)
    arrows = {s: A.arrows[s] for s in A.sorted_arrows if A.src(s) in objset and A.tgt(s) in objset}
    comp = {(g, f): h for (g, f), h in A.composition.items() if g in arrows and f in arrows}
    E = FinCategory(objs, arrows, {d: A.id(d) for d in objs}, comp, f"D({B.name},{klass})")
    cod = codomain_functor(B)
    p = Functor(E, B, {d: cod.ob(d) for d in objs}, {s: cod.ar(s) for s in arrows}, "cod")
    chi = Functor(E, A, {d: d for d in objs}, {s: s for s in arrows}, "incl")
    return CompCat(make_cleavage(Fibration(p, name=E.name)), chi, f"display({B.name},{klass})")


def _projection_compcat(B: FinCategory, fibre: FinCategory, name: str) -> CompCat:
    E = product_category(B, fibre, f"{B.name}x{fibre.name}")
    first = {}
    for f in B.sorted_arrows:
        for g in fibre.sorted_arrows:
            first[tag("pr", f, g)] = f
    p = Functor(E, B, {tag("pr", x, i): x for x in B.objects for i in fibre.objects}, first, "proj")
    A = arrow_category(B)
    chi = Functor(E, A, {tag("pr", x, i): B.id(x) for x in B.objects for i in fibre.objects},
                  {h: tag("sq", B.id(B.src(f)), B.id(B.tgt(f)), f, f) for h, f in first.items()}, "chi")
    return CompCat(make_cleavage(Fibration(p, name=E.name)), chi, name)


def predicate_compcat(B: FinCategory | None = None) -> CompCat:
    """Two-valued predicates over ``B`` with trivial comprehension; not full."""
    B = B or walking_arrow()
    P = poset(["lo", "hi"], lambda x, y: x == y or (x, y) == ("lo", "hi"), "Pred")
    return _projection_compcat(B, P, f"predicates({B.name})")


def chaotic_compcat(B: FinCategory | None = None, size: int = 2) -> CompCat:
    """``B`` times a chaotic category, with trivial comprehension.

    Its vertical isomorphisms are not identities, which makes it the smallest
    place where round-trip comparisons can be non-trivial.
    """
    B = B or terminal()
    I = chaotic_category([str(i) for i in range(size)], f"I{size}")
    return _projection_compcat(B, I, f"chaotic({B.name},{size})")


def rechoose_lift(p: Fibration, e: str, sigma: str) -> Fibration:
    """Replace the chosen lift at ``(e, sigma)`` by the greatest other cartesian lift."""
    E = p.total
    options = [f for f in E.arrows_into(e) if p.ar(f) == sigma and p.is_cartesian(f)]
    others = [f for f in options if f != p.lift(e, sigma)]
    if not others:
        raise PresetError(f"only one cartesian lift at ({e}, {sigma})")
    cl = dict(p.cleavage)
    cl[(e, sigma)] = max(others)
    return p.with_cleavage(cl)


# ---------------------------------------------------------------------------
# WC comonads and gcwfs

def identity_wc(B: FinCategory | None = None) -> WCComonad:
    """The identity comonad on the identity fibration."""
    B = B or terminal()
    I = identity_functor(B)
    fib = Fibration(I, {(y, s): s for y in B.objects for s in B.arrows_into(y)}, B.name)
    return WCComonad(fib, identity_comonad(B), f"identity({B.name})")


def chaotic_gcwf(B: FinCategory | None = None) -> Gcwf:
    """Terms are ``B`` itself, types are ``B`` times a two-object chaotic category."""
    B = B or terminal()
    u = chaotic_compcat(B).fibration
    Eu = u.total
    single = chaotic_category(["0"], "I1")
    Et = product_category(B, single, f"{B.name}x{single.name}")
    du = make_cleavage(Fibration(Functor(
        Et, B, {tag("pr", x, "0"): x for x in B.objects},
        {tag("pr", f, "0~0"): f for f in B.arrows}, "proj"), name=Et.name))
    S = Functor(Et, Eu, {x: x for x in Et.objects}, {f: f for f in Et.arrows}, "Sigma")
    dob, dar = {}, {}
    for x in B.objects:
        for i in ("0", "1"):
            dob[tag("pr", x, i)] = tag("pr", x, "0")
    for f in B.arrows:
        for i in ("0", "1"):
            for j in ("0", "1"):
                dar[tag("pr", f, f"{i}~{j}")] = tag("pr", f, "0~0")
    D = Functor(Eu, Et, dob, dar, "Delta")
    unit = NatTransf(identity_functor(Et), compose_functors(D, S), {x: Et.id(x) for x in Et.objects}, "unit")
    counit = NatTransf(compose_functors(S, D), identity_functor(Eu),
                       {tag("pr", x, i): tag("pr", B.id(x), f"0~{i}") for x in B.objects for i in ("0", "1")},
                       "counit")
    return Gcwf(u, du, Adjunction(S, D, unit, counit, "Sigma-Delta"), f"chaotic_gcwf({B.name})")


def presheaf_cwf(base: FinCategory, types: Mapping, type_restriction: Mapping, terms: Mapping,
                 term_restriction: Mapping, extension: Mapping, name: str = "") -> Gcwf:
    """A cwf from finite presheaves of types and terms with context extension.

    ``extension[(G, A)] = (GA, p, v)`` gives the extended context, its projection
    ``p: GA -> G`` and the generic term ``v`` over ``GA`` of type ``A[p]``.
    Missing identity restrictions are filled in.
    """
    B = base
    tr = dict(type_restriction)
    mr = dict(term_restriction)
    for x in B.objects:
        for a in types.get(x, ()):
            tr.setdefault((B.id(x), a), a)
        for t in terms.get(x, {}):
            mr.setdefault((B.id(x), t), t)
    P = PresheafPair(B, types, tr, terms, mr, name)
    ty, tm, typing = grothendieck(P)
    ext = {k: tuple(v) for k, v in extension.items()}
    for x in B.objects:
        for a in P.ty(x):
            if (x, a) not in ext:
                raise KernelError(f"no context extension for {a} over {x}")

    def pairing(sigma, t, g, a):
        ga, pa, va = ext[(g, a)]
        d = B.src(sigma)
        return unique_arrow(B, d, ga, lambda tau: B.compose(pa, tau) == sigma and mr[(tau, va)] == t,
                            f"pairing of {sigma} with {t} into {g}.{a}")

    D_ob, D_ar = {}, {}
    for x in B.objects:
        for a in P.ty(x):
            ga, pa, va = ext[(x, a)]
            D_ob[tag("el", x, a)] = tag("el", ga, va)
    for f in B.sorted_arrows:
        d, g = B.arrows[f]
        for a in P.ty(g):
            af = tr[(f, a)]
            dga, dpa, dva = ext[(d, af)]
            lifted = pairing(B.compose(f, dpa), dva, g, a)
            D_ar[tag("res", f, a)] = tag("res", lifted, ext[(g, a)][2])
    Delta = Functor(ty.total, tm.total, D_ob, D_ar, "Delta")
    unit = {}
    for x in B.objects:
        for t, a in P.tm(x).items():
            unit[tag("el", x, t)] = tag("res", pairing(B.id(x), t, x, a), ext[(x, a)][2])
    counit = {tag("el", x, a): tag("res", ext[(x, a)][1], a) for x in B.objects for a in P.ty(x)}
    S = typing.total.named("Sigma")
    adj = Adjunction(S, Delta,
                     NatTransf(identity_functor(tm.total), compose_functors(Delta, S), unit, "unit"),
                     NatTransf(compose_functors(S, Delta), identity_functor(ty.total), counit, "counit"),
                     "Sigma-Delta")
    return Gcwf(ty, tm, adj, name)


def dcwf1() -> Gcwf:
    """One type with one term over the terminal base."""
    One = terminal()
    return presheaf_cwf(One, {"*": ["U"]}, {}, {"*": {"u0": "U"}}, {},
                        {("*", "U"): ("*", "id_*", "u0")}, "DCwf1")


def two_cwf() -> Gcwf:
    """A cwf over ``0 -> 1`` whose one type over ``1`` extends ``1`` to ``0``."""
    T = walking_arrow()
    return presheaf_cwf(
        T, {"1": ["A"], "0": ["As"]}, {("0<=1", "A"): "As"},
        {"0": {"v": "As"}, "1": {}}, {},
        {("1", "A"): ("0", "0<=1", "v"), ("0", "As"): ("0", "0<=0", "v")}, "TwoCwf")


def two_type_cwf() -> Gcwf:
    One = terminal()
    return presheaf_cwf(One, {"*": ["U", "V"]}, {}, {"*": {"u": "U", "v": "V"}}, {},
                        {("*", "U"): ("*", "id_*", "u"), ("*", "V"): ("*", "id_*", "v")}, "TwoTypes")


def empty_cwf(B: FinCategory | None = None) -> Gcwf:
    B = B or walking_arrow()
    return presheaf_cwf(B, {}, {}, {}, {}, {}, f"Empty({B.name})")


# ---------------------------------------------------------------------------
# morphisms

def lattice_swap(B: FinCategory | None = None) -> Functor:
    """Exchange the letters ``a`` and ``b`` in the boolean poset."""
    B = B or boolean_poset(2)

    def sw(x):
        if x == "0":
            return x
        return "".join(sorted({"a": "b", "b": "a"}.get(ch, ch) for ch in x))

    return Functor(B, B, {x: sw(x) for x in B.objects},
                   {f: f"{sw(B.src(f))}<={sw(B.tgt(f))}" for f in B.arrows}, "swap")


def _strict_zeta(dom_chi: Functor, cod_chi: Functor, base: Functor, total: Functor) -> NatTransf:
    A = cod_chi.cod
    left = compose_functors(arrow_functor(base), dom_chi)
    right = compose_functors(cod_chi, total)
    return NatTransf(left, right, {e: A.id(left.ob(e)) for e in dom_chi.dom.objects}, "zeta")


def swap_morphism(B: FinCategory | None = None) -> CompCatMorphism:
    """The automorphism of ``cod(B2)`` induced by swapping ``a`` and ``b``."""
    B = B or boolean_poset(2)
    c = cod_compcat(B)
    s = lattice_swap(B)
    H = arrow_functor(s)
    return CompCatMorphism(c, c, s, H, _strict_zeta(c.chi, c.chi, s, H), "swap")


def display_inclusion(B: FinCategory, klass: str) -> CompCatMorphism:
    d, c = display_map(B, klass), cod_compcat(B)
    I = identity_functor(B)
    H = Functor(d.total, c.total, dict(d.chi.obj_map), dict(d.chi.arr_map), "incl")
    return CompCatMorphism(d, c, I, H, _strict_zeta(d.chi, c.chi, I, H), f"incl({klass})")


def initial_to_identities(B: FinCategory | None = None) -> CompCatMorphism:
    """Send each ``0 <= y`` to ``id_y``; the comparison ``0 -> y`` is not invertible."""
    B = B or boolean_poset(2)
    d1, d2 = display_map(B, "initial"), display_map(B, "identities")
    A = arrow_category(B)
    ob = {d: B.id(B.tgt(d)) for d in d1.total.objects}
    ar = {}
    for s in d1.total.arrows:
        _, _, _, v = arrow_parts(A, s)
        ar[s] = tag("sq", B.id(B.src(v)), B.id(B.tgt(v)), v, v)
    I = identity_functor(B)
    H = Functor(d1.total, d2.total, ob, ar, "saturate")
    comps = {d: tag("sq", d, ob[d], d, B.id(B.tgt(d))) for d in d1.total.objects}
    zeta = NatTransf(compose_functors(arrow_functor(I), d1.chi), compose_functors(d2.chi, H), comps, "zeta")
    return CompCatMorphism(d1, d2, I, H, zeta, "initial->identities")


def _fibre_swap(c: CompCat) -> Functor:
    E = c.total

    def flip(i):
        return "1" if i == "0" else "0"

    ob, ar = {}, {}
    for x in E.objects:
        b, i = x[3:-1].split(",")
        ob[x] = tag("pr", b, flip(i))
    for f in E.arrows:
        b, g = f[3:-1].split(",", 1)
        i, j = g.split("~")
        ar[f] = tag("pr", b, f"{flip(i)}~{flip(j)}")
    return Functor(E, E, ob, ar, "swap")


def chaotic_swap(B: FinCategory | None = None) -> CompCatMorphism:
    """Exchange the two fibre objects of the chaotic comprehension category.

    The comparison is the identity, yet the induced comonad morphism is only
    invertible: the cleavage always picks fibre index ``0``.
    """
    c = chaotic_compcat(B)
    H = _fibre_swap(c)
    I = identity_functor(c.base)
    return CompCatMorphism(c, c, I, H, _strict_zeta(c.chi, c.chi, I, H), "chaotic swap")


def chaotic_swap_cell(B: FinCategory | None = None) -> CompCat2Cell:
    """The 2-cell from the identity morphism to :func:`chaotic_swap`."""
    m = chaotic_swap(B)
    c = m.dom
    idm = identity_compcat_morphism(c)
    E, Bc = c.total, c.base
    comps = {}
    for x in E.objects:
        b, i = x[3:-1].split(",")
        comps[x] = tag("pr", Bc.id(b), f"{i}~{'1' if i == '0' else '0'}")
    phi = NatTransf(idm.total, m.total, comps, "phi")
    psi = NatTransf(idm.base, m.base, {x: Bc.id(x) for x in Bc.objects}, "psi")
    return CompCat2Cell(idm, m, psi, phi)


def loose_morphisms(a: Adjunction, b: Adjunction, budget: int = 100_000) -> list[AdjMorphism]:
    """Every loose morphism ``a -> b`` (invertible ``zeta``), by exhaustive search."""
    counter = SearchBudget(budget, "loose morphism enumeration")
    out = []
    for F in enumerate_functors(a.C, b.C, budget=counter):
        FL = compose_functors(F, a.left)
        for G in enumerate_functors(a.D, b.D, budget=counter):
            LG = compose_functors(b.left, G)
            for z in enumerate_nats(LG, FL, component_filter=lambda x, f: is_iso(b.C, f), budget=counter):
                out.append(AdjMorphism(a, b, F, G, z))
    return out


# ---------------------------------------------------------------------------
# broken fixtures for negative tests

def corrupt_b2() -> FinCategory:
    """``B2`` with ``(a<=ab)∘(0<=a)`` redirected to ``0<=0``."""
    B = boolean_poset(2)
    comp = dict(B.composition)
    comp[("a<=ab", "0<=a")] = "0<=0"
    return FinCategory(B.objects, B.arrows, B.identities, comp, "B2-corrupt")


def corrupt_cod_compcat() -> CompCat:
    """``cod(B2)`` with a comprehension that sends ``d`` to ``0 <= y`` when ``d``
    starts at ``0`` and to ``id_y`` otherwise; some pullbacks are lost."""
    B = boolean_poset(2)
    c = cod_compcat(B)
    A = arrow_category(B)

    def img(d):
        y = B.tgt(d)
        return f"0<={y}" if B.src(d) == "0" else B.id(y)

    ar = {}
    for s in A.arrows:
        d, e, _, v = arrow_parts(A, s)
        ar[s] = tag("sq", img(d), img(e), f"{B.src(img(d))}<={B.src(img(e))}", v)
    chi = Functor(A, A, {d: img(d) for d in A.objects}, ar, "bent")
    return CompCat(c.fibration, chi, "cod(B2)-bent")
