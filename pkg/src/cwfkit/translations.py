"""Translations between comprehension categories, WC comonads and gcwfs.

Each translation acts on structures, morphisms and 2-cells.  The
``*_roundtrip*`` and ``*_equivalence`` functions build the comparison data
relating a structure to its image under a round trip and certify every
equation by direct table comparison.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .comonad import (
    AdjMorphism, ComonadCell, ComonadMorphism, coal_of_cell, comonad_of_adjunction, comparison_functor,
    check_comonad_morphism, eilenberg_moore, em_morphism, mate,
    reflector_on_morphism,
)
from .fibration import Fibration, cartesian_factor
from .kernel import (
    Functor, KernelError, NatTransf, Report, UniquenessError, check_nat,
    compose_functors, identity_functor, is_iso, tag, unique_arrow,
)
from .structures import (
    CompCat, CompCat2Cell, CompCatMorphism, Gcwf, GcwfCell, GcwfMorphism, WC2Cell,
    WCComonad, WCMorphism, arrow_category, arrow_functor, arrow_parts,
    check_gcwf_morphism, comultiplication_from_counit, identity_compcat_morphism, is_cwf,
)

__all__ = [
    "TranslationCertificate", "MissingCleavage",
    "compcat_to_wccmd", "compcat_morphism_to_wc", "compcat_2cell_to_wc",
    "wccmd_to_compcat", "wc_morphism_to_compcat", "wc_2cell_to_compcat",
    "wc_roundtrip_iso", "compcat_roundtrip", "wccmd_roundtrip",
    "wccmd_to_gcwf", "wc_morphism_to_gcwf", "wc_2cell_to_gcwf",
    "gcwf_to_wccmd", "gcwf_morphism_to_wc", "gcwf_cell_to_wc",
    "gcwf_to_compcat", "gcwf_unit_equivalence", "discrete_roundtrip",
]


class MissingCleavage(KernelError):
    pass


@dataclass
class TranslationCertificate:
    """Witness transformations of a round trip together with their checks."""

    direction: str
    source: str
    target: str
    witnesses: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.checks)

    def check(self, name: str) -> Report:
        r = Report(name)
        self.checks.append(r)
        return r

    def report(self) -> Report:
        r = Report(f"{self.direction} {self.source}")
        r.info["target"] = self.target
        r.info["witnesses"] = sorted(self.witnesses)
        for c in self.checks:
            r.add(c)
        return r


def _require_cleavage(p: Fibration, what: str) -> None:
    if p.cleavage is None:
        raise MissingCleavage(f"{what} needs a cloven fibration")


# ---------------------------------------------------------------------------
# comprehension categories -> WC comonads

def compcat_to_wccmd(c: CompCat) -> WCComonad:
    """``K E`` is the chosen reindexing of ``E`` along its display map and the
    counit is that chosen lift."""
    p = c.fibration
    _require_cleavage(p, "compcat_to_wccmd")
    E, B = p.total, p.base
    A = arrow_category(B)
    eps = {e: p.lift(e, c.chi.ob(e)) for e in E.objects}
    kob = {e: E.src(eps[e]) for e in E.objects}
    kar = {}
    for f in E.sorted_arrows:
        a, b = E.arrows[f]
        top = arrow_parts(A, c.chi.ar(f))[2]
        kar[f] = cartesian_factor(p, eps[b], E.compose(f, eps[a]), top)
    K = Functor(E, E, kob, kar, "K")
    counit = NatTransf(K, identity_functor(E), eps, "counit")
    return WCComonad(p, comultiplication_from_counit(p, K, counit, f"K_{c.name}" if c.name else "K"), c.name)


def compcat_morphism_to_wc(m: CompCatMorphism, dom: WCComonad | None = None,
                           cod: WCComonad | None = None) -> WCMorphism:
    """``theta_E`` is the unique arrow over the top of ``zeta_E`` with ``eps'∘theta = H eps``."""
    w1 = dom or compcat_to_wccmd(m.dom)
    w2 = cod or compcat_to_wccmd(m.cod)
    H = m.total
    p2 = m.cod.fibration
    K1, K2 = w1.comonad, w2.comonad
    comps = {}
    for e in m.dom.total.objects:
        he = H.ob(e)
        comps[e] = cartesian_factor(p2, K2.counit[he], H.ar(K1.counit[e]), m.top(e))
    theta = NatTransf(compose_functors(H, K1.functor), compose_functors(K2.functor, H), comps, "theta")
    return WCMorphism(w1, w2, m.base, H, theta, m.name)


def compcat_2cell_to_wc(t: CompCat2Cell) -> WC2Cell:
    return WC2Cell(compcat_morphism_to_wc(t.dom), compcat_morphism_to_wc(t.cod), t.base, t.total)


# ---------------------------------------------------------------------------
# WC comonads -> comprehension categories

def wccmd_to_compcat(w: WCComonad) -> CompCat:
    """Display maps are the base images of the counit."""
    p, K = w.fibration, w.comonad
    E, B = p.total, p.base
    eps = K.counit
    ob = {e: p.ar(eps[e]) for e in E.objects}
    ar = {}
    for f in E.sorted_arrows:
        a, b = E.arrows[f]
        ar[f] = tag("sq", ob[a], ob[b], p.ar(K.ar(f)), p.ar(f))
    return CompCat(p, Functor(E, arrow_category(B), ob, ar, "chi"), w.name)


def wc_morphism_to_compcat(m: WCMorphism) -> CompCatMorphism:
    c1, c2 = wccmd_to_compcat(m.dom), wccmd_to_compcat(m.cod)
    p2 = m.cod.fibration
    B2 = m.cod.base
    comps = {}
    for e in m.dom.total.objects:
        he = m.total.ob(e)
        comps[e] = tag("sq", m.base.ar(c1.chi.ob(e)), c2.chi.ob(he), p2.ar(m.theta[e]), B2.id(p2.ob(he)))
    zeta = NatTransf(compose_functors(arrow_functor(m.base), c1.chi), compose_functors(c2.chi, m.total), comps, "zeta")
    return CompCatMorphism(c1, c2, m.base, m.total, zeta, m.name)


def wc_2cell_to_compcat(t: WC2Cell) -> CompCat2Cell:
    return CompCat2Cell(wc_morphism_to_compcat(t.dom), wc_morphism_to_compcat(t.cod), t.base, t.total)


def wc_roundtrip_iso(w: WCComonad) -> TranslationCertificate:
    """Compare ``w`` with the WC comonad rebuilt from its comprehension category.

    At each ``E`` the witness is the unique vertical arrow from the rebuilt
    ``K E`` to ``K E`` commuting with the two counits.
    """
    _require_cleavage(w.fibration, "wc_roundtrip_iso")
    p = w.fibration
    E = p.total
    w2 = compcat_to_wccmd(wccmd_to_compcat(w))
    K, K2 = w.comonad, w2.comonad
    cert = TranslationCertificate("wc-roundtrip", w.name or "?", w2.name or "?")
    comps = {}
    uniq = cert.check("witness uniqueness")
    for e in E.objects:
        try:
            comps[e] = unique_arrow(E, K2.ob(e), K.ob(e),
                                    lambda x: p.is_vertical(x) and E.compose(K.counit[e], x) == K2.counit[e],
                                    f"vertical comparison at {e}")
        except UniquenessError as exc:
            uniq.error("uniqueness failure", e, detail=str(exc))
    if not uniq.ok:
        return cert
    I = identity_functor(E)
    xi = NatTransf(compose_functors(I, K2.functor), compose_functors(K.functor, I), comps, "xi")
    cert.witnesses["xi"] = xi
    vi = cert.check("xi vertical iso")
    for e, x in comps.items():
        if not (p.is_vertical(x) and is_iso(E, x)):
            vi.fail("not a vertical iso", e, x)
    morph = ComonadMorphism(K2, K, I, xi)
    cert.checks.append(check_comonad_morphism(morph))
    cert.witnesses["identity"] = all(E.is_identity(x) for x in comps.values())
    return cert


def _diff_functor(r: Report, label: str, F: Functor, G: Functor) -> None:
    if F == G:
        return
    if F.dom != G.dom or F.cod != G.cod:
        r.fail(f"{label} boundary differs")
        return
    for x in F.dom.objects:
        if F.ob(x) != G.ob(x):
            r.fail(f"{label} differs on object", x, F.ob(x), G.ob(x))
            return
    for f in F.dom.sorted_arrows:
        if F.ar(f) != G.ar(f):
            r.fail(f"{label} differs on arrow", f, F.ar(f), G.ar(f))
            return


def _diff_nat(r: Report, label: str, s: NatTransf, t: NatTransf) -> None:
    for x in sorted(set(s.components) | set(t.components)):
        if s.components.get(x) != t.components.get(x):
            r.fail(f"{label} differs", x, s.components.get(x, "-"), t.components.get(x, "-"))
            return


def compcat_roundtrip(c: CompCat) -> TranslationCertificate:
    """Send ``c`` to a WC comonad and back; every table must come back unchanged."""
    c2 = wccmd_to_compcat(compcat_to_wccmd(c))
    cert = TranslationCertificate("compcat-roundtrip", c.name or "?", c2.name or "?")
    r = cert.check("table equality")
    _diff_functor(r, "projection", c.fibration.functor, c2.fibration.functor)
    if c.fibration.cleavage != c2.fibration.cleavage:
        r.fail("cleavage differs")
    _diff_functor(r, "comprehension", c.chi, c2.chi)
    m = identity_compcat_morphism(c)
    m2 = wc_morphism_to_compcat(compcat_morphism_to_wc(m))
    rm = cert.check("identity morphism")
    _diff_functor(rm, "total functor", m.total, m2.total)
    _diff_nat(rm, "zeta", m.zeta, m2.zeta)
    cert.witnesses["image"] = c2
    return cert


def wccmd_roundtrip(w: WCComonad) -> TranslationCertificate:
    """Send ``w`` to a gcwf and back; every table must come back unchanged."""
    w2 = gcwf_to_wccmd(wccmd_to_gcwf(w))
    cert = TranslationCertificate("wccmd-roundtrip", w.name or "?", w2.name or "?")
    r = cert.check("table equality")
    _diff_functor(r, "projection", w.fibration.functor, w2.fibration.functor)
    if w.fibration.cleavage != w2.fibration.cleavage:
        r.fail("cleavage differs")
    _diff_functor(r, "comonad", w.comonad.functor, w2.comonad.functor)
    _diff_nat(r, "counit", w.comonad.counit, w2.comonad.counit)
    _diff_nat(r, "comultiplication", w.comonad.comult, w2.comonad.comult)
    cert.witnesses["image"] = w2
    return cert


# ---------------------------------------------------------------------------
# WC comonads -> gcwfs

def _coalgebra_cleavage(w: WCComonad, em) -> dict:
    p, K = w.fibration, w.comonad
    E = p.total
    cl = {}
    for x in em.category.objects:
        A, e = em.carriers[x], em.structures[x]
        for s in p.base.arrows_into(p.ob(A)):
            lift = p.lift(A, s)
            src = E.src(lift)
            target = E.compose(e, lift)
            es = unique_arrow(E, src, K.ob(src),
                              lambda h: E.is_identity(E.compose(K.counit[src], h))
                              and E.compose(K.ar(lift), h) == target,
                              f"induced coalgebra on the reindexing of {x} along {s}")
            cl[(x, s)] = tag("cmap", es, e, lift)
    return cl


def wccmd_to_gcwf(w: WCComonad) -> Gcwf:
    """Terms are coalgebras; ``Sigma`` forgets and ``Delta`` is cofree."""
    _require_cleavage(w.fibration, "wccmd_to_gcwf")
    em = eilenberg_moore(w.comonad)
    du = compose_functors(w.fibration.functor, em.forgetful)
    terms = Fibration(du, _coalgebra_cleavage(w, em), f"coal({w.name})" if w.name else "coal")
    return Gcwf(w.fibration, terms, em.adjunction, w.name)


def wc_morphism_to_gcwf(m: WCMorphism, dom: Gcwf | None = None, cod: Gcwf | None = None) -> GcwfMorphism:
    am = em_morphism(m.comonad_morphism)
    return GcwfMorphism(dom or wccmd_to_gcwf(m.dom), cod or wccmd_to_gcwf(m.cod),
                        m.base, m.total, am.G, am.zeta, m.name)


def wc_2cell_to_gcwf(t: WC2Cell) -> GcwfCell:
    cell = ComonadCell(t.dom.comonad_morphism, t.cod.comonad_morphism, t.total)
    return GcwfCell(wc_morphism_to_gcwf(t.dom), wc_morphism_to_gcwf(t.cod), t.base, t.total, coal_of_cell(cell))


# ---------------------------------------------------------------------------
# gcwfs -> WC comonads

def gcwf_to_wccmd(g: Gcwf) -> WCComonad:
    return WCComonad(g.types, comonad_of_adjunction(g.adjunction), g.name)


def gcwf_morphism_to_wc(m: GcwfMorphism) -> WCMorphism:
    cm = reflector_on_morphism(m.adj_morphism)
    return WCMorphism(gcwf_to_wccmd(m.dom), gcwf_to_wccmd(m.cod), m.base, m.total, cm.theta, m.name)


def gcwf_cell_to_wc(t: GcwfCell) -> WC2Cell:
    return WC2Cell(gcwf_morphism_to_wc(t.dom), gcwf_morphism_to_wc(t.cod), t.base, t.total)


def gcwf_to_compcat(g: Gcwf) -> CompCat:
    return wccmd_to_compcat(gcwf_to_wccmd(g))


# ---------------------------------------------------------------------------
# the comparison equivalence

def gcwf_unit_equivalence(g: Gcwf) -> TranslationCertificate:
    """The comparison into coalgebras, its inverse and the two isomorphisms.

    The inverse sends a coalgebra ``h: A -> Sigma Delta A`` to the source of the
    chosen lift of ``Delta A`` along ``u h``.
    """
    u, du = g.types, g.terms
    _require_cleavage(du, "gcwf_unit_equivalence")
    a = g.adjunction
    S, D = a.left, a.right
    Eu, Et = u.total, du.total
    em = eilenberg_moore(comonad_of_adjunction(a))
    Coal, U = em.category, em.forgetful
    Kc = comparison_functor(a)
    cert = TranslationCertificate("unit-equivalence", g.name or "?", em.comonad.name or "coalgebras")

    ubar, vob = {}, {}
    for x in Coal.objects:
        A, h = em.carriers[x], em.structures[x]
        lift = du.lift(D.ob(A), u.ar(h))
        ubar[x] = lift
        vob[x] = Et.src(lift)
    var = {}
    for arr in Coal.sorted_arrows:
        x, y = Coal.arrows[arr]
        f = U.ar(arr)
        target = Et.compose(D.ar(f), ubar[x])
        var[arr] = unique_arrow(Et, vob[x], vob[y],
                                lambda v: du.ar(v) == u.ar(f) and Et.compose(ubar[y], v) == target,
                                f"inverse comparison on {arr}")
    V = Functor(Coal, Et, vob, var, "V")

    zeta = {}
    for d in Et.objects:
        kd = Kc.ob(d)
        eta = a.unit[d]
        zeta[d] = unique_arrow(Et, vob[kd], d,
                               lambda z: du.is_vertical(z) and Et.compose(eta, z) == ubar[kd],
                               f"unit comparison at {d}")
    zeta_t = NatTransf(compose_functors(V, Kc), identity_functor(Et), zeta, "zeta")

    xi = {}
    for x in Coal.objects:
        A, h = em.carriers[x], em.structures[x]
        vx = vob[x]
        target = S.ar(ubar[x])
        core = unique_arrow(Eu, S.ob(vx), A,
                            lambda c: u.is_vertical(c) and Eu.compose(h, c) == target,
                            f"counit comparison at {x}")
        arr = tag("cmap", em.structures[Kc.ob(vx)], h, core)
        if arr not in Coal.arrows:
            raise KernelError(f"counit comparison at {x} is not a coalgebra map")
        xi[x] = arr
    xi_t = NatTransf(compose_functors(Kc, V), identity_functor(Coal), xi, "xi")
    cert.witnesses.update(K=Kc, V=V, zeta=zeta_t, xi=xi_t)

    nat = cert.check("naturality")
    for t in (zeta_t, xi_t):
        sub = check_nat(t)
        if not sub.ok:
            nat.add(sub)

    zc = cert.check("zeta vertical iso")
    for d, z in zeta.items():
        if not du.is_vertical(z) or not is_iso(Et, z):
            zc.fail("not a vertical iso", d, z)
    xc = cert.check("xi vertical iso")
    for x, c in xi.items():
        if not u.is_vertical(U.ar(c)) or not is_iso(Coal, c):
            xc.fail("not a vertical iso", x, c)

    e1 = cert.check("K zeta = xi K")
    for d in Et.objects:
        if Kc.ar(zeta[d]) != xi[Kc.ob(d)]:
            e1.fail("equation fails", d)
    e2 = cert.check("V xi = zeta V")
    for x in Coal.objects:
        if V.ar(xi[x]) != zeta[vob[x]]:
            e2.fail("equation fails", x)

    Iu = identity_functor(Eu)
    loose = AdjMorphism(em.adjunction, a, Iu, V,
                        NatTransf(compose_functors(S, V), compose_functors(Iu, U),
                                  {x: U.ar(c) for x, c in xi.items()}))
    sharp = mate(loose)
    cert.witnesses["mate"] = sharp
    mc = cert.check("mate of U xi vertical iso")
    for e, s in sharp.components.items():
        if not du.is_vertical(s) or not is_iso(Et, s):
            mc.fail("not a vertical iso", e, s)

    target_g = wccmd_to_gcwf(gcwf_to_wccmd(g))
    IB = identity_functor(g.base)
    unit = GcwfMorphism(g, target_g, IB, Iu, Kc,
                        NatTransf(compose_functors(U, Kc), compose_functors(Iu, S),
                                  {d: Eu.id(S.ob(d)) for d in Et.objects}), "unit")
    cert.witnesses["unit"] = unit
    uc = cert.check("unit is a strict gcwf morphism")
    sub = check_gcwf_morphism(unit)
    if not sub.ok:
        uc.add(sub)
    elif unit.klass != "strict":
        uc.fail("unit not strict", unit.klass)
    return cert


def discrete_roundtrip(g: Gcwf) -> TranslationCertificate:
    """For a discrete gcwf every comparison is an identity on the nose."""
    if not is_cwf(g):
        raise ValueError("discrete_roundtrip needs a gcwf whose fibrations are discrete")
    base = gcwf_unit_equivalence(g)
    cert = TranslationCertificate("discrete-roundtrip", g.name or "?", base.target,
                                  dict(base.witnesses), list(base.checks))
    Kc, V = base.witnesses["K"], base.witnesses["V"]
    ids = cert.check("witnesses are identities")
    for key in ("zeta", "xi", "mate"):
        t = base.witnesses[key]
        C = t.dom.cod
        for x, f in t.components.items():
            if not C.is_identity(f):
                ids.fail(f"{key} component not identity", x, f)
    inv = cert.check("comparison invertible")
    if compose_functors(V, Kc) != identity_functor(Kc.dom):
        inv.fail("V K is not the identity")
    if compose_functors(Kc, V) != identity_functor(V.dom):
        inv.fail("K V is not the identity")
    w = gcwf_to_wccmd(g)
    wc = wc_roundtrip_iso(w)
    rt = cert.check("WC round trip identity")
    if not wc.ok or not wc.witnesses.get("identity"):
        rt.fail("WC comparison not the identity")
    c = wccmd_to_compcat(w)
    if wccmd_to_compcat(compcat_to_wccmd(c)) != c:
        rt.fail("comprehension round trip not the identity")
    return cert
