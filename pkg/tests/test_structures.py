import re

import pytest

import oracles
from conftest import compcats, discrete_gcwfs, gcwfs, wccmds
from cwfkit import presets as P
from cwfkit.comonad import Adjunction, Comonad, check_adjunction, check_comonad, eilenberg_moore
from cwfkit.fibration import is_cartesian
from cwfkit.kernel import (
    Functor, KernelError, NatTransf, check_nat, compose_functors, identity_functor, identity_nat, tag,
)
from cwfkit.structures import (
    CompCat, CompCat2Cell, CompCatMorphism, Gcwf, WCComonad, arrow_category, arrow_parts, check_compcat,
    check_compcat_2cell, check_compcat_morphism, check_gcwf, check_wccmd, comultiplication_from_counit,
    compose_compcat_morphisms, gcwf_lemma_suite, identity_compcat_morphism, is_cwf, is_fully_faithful,
)
from cwfkit.translations import compcat_to_wccmd, wccmd_to_gcwf

COMPCATS = compcats()
WCCMDS = wccmds()
GCWFS = gcwfs()


# -- comprehension categories -------------------------------------------------

@pytest.mark.parametrize("name", sorted(COMPCATS))
def test_fixture_compcats_are_valid(name):
    assert check_compcat(COMPCATS[name]).ok


def test_cod_b2_is_valid_and_full(codB2):
    r = check_compcat(codB2)
    assert r.ok and r.info["full"] is True
    # fullness by direct hom-set count
    chi = codB2.chi
    A = arrow_category(codB2.base)
    for x in codB2.total.objects:
        for y in codB2.total.objects:
            assert len(codB2.total.hom(x, y)) == len(A.hom(chi.ob(x), chi.ob(y)))


def test_fullness_is_a_derived_flag():
    flags = {k: check_compcat(c).info["full"] for k, c in COMPCATS.items()}
    assert flags["cod(B2)"] and flags["display(B2,meet:a)"]
    # chaotic fibres have singleton hom-sets, so that comprehension is full too
    assert flags["chaotic(One,2)"] and not flags["predicates(Two)"]
    for k, c in COMPCATS.items():
        assert flags[k] == is_fully_faithful(c.chi)


def test_bent_comprehension_loses_a_pullback():
    c = P.corrupt_cod_compcat()
    r = check_compcat(c)
    assert r.laws() == {"cartesian arrow not sent to a pullback"}
    f, image = r.violations[0].witness
    assert is_cartesian(c.fibration, f)
    B = c.base
    A = arrow_category(B)
    d, e, top, bottom = arrow_parts(A, image)
    assert not oracles.pullback(B, top, d, e, bottom)


def test_comprehension_not_over_base_is_caught(codB2):
    B = codB2.base
    A = arrow_category(B)
    # send every display to the identity on its domain: the codomain moves
    ob = {d: B.id(B.src(d)) for d in A.objects}
    ar = {s: _sq_between_ids(A, B, s) for s in A.arrows}
    bad = CompCat(codB2.fibration, Functor(A, A, ob, ar), "cod(B2)-domains")
    r = check_compcat(bad)
    assert "comprehension not over base" in r.laws()
    assert "0<=a" in [v.witness[0] for v in r.violations]


def _sq_between_ids(A, B, s):
    d, e, top, _ = arrow_parts(A, s)
    return tag("sq", B.id(B.src(d)), B.id(B.src(e)), top, top)


def test_identity_morphism_and_identity_cell(codB2):
    i = identity_compcat_morphism(codB2)
    r = check_compcat_morphism(i)
    assert r.ok and r.info["class"] == "strict"
    assert check_compcat_2cell(CompCat2Cell(i, i, identity_nat(i.base), identity_nat(i.total))).ok


def test_composite_of_fixture_morphisms_passes():
    for m in (P.swap_morphism(), P.chaotic_swap()):
        assert check_compcat_morphism(m).ok
        mm = compose_compcat_morphisms(m, m)
        assert check_compcat_morphism(mm).ok
    lax = P.initial_to_identities()
    assert check_compcat_morphism(lax).ok and lax.klass == "lax"
    j = compose_compcat_morphisms(identity_compcat_morphism(lax.cod), lax)
    assert j == lax


def test_zeta_with_non_identity_bottom_and_broken_two_cell():
    # over Z2 a natural zeta can have non-identity bottoms; such a corrupted
    # morphism also breaks the 2-cell condition against the identity
    c = P.cod_compcat(P.z2())
    i = identity_compcat_morphism(c)
    z = NatTransf(i.zeta.dom, i.zeta.cod, {d: f"sq({d},{d},g,g)" for d in c.total.objects})
    assert check_nat(z).ok
    bent = CompCatMorphism(c, c, i.base, i.total, z)
    assert check_compcat_morphism(bent).laws() == {"zeta bottom not identity"}
    r = check_compcat_2cell(CompCat2Cell(i, bent, identity_nat(i.base), identity_nat(i.total)))
    assert r.laws() == {"2-cell condition"}
    assert [v.witness for v in r.violations] == [("e",), ("g",)]


def test_chaotic_swap_cell_is_valid():
    assert check_compcat_2cell(P.chaotic_swap_cell()).ok


# -- WC comonads --------------------------------------------------------------

@pytest.mark.parametrize("name", sorted(WCCMDS))
def test_fixture_wccmds_are_valid(name):
    assert check_wccmd(WCCMDS[name]).ok


@pytest.mark.parametrize("name", sorted(WCCMDS))
def test_comultiplication_is_determined_by_counit(name):
    w = WCCMDS[name]
    K = w.comonad
    rebuilt = comultiplication_from_counit(w.fibration, K.functor, K.counit)
    assert rebuilt.comult == K.comult
    assert check_comonad(rebuilt).ok


def test_identity_copointed_endofunctor_gets_identity_comultiplication(B2):
    w = P.identity_wc(B2)
    I = identity_functor(w.total)
    K = comultiplication_from_counit(w.fibration, I, identity_nat(I))
    assert all(w.total.is_identity(f) for f in K.comult.components.values())


@pytest.mark.parametrize("name", sorted(WCCMDS))
def test_wc_functor_preserves_cartesian_and_coalgebras_are_cartesian(name):
    w = WCCMDS[name]
    p, K = w.fibration, w.comonad
    for f in p.cartesian:
        assert K.ar(f) in p.cartesian
    em = eilenberg_moore(K)
    for x in em.category.objects:
        assert em.structure(x) in p.cartesian


def _pr(s):
    return re.fullmatch(r"pr\((.*),(.*)\)", s).groups()


def _fibre_collapse(c, level):
    """Endofunctor of the predicate total sending each object to ``level`` in its fibre."""
    E = c.total
    ob = {x: f"pr({_pr(x)[0]},{level})" for x in E.objects}
    ar = {f: f"pr({_pr(f)[0]},{level}<={level})" for f in E.arrows}
    return Functor(E, E, ob, ar)


def _to_collapse(c, F, up):
    E = c.total
    comps = {}
    for x in E.objects:
        base, v = _pr(x)
        lvl = F.ob(x).split(",")[1][:-1]
        comps[x] = f"pr({base}<={base},{v}<={lvl})" if up else f"pr({base}<={base},{lvl}<={v})"
    return comps


def test_non_cartesian_counit_rejected():
    c = P.predicate_compcat()
    p = c.fibration
    K = _fibre_collapse(c, "lo")
    eps = NatTransf(K, identity_functor(c.total), _to_collapse(c, K, up=False))
    assert check_nat(eps).ok
    nu = NatTransf(K, compose_functors(K, K), {x: c.total.id(K.ob(x)) for x in c.total.objects})
    w = WCComonad(p, Comonad(K, eps, nu), "bottoms")
    assert check_comonad(w.comonad).ok
    r = check_wccmd(w)
    assert "counit not cartesian" in r.laws()
    assert ("pr(0,hi)", "pr(0<=0,lo<=hi)") in [v.witness for v in r.find("counit not cartesian")]
    with pytest.raises(KernelError):
        comultiplication_from_counit(p, K, eps)


# -- gcwfs --------------------------------------------------------------------

@pytest.mark.parametrize("name", sorted(GCWFS))
def test_fixture_gcwfs_are_valid(name):
    assert check_gcwf(GCWFS[name]).ok


def test_dcwf1_is_a_valid_discrete_gcwf():
    g = P.dcwf1()
    r = check_gcwf(g)
    assert r.ok and r.info["discrete"] is True
    assert all(g.terms.total.is_identity(f) for f in g.adjunction.unit.components.values())
    assert is_cwf(g)


def test_is_cwf_on_fixtures():
    assert is_cwf(P.dcwf1()) and is_cwf(P.two_cwf())
    assert not is_cwf(GCWFS["gcwf cod(B2)"])
    assert all(is_cwf(g) for g in discrete_gcwfs().values())


def test_gcwf_with_non_cartesian_unit_and_counit_rejected():
    c = P.predicate_compcat()
    p = c.fibration
    L, R = _fibre_collapse(c, "lo"), _fibre_collapse(c, "hi")
    E = c.total
    unit = NatTransf(identity_functor(E), compose_functors(R, L), _to_collapse(c, compose_functors(R, L), up=True))
    counit = NatTransf(compose_functors(L, R), identity_functor(E),
                       _to_collapse(c, compose_functors(L, R), up=False))
    a = Adjunction(L, R, unit, counit, "bottom-top")
    assert check_adjunction(a).ok
    r = check_gcwf(Gcwf(p, p, a, "bottom-top"))
    assert r.laws() == {"unit not cartesian", "counit not cartesian"}
    assert ("pr(0,lo)", "pr(0<=0,lo<=hi)") in [v.witness for v in r.find("unit not cartesian")]


@pytest.mark.parametrize("name", sorted(GCWFS))
def test_lemma_suite_passes_on_fixtures(name):
    r = gcwf_lemma_suite(GCWFS[name])
    assert r.ok, r.first_failure()
    assert {ch.subject for ch in r.children} == {
        "unit monic", "Sigma hom-set bijection", "Delta preserves cartesian",
        "Sigma reflects cartesian", "base pullback"}


def test_mutated_delta_fails_delta_cartesian():
    g = GCWFS["gcwf predicates(Two)"]
    D = g.delta
    f = sorted(g.types.cartesian)[0]
    h = next(x for x in g.terms.total.sorted_arrows if x not in g.terms.cartesian)
    am = dict(D.arr_map)
    am[f] = h
    D2 = Functor(D.dom, D.cod, dict(D.obj_map), am)
    a = g.adjunction
    bent = Gcwf(g.types, g.terms, Adjunction(a.left, D2, a.unit, a.counit), "bent")
    r = gcwf_lemma_suite(bent)
    assert (f, h) in [v.witness for v in r.find("Delta-cartesian")]


def test_gcwf_from_cod_b2_is_not_discrete_but_passes_lemmas(codB2):
    g = wccmd_to_gcwf(compcat_to_wccmd(codB2))
    assert check_gcwf(g).ok and gcwf_lemma_suite(g).ok and not is_cwf(g)


@pytest.mark.parametrize("name", sorted(discrete_gcwfs()))
def test_loose_endomorphisms_of_discrete_gcwfs_collapse_to_tight(name):
    g = discrete_gcwfs()[name]
    ms = P.loose_morphisms(g.adjunction, g.adjunction)
    assert ms
    for m in ms:
        assert m.flavor == "tight"
        assert all(g.types.total.is_identity(z) for z in m.zeta.components.values())
