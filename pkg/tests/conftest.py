import sys
from pathlib import Path

import pytest
from hypothesis import settings

from cwfkit import presets as P
from cwfkit import translations as T

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("desk", max_examples=40, deadline=None)
settings.load_profile("desk")


def compcats():
    B2 = P.boolean_poset(2)
    return {
        "cod(B2)": P.cod_compcat(B2),
        "cod(Two)": P.cod_compcat(P.walking_arrow()),
        "cod(Chain3)": P.cod_compcat(P.chain(3)),
        "display(B2,meet:a)": P.display_map(B2, "meet:a"),
        "display(B2,initial)": P.display_map(B2, "initial"),
        "display(B2,identities)": P.display_map(B2, "identities"),
        "predicates(Two)": P.predicate_compcat(),
        "chaotic(One,2)": P.chaotic_compcat(),
    }


def wccmds():
    out = {f"wc {k}": T.compcat_to_wccmd(c) for k, c in compcats().items()}
    out["identity(One)"] = P.identity_wc()
    out["identity(B2)"] = P.identity_wc(P.boolean_poset(2))
    return out


def gcwfs():
    out = {
        "DCwf1": P.dcwf1(),
        "TwoCwf": P.two_cwf(),
        "TwoTypes": P.two_type_cwf(),
        "Empty(Two)": P.empty_cwf(),
        "chaotic_gcwf(One)": P.chaotic_gcwf(),
        "chaotic_gcwf(Two)": P.chaotic_gcwf(P.walking_arrow()),
    }
    for k in ("cod(B2)", "display(B2,meet:a)", "chaotic(One,2)", "predicates(Two)"):
        out[f"gcwf {k}"] = T.wccmd_to_gcwf(T.compcat_to_wccmd(compcats()[k]))
    return out


def discrete_gcwfs():
    return {k: g for k, g in gcwfs().items() if k in ("DCwf1", "TwoCwf", "TwoTypes", "Empty(Two)")}


@pytest.fixture(scope="session")
def B2():
    return P.boolean_poset(2)


@pytest.fixture(scope="session")
def codB2():
    return P.cod_compcat(P.boolean_poset(2))
