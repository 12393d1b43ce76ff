"""The heart of a comprehension category and morphisms between cwfs.

Predicates over the walking arrow form a comprehension category that is
not full: two predicates over one object share a display map.  Its heart
makes it full, and every pseudo morphism into a full target factors
uniquely through the heart.  For cwfs, the same heart turns pseudo
comprehension morphisms into pseudo cwf morphisms.
"""
from cwfkit import presets as P
from cwfkit.factorization import heart, heart_reflection_check, pseudo_cwf_homset
from cwfkit.presentation import emit
from cwfkit.structures import check_compcat

c = P.predicate_compcat()
h = heart(c)
print("input full:", check_compcat(c).info["full"], "  heart full:", check_compcat(h).info["full"])
print("hom(hi, lo) over 0 before:", c.total.hom("pr(0,hi)", "pr(0,lo)"),
      " after:", h.total.hom("pr(0,hi)", "pr(0,lo)"))

print()
print(emit(heart_reflection_check(c, h)).decode())

pairs = {"TwoCwf -> TwoCwf": (P.two_cwf(), P.two_cwf()),
         "TwoCwf -> TwoTypes": (P.two_cwf(), P.two_type_cwf()),
         "DCwf1 -> Empty": (P.dcwf1(), P.empty_cwf())}
for label, (g1, g2) in pairs.items():
    found = pseudo_cwf_homset(g1, g2)
    kept = sum(1 for _, keep in found if keep)
    print(f"{label}: {len(found)} pseudo morphisms, {kept} keep the chosen lifts")
