"""From a comprehension category to a comonad and back.

The codomain fibration of B2 with the identity comprehension is the
prototypical full comprehension category.  Turning it into a comonad on
the total category and back again gives the same tables, not merely an
isomorphic copy.
"""
from cwfkit import presets as P
from cwfkit.comonad import eilenberg_moore
from cwfkit.presentation import emit
from cwfkit.structures import check_compcat
from cwfkit.translations import compcat_roundtrip, compcat_to_wccmd, wccmd_to_compcat

c = P.cod_compcat(P.boolean_poset(2))
print(emit(check_compcat(c)).decode())

w = compcat_to_wccmd(c)
K = w.comonad
print("The comonad sends each display map to its reindexing along itself:")
for d in sorted(c.total.objects):
    print(f"  {d:>6}  ->  {K.ob(d)}")

em = eilenberg_moore(K)
print(f"\nIts coalgebras ({len(em.category.objects)} of them) are the sections of display maps:")
for x in sorted(em.category.objects):
    print("  ", x)

print("\nBack again:", wccmd_to_compcat(w) == c)
print(emit(compcat_roundtrip(c).report()).decode())
