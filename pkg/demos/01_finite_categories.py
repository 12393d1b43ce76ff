"""Finite categories, functors and fibrations, checked by table.

We build the four-element Boolean lattice, break one entry of its
composition table and watch the checker point at it.  Then we ask which
functors are Grothendieck fibrations and look at the chosen lifts.
"""
from cwfkit import presets as P
from cwfkit.fibration import check_fibration, is_split, make_cleavage
from cwfkit.kernel import check_category, enumerate_functors
from cwfkit.presentation import emit
from cwfkit.structures import codomain_functor

B2 = P.boolean_poset(2)
print(f"B2 has objects {list(B2.objects)} and {len(B2.arrows)} arrows")
print(emit(check_category(B2)).decode())

print("A corrupted copy: one composite now lands in the wrong place.")
print(emit(check_category(P.corrupt_b2())).decode())

print("Functors from the walking arrow into B2:",
      sum(1 for _ in enumerate_functors(P.walking_arrow(), B2)))

print("\nThe codomain functor of B2 has all pullbacks behind it, so it is a fibration:")
p = make_cleavage(codomain_functor(B2))
print(emit(check_fibration(p)).decode())
print("its lexicographic cleavage is split:", is_split(p))

print("The walking cospan has no pullback of its two arrows, so its codomain functor is not:")
print(emit(check_fibration(codomain_functor(P.walking_cospan()))).decode())
