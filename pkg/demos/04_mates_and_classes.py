"""Loose morphisms of adjunctions, their mates, and how classes move.

A loose morphism carries an invertible transformation between the left
adjoints; its mate lives between the right adjoints.  Taking the mate
twice gives the original back, and mates of composites are whiskered
composites.  Along the way a strict comprehension morphism turns into a
WC morphism that is only pseudo.
"""
from cwfkit import presets as P
from cwfkit.comonad import compose_adj_morphisms, inverse_mate, mate, reflector_on_morphism
from cwfkit.fibration import is_vertical
from cwfkit.translations import compcat_morphism_to_wc

a = P.chaotic_gcwf(P.walking_arrow()).adjunction
ms = P.loose_morphisms(a, a)
print(f"{len(ms)} loose endomorphisms; flavours:",
      {f: sum(m.flavor == f for m in ms) for f in ("tight", "loose")})

m = next(m for m in ms if m.flavor == "loose")
print("\nzeta :", dict(m.zeta.components))
print("mate :", dict(mate(m).components))
print("mate back equals zeta:", inverse_mate(m.dom, m.cod, m.F, m.G, mate(m)) == m.zeta)

mm = compose_adj_morphisms(m, m)
s = mate(m)
whiskered = {c: a.D.compose(s[m.F.ob(c)], m.G.ar(s[c])) for c in a.C.objects}
print("mate of the composite is the whiskered composite:", mate(mm).components == whiskered)
print("reflected to a comonad morphism of class", reflector_on_morphism(m).klass)

swap = P.chaotic_swap()
wm = compcat_morphism_to_wc(swap)
p = wm.cod.fibration
print(f"\nchaotic swap: {swap.klass} as a comprehension morphism, {wm.klass} as a WC morphism")
for x, f in sorted(wm.theta.components.items()):
    print(f"  theta at {x}: {f} (vertical: {is_vertical(p, f)})")
