"""Every generalised cwf is equivalent to the one rebuilt from its comonad.

On the gcwf obtained from a comonad the comparison is the identity.  On a
gcwf built directly, here one over a chaotic fibre whose chosen lifts do
not compose, the comparison is a genuine equivalence and the certificate
shows non-identity vertical isomorphisms.
"""
from cwfkit import presets as P
from cwfkit.presentation import emit
from cwfkit.translations import compcat_to_wccmd, gcwf_unit_equivalence, wccmd_to_gcwf

on_the_nose = wccmd_to_gcwf(compcat_to_wccmd(P.cod_compcat(P.boolean_poset(2))))
cert = gcwf_unit_equivalence(on_the_nose)
print(emit(cert.report()).decode())

g = P.chaotic_gcwf()
cert = gcwf_unit_equivalence(g)
print(emit(cert.report()).decode())
xi = cert.witnesses["xi"]
E = xi.dom.cod
print("components of xi that are not identities:")
for x, f in sorted(xi.components.items()):
    if not E.is_identity(f):
        print(f"  at {x}: {f}")
