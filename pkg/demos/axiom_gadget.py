"""Turning a minimum axiom set instance into a 2-complex.

Every sentence becomes a small sphere, and every relation U -> s glues
tubes from the spheres of U onto the sphere of s. Deleting one triangle
from a sphere plays the role of taking that sentence as an axiom.
"""

from morsetw.complex import erase_greedy, external_triangles
from morsetw.reductions import MasInstance, build_gadget, minimum_axiom_set

I = MasInstance(
    tuple("abcdefghi"),
    ((set("cde"), "i"), (set("fgh"), "i"), ({"b"}, "c"), ({"a", "d"}, "g")),
)
axioms = minimum_axiom_set(I)
print("minimum axiom set:", sorted(axioms))

g = build_gadget(I)
K = g.complex
print(f"gadget: {len(K.triangles)} triangles, {len(external_triangles(K))} external")

punched = [g.representatives[s] for s in axioms]
print("erasable after deleting one triangle per axiom:", erase_greedy(K, punched).erasable)
short = punched[:-1]
print("erasable with one fewer:", erase_greedy(K, short).erasable)
