"""Optimal discrete Morse matching on the boundary of the 4-simplex.

The boundary of the 4-simplex is the smallest triangulated 3-sphere. Its
spine has 20 nodes, small enough for an exact tree decomposition, so the
whole pipeline runs in a few seconds:

    spine -> exact decomposition -> nice decomposition -> DP -> completion
"""

from morsetw.catalog import boundary_of_simplex
from morsetw.complex import dual_graph, spine
from morsetw.morse import hasse_matching_acyclic, optimal_morse_3manifold
from morsetw.treewidth import exact_treewidth

K = boundary_of_simplex(4)
print("f-vector:", K.f_vector)

tw_dual, _ = exact_treewidth(dual_graph(K))
tw_spine, _ = exact_treewidth(spine(K))
print(f"treewidth of dual graph {tw_dual}, of spine {tw_spine}")

M, c = optimal_morse_3manifold(K)
print(f"critical cells per dimension {M.critical}, total {c}")
print("acyclic:", hasse_matching_acyclic(K, M.pairs))
for tau, sigma in sorted(M.pairs, key=lambda p: (len(p[1]), p))[:6]:
    print(f"  {sigma} paired with {tau}")
print(f"  ... {len(M.pairs)} pairs in all")
