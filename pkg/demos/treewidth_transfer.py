"""From a decomposition of the dual graph to one of the spine.

Each dual bag (a set of tetrahedra) is replaced by the triangles and edges
of those tetrahedra. The result is checked against the spine and compared
with the 10k + 9 width bound.
"""

from morsetw.catalog import boundary_of_simplex, cross_polytope_boundary, join_of_triangle_boundaries
from morsetw.complex import dual_graph, spine
from morsetw.treewidth import heuristic_decomposition, spine_decomposition_from_dual, validate_decomposition

for name, K in [("4-simplex boundary", boundary_of_simplex(4)),
                ("join of triangle boundaries", join_of_triangle_boundaries()),
                ("cross polytope boundary", cross_polytope_boundary())]:
    Dd = heuristic_decomposition(dual_graph(K))
    D = spine_decomposition_from_dual(K, Dd)
    ok = validate_decomposition(spine(K), D).valid
    direct = heuristic_decomposition(spine(K)).width
    print(f"{name:28s} dual width {Dd.width}  transferred {D.width} (bound {10 * Dd.width + 9}, "
          f"valid {ok})  min-fill on spine {direct}")
