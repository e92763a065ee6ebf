"""Symmetry-handling cuts for maximum-weight stable set problems.

Library layout: `perm` (permutation groups, orbits, stabilizers), `graph`
(weighted graphs, DIMACS, cliques), `autom` (automorphism detection), `sst`
(Schreier-Sims tables and cuts), `presolve` (deletion/addition reductions),
`tu_tp` (trivially perfect structure and total unimodularity), `solver`
(exact stable set solvers), and `cli` (command-line front end).
"""

from .autom import automorphism_generators, is_automorphism
from .graph import (
    Graph,
    complement,
    greedy_clique_cover,
    induced_subgraph,
    maximal_cliques,
    parse_dimacs,
    random_graph,
    random_tp_graph,
    write_dimacs,
)
from .perm import (
    GeneratorSet,
    Orbit,
    Permutation,
    apply_to_vector,
    enumerate_elements,
    orbit,
    pointwise_stabilizer,
)
from .presolve import (
    PresolveResult,
    addition_operation,
    deletion_operation,
    sst_presolve,
)
from .solver import (
    StableSetSolution,
    branch_and_bound_max_stable,
    brute_force_max_stable,
)
from .sst import (
    SstCliqueCut,
    SstTable,
    build_sst_table,
    build_stringent_sst_table,
    is_stringent,
    repair_solution,
    satisfies_cuts,
    sst_clique_cuts,
)
from .tu_tp import (
    ExtendedMatrix,
    ForestRep,
    auxiliary_graph,
    chain_decomposition,
    check_laminar_recursion_property,
    check_recursion_property,
    equicolor_recursive,
    equicolor_tree_paths,
    extended_clique_matrix,
    forest_representation,
    is_trivially_perfect,
    is_tu_determinant,
    is_tu_ghouila_houri,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
