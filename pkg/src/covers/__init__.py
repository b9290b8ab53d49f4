"""Pyramitoids, small covers of right-angled polytopes and their integral homology."""
from .enumeration import (
    Code,
    Triangulation,
    catalan_count,
    class_representatives,
    code_of,
    count_rotation_classes,
    enumerate_triangulations,
    orbit_profile,
    pyramitoid_from_triangulation,
)
from .homology import HomologyGroup, IntegerMatrix, b_n_formula, homology, smith_normal_form
from .polytope import (
    CombinatorialPolyhedron,
    Label,
    Pyramitoid,
    as_pyramitoid,
    contract_triangle,
    load_polyhedron,
    truncate_vertex,
)
from .small_cover import cover_of_polyhedron, dome_cover, full_cover, small_cover_complex
from .surgery import glue_bipyramitoid, heegaard_data, split_bipyramitoid, z_homology_two_ways

__version__ = "0.1.0"
