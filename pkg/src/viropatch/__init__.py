"""Exact combinatorial patchworking, mixed subdivisions and Betti-number bounds."""

from .geometry import (AffineUnimodularMap, LatticePolytope, OrthantLabel, apply_map,
                       face_normal_parities, minkowski_sum, reflect, standard_simplex)
from .triangulation import (ConvexTriangulation, PointConfiguration, certify_convexity, dilate,
                            embed_islands, primitive_triangulation, regular_subdivision)
from .patchwork import (SignDistribution, ambient_complex, double_plane_b0, harnack_signs,
                        hypersurface_complex, orthant_sign, region_complex)
from .homology import ChainComplexZ2, betti_z2, connected_components, euler_characteristic

__version__ = "0.1.0"
