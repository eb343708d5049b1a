"""Domain-wall six-vertex model, q-enumerated ASMs and their limit shapes."""
from .conventions import Case
from .sixvertex import (Asm, ModelParams, SixVertexConfig, VertexType, asm_to_sixvertex,
                        boundary_correlation, efp_oracle, enumerate_asms, sixvertex_to_asm,
                        weighted_count)
from .genfun import h_multi, h_poly, log_density
from .efp import EfpQuery, efp_residue, unit_integral_check
from .arctic import ArcticCurve, crossing_x, double_root_solve, parametric_curve, temperate_area
from .sampler import ChainConfig, DensityField, HeightState, empirical_boundary, sample_density

__all__ = [
    "Case", "Asm", "ModelParams", "SixVertexConfig", "VertexType", "asm_to_sixvertex",
    "boundary_correlation", "efp_oracle", "enumerate_asms", "sixvertex_to_asm", "weighted_count",
    "h_multi", "h_poly", "log_density", "EfpQuery", "efp_residue", "unit_integral_check",
    "ArcticCurve", "crossing_x", "double_root_solve", "parametric_curve", "temperate_area",
    "ChainConfig", "DensityField", "HeightState", "empirical_boundary", "sample_density",
]
