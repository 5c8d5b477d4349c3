"""Linear and analytic reduced-order baselines."""

from baselines.linear_rom import LinearROM, dmd, pod
from baselines.pca import PCAEmbedding, loop_gap_ratio, pca_embed
from pde_data.burgers import cole_hopf_rom

__all__ = [
    "LinearROM",
    "dmd",
    "pod",
    "PCAEmbedding",
    "loop_gap_ratio",
    "pca_embed",
    "cole_hopf_rom",
]
