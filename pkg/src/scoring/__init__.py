"""Score functions, Chamfer distances and sample diversity."""

from src.scoring.chamfer import chamfer_k, diversity
from src.scoring.scores import build_score, grasp_score, ik_score, pc_score, toy_score

__all__ = ["build_score", "chamfer_k", "diversity", "grasp_score", "ik_score", "pc_score", "toy_score"]
