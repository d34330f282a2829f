"""Dominance modeling, real-time win probability, and player flow scoring."""

from .tscore import Kind, ScorePair, TScoreVariant, draw_benchmark, t_score

__all__ = ["Kind", "ScorePair", "TScoreVariant", "draw_benchmark", "t_score"]

__version__ = "0.1.0"
