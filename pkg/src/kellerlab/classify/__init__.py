"""Normal-form classifiers for cubic and quartic maps with nilpotent Jacobian."""

from __future__ import annotations

from ..errors import HypothesisFailed
from ..polymap import PolyMap, is_nilpotent, jacobian, rank_over_Kx
from .core import (
    ClassificationReport,
    TwoByTwoResult,
    classify_2x2_nilpotent_cubic,
    factor_nilpotent_2x2,
    normalize_rkform,
)
from .cubic import classify_cubic_dim3_general, classify_cubic_rank_le2, classify_nilpotent_cubic
from .quartic import (
    classify_quartic_dim3_general,
    classify_quartic_dim3_hmg,
    classify_quartic_dim4_dependent,
)
from .tame import (
    TameDecomposition,
    factor_kind,
    parabolic_inner_decomposition,
    split_triangular,
    tame_decomposition_parabolic,
    tame_decomposition_rank2,
)

__all__ = [
    "ClassificationReport",
    "TameDecomposition",
    "TwoByTwoResult",
    "classify",
    "classify_2x2_nilpotent_cubic",
    "classify_cubic_dim3_general",
    "classify_cubic_rank_le2",
    "classify_nilpotent_cubic",
    "classify_quartic_dim3_general",
    "classify_quartic_dim3_hmg",
    "classify_quartic_dim4_dependent",
    "factor_kind",
    "factor_nilpotent_2x2",
    "normalize_rkform",
    "parabolic_inner_decomposition",
    "split_triangular",
    "tame_decomposition_parabolic",
    "tame_decomposition_rank2",
]


def classify(H: PolyMap) -> ClassificationReport:
    """Pick the classifier whose hypotheses fit ``H`` and run it.

    Raises HypothesisFailed when no classifier covers the input.
    """
    if H.is_zero():
        raise HypothesisFailed("the zero map has no normal form to compute")
    d = int(H.degree())
    n = H.nvars
    hmg = H.is_homogeneous()
    square = H.m == n
    nilpotent = square and is_nilpotent(jacobian(H))[0]
    if d == 3 and hmg:
        if nilpotent and (n <= 4 or rank_over_Kx(jacobian(H)) <= 2):
            return classify_nilpotent_cubic(H)
        if rank_over_Kx(jacobian(H)) in (1, 2):
            return classify_cubic_rank_le2(H)
        raise HypothesisFailed("cubic map outside the rank <= 2 and nilpotent n <= 4 cases")
    if not nilpotent:
        raise HypothesisFailed("JH is not nilpotent")
    if n == 3 and d <= 3:
        return classify_cubic_dim3_general(H)
    if n == 3 and d == 4:
        return classify_quartic_dim3_hmg(H) if hmg else classify_quartic_dim3_general(H)
    if n == 4 and d == 4 and hmg:
        return classify_quartic_dim4_dependent(H)
    raise HypothesisFailed(f"no classifier for degree {d} maps in {n} variables (homogeneous: {hmg})")
