"""Separability detectors with a uniform result type.

Every detector computes a quantity that is bounded on separable states and
reports ``margin = norm_value - bound``. A state is flagged entangled when
the margin exceeds ``detect_tol``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .qmat import DensityMatrix, kron, partial_trace, partial_transpose, purity, trace_norm
from .realign import (
    DEFAULT_DIM_CAP,
    CriterionParams,
    GConditionError,
    GSpec,
    PairMapKind,
    apply_pair_map,
    build_augmented,
    check_g_condition,
    realign,
)

DETECT_TOL = 1e-9
PPT_TOL = 1e-9

__all__ = [
    "DETECT_TOL",
    "CriterionParams",
    "CriterionResult",
    "ccnr",
    "corollary_preset",
    "multipartite_eval",
    "ppt",
    "theorem21",
    "zr",
]


@dataclass(frozen=True)
class CriterionResult:
    criterion: str
    norm_value: float
    bound: float
    margin: float
    detected: bool
    detect_tol: float = DETECT_TOL
    params: CriterionParams | None = None
    pair: tuple[int, int] | None = None
    cut: int | None = None

    @classmethod
    def from_values(cls, criterion, norm_value, bound, detect_tol=DETECT_TOL, **extra) -> "CriterionResult":
        margin = float(norm_value) - float(bound)
        return cls(criterion, float(norm_value), float(bound), margin, margin > detect_tol, detect_tol, **extra)

    def to_dict(self) -> dict:
        d = {
            "criterion": self.criterion,
            "norm_value": self.norm_value,
            "bound": self.bound,
            "margin": self.margin,
            "detected": self.detected,
            "detect_tol": self.detect_tol,
        }
        if self.params is not None:
            d["params"] = self.params.to_dict()
        if self.pair is not None:
            d["pair"] = list(self.pair)
        if self.cut is not None:
            d["cut"] = self.cut
        return d


def corollary_preset(variant: Literal["cor21", "cor22"], alpha: float, ell: int) -> CriterionParams:
    """Parameters for the two closed-form choices of G.

    ``cor21`` uses ``G = ell * alpha**2 * I`` (bound ``1 + ell**2 alpha**2``),
    ``cor22`` uses ``G = alpha**2 * E`` (bound ``1 + ell alpha**2``).
    """
    if variant == "cor21":
        g = GSpec.scaled_identity(ell, alpha)
    elif variant == "cor22":
        g = GSpec.scaled_ones(ell, alpha)
    else:
        raise ValueError(f"unknown corollary preset {variant!r}")
    return CriterionParams(float(alpha), int(ell), g)


def ccnr(rho: DensityMatrix, cut: int = 1, detect_tol: float = DETECT_TOL) -> CriterionResult:
    d_a, d_b = rho.bipartite_dims(cut)
    value = trace_norm(realign(rho.mat, d_a, d_b))
    return CriterionResult.from_values("ccnr", value, 1.0, detect_tol, cut=cut)


def theorem21(
    rho: DensityMatrix, cut: int = 1, params: CriterionParams | None = None, detect_tol: float = DETECT_TOL
) -> CriterionResult:
    """Trace norm of the augmented realignment matrix against ``1 + Tr(G)``."""
    if params is None:
        raise ValueError("theorem21 needs CriterionParams")
    cond = check_g_condition(params.g)
    if not cond.ok:
        raise GConditionError(cond.min_eigenvalue)
    d_a, d_b = rho.bipartite_dims(cut)
    value = trace_norm(build_augmented(rho.mat, d_a, d_b, params))
    return CriterionResult.from_values("thm21", value, 1.0 + params.g.trace, detect_tol, params=params, cut=cut)


def zr(rho: DensityMatrix, cut: int = 1, detect_tol: float = DETECT_TOL) -> CriterionResult:
    d_a, d_b = rho.bipartite_dims(cut)
    rho_a = partial_trace(rho.mat, (d_a, d_b), "A")
    rho_b = partial_trace(rho.mat, (d_a, d_b), "B")
    value = trace_norm(realign(rho.mat - kron(rho_a, rho_b), d_a, d_b))
    bound = np.sqrt(max(0.0, (1 - purity(rho_a)) * (1 - purity(rho_b))))
    return CriterionResult.from_values("zr", value, bound, detect_tol, cut=cut)


def ppt(rho: DensityMatrix, cut: int = 1, detect_tol: float = PPT_TOL) -> CriterionResult:
    """Minimum eigenvalue of the partial transpose on the B side.

    ``norm_value`` is the negated minimum eigenvalue, so it is negative for
    states whose partial transpose is strictly positive.
    """
    rho.bipartite_dims(cut)
    pt = partial_transpose(rho, list(range(cut, rho.n_systems)))
    lam = float(np.linalg.eigvalsh((pt + pt.conj().T) / 2)[0])
    return CriterionResult.from_values("ppt", -lam, 0.0, detect_tol, cut=cut)


def multipartite_eval(
    rho: DensityMatrix,
    pair: tuple[int, int],
    kind: PairMapKind,
    detect_tol: float = DETECT_TOL,
    dim_cap: int = DEFAULT_DIM_CAP,
) -> CriterionResult:
    """Pair-map criterion: realignment (H-R) or the normalized augmented map, both bounded by 1.

    For the augmented map ``detect_tol`` is applied before normalization,
    i.e. to ``||N|| - (1 + Tr G)``; the result stores the equivalent
    tolerance on the normalized margin. Otherwise verdicts would be lost
    once ``Tr G`` grows large, since the normalized margin shrinks as
    ``1 / (1 + Tr G)``.
    """
    if not kind.is_realign:
        detect_tol = detect_tol / (1.0 + kind.params.g.trace)
    value = trace_norm(apply_pair_map(rho, pair, kind, dim_cap=dim_cap))
    return CriterionResult.from_values(kind.name, value, 1.0, detect_tol, params=kind.params, pair=tuple(pair))
