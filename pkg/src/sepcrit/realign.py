"""Realignment, the augmented realignment matrix, and pair contraction maps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from .qmat import DensityMatrix, _permute, partial_trace, vec

G_HERM_TOL = 1e-12
G_PSD_TOL = 1e-10
MAX_ELL = 10_000
DEFAULT_DIM_CAP = 4096


class GConditionError(ValueError):
    def __init__(self, min_eigenvalue: float):
        self.min_eigenvalue = min_eigenvalue
        super().__init__(
            "G - alpha^2 E is not positive semidefinite "
            f"(minimum eigenvalue {min_eigenvalue:.6g}); the separability bound does not apply"
        )


def realign(y: np.ndarray, d_a: int, d_b: int) -> np.ndarray:
    """Realignment of a ``d_a x d_a`` block matrix with ``d_b x d_b`` blocks.

    Row ``j*d_a + i`` of the result is ``vec(Y_ij)^T``, so that
    ``realign(kron(A, B)) == vec(A) @ vec(B).T``.
    """
    y = np.asarray(y)
    n = d_a * d_b
    if y.shape != (n, n):
        raise ValueError(f"realign: expected a {n}x{n} matrix for dims ({d_a}, {d_b}), got {y.shape}")
    # y[i*d_b + k, j*d_b + l] -> R[j*d_a + i, l*d_b + k]
    return y.reshape(d_a, d_b, d_a, d_b).transpose(2, 0, 3, 1).reshape(d_a * d_a, d_b * d_b)


def unrealign(r: np.ndarray, d_a: int, d_b: int) -> np.ndarray:
    """Inverse of :func:`realign`."""
    r = np.asarray(r)
    if r.shape != (d_a * d_a, d_b * d_b):
        raise ValueError(f"unrealign: expected shape {(d_a * d_a, d_b * d_b)}, got {r.shape}")
    return r.reshape(d_a, d_a, d_b, d_b).transpose(1, 3, 0, 2).reshape(d_a * d_b, d_a * d_b)


def omega(x: np.ndarray, ell: int) -> np.ndarray:
    """``vec(x)`` repeated as ``ell`` identical columns."""
    if ell < 1:
        raise ValueError(f"ell must be a positive integer, got {ell}")
    return np.repeat(vec(x), ell, axis=1)


@dataclass(frozen=True)
class GSpec:
    """The Hermitian parameter matrix G.

    ``kind="identity"`` is ``ell * alpha**2 * I`` and ``kind="ones"`` is
    ``alpha**2 * E`` (all-ones). ``kind="explicit"`` carries its own matrix.
    """

    kind: Literal["identity", "ones", "explicit"]
    ell: int
    alpha: float
    matrix: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("identity", "ones", "explicit"):
            raise ValueError(f"unknown G kind {self.kind!r}")
        if not 1 <= self.ell <= MAX_ELL:
            raise ValueError(f"ell must lie in [1, {MAX_ELL}], got {self.ell}")
        if not np.isfinite(self.alpha):
            raise ValueError("alpha must be finite")
        if self.kind == "explicit":
            if self.matrix is None:
                raise ValueError("explicit G requires a matrix")
            g = np.array(self.matrix, dtype=complex)
            if g.shape != (self.ell, self.ell):
                raise ValueError(f"explicit G must be {self.ell}x{self.ell}, got {g.shape}")
            herm = float(np.max(np.abs(g - g.conj().T)))
            if herm > G_HERM_TOL:
                raise ValueError(f"G must be Hermitian (max |G - G^dag| = {herm:.3e})")
            g.setflags(write=False)
            object.__setattr__(self, "matrix", g)

    @classmethod
    def scaled_identity(cls, ell: int, alpha: float) -> "GSpec":
        return cls("identity", int(ell), float(alpha))

    @classmethod
    def scaled_ones(cls, ell: int, alpha: float) -> "GSpec":
        return cls("ones", int(ell), float(alpha))

    @classmethod
    def explicit(cls, matrix, alpha: float) -> "GSpec":
        matrix = np.asarray(matrix)
        return cls("explicit", int(matrix.shape[0]), float(alpha), matrix)

    def materialize(self) -> np.ndarray:
        a2 = self.alpha**2
        if self.kind == "identity":
            return self.ell * a2 * np.eye(self.ell)
        if self.kind == "ones":
            return a2 * np.ones((self.ell, self.ell))
        return self.matrix

    @property
    def trace(self) -> float:
        if self.kind == "identity":
            return self.ell**2 * self.alpha**2
        if self.kind == "ones":
            return self.ell * self.alpha**2
        return float(np.trace(self.matrix).real)


class GCondition(NamedTuple):
    ok: bool
    min_eigenvalue: float


def check_g_condition(g: GSpec) -> GCondition:
    """Whether ``G - alpha**2 E`` is positive semidefinite."""
    if g.kind in ("identity", "ones"):
        # spectra are {0, ell*alpha^2} and {0} respectively
        return GCondition(True, 0.0)
    m = g.materialize() - g.alpha**2 * np.ones((g.ell, g.ell))
    lam = float(np.linalg.eigvalsh(m)[0])
    return GCondition(lam >= -G_PSD_TOL, lam)


@dataclass(frozen=True)
class CriterionParams:
    alpha: float
    ell: int
    g: GSpec

    def __post_init__(self):
        if self.g.ell != self.ell:
            raise ValueError(f"G has size {self.g.ell} but ell is {self.ell}")
        if self.g.alpha != self.alpha:
            raise ValueError(f"G was built for alpha={self.g.alpha}, params say alpha={self.alpha}")

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "ell": self.ell, "g": self.g.kind}


def build_augmented(x: np.ndarray, d_a: int, d_b: int, params: CriterionParams) -> np.ndarray:
    """The block matrix ``[[Tr(x) G, a w(x_B)^T], [a w(x_A), R(x)]]``.

    For a unit-trace state this is the augmented realignment matrix whose
    trace norm is bounded by ``1 + Tr(G)`` on separable states. ``x`` may be
    any square operator, Hermitian or not.
    """
    x = np.asarray(x)
    n = d_a * d_b
    if x.shape != (n, n):
        raise ValueError(f"build_augmented: expected a {n}x{n} matrix for dims ({d_a}, {d_b}), got {x.shape}")
    ell, alpha = params.ell, params.alpha
    x_a = partial_trace(x, (d_a, d_b), "A")
    x_b = partial_trace(x, (d_a, d_b), "B")
    out = np.empty((ell + d_a * d_a, ell + d_b * d_b), dtype=complex)
    out[:ell, :ell] = np.trace(x) * params.g.materialize()
    out[:ell, ell:] = alpha * omega(x_b, ell).T
    out[ell:, :ell] = alpha * omega(x_a, ell)
    out[ell:, ell:] = realign(x, d_a, d_b)
    return out


@dataclass(frozen=True)
class PairMapKind:
    """Selects the per-block map: plain realignment, or the normalized augmented map."""

    params: CriterionParams | None = None

    @classmethod
    def realign(cls) -> "PairMapKind":
        return cls(None)

    @classmethod
    def augmented(cls, params: CriterionParams) -> "PairMapKind":
        return cls(params)

    @property
    def is_realign(self) -> bool:
        return self.params is None

    @property
    def name(self) -> str:
        return "hr" if self.is_realign else "thm31"


def pair_permutation(n: int, pair: tuple[int, int]) -> tuple[int, ...]:
    a, b = pair
    if a == b:
        raise ValueError(f"pair must name two distinct subsystems, got {pair}")
    for s in pair:
        if not 0 <= s < n:
            raise ValueError(f"subsystem index {s} out of range for {n} subsystems")
    return (a, b) + tuple(k for k in range(n) if k not in pair)


def apply_pair_map(
    rho: DensityMatrix,
    pair: tuple[int, int],
    kind: PairMapKind,
    dim_cap: int = DEFAULT_DIM_CAP,
) -> np.ndarray:
    """Apply realignment (or the augmented map) to subsystems ``pair``, identity elsewhere.

    The pair is moved to the front in the given order, the remaining
    subsystems follow in their original order, and the map is applied to
    every ``d_a*d_b`` block of the operator-valued matrix over the rest.
    Output index ``x*D + k`` pairs map-output index ``x`` with rest index ``k``.
    """
    if rho.n_systems < 2:
        raise ValueError("pair maps need at least two subsystems")
    perm = pair_permutation(rho.n_systems, tuple(pair))
    d_a, d_b = rho.dims[perm[0]], rho.dims[perm[1]]
    rest = int(np.prod([rho.dims[k] for k in perm[2:]], dtype=int))

    if kind.is_realign:
        rows, cols = d_a * d_a, d_b * d_b
    else:
        cond = check_g_condition(kind.params.g)
        if not cond.ok:
            raise GConditionError(cond.min_eigenvalue)
        ell = kind.params.ell
        rows, cols = ell + d_a * d_a, ell + d_b * d_b
        norm = 1.0 + kind.params.g.trace
    if max(rows, cols) * rest > dim_cap:
        raise ValueError(
            f"pair map output would be {rows * rest}x{cols * rest}, above the dimension cap {dim_cap}"
        )

    pab = d_a * d_b
    t = _permute(rho.mat, rho.dims, perm).reshape(pab, rest, pab, rest)
    out = np.empty((rows * rest, cols * rest), dtype=complex)
    for k in range(rest):
        for l in range(rest):
            block = t[:, k, :, l]
            if kind.is_realign:
                m = realign(block, d_a, d_b)
            else:
                m = build_augmented(block, d_a, d_b, kind.params) / norm
            out[k::rest, l::rest] = m
    return out
