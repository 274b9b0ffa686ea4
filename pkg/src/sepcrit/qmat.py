"""Dense complex-matrix primitives for finite-dimensional quantum states.

Matrices are plain ``numpy.ndarray`` objects. Subsystem dimensions are
ordered lists ``[d_1, ..., d_n]`` and the global basis is the usual
Kronecker (row-major multi-index) ordering, so subsystem 0 is the most
significant digit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

HERM_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9


@dataclass(frozen=True)
class Violation:
    """One failed density-matrix invariant and how badly it failed."""

    invariant: str
    magnitude: float
    message: str


class InvalidStateError(ValueError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(v.message for v in violations))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A square matrix together with its subsystem dimensions.

    The constructor only checks shapes. Use :func:`validate_density` to
    also enforce hermiticity, unit trace and positivity.
    """

    mat: np.ndarray
    dims: tuple[int, ...] = field(default=())

    def __post_init__(self):
        mat = np.array(self.mat, dtype=complex)
        mat.setflags(write=False)
        dims = tuple(int(d) for d in self.dims) or (mat.shape[0],)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {mat.shape}")
        if any(d < 1 for d in dims):
            raise ValueError(f"subsystem dimensions must be positive, got {dims}")
        if int(np.prod(dims)) != mat.shape[0]:
            raise ValueError(f"dims {list(dims)} do not multiply to matrix dimension {mat.shape[0]}")
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def n_systems(self) -> int:
        return len(self.dims)

    def bipartite_dims(self, cut: int = 1) -> tuple[int, int]:
        """Dimensions (d_A, d_B) when the first ``cut`` subsystems form A."""
        if not 1 <= cut <= self.n_systems - 1:
            raise ValueError(f"cut must lie in [1, {self.n_systems - 1}] for dims {list(self.dims)}, got {cut}")
        return int(np.prod(self.dims[:cut])), int(np.prod(self.dims[cut:]))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(np.asarray(a), np.asarray(b))


def vec(x: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization, returned as an ``(m*n, 1)`` column."""
    x = np.asarray(x)
    if x.ndim == 1:
        x = x[:, None]
    return x.reshape(-1, 1, order="F")


def unvec(v: np.ndarray, rows: int) -> np.ndarray:
    """Inverse of :func:`vec` for a matrix with ``rows`` rows."""
    v = np.asarray(v).reshape(-1)
    return v.reshape(rows, -1, order="F")


def trace_norm(x: np.ndarray) -> float:
    """Sum of singular values."""
    x = np.asarray(x)
    if not np.all(np.isfinite(x)):
        raise ValueError("trace_norm: matrix has non-finite entries")
    if x.size == 0:
        return 0.0
    if np.iscomplexobj(x) and not np.any(x.imag):
        # real SVD is several times cheaper and gives the same spectrum
        x = x.real
    return float(np.linalg.svd(x, compute_uv=False).sum())


def partial_trace(x: np.ndarray, dims: Sequence[int], keep: str = "A") -> np.ndarray:
    """Reduced matrix of a bipartite operator; ``x`` need not be Hermitian.

    ``keep="A"`` traces out B and ``keep="B"`` traces out A.
    """
    d_a, d_b = (int(d) for d in dims)
    x = np.asarray(x)
    if x.shape != (d_a * d_b, d_a * d_b):
        raise ValueError(f"partial_trace: shape {x.shape} does not match dims {[d_a, d_b]}")
    t = x.reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        return np.einsum("ikjk->ij", t)
    if keep == "B":
        return np.einsum("ikil->kl", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def _permute(mat: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    n = len(dims)
    t = np.asarray(mat).reshape(tuple(dims) * 2)
    t = t.transpose(tuple(perm) + tuple(p + n for p in perm))
    d = int(np.prod(dims))
    return t.reshape(d, d)


def _check_perm(perm: Sequence[int], n: int) -> tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{list(perm)} is not a permutation of 0..{n - 1}")
    return perm


def permute_systems(rho: DensityMatrix, perm: Sequence[int]) -> DensityMatrix:
    """Reorder subsystems: output subsystem ``i`` is input subsystem ``perm[i]``."""
    perm = _check_perm(perm, rho.n_systems)
    new_dims = tuple(rho.dims[p] for p in perm)
    return DensityMatrix(_permute(rho.mat, rho.dims, perm), new_dims)


def partial_transpose(rho: DensityMatrix, subsystem: int | Sequence[int]) -> np.ndarray:
    """Transpose the indices of one or more subsystems."""
    systems = [subsystem] if np.isscalar(subsystem) else list(subsystem)
    n = rho.n_systems
    for s in systems:
        if not 0 <= s < n:
            raise ValueError(f"subsystem index {s} out of range for {n} subsystems")
    axes = list(range(2 * n))
    for s in systems:
        axes[s], axes[s + n] = axes[s + n], axes[s]
    t = rho.mat.reshape(rho.dims * 2).transpose(axes)
    return t.reshape(rho.dim, rho.dim)


def purity(rho: DensityMatrix | np.ndarray) -> float:
    mat = rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho)
    return float(np.real(np.vdot(mat.conj().T, mat)))


def density_violations(mat: np.ndarray, dims: Sequence[int] | None = None) -> list[Violation]:
    """All DensityMatrix invariants that ``mat`` fails, with magnitudes."""
    mat = np.asarray(mat, dtype=complex)
    out: list[Violation] = []
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        return [Violation("square", float("nan"), f"matrix is not square: shape {mat.shape}")]
    if not np.all(np.isfinite(mat)):
        return [Violation("finite", float("nan"), "matrix has non-finite entries")]
    d = mat.shape[0]
    if dims is not None and int(np.prod(dims)) != d:
        out.append(Violation("dims", float(abs(int(np.prod(dims)) - d)),
                             f"dims {list(dims)} multiply to {int(np.prod(dims))}, matrix dimension is {d}"))
    herm = float(np.max(np.abs(mat - mat.conj().T))) if d else 0.0
    if herm > HERM_TOL:
        out.append(Violation("hermitian", herm, f"not Hermitian: max |rho - rho^dag| = {herm:.3e}"))
    tr_err = float(abs(np.trace(mat) - 1))
    if tr_err > TRACE_TOL:
        out.append(Violation("trace", tr_err, f"trace deviates from 1 by {tr_err:.3e}"))
    min_eig = float(np.linalg.eigvalsh((mat + mat.conj().T) / 2)[0])
    if min_eig < -PSD_TOL:
        out.append(Violation("psd", -min_eig, f"not positive semidefinite: min eigenvalue {min_eig:.3e}"))
    return out


def validate_density(mat: np.ndarray, dims: Sequence[int] | None = None) -> DensityMatrix:
    """Build a :class:`DensityMatrix`, raising :class:`InvalidStateError` on any violation."""
    violations = density_violations(mat, dims)
    if violations:
        raise InvalidStateError(violations)
    return DensityMatrix(mat, tuple(dims) if dims is not None else ())
