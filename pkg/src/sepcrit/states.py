"""Example states, white-noise families, and seeded random samplers."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .qmat import DensityMatrix

_S2 = 1 / np.sqrt(2)


def _ket(*factors) -> np.ndarray:
    return reduce(np.kron, (np.asarray(f, dtype=float) for f in factors))


def _upb_complement(kets: list[np.ndarray], dims: tuple[int, ...]) -> DensityMatrix:
    d = int(np.prod(dims))
    proj = sum(np.outer(k, k.conj()) for k in kets)
    return DensityMatrix((np.eye(d) - proj) / (d - len(kets)), dims)


def tiles_kets() -> list[np.ndarray]:
    e0, e1, e2 = np.eye(3)
    return [
        _ket(e0, (e0 - e1) * _S2),
        _ket((e0 - e1) * _S2, e2),
        _ket(e2, (e1 - e2) * _S2),
        _ket((e1 - e2) * _S2, e0),
        _ket((e0 + e1 + e2) / 3, (e0 + e1 + e2)),
    ]


def shifts_kets() -> list[np.ndarray]:
    zero, one = np.eye(2)
    plus, minus = (zero + one) * _S2, (zero - one) * _S2
    return [
        _ket(zero, one, plus),
        _ket(one, plus, zero),
        _ket(plus, zero, one),
        _ket(minus, minus, minus),
    ]


def tiles_state() -> DensityMatrix:
    """3x3 bound entangled state: normalized complement of the Tiles UPB."""
    return _upb_complement(tiles_kets(), (3, 3))


def shifts_state() -> DensityMatrix:
    """Three-qubit state from the Shifts UPB; biseparable across every cut, yet entangled."""
    return _upb_complement(shifts_kets(), (2, 2, 2))


def perturbed_ghz(epsilon: float) -> DensityMatrix:
    """Projector onto (|000> + eps |110> + |111>) / sqrt(2 + eps^2)."""
    if not np.isfinite(epsilon):
        raise ValueError("epsilon must be finite")
    psi = np.zeros(8)
    psi[0b000], psi[0b110], psi[0b111] = 1.0, epsilon, 1.0
    psi /= np.sqrt(2 + epsilon**2)
    return DensityMatrix(np.outer(psi, psi), (2, 2, 2))


def bell_state() -> DensityMatrix:
    psi = np.array([1, 0, 0, 1]) * _S2
    return DensityMatrix(np.outer(psi, psi), (2, 2))


def noise_mix(base: DensityMatrix, p: float) -> DensityMatrix:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixing weight p must lie in [0, 1], got {p}")
    d = base.dim
    return DensityMatrix((1 - p) / d * np.eye(d) + p * base.mat, base.dims)


@dataclass(frozen=True, eq=False)
class NoiseFamily:
    """``p -> (1-p) I/d + p * base`` for p in [0, 1]."""

    base: DensityMatrix
    label: str

    @property
    def dims(self) -> tuple[int, ...]:
        return self.base.dims

    def __call__(self, p: float) -> DensityMatrix:
        return noise_mix(self.base, p)


def family(name: str, epsilon: float = 0.0) -> NoiseFamily:
    if name == "tiles":
        return NoiseFamily(tiles_state(), "tiles")
    if name == "shifts":
        return NoiseFamily(shifts_state(), "shifts")
    if name == "ghz":
        return NoiseFamily(perturbed_ghz(epsilon), f"ghz(eps={epsilon:g})")
    raise ValueError(f"unknown state family {name!r}; choose tiles, shifts or ghz")


def _gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_density(d: int, rank: int | None = None, seed: int | None = None,
                   dims: Sequence[int] | None = None) -> DensityMatrix:
    """Induced-measure random state ``A A^dag / Tr(A A^dag)`` with ``A`` a complex Gaussian ``d x rank``."""
    rank = d if rank is None else rank
    if not 1 <= rank <= d:
        raise ValueError(f"rank must lie in [1, {d}], got {rank}")
    rng = np.random.default_rng(seed)
    a = _gaussian(rng, (d, rank))
    rho = a @ a.conj().T
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(rho / np.trace(rho).real, tuple(dims) if dims else (d,))


def random_separable(dims: Sequence[int], terms: int, seed: int | None = None) -> DensityMatrix:
    """Dirichlet-weighted mixture of ``terms`` random pure product states."""
    if terms < 1:
        raise ValueError(f"terms must be >= 1, got {terms}")
    dims = tuple(int(d) for d in dims)
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(terms))
    d = int(np.prod(dims))
    rho = np.zeros((d, d), dtype=complex)
    for w in weights:
        psi = np.ones(1, dtype=complex)
        for dk in dims:
            v = _gaussian(rng, dk)
            psi = np.kron(psi, v / np.linalg.norm(v))
        rho += w * np.outer(psi, psi.conj())
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(rho / np.trace(rho).real, dims)
