"""Dense complex linear algebra substrate for qubit-network observables.

All matrices are plain ``numpy.ndarray`` of complex128 with dimension a power
of two. Residuals are measured with the max-abs entrywise norm throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import NonUnitary, NotHermitian, NotInvolution

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}
COMPONENTS = ("x", "y", "z")

MAX_QUBITS = 10


@dataclass(frozen=True)
class Tolerances:
    """Per-run tolerance configuration.

    Defaults: double-precision conjugation chains of depth <= 100 stay well
    under the 1e-10 bounds; the eigengap threshold is sized for integer
    register spectra with unit gaps.
    """

    hermitian: float = 1e-10
    unitary: float = 1e-10
    general: float = 1e-10
    norm: float = 1e-10
    eigengap: float = 1e-8
    sharp: float = 1e-9
    entangle: float = 1e-9
    commute: float = 1e-9
    weight: float = 1e-12
    oracle: float = 1e-9

    def override(self, **kwargs: float) -> "Tolerances":
        return replace(self, **kwargs)

    def as_dict(self) -> dict:
        return {
            name: getattr(self, name)
            for name in (
                "hermitian", "unitary", "general", "norm", "eigengap",
                "sharp", "entangle", "commute", "weight", "oracle",
            )
        }


DEFAULT_TOL = Tolerances()


def max_abs(a: np.ndarray) -> float:
    """Max-abs entrywise norm (0.0 for empty input)."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with ``a`` as the left (more significant) factor."""
    return np.kron(a, b)


def embed(op: np.ndarray, slot: int, n: int) -> np.ndarray:
    """Embed a single-qubit operator at 1-based ``slot`` of an n-qubit space.

    Slot 1 occupies the leftmost Kronecker factor.
    """
    if not 1 <= slot <= n:
        raise ValueError(f"slot {slot} out of range 1..{n}")
    out = op
    if slot > 1:
        out = tensor(identity(2 ** (slot - 1)), out)
    if slot < n:
        out = tensor(out, identity(2 ** (n - slot)))
    return out


def embed_pauli(slot: int, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The (x, y, z) generator triple for one qubit of an n-qubit space."""
    return tuple(embed(PAULIS[c], slot, n) for c in COMPONENTS)


def hermiticity_defect(a: np.ndarray) -> float:
    return max_abs(a - a.conj().T)


def check_hermitian(a: np.ndarray, tol: float = DEFAULT_TOL.hermitian) -> None:
    defect = hermiticity_defect(a)
    if defect > tol:
        raise NotHermitian(f"hermiticity defect {defect:.3e} > {tol:.3e}")


def unitarity_defect(u: np.ndarray) -> float:
    return max_abs(u.conj().T @ u - identity(u.shape[0]))


def check_unitary(u: np.ndarray, tol: float = DEFAULT_TOL.unitary) -> None:
    defect = unitarity_defect(u)
    if defect > tol:
        raise NonUnitary(f"unitarity defect {defect:.3e} > {tol:.3e}")


def involution_defect(q: np.ndarray) -> float:
    return max_abs(q @ q - identity(q.shape[0]))


def conjugate(u: np.ndarray, a: np.ndarray,
              tol: float = DEFAULT_TOL.unitary) -> np.ndarray:
    """u† a u for unitary u."""
    check_unitary(u, tol)
    return u.conj().T @ a @ u


def commutator_norm(a: np.ndarray, b: np.ndarray) -> float:
    return max_abs(a @ b - b @ a)


def pauli_projector(q: np.ndarray, sign: int,
                    tol: float = DEFAULT_TOL.general) -> np.ndarray:
    """1/2(1 + sign*q) for an involution q; projects onto the sign eigenspace."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    defect = involution_defect(q)
    if defect > tol:
        raise NotInvolution(f"involution defect {defect:.3e} > {tol:.3e}")
    return 0.5 * (identity(q.shape[0]) + sign * q)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Deduplicated eigenvalues with their eigenspace projectors."""

    eigenvalues: tuple[float, ...]
    projectors: tuple[np.ndarray, ...]

    def reconstruct(self) -> np.ndarray:
        out = np.zeros_like(self.projectors[0])
        for lam, proj in zip(self.eigenvalues, self.projectors):
            out = out + lam * proj
        return out


def spectral(h: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix with eigenvalue clustering.

    Eigenvalues are merged by single-linkage with gap threshold tol.eigengap,
    so nearly-degenerate levels share one eigenspace projector.
    """
    check_hermitian(h, tol.hermitian)
    vals, vecs = np.linalg.eigh(h)
    clusters: list[list[int]] = [[0]]
    for i in range(1, len(vals)):
        if vals[i] - vals[i - 1] <= tol.eigengap:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    eigenvalues = []
    projectors = []
    for idx in clusters:
        block = vecs[:, idx]
        eigenvalues.append(float(np.mean(vals[idx])))
        projectors.append(block @ block.conj().T)
    return SpectralDecomposition(tuple(eigenvalues), tuple(projectors))
