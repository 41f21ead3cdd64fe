"""Dense real matrix utilities: powers, spectral radius, real block-diagonal form.

The decomposition produced here is the real analogue of diagonalization: complex
conjugate eigenvalue pairs a +- ib become 2x2 rotation-scaling blocks
r * [[cos t, -sin t], [sin t, cos t]] and real eigenvalues stay scalar. Repeated
or magnitude-tied eigenvalues are split by a tiny recorded perturbation so that
every magnitude is distinct, which downstream asymptotic analysis relies on.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLS, Tolerances


def as_matrix(m) -> np.ndarray:
    """Coerce to a 2-d float array, rejecting non-finite entries."""
    a = np.asarray(m, dtype=float)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def as_vector(v) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.ndim != 1:
        raise ValueError(f"expected a vector, got ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise ValueError("vector has non-finite entries")
    return a


def _square(m) -> np.ndarray:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def mat_vec(m, v) -> np.ndarray:
    """Matrix-vector product with shape validation."""
    a = as_matrix(m)
    x = as_vector(v)
    if a.shape[1] != x.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {x.shape}")
    return a @ x


# Entries below this are flushed to zero between the multiplies of mat_pow.
# Surviving entries have pairwise products of at least 1e-280, roughly 1e28
# times the smallest normal double, so accumulations stay out of the
# subnormal range, whose arithmetic can stall the FPU by orders of magnitude
# when a strictly stable matrix is powered down to underflow.
_SUBNORMAL_GUARD = 1e-140


def mat_pow(m, k: int) -> np.ndarray:
    """m**k for integer k >= 0 by successive squaring (O(log k) multiplies).

    Magnitudes below 1e-140 are treated as exact zeros between multiplies,
    which leaves every documented identity intact by a margin of more than a
    hundred orders of magnitude while keeping deep powers of contractive
    matrices out of subnormal arithmetic.
    """
    a = _square(m)
    if not isinstance(k, (int, np.integer)) or k < 0:
        raise ValueError(f"exponent must be a nonnegative integer, got {k!r}")
    n = a.shape[0]
    result = np.eye(n)
    base = a.copy()
    base[np.abs(base) < _SUBNORMAL_GUARD] = 0.0
    e = int(k)
    while e:
        if e & 1:
            result = result @ base
            result[np.abs(result) < _SUBNORMAL_GUARD] = 0.0
        e >>= 1
        if e:
            base = base @ base
            tiny = np.abs(base) < _SUBNORMAL_GUARD
            if tiny.all():
                # every remaining exponent bit multiplies in a zero matrix
                return np.zeros_like(result)
            base[tiny] = 0.0
    return result


def spectral_radius(m) -> float:
    """Largest eigenvalue magnitude."""
    a = _square(m)
    try:
        lam = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise RuntimeError(f"eigensolver did not converge: {exc}") from exc
    return float(np.abs(lam).max()) if a.shape[0] else 0.0


@dataclass(frozen=True)
class RealJordanForm:
    """Real block-diagonal eigenstructure M = P J P^-1.

    ``complex_blocks`` holds (magnitude, angle in degrees) for each 2x2
    rotation-scaling block, ordered by ascending magnitude; ``real_eigs`` holds
    the real eigenvalues ordered by ascending magnitude. J lays the complex
    blocks out first, then the real eigenvalues. ``perturbation`` records the
    max-norm size of the diagonal perturbation applied before decomposing
    (0.0 when the input was used as-is).
    """

    p_matrix: np.ndarray
    p_inverse: np.ndarray
    complex_blocks: tuple[tuple[float, float], ...]
    real_eigs: tuple[float, ...]
    perturbation: float = 0.0

    def __post_init__(self):
        self.p_matrix.setflags(write=False)
        self.p_inverse.setflags(write=False)

    @property
    def n(self) -> int:
        return self.p_matrix.shape[0]

    def jordan_matrix(self) -> np.ndarray:
        return self.jordan_power(1)

    def jordan_power(self, k: int) -> np.ndarray:
        """J**k assembled blockwise: each block scales by r**k and rotates by k*theta."""
        if not isinstance(k, (int, np.integer)) or k < 0:
            raise ValueError(f"exponent must be a nonnegative integer, got {k!r}")
        j = np.zeros((self.n, self.n))
        pos = 0
        for r, theta in self.complex_blocks:
            ang = np.deg2rad((k * theta) % 360.0)
            rot = np.array([[np.cos(ang), -np.sin(ang)], [np.sin(ang), np.cos(ang)]])
            j[pos:pos + 2, pos:pos + 2] = (r ** k) * rot
            pos += 2
        for lam in self.real_eigs:
            j[pos, pos] = lam ** k
            pos += 1
        return j


def _phase_align(z: np.ndarray) -> np.ndarray:
    # rotate a complex eigenvector of a real eigenvalue back onto the real axis
    k = int(np.argmax(np.abs(z)))
    u = (z * np.conj(z[k]) / abs(z[k])).real
    nrm = np.linalg.norm(u)
    if nrm == 0.0:
        raise RuntimeError("degenerate eigenvector")
    return u / nrm


def _assemble(lam: np.ndarray, vecs: np.ndarray, scale: float, tols: Tolerances):
    n = lam.shape[0]
    imag_tol = tols.eigen_distinct * scale
    real_idx = [i for i in range(n) if abs(lam[i].imag) <= imag_tol]
    pair_idx = [i for i in range(n) if lam[i].imag > imag_tol]
    if len(real_idx) + 2 * len(pair_idx) != n:
        return None  # unmatched conjugates; treat like a failed attempt

    pair_idx.sort(key=lambda i: abs(lam[i]))
    real_idx.sort(key=lambda i: abs(lam[i].real))

    # distinctness: all eigenvalues pairwise separated, all magnitudes pairwise separated
    eig_list = [lam[i] for i in real_idx] + [lam[i] for i in pair_idx] + [np.conj(lam[i]) for i in pair_idx]
    for a in range(len(eig_list)):
        for b in range(a + 1, len(eig_list)):
            if abs(eig_list[a] - eig_list[b]) < tols.eigen_distinct * scale:
                return None
    mags = [abs(lam[i].real) for i in real_idx] + [abs(lam[i]) for i in pair_idx]
    for a in range(len(mags)):
        for b in range(a + 1, len(mags)):
            if abs(mags[a] - mags[b]) < tols.eigen_distinct * scale:
                return None

    cols = []
    blocks = []
    for i in pair_idx:
        z = vecs[:, i]
        # columns [Im z, Re z] turn the pair a+-ib into [[a, -b], [b, a]]
        cols.append(z.imag)
        cols.append(z.real)
        a_, b_ = lam[i].real, lam[i].imag
        blocks.append((float(np.hypot(a_, b_)), float(np.degrees(np.arctan2(b_, a_)) % 360.0)))
    reals = []
    for i in real_idx:
        cols.append(_phase_align(vecs[:, i]))
        reals.append(float(lam[i].real))

    p = np.column_stack(cols) if cols else np.zeros((n, 0))
    try:
        p_inv = np.linalg.inv(p)
    except np.linalg.LinAlgError:
        return None
    return p, p_inv, tuple(blocks), tuple(reals)


def real_jordan(m, tols: Tolerances = DEFAULT_TOLS) -> RealJordanForm:
    """Real Jordan decomposition with distinct-magnitude guarantee.

    When eigenvalues (or their magnitudes) collide within tolerance, the input
    is nudged by a deterministic diagonal perturbation of relative size ~1e-7
    and decomposed again; the applied perturbation size is recorded in the
    result. Raises RuntimeError when the perturbation budget is exhausted.
    """
    a = _square(m)
    n = a.shape[0]
    if n == 0:
        raise ValueError("empty matrix")
    scale = max(1.0, float(np.abs(a).max()))
    recon_tol = tols.reconstruction * scale
    pattern = np.diag(np.arange(1, n + 1, dtype=float) / n)
    for mult in (0.0, 1.0, 2.0, 4.0):
        delta = mult * tols.perturbation * scale
        work = a + delta * pattern
        try:
            lam, vecs = np.linalg.eig(work)
        except np.linalg.LinAlgError as exc:
            raise RuntimeError(f"eigensolver did not converge: {exc}") from exc
        built = _assemble(lam, vecs, scale, tols)
        if built is None:
            continue
        p, p_inv, blocks, reals = built
        j = RealJordanForm(p, p_inv, blocks, reals, perturbation=float(delta))
        if np.abs(p @ j.jordan_matrix() @ p_inv - a).max() <= recon_tol:
            return j
    raise RuntimeError(
        "could not build a well-conditioned real Jordan form: "
        "perturbation budget exhausted (near-defective input?)"
    )
