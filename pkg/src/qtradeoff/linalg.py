"""Dense complex linear algebra on small Hilbert spaces (dimension <= 16).

Tensor products, partial traces, a cyclic-Jacobi Hermitian eigensolver and
spectral matrix functions, plus the DensityMatrix container used everywhere
else in the package.
"""

from dataclasses import dataclass, field

import numpy as np

HERM_TOL = 1e-10
TRACE_TOL = 1e-10
EIG_FLOOR = -1e-9

# Jacobi convergence: off-diagonal Frobenius norm below this, at most 100 sweeps.
JACOBI_OFF_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


def _as_complex(m):
    a = np.asarray(m, dtype=complex)
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix has non-finite entries")
    return a


def kron(a, b):
    """Kronecker product of two matrices."""
    return np.kron(_as_complex(a), _as_complex(b))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, PSD, unit-trace matrix with attached tensor-factor dimensions."""

    mat: np.ndarray
    dims: tuple

    def __post_init__(self):
        a = _as_complex(self.mat)
        object.__setattr__(self, "mat", a)
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        n = a.shape[0]
        if a.ndim != 2 or a.shape[1] != n:
            raise ValueError("density matrix must be square")
        if int(np.prod(dims)) != n:
            raise ValueError(f"dims {dims} incompatible with matrix dimension {n}")
        if np.max(np.abs(a - a.conj().T)) > HERM_TOL:
            raise ValueError("density matrix not Hermitian within 1e-10")
        if abs(np.trace(a).real - 1.0) > TRACE_TOL or abs(np.trace(a).imag) > TRACE_TOL:
            raise ValueError("density matrix trace differs from 1 beyond 1e-10")
        if np.min(np.linalg.eigvalsh((a + a.conj().T) / 2)) < EIG_FLOOR:
            raise ValueError("density matrix has eigenvalue below -1e-9")

    @property
    def dim(self):
        return self.mat.shape[0]


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced state over the kept tensor factors (indices into rho.dims)."""
    dims = rho.dims
    n = len(dims)
    keep = tuple(sorted(set(int(k) for k in keep)))
    if not keep or any(k < 0 or k >= n for k in keep):
        raise ValueError(f"invalid subsystem index set {keep} for dims {dims}")
    t = rho.mat.reshape(dims + dims)
    row = list(range(n))
    col = [i if i not in keep else n + i for i in range(n)]
    out = [i for i in keep] + [n + i for i in keep]
    red = np.einsum(t, row + col, out)
    d = int(np.prod([dims[i] for i in keep]))
    red = red.reshape(d, d)
    red = (red + red.conj().T) / 2
    return DensityMatrix(red, tuple(dims[i] for i in keep))


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in descending order with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _jacobi_rotate(a, v, p, q):
    apq = a[p, q]
    r = abs(apq)
    u = apq / r
    app = a[p, p].real
    aqq = a[q, q].real
    tau = (aqq - app) / (2.0 * r)
    if tau >= 0:
        t = 1.0 / (tau + np.hypot(1.0, tau))
    else:
        t = -1.0 / (-tau + np.hypot(1.0, tau))
    c = 1.0 / np.hypot(1.0, t)
    s = t * c
    su = s * u
    # Left-multiply by J^dagger (rows), then right-multiply by J (columns),
    # with J the identity except J[p,p]=J[q,q]=c, J[p,q]=s*u, J[q,p]=-s*conj(u).
    rp = a[p, :].copy()
    rq = a[q, :].copy()
    a[p, :] = c * rp - su * rq
    a[q, :] = np.conj(su) * rp + c * rq
    cp = a[:, p].copy()
    cq = a[:, q].copy()
    a[:, p] = c * cp - np.conj(su) * cq
    a[:, q] = su * cp + c * cq
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    vp = v[:, p].copy()
    vq = v[:, q].copy()
    v[:, p] = c * vp - np.conj(su) * vq
    v[:, q] = su * vp + c * vq


def herm_eig(m) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Ordering is deterministic: eigenvalues descending, each eigenvector's first
    component of significant magnitude made real and positive.
    """
    a = _as_complex(m)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise ValueError("matrix must be square")
    if np.max(np.abs(a - a.conj().T)) > 1e-8:
        raise ValueError("matrix not Hermitian within 1e-8")
    a = (a + a.conj().T) / 2  # absorb float drift from products
    v = np.eye(n, dtype=complex)
    skip = JACOBI_OFF_TOL / (10.0 * n)
    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.sqrt(np.sum(np.abs(a - np.diag(np.diag(a))) ** 2))
        if off < JACOBI_OFF_TOL:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > skip:
                    _jacobi_rotate(a, v, p, q)
    w = np.diag(a).real.copy()
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    for j in range(n):
        col = v[:, j]
        idx = np.argmax(np.abs(col) > 1e-12)
        piv = col[idx]
        if abs(piv) > 1e-12:
            v[:, j] = col * (np.conj(piv) / abs(piv))
    return EigenDecomposition(w, v)


def spectral_fn(m, f):
    """Apply a real function to a Hermitian matrix through its spectrum.

    Eigenvalues in [-1e-9, 0) are clamped to 0 so reconstruction noise cannot
    poison entropy or square-root evaluations.
    """
    dec = herm_eig(m)
    w = dec.eigenvalues.copy()
    w[(w < 0) & (w >= EIG_FLOOR)] = 0.0
    fw = np.array([f(x) for x in w], dtype=float)
    if not np.all(np.isfinite(fw)):
        raise ValueError("function undefined at an eigenvalue of the input")
    v = dec.eigenvectors
    return (v * fw) @ v.conj().T


def clamp_spectrum(w, floor=EIG_FLOOR):
    """Zero small negative values from float noise; reject genuine negatives."""
    w = np.asarray(w, dtype=float)
    if np.min(w) < floor:
        raise ValueError(f"spectrum value {np.min(w)} below tolerance floor {floor}")
    return np.where(w < 0, 0.0, w)
