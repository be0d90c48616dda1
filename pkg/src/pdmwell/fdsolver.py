"""Finite-difference oracle for the Theta-equation.

    -(hbar^2/2) Theta'' + m(x) V(x) Theta = E m(x) Theta

is discretised on a uniform grid over [-L, L] into the symmetric pencil
(A, B) with B diagonal, reduced to a symmetric tridiagonal matrix by the
B^{-1/2} similarity and solved by Sturm-sequence bisection plus inverse
iteration (LAPACK stebz/stein).  No closed form from :mod:`pdmwell.states`
is used here; psi = sqrt(m) Theta is recovered afterwards.

The default boundary is zero-flux (Theta' = 0 at +-L, half-weight end
cells).  For kappa = 0 the exact Theta tends to a non-zero constant, so a
Dirichlet wall shifts the levels by O(1/L); for kappa >= 1 Theta decays
and the two boundaries agree to exponential accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from . import model
from .model import ModelParams

__all__ = [
    "FDSpec",
    "FDOperators",
    "SpectrumResult",
    "FDConvergenceError",
    "CrossValidationRow",
    "assemble",
    "solve",
    "sturm_count",
    "cross_validate",
    "analytic_ladder",
]

BOX_ARTIFACT_THRESHOLD = 1e-4


class FDConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class FDSpec:
    L: float | None = None  # half-width; None -> 12/a
    N: int = 4001
    n_eigen: int = 4
    boundary: str = "neumann"

    def half_width(self, p: ModelParams) -> float:
        return 12.0 / p.a if self.L is None else float(self.L)

    def validate(self, p: ModelParams):
        if self.N < 101 or self.N % 2 == 0:
            raise ValueError(f"N must be odd and >= 101, got {self.N}")
        if self.half_width(p) * p.a < 8.0 - 1e-12:
            raise ValueError("L*a must be >= 8")
        if self.n_eigen < 1:
            raise ValueError("n_eigen must be >= 1")
        if self.boundary not in ("neumann", "dirichlet"):
            raise ValueError("boundary must be 'neumann' or 'dirichlet'")


@dataclass(frozen=True)
class FDOperators:
    x: np.ndarray  # grid of the unknowns
    h: float
    a_diag: np.ndarray
    a_off: np.ndarray
    b_diag: np.ndarray
    mass: np.ndarray

    def dense(self):
        A = np.diag(self.a_diag) + np.diag(self.a_off, 1) + np.diag(self.a_off, -1)
        return A, np.diag(self.b_diag)


@dataclass
class SpectrumResult:
    x: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # Theta_i on the grid, rows
    psi_vectors: np.ndarray  # psi_i = sqrt(m) Theta_i, trapezoid-normalised
    residual_norms: np.ndarray
    boundary_amplitude: np.ndarray
    n_filtered: int = 0
    params: ModelParams | None = None
    spec: FDSpec | None = None
    weights: np.ndarray = field(default=None, repr=False)  # trapezoid weights


def assemble(p: ModelParams, spec: FDSpec = FDSpec()) -> FDOperators:
    spec.validate(p)
    L = spec.half_width(p)
    x = np.linspace(-L, L, spec.N)
    h = x[1] - x[0]
    m = model.mass_profile(x, p)
    if p.bare_argument:
        mv = m * model.potential(x, p)
    else:
        # m V = m0 (V0 tanh^2 + V1), free of overflow
        mv = p.m0 * (p.V0 * np.tanh(p.a * x) ** 2 + p.V1)
    c = p.hbar**2 / (2.0 * h * h)
    a_diag = 2.0 * c + mv
    a_off = np.full(spec.N - 1, -c)
    b = m.copy()
    if spec.boundary == "neumann":
        a_diag[[0, -1]] = c + 0.5 * mv[[0, -1]]
        b[[0, -1]] *= 0.5
        return FDOperators(x, h, a_diag, a_off, b, m)
    return FDOperators(x[1:-1], h, a_diag[1:-1], a_off[1:-1], b[1:-1], m[1:-1])


def _reduced(ops: FDOperators):
    r = 1.0 / np.sqrt(ops.b_diag)
    return ops.a_diag * r * r, ops.a_off * r[:-1] * r[1:]


def sturm_count(d, e, sigma: float) -> int:
    """Number of eigenvalues of tridiag(e, d, e) below ``sigma`` (LDL^T inertia)."""
    count = 0
    q = 1.0
    tiny = np.finfo(float).tiny
    e2 = np.asarray(e) ** 2
    for i in range(len(d)):
        q = d[i] - sigma - (e2[i - 1] / q if i > 0 else 0.0)
        if q == 0.0:
            q = -tiny
        if q < 0:
            count += 1
    return count


def solve(p: ModelParams, spec: FDSpec = FDSpec()) -> SpectrumResult:
    ops = assemble(p, spec)
    d, e = _reduced(ops)
    tol = 1e-13 * max(1.0, p.energy_unit)
    try:
        w, v = eigh_tridiagonal(
            d, e, select="i", select_range=(0, spec.n_eigen - 1),
            lapack_driver="stebz", tol=tol,
        )
    except LinAlgError as exc:
        raise FDConvergenceError(f"inverse iteration failed: {exc}") from exc
    v = v.T
    res = np.array([np.linalg.norm(d * vi + np.r_[e * vi[1:], 0.0] + np.r_[0.0, e * vi[:-1]] - wi * vi)
                    for wi, vi in zip(w, v)])

    theta = v / np.sqrt(ops.b_diag)
    x = ops.x
    m = ops.mass
    if spec.boundary == "dirichlet":
        x = np.r_[x[0] - ops.h, x, x[-1] + ops.h]
        m = model.mass_profile(x, p)
        theta = np.pad(theta, ((0, 0), (1, 1)))
    psi = theta * np.sqrt(m)
    wts = np.full(x.size, ops.h)
    wts[[0, -1]] *= 0.5
    norms = np.sqrt(psi**2 @ wts)
    psi /= norms[:, None]
    theta /= norms[:, None]
    # sign: largest-magnitude sample on x >= 0 positive
    right = x >= 0
    for i in range(len(psi)):
        j = np.argmax(np.abs(psi[i, right]))
        if psi[i, right][j] < 0:
            psi[i] *= -1
            theta[i] *= -1
    peak = np.max(np.abs(psi), axis=1)
    edge = np.maximum(np.abs(psi[:, 0]), np.abs(psi[:, -1])) / peak
    keep = edge < BOX_ARTIFACT_THRESHOLD
    return SpectrumResult(
        x=x, eigenvalues=w[keep], eigenvectors=theta[keep], psi_vectors=psi[keep],
        residual_norms=res[keep], boundary_amplitude=edge[keep], n_filtered=int((~keep).sum()),
        params=p, spec=spec, weights=wts,
    )


@dataclass(frozen=True)
class CrossValidationRow:
    level: int
    n: int
    kappa: int
    E_fd: float
    E_analytic: float
    abs_err: float
    overlap: float
    S_x_fd: float
    S_x_analytic: float

    def as_row(self):
        return {"level": self.level, "E_fd": self.E_fd, "E_analytic": self.E_analytic,
                "abs_err": self.abs_err, "overlap": self.overlap}


def analytic_ladder(p: ModelParams, n_levels: int, spec=None):
    """Analytic states of the potential ``p`` ordered by energy (needs integer kappa)."""
    from .states import QuantumNumbers, build_state

    k = model.consistent_kappa(p)
    if k is None:
        raise ValueError("alpha + beta is not a perfect square; no analytic ladder")
    return [build_state(QuantumNumbers(n, k), p, spec) for n in range(k, k + n_levels)]


def cross_validate(sr: SpectrumResult, analytic, spec=None) -> list[CrossValidationRow]:
    """Compare FD levels with analytic states level by level."""
    from scipy.special import xlogy

    from .infotheory import shannon_position

    if len(analytic) != len(sr.eigenvalues):
        raise ValueError(f"level count mismatch: FD {len(sr.eigenvalues)} vs analytic {len(analytic)}")
    rows = []
    w = sr.weights
    for i, (s, e_fd, psi_fd) in enumerate(zip(analytic, sr.eigenvalues, sr.psi_vectors)):
        psi_an = s.psi(sr.x)
        ov = abs(float(psi_fd * psi_an @ w))
        rho = psi_fd**2
        sx_fd = float(-xlogy(rho, rho) @ w)
        rows.append(CrossValidationRow(
            level=i, n=s.q.n, kappa=s.q.kappa, E_fd=float(e_fd), E_analytic=s.energy,
            abs_err=abs(float(e_fd) - s.energy), overlap=ov,
            S_x_fd=sx_fd, S_x_analytic=shannon_position(s, spec),
        ))
    return rows
