"""Normalised bound states in position and momentum space.

With z = tanh(a x) the Theta-equation becomes the associated Legendre
equation, and the bound states are

    psi_n^kappa(x) = A_n^kappa sech(a x) P_n^kappa(tanh(a x)),
    A_n^kappa      = sqrt(a (2n+1) (n-kappa)! / (2 (n+kappa)!)),

for integers |kappa| <= n.  Using P_n^k = (1-z^2)^{k/2} q_n^k (see
:mod:`pdmwell.legendre`) every state is ``C sech^{|kappa|+1}(ax) q(tanh ax)``
and all x-derivatives follow in closed form.

Momentum amplitudes use the unitary kernel e^{-ipx}/sqrt(2 pi) (p is a
wavenumber).  The first seven states have closed-form transforms; every
other state is transformed by direct quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.optimize import brentq
from scipy.special import gammaln, hyp2f1, rgamma

from . import model
from .legendre import order_factor, reduced_legendre, reduced_roots
from .model import ModelParams, sech
from .quadrature import QuadratureSpec, default_spec, fourier_integral, integrate

__all__ = [
    "InadmissibleStateError",
    "QuantumNumbers",
    "BoundState",
    "MomentumWavefunction",
    "REGISTRY",
    "build_state",
    "normalization_constant",
    "momentum_state",
    "residual_check",
    "zk_residual",
    "matching_check",
    "orthonormality_matrix",
    "gram_matrix",
    "psi_hypergeometric",
]


class InadmissibleStateError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class QuantumNumbers:
    n: int
    kappa: int = 0

    def __post_init__(self):
        for name in ("n", "kappa"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v:
                raise InadmissibleStateError(f"{name} must be an integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if self.n < 0:
            raise InadmissibleStateError(f"n must be >= 0, got {self.n}")
        if abs(self.kappa) > self.n:
            raise InadmissibleStateError(f"|kappa| <= n violated: n={self.n}, kappa={self.kappa}")

    @property
    def parity(self) -> int:
        return 1 if (self.n + self.kappa) % 2 == 0 else -1

    @property
    def node_count(self) -> int:
        return self.n - abs(self.kappa)


def normalization_constant(q: QuantumNumbers, p: ModelParams) -> float:
    n, k = q.n, q.kappa
    log_ratio = gammaln(n - k + 1) - gammaln(n + k + 1)
    return math.sqrt(p.a * (2 * n + 1) / 2.0 * math.exp(log_ratio))


def _sech_power_derivs(j, a, s, t, q, dq, d2q):
    """f = s^j q(t) and df/dx, d2f/dx2 for s = sech(ax), t = tanh(ax)."""
    sj = s**j
    s2 = s * s
    g = -j * t * q + s2 * dq
    f1 = a * sj * g
    f2 = a * a * sj * (-j * t * g + s2 * (-j * q - (j + 2) * t * dq + s2 * d2q))
    return sj * q, f1, f2


@dataclass(frozen=True)
class BoundState:
    q: QuantumNumbers
    params: ModelParams
    energy: float
    norm_const: float
    parity: int
    spec: QuadratureSpec = field(default_factory=default_spec, compare=False, repr=False)

    # -- position space --------------------------------------------------
    def _parts(self, x, order=2):
        x = np.asarray(x, dtype=float)
        a = self.params.a
        u = a * x
        s, t = sech(u), np.tanh(u)
        k = abs(self.q.kappa)
        qv, dq, d2q = reduced_legendre(self.q.n, k, t)
        c = self.norm_const * order_factor(self.q.n, self.q.kappa)
        return c, a, s, t, k, qv, dq, d2q

    def psi_derivs(self, x):
        """(psi, psi', psi'') at ``x``."""
        c, a, s, t, k, qv, dq, d2q = self._parts(x)
        f0, f1, f2 = _sech_power_derivs(k + 1, a, s, t, qv, dq, d2q)
        return c * f0, c * f1, c * f2

    def psi(self, x):
        c, a, s, t, k, qv, _, _ = self._parts(x)
        return c * s ** (k + 1) * qv

    def dpsi(self, x):
        return self.psi_derivs(x)[1]

    def density(self, x):
        return self.psi(x) ** 2

    def theta_derivs(self, x):
        """Theta = psi / sqrt(m) and its first two derivatives."""
        c, a, s, t, k, qv, dq, d2q = self._parts(x)
        f0, f1, f2 = _sech_power_derivs(k, a, s, t, qv, dq, d2q)
        c = c / math.sqrt(self.params.m0)
        return c * f0, c * f1, c * f2

    def nodes(self) -> np.ndarray:
        """Interior zeros of psi, ascending."""
        return np.arctanh(reduced_roots(self.q.n, self.q.kappa)) / self.params.a

    # -- momentum space ----------------------------------------------------
    @cached_property
    def momentum(self) -> "MomentumWavefunction":
        return momentum_state(self, self.spec)

    def phi(self, p):
        return self.momentum(p)


def build_state(q: QuantumNumbers, p: ModelParams, spec: QuadratureSpec | None = None) -> BoundState:
    if not isinstance(q, QuantumNumbers):
        q = QuantumNumbers(*q)
    return BoundState(
        q=q,
        params=p,
        energy=model.energy_level(q, p),
        norm_const=normalization_constant(q, p),
        parity=q.parity,
        spec=spec or default_spec(),
    )


# -- momentum space -----------------------------------------------------------
#
# a = 1 forms Phi_1(v) = phase * coef * r(v) * g(v), g = sech(pi v/2) or
# v csch(pi v/2); general a via Phi_a(p) = a^{-1/2} Phi_1(p/a).  Phases are
# those of the Condon-Shortley psi above under the e^{-ipx} kernel.
REGISTRY: dict[tuple[int, int], tuple[complex, float, tuple[float, ...], str]] = {
    (0, 0): (1, math.sqrt(math.pi / 4), (1.0,), "sech"),
    (1, 0): (-1j, math.sqrt(3 * math.pi / 4), (0.0, 1.0), "sech"),
    (1, 1): (-1, math.sqrt(3 * math.pi / 8), (1.0,), "vcsch"),
    (2, 0): (1, math.sqrt(5 * math.pi / 64), (1.0, 0.0, -3.0), "sech"),
    (2, 1): (1j, math.sqrt(15 * math.pi / 32), (0.0, 1.0), "vcsch"),
    (2, 2): (1, math.sqrt(15 * math.pi / 128), (1.0, 0.0, 1.0), "sech"),
    (3, 0): (1j, math.sqrt(7 * math.pi / 576), (0.0, -7.0, 0.0, 5.0), "sech"),
}

_HALF_PI = 0.5 * math.pi


def _g_and_dg(kind, v):
    """g(v) and dg/dv for the two registry profile shapes."""
    u = _HALF_PI * v
    au = np.abs(u)
    e = np.exp(-au)
    e2 = e * e
    if kind == "sech":
        g = 2.0 * e / (1.0 + e2)
        th = np.sign(u) * (1.0 - e2) / (1.0 + e2)
        return g, -_HALF_PI * g * th
    # v csch(u) = (2/pi) u csch(u); d/dv = csch u (1 - u coth u)
    small = au < 1e-3
    with np.errstate(divide="ignore", invalid="ignore"):
        ucsch = au * 2.0 * e / (-np.expm1(-2.0 * au))
        csch = np.sign(u) * 2.0 * e / (-np.expm1(-2.0 * au))
        coth = np.sign(u) * (1.0 + e2) / (-np.expm1(-2.0 * au))
        dg = csch * (1.0 - u * coth)
    ucsch = np.where(small, 1.0 - u * u / 6.0 + 7.0 * u**4 / 360.0, ucsch)
    dg = np.where(small, -u / 3.0 + 7.0 * u**3 / 90.0, dg)
    return ucsch / _HALF_PI, dg


class MomentumWavefunction:
    """Callable p -> Phi(p) (complex) with derivative and node finder."""

    def __init__(self, state: BoundState, spec: QuadratureSpec, force_numeric: bool = False):
        self.state = state
        self.spec = spec
        key = (state.q.n, state.q.kappa)
        self.analytic = key in REGISTRY and not force_numeric
        self._entry = REGISTRY.get(key)
        self._x_scale = 1.0 / state.params.a

    def __call__(self, p):
        p = np.asarray(p, dtype=float)
        if self.analytic:
            out = self._closed(p)[0]
        else:
            out = fourier_integral(self.state.psi, p.ravel(), self.spec, scale=self._x_scale).value
            out = np.asarray(out).reshape(p.shape)
        return out

    def derivative(self, p):
        p = np.asarray(p, dtype=float)
        if self.analytic:
            return self._closed(p)[1]
        out = fourier_integral(
            self.state.psi, p.ravel(), self.spec, scale=self._x_scale, weight=lambda x: -1j * x
        ).value
        return np.asarray(out).reshape(p.shape)

    def density(self, p):
        return np.abs(self(p)) ** 2

    def real_profile(self, p):
        """Phi with its constant phase removed (real for even, -i*real for odd)."""
        ph = self(p)
        return ph.real if self.state.parity == 1 else -ph.imag

    def _closed(self, p):
        phase, coef, r, kind = self._entry
        a = self.state.params.a
        v = p / a
        poly = np.polynomial.polynomial.polyval(v, r)
        dpoly = np.polynomial.polynomial.polyval(v, np.polynomial.polynomial.polyder(r)) if len(r) > 1 else 0.0
        g, dg = _g_and_dg(kind, v)
        val = phase * coef * poly * g / math.sqrt(a)
        dval = phase * coef * (dpoly * g + poly * dg) / a**1.5
        return val, dval

    def nodes(self, span: float = 20.0, samples: int = 800) -> np.ndarray:
        """Sign changes of the phase-stripped amplitude on |p| <= span*a, refined."""
        a = self.state.params.a
        grid = np.linspace(-span * a, span * a, samples)  # even count: 0 not sampled
        f = self.real_profile(grid)
        floor = 1e-10 * np.max(np.abs(f))
        roots = []
        for i in np.nonzero(np.sign(f[:-1]) * np.sign(f[1:]) < 0)[0]:
            if max(abs(f[i]), abs(f[i + 1])) < floor:
                continue
            roots.append(brentq(lambda x: float(self.real_profile(np.array([x]))[0]),
                                grid[i], grid[i + 1], xtol=1e-15 * a))
        return np.array(roots)


def momentum_state(s: BoundState, spec: QuadratureSpec | None = None, *, force_numeric: bool = False):
    return MomentumWavefunction(s, spec or s.spec, force_numeric=force_numeric)


# -- checks -----------------------------------------------------------------

def residual_check(s: BoundState, x_samples, energy: float | None = None) -> float:
    """Scaled residual of the Theta-equation at ``x_samples``.

    Theta'' + a^2 [(delta + alpha) sech^2(ax) - kappa^2] Theta, where kappa
    is the state's own order (the potential family with alpha + beta =
    kappa^2).  Normalised by the largest of |Theta''| + |coeff Theta| +
    a^2 |Theta| over the samples, which stays finite at nodes and for the
    constant Theta of the free ground state.
    """
    p = s.params
    dl = model.dimensionless(p)
    e = s.energy if energy is None else energy
    lam = float(dl.deltaOf(e)) + dl.alpha
    x = np.asarray(x_samples, dtype=float)
    th, _, th2 = s.theta_derivs(x)
    sc = sech(p.a * x) ** 2
    coeff = p.a**2 * (lam * sc - s.q.kappa**2)
    r = th2 + coeff * th
    scale = np.max(np.abs(th2) + np.abs(coeff * th) + p.a**2 * np.abs(th))
    return float(np.max(np.abs(r)) / scale)


def zk_residual(s: BoundState, x_samples, energy: float | None = None) -> float:
    """Scaled residual of the ordered equation written directly for psi.

    Multiplying the ordered equation by 2m/hbar^2 gives, for the solitonic
    mass, -psi'' - 2a tanh(ax) psi' + [-a^2 + 2 m (V - E)/hbar^2] psi = 0.
    V uses the potential family with alpha + beta = kappa^2.
    """
    p = s.params
    e = s.energy if energy is None else energy
    x = np.asarray(x_samples, dtype=float)
    u = p.a * x
    t, s2 = np.tanh(u), sech(u) ** 2
    v1 = s.q.kappa**2 * p.energy_unit / 2.0 - p.V0
    mv = p.m0 * (p.V0 * t * t + v1)  # m(x) V(x) without overflow
    f0, f1, f2 = s.psi_derivs(x)
    terms = [-f2, -2.0 * p.a * t * f1, -p.a**2 * f0, 2.0 * (mv - p.m0 * s2 * e) / p.hbar**2 * f0]
    r = sum(terms)
    scale = np.max(sum(np.abs(tm) for tm in terms))
    return float(np.max(np.abs(r)) / scale)


def matching_check(s: BoundState, x0: float, step: float = 1e-5) -> tuple[float, float]:
    """(1/sqrt m) dpsi/dx at x0 from the left and from the right.

    Second-order one-sided differences.
    """
    h = step
    f = s.psi(np.array([x0 - 2 * h, x0 - h, x0, x0 + h, x0 + 2 * h]))
    left = (3 * f[2] - 4 * f[1] + f[0]) / (2 * h)
    right = (-3 * f[2] + 4 * f[3] - f[4]) / (2 * h)
    w = 1.0 / math.sqrt(float(model.mass_profile(x0, s.params)))
    return float(left * w), float(right * w)


def gram_matrix(states, spec: QuadratureSpec | None = None):
    """Overlap matrix <psi_i|psi_j> of real states sharing the width a."""
    m = len(states)
    iu = np.triu_indices(m)

    def integrand(x):
        vals = np.array([s.psi(x) for s in states])
        return vals[iu[0]] * vals[iu[1]]

    res = integrate(integrand, spec, scale=1.0 / states[0].params.a)
    g = np.zeros((m, m))
    g[iu] = np.atleast_1d(res.value)
    return g + np.triu(g, 1).T


def orthonormality_matrix(p: ModelParams, n_max: int, kappa: int, spec: QuadratureSpec | None = None):
    """Gram matrix of psi_n^kappa for |kappa| <= n <= n_max."""
    return gram_matrix([build_state(QuantumNumbers(n, kappa), p) for n in range(abs(kappa), n_max + 1)], spec)


def psi_hypergeometric(q: QuantumNumbers, p: ModelParams, x, bracket: str = "derived"):
    """Hypergeometric route to psi for kappa <= 0 (1/Gamma(1-kappa) regular).

    ``bracket='derived'`` uses ((1+z)/(1-z))^(kappa/2); ``'printed'`` uses
    ((1+z^2)/(1-z^2))^(kappa/2).
    """
    if q.kappa > 0:
        raise ValueError("hypergeometric form is only regular for kappa <= 0")
    x = np.asarray(x, dtype=float)
    z = np.tanh(p.a * x)
    if bracket == "derived":
        ratio = (1.0 + z) / (1.0 - z)
    elif bracket == "printed":
        ratio = (1.0 + z * z) / (1.0 - z * z)
    else:
        raise ValueError("bracket must be 'derived' or 'printed'")
    f = hyp2f1(-q.n, q.n + 1, 1 - q.kappa, (1.0 - z) / 2.0)
    return normalization_constant(q, p) * sech(p.a * x) * rgamma(1 - q.kappa) * ratio ** (q.kappa / 2.0) * f
