"""Shannon entropies, Fisher information, variances and uncertainty relations.

Entropies are in nats.  Position integrals are split at the nodes of psi
and momentum integrals at the nodes of Phi, so the ``rho ln rho`` kinks sit
at piece endpoints.  Quadrature length scales are 1/a (position) and a
(momentum); the discrete rules therefore rescale exactly with the width,
which is what keeps S_x + S_p invariant under a to rounding level.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace

import numpy as np
from scipy.special import xlogy

from .model import ModelParams
from .quadrature import QuadratureSpec, integrate
from .states import BoundState, QuantumNumbers, build_state

__all__ = [
    "BBM_BOUND",
    "UNCERTAINTY_BOUND",
    "EntropyReport",
    "FisherReport",
    "shannon_position",
    "shannon_momentum",
    "entropy_report",
    "bbm_check",
    "entropy_sum_invariance",
    "fisher_position",
    "fisher_position_density",
    "fisher_momentum",
    "fisher_momentum_density",
    "variances",
    "fisher_report",
    "fisher_variance_relations",
    "uncertainty_product",
]

BBM_BOUND = 1.0 + math.log(math.pi)  # D = 1
UNCERTAINTY_BOUND = 4.0  # F_x F_p >= 4 with p a wavenumber (hbar = 1)
BBM_SLACK_TOL = 1e-9


@dataclass(frozen=True)
class EntropyReport:
    q: QuantumNumbers
    a: float
    S_x: float
    S_p: float
    sum: float
    bbm_bound: float
    bbm_satisfied: bool
    quad_error: float

    def as_row(self) -> dict:
        return {
            "n": self.q.n, "kappa": self.q.kappa, "a": self.a, "S_x": self.S_x, "S_p": self.S_p,
            "sum": self.sum, "bbm_bound": self.bbm_bound, "pass": self.bbm_satisfied,
        }


@dataclass(frozen=True)
class FisherReport:
    q: QuantumNumbers
    a: float
    F_x: float
    F_p: float
    var_x: float
    var_p: float
    rel_x_residual: float
    rel_p_residual: float
    product: float
    mean_x: float = 0.0
    mean_p: float = 0.0
    quad_error: float = 0.0

    def as_row(self) -> dict:
        d = asdict(self)
        q = d.pop("q")
        for k in ("mean_x", "mean_p", "quad_error"):
            d.pop(k)
        return {"n": q["n"], "kappa": q["kappa"], **d}


def _pos_kw(s: BoundState):
    return {"breakpoints": tuple(s.nodes()), "scale": 1.0 / s.params.a}


def _mom_kw(s: BoundState):
    return {"breakpoints": tuple(s.momentum.nodes()), "scale": s.params.a}


def _entropy_integrand(density):
    def f(x):
        rho = density(x)
        return -xlogy(rho, rho)
    return f


def shannon_position(s: BoundState, spec: QuadratureSpec | None = None, *, with_error=False):
    """S_x = -int |psi|^2 ln |psi|^2 dx (0 ln 0 := 0)."""
    res = integrate(_entropy_integrand(s.density), spec or s.spec, **_pos_kw(s))
    return (res.value, res.error) if with_error else res.value


def shannon_momentum(s: BoundState, spec: QuadratureSpec | None = None, *, with_error=False):
    """S_p = -int |Phi|^2 ln |Phi|^2 dp."""
    res = integrate(_entropy_integrand(s.momentum.density), spec or s.spec, **_mom_kw(s))
    return (res.value, res.error) if with_error else res.value


def entropy_report(s: BoundState, spec: QuadratureSpec | None = None) -> EntropyReport:
    sx, ex = shannon_position(s, spec, with_error=True)
    sp, ep = shannon_momentum(s, spec, with_error=True)
    total = sx + sp
    return EntropyReport(
        q=s.q, a=s.params.a, S_x=sx, S_p=sp, sum=total, bbm_bound=BBM_BOUND,
        bbm_satisfied=bool(total >= BBM_BOUND - BBM_SLACK_TOL), quad_error=float(ex + ep),
    )


def bbm_check(r: EntropyReport) -> bool:
    return bool(r.sum >= r.bbm_bound - BBM_SLACK_TOL)


def entropy_sum_invariance(q: QuantumNumbers, a_list, spec: QuadratureSpec | None = None,
                           base: ModelParams | None = None):
    """Spread max - min of S_x + S_p over the widths in ``a_list``.

    Returns ``(spread, sums)``.
    """
    if len(a_list) < 2 or any(a <= 0 for a in a_list):
        raise ValueError("a_list needs at least two positive widths")
    base = base or ModelParams()
    sums = []
    for a in a_list:
        s = build_state(q, replace(base, a=float(a)), spec)
        sums.append(shannon_position(s, spec) + shannon_momentum(s, spec))
    return float(max(sums) - min(sums)), sums


def fisher_position(s: BoundState, spec: QuadratureSpec | None = None, *, with_error=False):
    """F_x = 4 int (psi')^2 dx, the node-safe form of int (rho')^2/rho."""
    res = integrate(lambda x: 4.0 * s.dpsi(x) ** 2, spec or s.spec, scale=1.0 / s.params.a)
    return (res.value, res.error) if with_error else res.value


def _density_form(rho_and_drho, nodes, radius, spec, scale):
    nodes = np.asarray(nodes, dtype=float)
    bps = []
    for b in nodes:
        bps += [b - radius, b + radius]

    def f(x):
        rho, drho = rho_and_drho(x)
        out = np.zeros_like(rho)
        keep = np.ones(x.shape, dtype=bool)
        for b in nodes:
            keep &= np.abs(x - b) >= radius
        keep &= rho > 0
        out[keep] = drho[keep] ** 2 / rho[keep]
        return out

    return integrate(f, spec, breakpoints=bps, scale=scale).value


def fisher_position_density(s: BoundState, spec: QuadratureSpec | None = None, radius: float | None = None):
    """int (rho')^2 / rho dx, excluding node neighbourhoods of ``radius`` (1e-6/a)."""
    radius = 1e-6 / s.params.a if radius is None else radius

    def rd(x):
        f0, f1, _ = s.psi_derivs(x)
        return f0 * f0, 2.0 * f0 * f1

    return _density_form(rd, s.nodes(), radius, spec or s.spec, 1.0 / s.params.a)


def fisher_momentum(s: BoundState, spec: QuadratureSpec | None = None, *, with_error=False):
    """F_p = 4 int |Phi'|^2 dp; the constant phase of Phi drops out."""
    res = integrate(lambda p: 4.0 * np.abs(s.momentum.derivative(p)) ** 2, spec or s.spec,
                    **_mom_kw(s))
    return (res.value, res.error) if with_error else res.value


def fisher_momentum_density(s: BoundState, spec: QuadratureSpec | None = None, radius: float | None = None):
    """int (rho_p')^2 / rho_p dp with rho_p = |Phi|^2, excluding node neighbourhoods."""
    radius = 1e-6 * s.params.a if radius is None else radius
    mom = s.momentum

    def rd(p):
        ph, dph = mom(p), mom.derivative(p)
        return np.abs(ph) ** 2, 2.0 * np.real(np.conj(ph) * dph)

    return _density_form(rd, mom.nodes(), radius, spec or s.spec, s.params.a)


def variances(s: BoundState, spec: QuadratureSpec | None = None, *, with_means=False):
    """(sigma_x^2, sigma_p^2) from the position and momentum densities."""
    spec = spec or s.spec
    xk = _pos_kw(s)
    pk = _mom_kw(s)
    mx = integrate(lambda x: np.array([x * s.density(x), x * x * s.density(x)]), spec, **xk).value
    rp = s.momentum.density
    mp = integrate(lambda p: np.array([p * rp(p), p * p * rp(p)]), spec, **pk).value
    vx = mx[1] - mx[0] ** 2
    vp = mp[1] - mp[0] ** 2
    if with_means:
        return vx, vp, mx[0], mp[0]
    return vx, vp


def fisher_report(s: BoundState, spec: QuadratureSpec | None = None) -> FisherReport:
    fx, ex = fisher_position(s, spec, with_error=True)
    fp, ep = fisher_momentum(s, spec, with_error=True)
    vx, vp, mx, mp = variances(s, spec, with_means=True)
    return FisherReport(
        q=s.q, a=s.params.a, F_x=fx, F_p=fp, var_x=vx, var_p=vp,
        rel_x_residual=fx - 4.0 * vp, rel_p_residual=fp - 4.0 * vx, product=fx * fp,
        mean_x=mx, mean_p=mp, quad_error=float(ex + ep),
    )


def fisher_variance_relations(fr: FisherReport, relative: bool = True) -> tuple[float, float]:
    """(F_x - 4 sigma_p^2, F_p - 4 sigma_x^2), relative to F_x, F_p by default."""
    rx, rp = fr.F_x - 4.0 * fr.var_p, fr.F_p - 4.0 * fr.var_x
    if relative:
        return rx / fr.F_x, rp / fr.F_p
    return rx, rp


def uncertainty_product(fr: FisherReport) -> float:
    return fr.F_x * fr.F_p
