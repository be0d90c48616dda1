"""Physical model: solitonic mass profile, hyperbolic well and energy ladder.

Units are natural (hbar = m0 = 1 by default).  The potential argument is
``a*x`` so that the reduction to the associated Legendre equation holds for
every width ``a``; ``bare_argument=True`` switches to ``sinh(x)``/``cosh(x)``
for comparison runs only.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields
from typing import Any, Mapping

import numpy as np

__all__ = [
    "DomainError",
    "ModelParams",
    "DimensionlessParams",
    "DominanceReport",
    "sech",
    "log_sech2",
    "mass_profile",
    "mass_momentum",
    "dispersion_energy",
    "potential",
    "dimensionless",
    "energy_level",
    "consistent_kappa",
    "params_for_kappa",
    "mass_dominance_check",
]

# below this |k|/a the k*csch(ck) factor is replaced by its limit 1/c
_K_SERIES_CUTOFF = 1e-8


class DomainError(ValueError):
    """Argument outside the validity domain of a closed form."""


@dataclass(frozen=True)
class ModelParams:
    m0: float = 1.0
    a: float = 1.0
    hbar: float = 1.0
    V0: float = 0.0
    V1: float = 0.0
    bare_argument: bool = False

    def __post_init__(self):
        for name in ("m0", "a", "hbar"):
            val = getattr(self, name)
            if not (math.isfinite(val) and val > 0):
                raise ValueError(f"{name} must be positive and finite, got {val!r}")
        for name in ("V0", "V1"):
            val = getattr(self, name)
            if not (math.isfinite(val) and val >= 0):
                raise ValueError(f"{name} must be non-negative (hyperbolic well), got {val!r}")

    @property
    def energy_unit(self) -> float:
        """a^2 hbar^2 / m0, the natural spacing scale of the ladder."""
        return self.a**2 * self.hbar**2 / self.m0

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ModelParams":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown ModelParams fields: {sorted(unknown)}")
        kwargs = {k: (bool(v) if k == "bare_argument" else float(v)) for k, v in data.items()}
        return cls(**kwargs)

    @classmethod
    def from_json(cls, text: str) -> "ModelParams":
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ValueError("ModelParams JSON must be a flat object")
        return cls.from_dict(data)


@dataclass(frozen=True)
class DimensionlessParams:
    alpha: float
    beta: float
    kappaSq: float
    energy_scale: float  # 2 m0 / (a^2 hbar^2)

    def deltaOf(self, energy):
        """Reduced energy 2 m0 E / (a^2 hbar^2)."""
        return self.energy_scale * np.asarray(energy, dtype=float)


@dataclass(frozen=True)
class DominanceReport:
    classification: str  # "vanishing" | "bounded" | "divergent"
    x_samples: tuple[float, ...]
    log_values: tuple[float, ...]
    rates: tuple[float, ...]


def sech(u):
    """Overflow-free hyperbolic secant."""
    u = np.abs(np.asarray(u, dtype=float))
    e = np.exp(-u)
    return 2.0 * e / (1.0 + e * e)


def log_sech2(u):
    u = np.abs(np.asarray(u, dtype=float))
    return 2.0 * (math.log(2.0) - u - np.log1p(np.exp(-2.0 * u)))


def _log_sinh2(u):
    u = np.abs(np.asarray(u, dtype=float))
    with np.errstate(divide="ignore"):
        return 2.0 * (u - math.log(2.0) + np.log(-np.expm1(-2.0 * u)))


def _log_cosh2(u):
    u = np.abs(np.asarray(u, dtype=float))
    return 2.0 * (u - math.log(2.0) + np.log1p(np.exp(-2.0 * u)))


def mass_profile(x, p: ModelParams):
    """m(x) = m0 sech^2(a x)."""
    return p.m0 * sech(p.a * np.asarray(x, dtype=float)) ** 2


def mass_momentum(k, p: ModelParams):
    """Fourier image of the mass profile, sqrt(pi/2) m0 k / a^2 csch(k pi / 2a)."""
    k = np.asarray(k, dtype=float)
    c = math.pi / (2.0 * p.a)
    u = np.abs(c * k)
    small = np.abs(k) < _K_SERIES_CUTOFF * p.a
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        # k csch(ck) = |k| * 2 e^{-u} / (1 - e^{-2u})
        kcsch = np.abs(k) * 2.0 * np.exp(-u) / -np.expm1(-2.0 * u)
    kcsch = np.where(small, 1.0 / c, kcsch)
    out = math.sqrt(math.pi / 2.0) * p.m0 / p.a**2 * kcsch
    return out if out.ndim else float(out)


def dispersion_energy(k, p: ModelParams):
    """Dispersion energy of the mass distribution, evaluated as printed.

    The hypergeometric factor 2F1(1/2, 3/2; 3/2; k^2/4) reduces to
    (1 - k^2/4)^(-1/2) and is singular at |k| = 2, so the closed form is
    only evaluated for |k| < 2.
    """
    k = np.asarray(k, dtype=float)
    if np.any(np.abs(k) >= 2.0):
        raise DomainError("dispersion energy requires |k| < 2 (2F1 argument k^2/4 < 1)")
    hyp = 1.0 / np.sqrt(1.0 - k * k / 4.0)
    out = math.sqrt(2.0 / math.pi) * p.energy_unit * (k * k * hyp - np.cosh(k))
    return out if out.ndim else float(out)


def potential(x, p: ModelParams):
    """V0 sinh^2(a x) + V1 cosh^2(a x)  (argument x when ``bare_argument``)."""
    x = np.asarray(x, dtype=float)
    u = x if p.bare_argument else p.a * x
    out = p.V0 * np.sinh(u) ** 2 + p.V1 * np.cosh(u) ** 2
    return out if out.ndim else float(out)


def dimensionless(p: ModelParams) -> DimensionlessParams:
    scale = 2.0 * p.m0 / (p.a**2 * p.hbar**2)
    alpha = scale * p.V0
    beta = scale * p.V1
    return DimensionlessParams(alpha=alpha, beta=beta, kappaSq=alpha + beta, energy_scale=scale)


def energy_level(q, p: ModelParams) -> float:
    """E_n = a^2 hbar^2 n(n+1) / (2 m0) - V0; independent of kappa."""
    n = q.n if hasattr(q, "n") else int(q)
    return p.energy_unit * n * (n + 1) / 2.0 - p.V0


def consistent_kappa(p: ModelParams, tol: float = 1e-9) -> int | None:
    """Return kappa >= 0 if alpha + beta is a perfect square, else None."""
    ksq = dimensionless(p).kappaSq
    k = round(math.sqrt(ksq))
    if abs(k * k - ksq) <= tol * max(1.0, ksq):
        return int(k)
    return None


def params_for_kappa(kappa: int, p: ModelParams) -> ModelParams:
    """Copy of ``p`` with V1 chosen so that alpha + beta = kappa^2."""
    from dataclasses import replace

    v1 = kappa * kappa * p.energy_unit / 2.0 - p.V0
    if v1 < 0:
        raise ValueError(f"kappa={kappa} unreachable with V0={p.V0} (needs V1 < 0)")
    return replace(p, V1=v1)


def mass_dominance_check(p: ModelParams) -> DominanceReport:
    """Classify the large-|x| behaviour of sech^2(a x) V(x).

    The product is sampled at x = 10/a, 20/a, 40/a in log space and the
    trend is classified rather than asserting any limit.
    """
    xs = (10.0 / p.a, 20.0 / p.a, 40.0 / p.a)
    if p.V0 == 0 and p.V1 == 0:
        return DominanceReport("vanishing", xs, (-math.inf,) * 3, (-math.inf,) * 2)
    u = np.array(xs) if p.bare_argument else p.a * np.array(xs)
    terms = []
    if p.V0 > 0:
        terms.append(math.log(p.V0) + _log_sinh2(u))
    if p.V1 > 0:
        terms.append(math.log(p.V1) + _log_cosh2(u))
    log_v = np.logaddexp.reduce(np.array(terms), axis=0)
    logs = log_sech2(p.a * np.array(xs)) + log_v
    rates = np.diff(logs) / np.diff(xs)
    drop = logs[2] - logs[1]
    if drop < -1.0:
        cls = "vanishing"
    elif drop > 1.0:
        cls = "divergent"
    else:
        cls = "bounded"
    return DominanceReport(cls, xs, tuple(float(v) for v in logs), tuple(float(r) for r in rates))
