"""Associated Legendre functions by upward recurrence in the degree.

For order m >= 0 the Ferrers function (Condon-Shortley phase) factors as

    P_l^m(z) = (1 - z^2)^(m/2) q_l^m(z),

with q_l^m a polynomial.  Only q and its first two z-derivatives are
produced here; callers supply the (1 - z^2)^(m/2) factor in whatever form
is convenient (for z = tanh(a x) it is simply sech^m(a x)).

    q_m^m     = (-1)^m (2m - 1)!!
    q_{m+1}^m = (2m + 1) z q_m^m
    (l - m) q_l^m = (2l - 1) z q_{l-1}^m - (l + m - 1) q_{l-2}^m
"""

from __future__ import annotations

import math

import numpy as np


def double_factorial(k: int) -> int:
    return math.prod(range(k, 0, -2)) if k > 0 else 1


def reduced_legendre(l: int, m: int, z):
    """Return (q, dq/dz, d2q/dz2) for P_l^m = (1-z^2)^(m/2) q, 0 <= m <= l."""
    if not (0 <= m <= l):
        raise ValueError(f"need 0 <= m <= l, got l={l}, m={m}")
    z = np.asarray(z, dtype=float)
    q0 = np.full_like(z, (-1) ** m * double_factorial(2 * m - 1), dtype=float)
    d0 = np.zeros_like(z)
    s0 = np.zeros_like(z)
    if l == m:
        return q0, d0, s0
    c = 2 * m + 1
    q1, d1, s1 = c * z * q0, c * q0 + 0.0 * z, np.zeros_like(z)
    for k in range(m + 2, l + 1):
        a = (2 * k - 1) / (k - m)
        b = (k + m - 1) / (k - m)
        q2 = a * z * q1 - b * q0
        d2 = a * (q1 + z * d1) - b * d0
        s2 = a * (2.0 * d1 + z * s1) - b * s0
        q0, d0, s0, q1, d1, s1 = q1, d1, s1, q2, d2, s2
    return q1, d1, s1


def order_factor(l: int, m: int) -> float:
    """c with P_l^m = c * P_l^{|m|}; 1 for m >= 0."""
    if m >= 0:
        return 1.0
    k = -m
    return (-1) ** k * math.factorial(l - k) / math.factorial(l + k)


def assoc_legendre(l: int, m: int, z):
    """Ferrers P_l^m(z) on [-1, 1] for integer |m| <= l."""
    z = np.asarray(z, dtype=float)
    k = abs(m)
    q, _, _ = reduced_legendre(l, k, z)
    return order_factor(l, m) * (1.0 - z * z) ** (0.5 * k) * q


def reduced_roots(l: int, m: int) -> np.ndarray:
    """Real roots of q_l^|m| in (-1, 1), ascending: the interior zeros of P_l^m."""
    k = abs(m)
    if l == k:
        return np.empty(0)
    coef = np.polynomial.legendre.Legendre.basis(l).deriv(k)
    r = coef.roots()
    r = np.sort(r.real[np.abs(r.imag) < 1e-12])
    for _ in range(3):  # Newton polish against the recurrence
        q, dq, _ = reduced_legendre(l, k, r)
        r = r - q / dq
    return r
