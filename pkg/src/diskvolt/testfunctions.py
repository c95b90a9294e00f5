"""Kernel test functions used to probe operators and point evaluations.

All take the base point ``a`` (inside the disk) and the space exponents
``(p, alpha)`` of the domain space.
"""

from __future__ import annotations

import math

from .analytic import AnalyticFn, LogKernel, PowerKernel, constant


def _index(p: float, alpha: float) -> float:
    return (alpha + 2.0) / p


def fa(a: complex, p: float, alpha: float) -> AnalyticFn:
    """``(1-|a|^2)^((alpha+2)/p) / (1 - conj(a) z)^(2(alpha+2)/p - 1)``.

    Uniformly bounded in the Dirichlet norm as ``a`` runs over the disk.
    """
    k = _index(p, alpha)
    return PowerKernel(a, 2.0 * k - 1.0, (1.0 - abs(a) ** 2) ** k)


def Fa(a: complex, p: float, alpha: float) -> AnalyticFn:
    """``fa`` shifted by a constant so that it vanishes at ``a``."""
    k = _index(p, alpha)
    return fa(a, p, alpha) + constant(-((1.0 - abs(a) ** 2) ** (1.0 - k)))


def fz_order(a: complex, p: float, alpha: float) -> AnalyticFn:
    """Vanishes at ``a`` with derivative ``-conj(a) (1-|a|^2)^(-(alpha+2)/p)`` there."""
    k = _index(p, alpha)
    w = 1.0 - abs(a) ** 2
    return PowerKernel(a, 2.0 * k - 1.0, w ** k) + PowerKernel(a, 2.0 * k, -(w ** (k + 1.0)))


def log_probe(a: complex, p: float) -> AnalyticFn:
    """``log(2/(1 - conj(a) z)) / log(2/(1-|a|^2))^(1/p)``."""
    lam = math.log(2.0 / (1.0 - abs(a) ** 2))
    return LogKernel(a, 1, lam ** (-1.0 / p))


def fz_log(a: complex, p: float) -> AnalyticFn:
    """Logarithmic analogue of :func:`fz_order`; vanishes at ``a``."""
    lam = math.log(2.0 / (1.0 - abs(a) ** 2))
    return LogKernel(a, 1, lam ** (-1.0 / p)) + LogKernel(a, 2, -(lam ** (-1.0 / p - 1.0)))
