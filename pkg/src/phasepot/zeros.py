"""
Positive zeros of J_nu, Y_nu, J'_nu and interlacing classification
==================================================================

Zero finding uses a dense sign scan (step pi/8, safely below the ~pi zero
spacing of cylinder functions) with McMahon's asymptotic estimate capping
the scan range, followed by Brent refinement inside each bracket.  All
indexing is 1-based over strictly positive zeros; for J'_nu the first
positive stationary point is n=1 and x=0 never counts.

The interlacing scan classifies, index by index, whether the zeros of
J_{L+1/2} fall inside consecutive zeros of Y_{l+1/2} (the "regular"
pattern whose unbroken continuation is equivalent to the cross-Wronskian
having no positive root).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special as sp
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError

_KINDS = ("J", "Y", "Jprime")
_SCAN_STEP = math.pi / 8.0


@dataclass(frozen=True)
class ZeroQuery:
    """Request for the n-th positive zero of J_nu, Y_nu or J'_nu."""

    nu: float
    n: int
    kind: str

    def __post_init__(self):
        if not math.isfinite(self.nu) or self.nu <= 0.0:
            raise DomainError(f"order must be finite and > 0, got {self.nu!r}")
        if self.n < 1:
            raise DomainError(f"zero index is 1-based, got n={self.n!r}")
        if self.kind not in _KINDS:
            raise DomainError(f"kind must be one of {_KINDS}, got {self.kind!r}")


@dataclass(frozen=True)
class InterlaceReport:
    """Per-index regular/irregular verdicts for a (l, L) order pair."""

    l: float
    L: float
    checked_up_to: int
    pattern: tuple
    first_irregular: int | None


def _target(kind: str, nu: float):
    if kind == "J":
        return lambda x: sp.jv(nu, x)
    if kind == "Y":
        return lambda x: sp.yv(nu, x)
    return lambda x: sp.jvp(nu, x)


@lru_cache(maxsize=4096)
def _zeros_up_to(kind: str, nu: float, count: int) -> tuple:
    """First `count` positive zeros, found by scan + Brent refinement."""
    f = _target(kind, nu)
    # McMahon beta plus margin; covers the large-order shift of early zeros.
    x_hi = nu + (count + 0.5 * nu + 2.0) * math.pi
    grid = np.arange(_SCAN_STEP, x_hi, _SCAN_STEP)
    vals = np.asarray(f(grid))
    zeros = []
    for i in range(len(grid) - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            zeros.append(float(grid[i]))
        elif a * b < 0.0:
            zeros.append(brentq(f, grid[i], grid[i + 1], xtol=1e-12, rtol=8.9e-16))
        if len(zeros) == count:
            return tuple(zeros)
    raise ConvergenceError(
        f"found only {len(zeros)}/{count} zeros of {kind}_{nu} scanning up to {x_hi:.2f}"
    )


def bessel_zero(query: ZeroQuery) -> float:
    """n-th positive zero of the requested function, to ~1e-9 absolute."""
    return _zeros_up_to(query.kind, query.nu, query.n)[query.n - 1]


def interlace_scan(l: float, L: float, N: int) -> InterlaceReport:
    """Classify zero interlacing of J_{L+1/2} against Y_{l+1/2} up to index N.

    Index n is "regular" iff y_{l+1/2,n} < j_{L+1/2,n} < y_{l+1/2,n+1}.
    Callers must pass l < L; the mirrored case is handled by swapping.

    Parameters
    ----------
    l, L : float
        Order pair with l < L, both > -1/2.
    N : int
        Highest index to classify, N >= 1.
    """
    if not l < L:
        raise DomainError(f"interlace_scan requires l < L, got l={l}, L={L}")
    if min(l, L) <= -0.5:
        raise DomainError("orders must exceed -1/2")
    if N < 1:
        raise DomainError("N must be >= 1")
    y = _zeros_up_to("Y", l + 0.5, N + 1)
    j = _zeros_up_to("J", L + 0.5, N)
    pattern = tuple(
        "regular" if y[n] < j[n] < y[n + 1] else "irregular" for n in range(N)
    )
    first = next((n + 1 for n, v in enumerate(pattern) if v == "irregular"), None)
    return InterlaceReport(l=l, L=L, checked_up_to=N, pattern=pattern, first_irregular=first)


def proposition_margin(nu: float, n: int) -> float:
    """Signed margin j'_{nu,n+1} - j_{nu+1,n} of the zero inequality."""
    jp = bessel_zero(ZeroQuery(nu=nu, n=n + 1, kind="Jprime"))
    j = bessel_zero(ZeroQuery(nu=nu + 1.0, n=n, kind="J"))
    return jp - j


def check_proposition(nu: float, n: int) -> bool:
    """True iff j_{nu+1,n} < j'_{nu,n+1} beyond numerical uncertainty (1e-9)."""
    return proposition_margin(nu, n) > 1e-9


@dataclass(frozen=True)
class PropositionRecord:
    nu: float
    n: int
    j_zero: float          # j_{nu+1,n}
    jprime_zero: float     # j'_{nu,n+1}
    margin: float
    chains_ok: bool
    ok: bool


def proposition_sweep(nu_values, n_max: int) -> tuple:
    """Evaluate the inequality and the classical chains over a (nu, n) grid.

    Chains checked alongside:  j_{nu,n} < j_{nu+1,n} < j'_{nu,n+1} < j_{nu,n+1}
    and j_{nu+1,n} < y_{nu,n+1}.
    """
    records = []
    for nu in nu_values:
        nu = float(nu)
        j_lo = _zeros_up_to("J", nu, n_max + 1)
        j_hi = _zeros_up_to("J", nu + 1.0, n_max)
        jp = _zeros_up_to("Jprime", nu, n_max + 1)
        yz = _zeros_up_to("Y", nu, n_max + 1)
        for n in range(1, n_max + 1):
            margin = jp[n] - j_hi[n - 1]
            chains = (
                j_lo[n - 1] < j_hi[n - 1] < jp[n] < j_lo[n]
                and j_hi[n - 1] < yz[n]
            )
            records.append(
                PropositionRecord(
                    nu=nu,
                    n=n,
                    j_zero=j_hi[n - 1],
                    jprime_zero=jp[n],
                    margin=margin,
                    chains_ok=chains,
                    ok=margin > 1e-9,
                )
            )
    return tuple(records)
