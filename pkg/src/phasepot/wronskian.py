"""
Cross-Wronskian of Riccati-Bessel functions of two orders
=========================================================

Central object of the nonsingularity analysis:

    W_Ll(x) = u_L(x) v_l'(x) - u_L'(x) v_l(x)

Its positive zeros (the set Omega) are exactly the radii where the one-term
transformation kernel loses unique solvability and the constructed potential
develops poles.  The module evaluates W, its analytic limits at the origin
and at infinity, locates sign-change roots on (0, x_max], and decides the
nonsingularity predicate 0 < |L - l| <= 1.

Root search rationale: W oscillates on the Bessel-zero scale (spacing ~pi),
so a pi/8 sampling step cannot jump across a sign-change pair; W tends to a
constant at infinity, so no roots appear beyond the transient region.  The
cutoff stays configurable and is recorded in the returned profile.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError
from .specfun import log_gamma, riccati_u, riccati_u_prime, riccati_v, riccati_v_prime

#: Scan cutoff at which an absent root for |L - l| > 1 counts as a genuine
#: contradiction rather than a too-narrow window.
CONCLUSIVE_X_MAX = 100.0

_SCAN_STEP = math.pi / 8.0
_TANGENCY_TOL = 1e-12


@dataclass(frozen=True)
class PairParams:
    """Order pair (l, L), both > -1/2 and distinct."""

    l: float
    L: float

    def __post_init__(self):
        for name, value in (("l", self.l), ("L", self.L)):
            if not math.isfinite(value) or value <= -0.5:
                raise DomainError(f"{name} must be finite and > -1/2, got {value!r}")
        if self.l == self.L:
            raise DomainError("order pair requires l != L")


@dataclass(frozen=True)
class WronskianProfile:
    """Sampled Wronskian with detected roots and asymptotic data.

    Attributes
    ----------
    pair : PairParams
    x_max : float
        Upper end of the scanned interval (0, x_max].
    samples : np.ndarray, shape (m, 2)
        Columns (x, W) of the scan.
    roots : tuple of float
        Sign-change roots in increasing order, refined to ~1e-9.
    root_brackets : tuple of (float, float)
        Sampling interval around each root; endpoints carry opposite W signs.
    sign_origin : int
        Sign of W as x -> 0+, always +1 for admissible pairs.
    limit_infinity : float
        cos((l - L) pi / 2), the exact x -> infinity limit.
    """

    pair: PairParams
    x_max: float
    samples: np.ndarray
    roots: tuple
    root_brackets: tuple
    sign_origin: int
    limit_infinity: float


def wronskian_orders(l: float, L: float, x):
    """W_Ll(x) from raw orders; also usable with L = l (identity path, = 1)."""
    return riccati_u(L, x) * riccati_v_prime(l, x) - riccati_u_prime(L, x) * riccati_v(l, x)


def wronskian(pair: PairParams, x):
    """W_Ll(x) for an admissible pair at x > 0 (scalar or array)."""
    return wronskian_orders(pair.l, pair.L, x)


def origin_coefficient(pair: PairParams) -> tuple:
    """Leading origin behavior W ~ coefficient * x**exponent as x -> 0+.

    Returns
    -------
    (coefficient, exponent) : (float, float)
        coefficient = 2**(l-L-1) (L+l+1) Gamma(l+1/2) / Gamma(L+3/2),
        strictly positive for l, L > -1/2; exponent = L - l.
    """
    l, L = pair.l, pair.L
    log_c = (l - L - 1.0) * math.log(2.0) + log_gamma(l + 0.5) - log_gamma(L + 1.5)
    return (L + l + 1.0) * math.exp(log_c), L - l


def infinity_limit(pair: PairParams) -> float:
    """Exact limit of W_Ll at infinity: cos((l - L) pi / 2)."""
    return math.cos((pair.l - pair.L) * 0.5 * math.pi)


def is_nonsingular_pair(pair: PairParams) -> bool:
    """Nonsingularity predicate: W has no positive root iff 0 < |L - l| <= 1."""
    return 0.0 < abs(pair.L - pair.l) <= 1.0


def _scan_grid(x_max: float) -> np.ndarray:
    # Geometric seeding below the first linear sample probes the
    # origin-asymptotic region where W ~ x**(L-l).
    seed = np.geomspace(1e-4, _SCAN_STEP, 9)[:-1]
    body = np.arange(_SCAN_STEP, x_max, _SCAN_STEP)
    return np.concatenate([seed, body, [x_max]])


def find_roots(pair: PairParams, x_max: float) -> WronskianProfile:
    """Locate all sign-change roots of W_Ll on (0, x_max].

    A decaying approach to the zero infinity limit (|L - l| = 1) never
    counts as a root: only strict sign changes between samples qualify.
    Near-tangencies (|W| below 1e-12 of the local term scale, without a
    sign change) are reported as warnings, not roots; measuring against
    the term scale keeps the origin region, where W itself decays like
    x**(L-l), from raising false alarms.
    """
    if not (math.isfinite(x_max) and x_max > 0.0):
        raise DomainError(f"x_max must be finite and > 0, got {x_max!r}")
    grid = _scan_grid(x_max)
    lead = riccati_u(pair.L, grid) * riccati_v_prime(pair.l, grid)
    trail = riccati_u_prime(pair.L, grid) * riccati_v(pair.l, grid)
    w = lead - trail
    tangency_scale = np.abs(lead) + np.abs(trail)

    roots, brackets = [], []
    f = lambda t: wronskian(pair, float(t))
    for i in range(len(grid) - 1):
        a, b = w[i], w[i + 1]
        if a == 0.0:
            lo = grid[i - 1] if i > 0 else 0.5 * grid[i]
            roots.append(float(grid[i]))
            brackets.append((float(lo), float(grid[i + 1])))
        elif a * b < 0.0:
            roots.append(brentq(f, grid[i], grid[i + 1], xtol=1e-12, rtol=8.9e-16))
            brackets.append((float(grid[i]), float(grid[i + 1])))
    if w[-1] == 0.0:
        roots.append(float(grid[-1]))
        brackets.append((float(grid[-2]), float(grid[-1])))

    near = np.flatnonzero(np.abs(w) < _TANGENCY_TOL * tangency_scale)
    for i in near:
        x_i = float(grid[i])
        if all(abs(x_i - r) > _SCAN_STEP for r in roots):
            warnings.warn(
                f"possible tangency of W_Ll near x={x_i:.6g} for pair "
                f"(l={pair.l}, L={pair.L}); not counted as a root",
                RuntimeWarning,
                stacklevel=2,
            )

    coefficient, _ = origin_coefficient(pair)
    return WronskianProfile(
        pair=pair,
        x_max=float(x_max),
        samples=np.column_stack([grid, w]),
        roots=tuple(roots),
        root_brackets=tuple(brackets),
        sign_origin=1 if coefficient > 0.0 else -1,
        limit_infinity=infinity_limit(pair),
    )


@dataclass(frozen=True)
class TheoremRecord:
    """One pair's outcome in the nonsingularity-theorem sweep."""

    l: float
    L: float
    n_roots: int
    sign_origin: int
    limit_infinity: float
    expected: str          # "no-roots" or "at-least-one-root"
    verdict: str           # "consistent", "inconsistent" or "inconclusive"


def _in_positive_cosine_gap(diff: float) -> bool:
    # diff in (1+4k, 3+4k) for some integer k, strictly.
    r = (diff - 1.0) % 4.0
    return 0.0 < r < 2.0


def theorem_sweep(values=None, x_max: float = CONCLUSIVE_X_MAX) -> tuple:
    """Check the nonsingularity theorem on a grid of (l, L) pairs.

    Pairs with 0 < |l - L| <= 1 must show no roots; pairs with |l - L| > 1
    must show at least one.  Pairs with l - L in (1+4k, 3+4k) additionally
    must have positive origin sign and a negative infinity limit.  A missing
    root on a window narrower than the conclusive cutoff yields
    "inconclusive" rather than "inconsistent".
    """
    if values is None:
        values = np.arange(0.0, 5.0 + 1e-12, 0.25)
    records = []
    for l in values:
        for L in values:
            if l == L:
                continue
            pair = PairParams(l=float(l), L=float(L))
            profile = find_roots(pair, x_max)
            n_roots = len(profile.roots)
            diff = pair.l - pair.L
            if is_nonsingular_pair(pair):
                expected = "no-roots"
                verdict = "consistent" if n_roots == 0 else "inconsistent"
            else:
                expected = "at-least-one-root"
                if n_roots >= 1:
                    verdict = "consistent"
                    if _in_positive_cosine_gap(diff) and not (
                        profile.sign_origin > 0 and profile.limit_infinity < 0.0
                    ):
                        verdict = "inconsistent"
                else:
                    verdict = (
                        "inconclusive" if x_max < CONCLUSIVE_X_MAX else "inconsistent"
                    )
            records.append(
                TheoremRecord(
                    l=pair.l,
                    L=pair.L,
                    n_roots=n_roots,
                    sign_origin=profile.sign_origin,
                    limit_infinity=profile.limit_infinity,
                    expected=expected,
                    verdict=verdict,
                )
            )
    return tuple(records)
