"""The nonlocal string operator and its exact linear inverse.

The operator acts diagonally on the spectral side through the multiplier

    m(xi) = 1 + gamma(xi)^2 * exp(c * gamma(xi)^2),        c > 0,

i.e. (L u) = -F^{-1}( m(xi) * F(u)(xi) ).  Its natural domain is the space
of signals with finite weighted spectral norm

    ||u||_dom = ( sum_xi m(xi)^2 |F(u)(xi)|^2 )^{1/2},

and the linear problem L u = g has the exact unique solution
u = -F^{-1}( F(g) / m ), which satisfies the isometry  ||u||_dom = ||g||_L2.

Numerics: exp(c * gamma^2) overflows float64 once c * gamma^2 exceeds about
709.78, while the inverse problem stays perfectly conditioned (1/m just
underflows to zero).  All multiplier arithmetic therefore happens in log
space:  log m = logaddexp(0, c*gamma^2 + 2*log gamma)  is always finite, the
norm sums use per-term log products, and division by m is exp(-log m).
Applying the *forward* operator to a signal whose active coefficients sit at
unrepresentable multipliers is refused (NotInDomainError) rather than
silently saturated -- such a signal is simply not in the operator's domain.
Spectral coefficients with magnitude <= 1e-300 are treated as exact zeros;
they only arise as underflow artifacts.

Signals synthesized by idft (in particular every solve_linear output) carry
their dual coefficients exactly, and the routines here use that
representation when present (see Signal.exact_dual).  This matters: once
m(xi) exceeds 1/eps, the coefficient at xi can no longer be recovered from
the float64 sample values -- any forward transform injects noise of order
eps * max|u| there, which the multiplier would amplify into garbage -- while
the dual array still holds the exact value.  For signals without a
remembered dual (file input, raw samples) the forward transform of the
values is used, which is the only information they carry.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .group import FiniteAbelianGroup
from .sobolev import Weight
from .spectral import Signal, Spectrum, dual_coefficients, idft

__all__ = [
    "LOG_MAX_DOUBLE",
    "ACTIVE_COEFF_TOL",
    "NotInDomainError",
    "MultiplierProfile",
    "build_multiplier",
    "domain_norm",
    "domain_norm_batch",
    "multiply_spectrum",
    "apply_operator",
    "solve_linear",
]

LOG_MAX_DOUBLE = float(np.log(np.finfo(np.float64).max))  # ~709.7827
ACTIVE_COEFF_TOL = 1e-300


class NotInDomainError(ValueError):
    """A signal has spectral mass at a frequency whose multiplier overflows."""


@dataclass(frozen=True, eq=False)
class MultiplierProfile:
    """The multiplier m over the dual, kept in both linear and log form.

    ``log_values`` are always finite; ``values`` hold exp(log_values) and
    are +inf exactly where m is not representable in float64.
    """

    group: FiniteAbelianGroup
    weight_name: str
    c: float
    log_values: np.ndarray
    values: np.ndarray

    @property
    def overflow_count(self) -> int:
        """Number of dual frequencies whose multiplier exceeds float64 range."""
        return int(np.count_nonzero(~np.isfinite(self.values)))


def _check_c(c: float) -> float:
    c = float(c)
    if not (math.isfinite(c) and c > 0):
        raise ValueError(f"operator scale c must be positive, got {c}")
    return c


def build_multiplier(group: FiniteAbelianGroup, w: Weight, c: float) -> MultiplierProfile:
    """Evaluate m = 1 + gamma^2 exp(c gamma^2) stably for every dual frequency."""
    c = _check_c(c)
    if w.group != group:
        raise ValueError("weight lives on a different group")
    gam = w.values
    # t = log(gamma^2 e^{c gamma^2}) = c*gamma^2 + 2*log gamma; -inf at gamma=0
    with np.errstate(divide="ignore"):
        t = np.where(gam > 0.0, c * gam**2 + 2.0 * np.log(np.where(gam > 0.0, gam, 1.0)), -np.inf)
    log_values = np.logaddexp(0.0, t)
    with np.errstate(over="ignore"):
        values = np.exp(log_values)
    log_values.setflags(write=False)
    values.setflags(write=False)
    return MultiplierProfile(group, w.name, c, log_values, values)


def _logsumexp_last(t: np.ndarray) -> np.ndarray:
    """logsumexp along the last axis; rows of all -inf give -inf."""
    peak = t.max(axis=-1)
    safe_peak = np.where(np.isfinite(peak), peak, 0.0)
    acc = np.exp(t - safe_peak[..., None]).sum(axis=-1)
    with np.errstate(divide="ignore"):
        out = np.where(np.isfinite(peak), safe_peak + np.log(np.where(acc > 0, acc, 1.0)), peak)
    return out


def _guard_membership(profile: MultiplierProfile, spectra: np.ndarray) -> np.ndarray:
    """Raise NotInDomainError if an active coefficient meets an overflowed
    multiplier; return the |coefficient| array."""
    abs_spec = np.abs(spectra)
    active = abs_spec > ACTIVE_COEFF_TOL
    bad = active & ~np.isfinite(profile.values)
    if bad.any():
        # report the worst offender, not merely the first one in scan order
        flat = np.where(bad, abs_spec, 0.0).reshape(-1)
        worst = int(np.argmax(flat))
        pos = worst % profile.group.order
        raise NotInDomainError(
            "signal is not in the operator domain: dual index "
            f"{pos} has log-multiplier {profile.log_values[pos]:.6g} "
            f"(beyond float64 range) with spectral magnitude "
            f"{float(flat[worst]):.3g} > {ACTIVE_COEFF_TOL:g}"
        )
    return abs_spec


def domain_norm_batch(profile: MultiplierProfile, spectra: np.ndarray) -> np.ndarray:
    """Domain norms from spectral coefficients (last axis = dual), log-space."""
    abs_spec = _guard_membership(profile, spectra)
    with np.errstate(divide="ignore"):
        log_abs = np.log(abs_spec)  # -inf at exact zeros, which is what we want
    terms = 2.0 * (profile.log_values + log_abs)
    lse = _logsumexp_last(terms)
    finite = np.isfinite(lse)
    if (np.where(finite, lse, -np.inf) > 2.0 * LOG_MAX_DOUBLE).any():
        raise NotInDomainError("domain norm exceeds float64 range")
    return np.where(finite, np.exp(0.5 * np.where(finite, lse, 0.0)), 0.0)


def domain_norm(f: Signal, w: Weight, c: float) -> float:
    """The operator-domain norm (sum m^2 |F(f)|^2)^{1/2}.

    Raises NotInDomainError when f has spectral mass above 1e-300 at a
    frequency whose multiplier is not representable.  Uses the exact dual
    representation when f carries one.
    """
    profile = build_multiplier(f.group, w, c)
    return float(domain_norm_batch(profile, dual_coefficients(f)))


def multiply_spectrum(profile: MultiplierProfile, spectrum: np.ndarray) -> np.ndarray:
    """Pointwise m(xi) * F(xi) with the overflowed entries done in log space.

    Requires every coefficient at an overflowed multiplier to be inactive
    (<= 1e-300); their products are then formed as exp(log m + log|F|),
    which recovers e.g. the original data when F came out of solve_linear.
    Raises NotInDomainError if the guard fails or a product would itself
    overflow float64.
    """
    abs_spec = _guard_membership(profile, spectrum)
    over = ~np.isfinite(profile.values)
    safe_m = np.where(over, 0.0, profile.values)
    out = safe_m * spectrum
    if not np.all(np.isfinite(out)):
        raise NotInDomainError(
            "operator output exceeds float64 range: m(xi) * F(xi) overflows "
            "even at a representable multiplier"
        )
    hot = over & (abs_spec > 0.0)
    if hot.any():
        log_prod = profile.log_values + np.log(np.where(hot, abs_spec, 1.0))
        if (np.where(hot, log_prod, -np.inf) > LOG_MAX_DOUBLE).any():
            raise NotInDomainError(
                "operator output is not representable: a sub-tolerance "
                "coefficient meets a multiplier so large that even their "
                "product overflows float64"
            )
        # hot coefficients are guarded <= 1e-300, possibly subnormal; scale
        # by an exact power of two before taking the phase so the division
        # never touches the subnormal range
        lift = 2.0**1000
        scaled = np.where(hot, spectrum, 0.0) * lift
        phase = scaled / np.where(hot, abs_spec * lift, 1.0)
        out = out + np.exp(np.where(hot, log_prod, -np.inf)) * phase
    return out


def apply_operator(u: Signal, w: Weight, c: float) -> Signal:
    """Apply L: u -> -F^{-1}(m * F(u)).

    The L^2 norm of the output equals domain_norm(u) exactly (diagonal
    operator + Plancherel), which is checked by the test suite rather than
    enforced here.  Uses u's exact dual representation when present.
    """
    profile = build_multiplier(u.group, w, c)
    spec = dual_coefficients(u)
    return idft(Spectrum(u.group, -multiply_spectrum(profile, spec)))


def solve_linear(g: Signal, w: Weight, c: float) -> Signal:
    """Exact solution of L u = g:  u = -F^{-1}(F(g) / m).

    Defined for every finite-valued g.  Division is exp(-log m), so
    ultraviolet frequencies underflow cleanly to zero; the isometry
    domain_norm(u) == ||g||_L2 holds to rounding whenever no active
    coefficient of g sits beyond the representable multiplier range.  The
    returned signal carries its dual coefficients exactly.
    """
    profile = build_multiplier(g.group, w, c)
    spec = dual_coefficients(g)
    sol_spec = -spec * np.exp(-profile.log_values)
    return idft(Spectrum(g.group, sol_spec))
