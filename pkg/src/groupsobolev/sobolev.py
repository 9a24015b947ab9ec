"""Weighted Sobolev norms and their embedding/algebra constants.

A weight is a nonnegative function gamma on the dual group together with a
subadditivity constant c_gamma, meaning

    gamma(alpha * beta) <= c_gamma * (gamma(alpha) + gamma(beta))

for all pairs of characters.  The Sobolev norm of smoothness s >= 0 is

    ||f||_{s,gamma} = ( sum_xi (1 + gamma(xi)^2)^s |F(f)(xi)|^2 )^{1/2},

with the transform conventions of :mod:`.spectral` (normalized Haar on the
group, counting measure on the dual).  At s = 0 this is exactly the L^2 norm.

The module also exposes the explicit constants that make the classical
embeddings quantitative on these spaces:

* ``embedding_constant_sup``      -- sup-norm embedding into continuous
  functions, C(gamma, s) = (sum (1+gamma^2)^{-s})^{1/2};
* ``embedding_constant_lalpha``   -- embedding into L^{alpha*} with
  alpha* = 2*alpha/(alpha - s);
* ``algebra_constant``            -- pointwise products,
  ||f g|| <= D ||f|| ||g|| with D = 2^s (1 + c_gamma^2)^{s/2} C(gamma, s);
* ``translation_modulus`` and ``compactness_profile`` -- the quantitative
  translation-continuity data behind compact-embedding arguments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .group import (
    FiniteAbelianGroup,
    _check_tuple,
    element_at,
    residue_grid,
)
from .spectral import Signal, dft_values

__all__ = [
    "Weight",
    "make_weight",
    "weight_from_table",
    "check_subadditivity",
    "sobolev_norm",
    "sobolev_norm_batch",
    "lp_norm",
    "lp_norm_batch",
    "embedding_constant_sup",
    "embedding_constant_lalpha",
    "algebra_constant",
    "translation_modulus",
    "compactness_profile",
    "ShiftProfileRow",
    "verify_scale",
]


@dataclass(frozen=True, eq=False)
class Weight:
    """A dual weight gamma, materialized as a table over the finite dual.

    ``values[i]`` is gamma at the character with enumeration index i.
    """

    group: FiniteAbelianGroup
    values: np.ndarray
    c_gamma: float
    name: str

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=np.float64).reshape(-1).copy()
        if vals.size != self.group.order:
            raise ValueError(
                f"weight table has {vals.size} entries, group order is {self.group.order}"
            )
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise ValueError("weight values must be finite and nonnegative")
        if not (math.isfinite(self.c_gamma) and self.c_gamma >= 0):
            raise ValueError("c_gamma must be a finite nonnegative real")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "c_gamma", float(self.c_gamma))


def _sym_euclid_values(group: FiniteAbelianGroup) -> np.ndarray:
    grid = residue_grid(group)
    total = np.zeros(group.order, dtype=np.float64)
    for axis, n in enumerate(group.factors):
        k = grid[axis]
        total += np.minimum(k, n - k).astype(np.float64) ** 2
    return np.sqrt(total)


def _hamming_values(group: FiniteAbelianGroup) -> np.ndarray:
    if any(n != 2 for n in group.factors):
        raise ValueError(
            f"hamming weight needs all factors equal to Z2, got {group.descriptor}"
        )
    return residue_grid(group).sum(axis=0).astype(np.float64)


def _pruefer_values(group: FiniteAbelianGroup, p: int) -> np.ndarray:
    if p < 2:
        raise ValueError(f"pruefer base must be >= 2, got {p}")
    if len(group.factors) != 1:
        raise ValueError("pruefer weight is defined on a single cyclic factor")
    n = group.factors[0]
    m = n
    while m % p == 0:
        m //= p
    if m != 1:
        raise ValueError(f"pruefer:{p} needs the modulus to be a power of {p}, got Z{n}")
    k = np.arange(n)
    vals = np.array([0.0 if ki == 0 else n // math.gcd(ki, n) for ki in k])
    return vals


def make_weight(group: FiniteAbelianGroup, name: str) -> Weight:
    """Build one of the named weights: zero, sym-euclid, hamming, pruefer:<p>.

    * ``zero``       gamma == 0 (the Sobolev norm degenerates to L^2);
    * ``sym-euclid`` gamma(k) = sqrt(sum_j min(k_j, n_j - k_j)^2), the
      frequency magnitude of a discretized torus;
    * ``hamming``    number of nonzero indices, on groups with all
      factors Z2 (the Walsh case);
    * ``pruefer:p``  on a single factor Z_{p^m}: gamma(k) is the exact
      denominator of k / p^m in lowest terms (0 at k = 0).

    All four are subadditive with c_gamma = 1.
    """
    name = name.strip()
    if name == "zero":
        return Weight(group, np.zeros(group.order), 1.0, "zero")
    if name == "sym-euclid":
        return Weight(group, _sym_euclid_values(group), 1.0, "sym-euclid")
    if name == "hamming":
        return Weight(group, _hamming_values(group), 1.0, "hamming")
    if name.startswith("pruefer:"):
        p = int(name.split(":", 1)[1])
        return Weight(group, _pruefer_values(group, p), 1.0, f"pruefer:{p}")
    raise ValueError(f"unknown weight {name!r}")


def weight_from_table(
    group: FiniteAbelianGroup, values, c_gamma: float, name: str = "custom"
) -> Weight:
    """Wrap an explicit gamma table (enumeration order) as a Weight."""
    return Weight(group, values, c_gamma, name)


def check_subadditivity(group: FiniteAbelianGroup, w: Weight, seed: int = 0) -> dict:
    """Scan pairs of characters for violations of the weight inequality.

    Exhaustive over all order^2 pairs when order <= 4096; a seeded uniform
    sample of 10^6 pairs otherwise.  Pairs with gamma(a) = gamma(b) = 0 have
    no finite ratio and instead must satisfy gamma(ab) = 0 exactly.

    Returns {"ok", "worst_ratio", "witness", "pairs_checked", "mode"};
    never raises on a violation (the witness pair is reported instead).
    """
    from .group import compose_indices  # local import to avoid cycle noise

    gam = w.values
    n = group.order
    worst_ratio = 0.0
    worst_pair = None
    degenerate_pair = None
    exhaustive = n <= 4096

    def scan(i_block, j_block) -> None:
        nonlocal worst_ratio, worst_pair, degenerate_pair
        ib, jb = np.broadcast_arrays(np.asarray(i_block), np.asarray(j_block))
        ib = ib.reshape(-1)
        jb = jb.reshape(-1)
        k = compose_indices(group, ib, jb)
        num = gam[k]
        den = gam[ib] + gam[jb]
        zero_den = den == 0.0
        bad = zero_den & (num > 0.0)
        if bad.any() and degenerate_pair is None:
            pos = int(np.argmax(bad))
            degenerate_pair = (int(ib[pos]), int(jb[pos]))
        ratio = np.where(zero_den, 0.0, num / np.where(zero_den, 1.0, den))
        pos = int(np.argmax(ratio))
        if ratio[pos] > worst_ratio:
            worst_ratio = float(ratio[pos])
            worst_pair = (int(ib[pos]), int(jb[pos]))

    if exhaustive:
        rows_per_block = max(1, (1 << 20) // n)
        for start in range(0, n, rows_per_block):
            stop = min(start + rows_per_block, n)
            scan(np.arange(start, stop)[:, None], np.arange(n)[None, :])
        pairs_checked = n * n
    else:
        rng = np.random.default_rng(seed)
        pairs_checked = 1_000_000
        block = 100_000
        for _ in range(pairs_checked // block):
            scan(rng.integers(0, n, size=block), rng.integers(0, n, size=block))

    ok = degenerate_pair is None and worst_ratio <= w.c_gamma + 1e-12
    witness = degenerate_pair if degenerate_pair is not None else worst_pair
    return {
        "ok": bool(ok),
        "worst_ratio": float("inf") if degenerate_pair is not None else worst_ratio,
        "witness": None
        if witness is None
        else [list(element_at(group, witness[0])), list(element_at(group, witness[1]))],
        "pairs_checked": pairs_checked,
        "mode": "exhaustive" if exhaustive else "sampled",
    }


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------

def _check_s(s: float) -> float:
    s = float(s)
    if not (math.isfinite(s) and s >= 0):
        raise ValueError(f"smoothness exponent must be >= 0, got {s}")
    return s


def sobolev_norm_batch(w: Weight, s: float, spectra: np.ndarray) -> np.ndarray:
    """Sobolev norms from already-transformed coefficients (last axis = dual)."""
    s = _check_s(s)
    weights = (1.0 + w.values**2) ** s
    return np.sqrt((weights * np.abs(spectra) ** 2).sum(axis=-1))


def sobolev_norm(f: Signal, w: Weight, s: float) -> float:
    """||f||_{s,gamma}; at s = 0 equal to the L^2 norm (Plancherel)."""
    if f.group != w.group:
        raise ValueError("signal and weight live on different groups")
    spec = dft_values(f.group, f.values)
    return float(sobolev_norm_batch(w, s, spec))


def lp_norm_batch(group: FiniteAbelianGroup, values: np.ndarray, p) -> np.ndarray:
    if p == math.inf or p == np.inf:
        return np.abs(values).max(axis=-1)
    p = float(p)
    if p < 1:
        raise ValueError(f"lp_norm needs p >= 1 (or inf), got {p}")
    mean = (np.abs(values) ** p).sum(axis=-1) / group.order
    return mean ** (1.0 / p)


def lp_norm(f: Signal, p) -> float:
    """L^p norm under normalized Haar measure; p may be math.inf."""
    return float(lp_norm_batch(f.group, f.values, p))


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------

def embedding_constant_sup(group: FiniteAbelianGroup, w: Weight, s: float) -> float:
    """C(gamma, s) = (sum_xi (1 + gamma^2)^{-s})^{1/2}.

    Every f obeys sup|f| <= C(gamma, s) * ||f||_{s,gamma}: Cauchy-Schwarz
    against the inversion formula.  Always finite on a finite dual.
    """
    s = _check_s(s)
    return float(np.sqrt(((1.0 + w.values**2) ** (-s)).sum()))


def embedding_constant_lalpha(
    group: FiniteAbelianGroup, w: Weight, s: float, alpha: float
) -> dict:
    """The L^{alpha*} embedding data: alpha* = 2 alpha/(alpha - s) and the
    constant (sum (1+gamma^2)^{-alpha})^{s/(2 alpha)}."""
    s = _check_s(s)
    alpha = float(alpha)
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    if alpha <= s:
        raise ValueError(f"need alpha > s, got alpha={alpha}, s={s}")
    alpha_star = 2.0 * alpha / (alpha - s)
    constant = float((((1.0 + w.values**2) ** (-alpha)).sum()) ** (s / (2.0 * alpha)))
    return {"alpha_star": alpha_star, "constant": constant}


def algebra_constant(group: FiniteAbelianGroup, w: Weight, s: float) -> float:
    """D(gamma, s) = 2^s (1 + c_gamma^2)^{s/2} C(gamma, s).

    With this constant the space is a Banach algebra under pointwise
    multiplication: ||f g||_{s,gamma} <= D ||f||_{s,gamma} ||g||_{s,gamma}.
    The Young constant for the dual-side convolution is exactly 1 under
    counting measure, so it does not appear.
    """
    s = _check_s(s)
    return float(2.0**s * (1.0 + w.c_gamma**2) ** (s / 2.0)
                 * embedding_constant_sup(group, w, s))


# ---------------------------------------------------------------------------
# translation continuity / compactness diagnostics
# ---------------------------------------------------------------------------

def _character_column(group: FiniteAbelianGroup, h) -> np.ndarray:
    """xi(h) for every dual character xi, in enumeration order."""
    h = _check_tuple(group, h, "element")
    grid = residue_grid(group)
    phase = np.zeros(group.order, dtype=np.float64)
    for axis, n in enumerate(group.factors):
        phase += grid[axis] * (h[axis] / n)
    return np.exp(2j * np.pi * phase)


def translation_modulus(group: FiniteAbelianGroup, w: Weight, s: float, h) -> float:
    """The squared translation modulus

        C(h) = max_xi |xi(h) - 1|^2 / (1 + gamma(xi)^2)^s,

    which controls the L^2 distance between f and its translate:
    integral |f(xh) - f(x)|^2 dmu <= C(h) ||f||_{s,gamma}^2.
    Zero at h = identity; nonincreasing in s.
    """
    s = _check_s(s)
    col = _character_column(group, h)
    num = np.abs(col - 1.0) ** 2
    return float((num / (1.0 + w.values**2) ** s).max())


@dataclass(frozen=True)
class ShiftProfileRow:
    """One row of a compactness profile: a coordinate shift and its sup-ratio.

    ``sup_ratio`` is the unsquared form sup_xi |xi(h)-1| / (1+gamma^2)^s.
    ``angle_bound`` is the torus-angle proxy 2*pi*min(m, n-m)/n (populated
    only in the sym-euclid case with s >= 1/2, where it is the discrete
    analogue of the bound |e^{ikh}-1|/(1+k^2)^s <= |h|), else None.
    """

    shift: tuple[int, ...]
    factor: int
    multiple: int
    sup_ratio: float
    angle_bound: float | None
    within_bound: bool | None


def compactness_profile(
    group: FiniteAbelianGroup, w: Weight, s: float
) -> list[ShiftProfileRow]:
    """Tabulate sup_xi |xi(h)-1|/(1+gamma^2)^s over coordinate shifts.

    For each cyclic factor j and each multiple m in [0, n_j), the shift
    h = m * e_j is profiled.  Uniform smallness of these ratios as h -> e is
    the quantitative hypothesis behind compact embedding into L^2.
    """
    s = _check_s(s)
    denom = (1.0 + w.values**2) ** s
    rows: list[ShiftProfileRow] = []
    bound_applies = w.name == "sym-euclid" and s >= 0.5
    for j, n in enumerate(group.factors):
        for m in range(n):
            shift = tuple(m if axis == j else 0 for axis in range(len(group.factors)))
            col = _character_column(group, shift)
            sup_ratio = float((np.abs(col - 1.0) / denom).max())
            if bound_applies:
                angle = 2.0 * math.pi * min(m, n - m) / n
                within = sup_ratio <= angle + 1e-12
            else:
                angle = None
                within = None
            rows.append(ShiftProfileRow(shift, j, m, sup_ratio, angle, within))
    return rows


def verify_scale(f: Signal, w: Weight, s: float, sigma: float) -> bool:
    """Check the scale comparison ||f||_{sigma,gamma} <= ||f||_{s,gamma}.

    Requires sigma <= s (equality allowed); raises ValueError otherwise.
    """
    s = _check_s(s)
    sigma = _check_s(sigma)
    if sigma > s:
        raise ValueError(f"scale comparison needs sigma <= s, got sigma={sigma} > s={s}")
    spec = dft_values(f.group, f.values)
    lo = float(sobolev_norm_batch(w, sigma, spec))
    hi = float(sobolev_norm_batch(w, s, spec))
    return lo <= hi + 1e-12
