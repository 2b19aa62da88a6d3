"""Channel actions on photon-number distributions and classical Gaussians.

Phase-invariant Gaussian channels act on number-diagonal states through
classical kernels: a beamsplitter of transmitted amplitude k < 1 thins
each photon independently with retention k**2, and a parametric
amplifier of amplitude k > 1 maps |n> to a negative-binomial
distribution with gain k**2.  Both kernels send thermal states to
thermal states with a rescaled parameter, which is the closed form the
rest of the package leans on.

The module also carries the covariant-channel outputs for a pure Fock
ancilla (the building block of the ordering argument that proves the
vacuum ancilla optimal), the Gaussian-noise top-up that fills the gap
below threshold, and the classical affine channel x -> k x + Z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .fock import DiagonalFockState

__all__ = [
    "ATTENUATE",
    "AMPLIFY",
    "normalize_kind",
    "ChannelKernel",
    "ClassicalGaussian",
    "build_kernel",
    "thinning_matrix",
    "gain_matrix",
    "attenuate_kernel",
    "amplify_kernel",
    "channel_s_tilde",
    "ancilla_fock_kernel",
    "ancilla_mixture_kernel",
    "gaussian_noise_topup",
    "classical_channel",
]

ATTENUATE = "att"
AMPLIFY = "amp"

# Kernels are materialized densely up to this input size and streamed in
# column chunks beyond it, keeping memory bounded at large cutoffs.
_DENSE_LIMIT = 512
_STREAM_CHUNK = 256


def normalize_kind(kind: str) -> str:
    k = str(kind).strip().lower()
    if k in ("att", "attenuate", "attenuation"):
        return ATTENUATE
    if k in ("amp", "amplify", "amplification"):
        return AMPLIFY
    raise ValueError(f"unknown channel kind: {kind!r}")


@dataclass(frozen=True)
class ClassicalGaussian:
    """Normal distribution N(mean, variance); variance 0 is a point mass."""

    mean: float
    variance: float

    def __post_init__(self):
        if self.variance < 0.0:
            raise ValueError("variance must be nonnegative")


@dataclass(frozen=True)
class ChannelKernel:
    """Materialized transition kernel P(m | n) of a number-diagonal channel.

    matrix[m, n] is the probability that input |n> produces output |m>.
    Columns are stochastic up to the certified column truncation, which
    column_tails() measures directly from the column sums.
    """

    kind: str
    k: float
    matrix: np.ndarray
    in_cutoff: int
    out_cutoff: int
    ancilla_fock: int = 0

    def apply(self, probs: np.ndarray) -> np.ndarray:
        return self.matrix @ probs

    def column_tails(self) -> np.ndarray:
        return 1.0 - self.matrix.sum(axis=0)


def _check_att_k(k: float) -> float:
    k = float(k)
    if not 0.0 < k < 1.0:
        raise ValueError(f"attenuation requires 0 < k < 1, got {k}")
    return k


def _check_amp_k(k: float) -> float:
    k = float(k)
    if k <= 1.0:
        raise ValueError(f"amplification requires k > 1, got {k}")
    return k


def channel_s_tilde(kind: str, s1: float, k: float) -> float:
    """Thermal parameter after the channel: thermal(s1) -> thermal(s~).

    s~_att = s1 k^2 / (1 - s1 + s1 k^2) and s~_amp = 1 - (1 - s1) / k^2.
    """
    kind = normalize_kind(kind)
    if not 0.0 <= s1 < 1.0:
        raise ValueError(f"thermal parameter must lie in [0, 1), got {s1}")
    if k <= 0.0:
        raise ValueError("k must be positive")
    if kind == ATTENUATE:
        return s1 * k * k / (1.0 - s1 + s1 * k * k)
    return 1.0 - (1.0 - s1) / (k * k)


def _thinning_log_columns(k: float, n_vals: np.ndarray, out_cutoff: int) -> np.ndarray:
    """Binomial columns P(m | n) = C(n, m) eta^m (1-eta)^(n-m), eta = k^2."""
    eta = k * k
    m = np.arange(out_cutoff + 1)
    mm, nn = np.meshgrid(m, n_vals, indexing="ij")
    valid = mm <= nn
    with np.errstate(invalid="ignore"):
        logp = (
            gammaln(nn + 1)
            - gammaln(mm + 1)
            - gammaln(np.where(valid, nn - mm, 0) + 1)
            + mm * math.log(eta)
            + (nn - mm) * math.log1p(-eta)
        )
    return np.where(valid, np.exp(np.where(valid, logp, 0.0)), 0.0)


def _gain_log_columns(k: float, n_vals: np.ndarray, out_cutoff: int) -> np.ndarray:
    """Negative-binomial columns P(m|n) = C(m,n)(1/G)^(n+1)(1-1/G)^(m-n), G = k^2."""
    G = k * k
    m = np.arange(out_cutoff + 1)
    mm, nn = np.meshgrid(m, n_vals, indexing="ij")
    valid = mm >= nn
    with np.errstate(invalid="ignore"):
        logp = (
            gammaln(mm + 1)
            - gammaln(nn + 1)
            - gammaln(np.where(valid, mm - nn, 0) + 1)
            - (nn + 1) * math.log(G)
            + (mm - nn) * math.log1p(-1.0 / G)
        )
    return np.where(valid, np.exp(np.where(valid, logp, 0.0)), 0.0)


def thinning_matrix(k: float, cutoff: int) -> np.ndarray:
    """Dense beamsplitter kernel on support 0..cutoff; columns sum to 1."""
    k = _check_att_k(k)
    return _thinning_log_columns(k, np.arange(cutoff + 1), cutoff)


def gain_matrix(k: float, in_cutoff: int, out_cutoff: int) -> np.ndarray:
    """Dense amplifier kernel; columns sum to 1 minus the out_cutoff tail."""
    k = _check_amp_k(k)
    return _gain_log_columns(k, np.arange(in_cutoff + 1), out_cutoff)


def build_kernel(
    kind: str, k: float, in_cutoff: int, out_cutoff: int | None = None
) -> ChannelKernel:
    """Materialize the vacuum-ancilla channel kernel as a ChannelKernel."""
    kind = normalize_kind(kind)
    if kind == ATTENUATE:
        out = in_cutoff if out_cutoff is None else out_cutoff
        return ChannelKernel(kind, float(k), thinning_matrix(k, in_cutoff)[: out + 1], in_cutoff, out)
    out = _auto_out_cutoff(k, in_cutoff, 1e-14) if out_cutoff is None else out_cutoff
    return ChannelKernel(kind, float(k), gain_matrix(k, in_cutoff, out), in_cutoff, out)


def _stream_apply(column_fn, probs: np.ndarray, out_cutoff: int) -> np.ndarray:
    """Accumulate kernel @ probs in column chunks to bound memory."""
    out = np.zeros(out_cutoff + 1)
    for start in range(0, probs.size, _STREAM_CHUNK):
        n_vals = np.arange(start, min(start + _STREAM_CHUNK, probs.size))
        out += column_fn(n_vals, out_cutoff) @ probs[n_vals]
    return out


def attenuate_kernel(k: float, state: DiagonalFockState) -> DiagonalFockState:
    """Apply the vacuum-ancilla beamsplitter channel to a diagonal state.

    The output cutoff equals the input cutoff (loss never raises the
    photon number); the input's omitted mass carries over unchanged.
    """
    k = _check_att_k(k)
    n_in = state.cutoff
    if n_in + 1 <= _DENSE_LIMIT:
        out = thinning_matrix(k, n_in) @ state.probs
    else:
        out = _stream_apply(lambda nv, oc: _thinning_log_columns(k, nv, oc), state.probs, n_in)
    return DiagonalFockState(out, n_in, state.tail_bound, state.tail_warning)


def _auto_out_cutoff(k: float, in_cutoff: int, tail_target: float) -> int:
    """Output cutoff keeping every amplifier column tail below target.

    The column for input n is negative binomial with n + 1 successes at
    rate 1/G: mean (n + 1)(G - 1), geometric decay ratio 1 - 1/G past
    the bulk.  The enlargement below is a safe analytic overestimate;
    the applied truncation is still measured afterwards.
    """
    G = k * k
    mean = (in_cutoff + 1) * (G - 1.0)
    decay = -math.log(tail_target) / -math.log1p(-1.0 / G)
    return int(in_cutoff + mean + 10.0 * math.sqrt(mean + 1.0) + decay + 64)


def amplify_kernel(
    k: float,
    state: DiagonalFockState,
    out_cutoff: int | None = None,
    tail_target: float = 1e-14,
) -> DiagonalFockState:
    """Apply the vacuum-ancilla parametric-amplifier channel.

    The output cutoff is auto-enlarged until the kernel truncation adds
    at most ``tail_target`` of omitted mass on top of the input's own
    tail bound; pass ``out_cutoff`` to pin the support instead (the
    omitted mass is then whatever the truncation measures).
    """
    k = _check_amp_k(k)
    n_in = state.cutoff
    fixed_cutoff = out_cutoff is not None
    if out_cutoff is None:
        out_cutoff = _auto_out_cutoff(k, n_in, tail_target)
    if max(n_in, out_cutoff) + 1 <= _DENSE_LIMIT:
        out = gain_matrix(k, n_in, out_cutoff) @ state.probs
    else:
        out = _stream_apply(lambda nv, oc: _gain_log_columns(k, nv, oc), state.probs, out_cutoff)
    # Exact arithmetic would give sum(out) = norm(input); the deficit is
    # the measured kernel truncation.
    kernel_loss = max(state.norm - float(out.sum()), 0.0)
    if not fixed_cutoff and kernel_loss > 10.0 * tail_target:
        raise RuntimeError(
            f"amplifier cutoff enlargement insufficient: residual {kernel_loss:.3e}"
        )
    tail = state.tail_bound + kernel_loss
    return DiagonalFockState(out, out_cutoff, tail, tail_warning=tail > 0.5)


def ancilla_fock_kernel(
    kind: str,
    k: float,
    fock_level: int,
    s1: float,
    cutoff: int | None = None,
) -> DiagonalFockState:
    """Channel output for thermal(s1) input and pure Fock ancilla |kappa>.

    In the reduced two-mode picture the output weights are
    d^(kappa)_l = (1 - g)^(kappa + 1) g^l C(l + kappa, kappa) with
    g = s~(kind, s1, k), located at photon number l + kappa for
    attenuation and at l for amplification.  kappa = 0 recovers the
    thermal output of the vacuum-ancilla channel exactly.
    """
    kind = normalize_kind(kind)
    if fock_level < 0:
        raise ValueError("ancilla Fock level must be nonnegative")
    k = _check_att_k(k) if kind == ATTENUATE else _check_amp_k(k)
    g = channel_s_tilde(kind, s1, k)
    kappa = int(fock_level)
    shift = kappa if kind == ATTENUATE else 0
    if cutoff is None:
        bulk = (kappa + 1) * g / max(1.0 - g, 1e-6)
        decay = 1.0 if g == 0.0 else -math.log(1e-14) / -math.log(g)
        cutoff = int(shift + bulk + decay + 32)
    probs = np.zeros(cutoff + 1)
    lmax = cutoff - shift
    if lmax >= 0:
        l = np.arange(lmax + 1)
        if g == 0.0:
            weights = np.zeros(lmax + 1)
            weights[0] = 1.0
        else:
            logw = (
                (kappa + 1) * math.log1p(-g)
                + l * math.log(g)
                + gammaln(l + kappa + 1)
                - gammaln(l + 1)
                - gammaln(kappa + 1)
            )
            weights = np.exp(logw)
        probs[shift : shift + lmax + 1] = weights
    tail = max(1.0 - float(probs.sum()), 0.0)
    return DiagonalFockState(probs, cutoff, tail, tail_warning=tail > 0.5)


def ancilla_mixture_kernel(
    kind: str,
    k: float,
    weights,
    s1: float,
    cutoff: int | None = None,
) -> DiagonalFockState:
    """Convex combination of the pure-Fock-ancilla outputs (channel linearity)."""
    weights = np.asarray(weights, dtype=float)
    if weights.ndim != 1 or weights.size == 0:
        raise ValueError("weights must be a nonempty vector")
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
        raise ValueError("ancilla weights must form a probability vector")
    parts = [
        ancilla_fock_kernel(kind, k, kappa, s1, cutoff=cutoff)
        for kappa in range(weights.size)
    ]
    cut = max(p.cutoff for p in parts)
    probs = np.zeros(cut + 1)
    tail = 0.0
    for w, part in zip(weights, parts):
        probs[: part.cutoff + 1] += w * part.probs
        tail += w * part.tail_bound
    return DiagonalFockState(probs, cut, tail, tail_warning=tail > 0.5)


def gaussian_noise_topup(s_tilde: float, s2: float) -> float:
    """Displacement-noise variance v turning thermal(s~) into thermal(s2).

    v is the mean-photon deficit s2/(1-s2) - s~/(1-s~); random complex
    Gaussian displacements with E|alpha|^2 = v convolve the P-function
    of thermal(s~) up to that of thermal(s2).  Requires s~ <= s2.
    """
    for name, s in (("s_tilde", s_tilde), ("s2", s2)):
        if not 0.0 <= s < 1.0:
            raise ValueError(f"{name} must lie in [0, 1), got {s}")
    if s_tilde > s2:
        raise ValueError("no noise top-up exists for s_tilde > s2")
    return s2 / (1.0 - s2) - s_tilde / (1.0 - s_tilde)


def classical_channel(
    k: float, V1: float, V2: float, x: ClassicalGaussian
) -> ClassicalGaussian:
    """Affine classical channel X -> k X + Z tuned for N(u, V1) -> N(k u, V2).

    Below the classical threshold k0c = sqrt(V2 / V1) the additive noise
    Z ~ N(0, V2 - k^2 V1) reaches the target variance exactly; above it
    the optimal choice is Z = 0 and the variance stays k^2 Var(X).
    """
    if V1 <= 0.0 or V2 <= 0.0:
        raise ValueError("variances must be positive")
    if k <= 0.0:
        raise ValueError("k must be positive")
    k0c = math.sqrt(V2 / V1)
    if k <= k0c:
        return ClassicalGaussian(k * x.mean, k * k * x.variance + (V2 - k * k * V1))
    return ClassicalGaussian(k * x.mean, k * k * x.variance)
