"""Thresholds, minimax risks, and rates for thermal-state rescaling.

A rescaling task asks a channel to turn every displaced thermal state
rho(alpha, s1) into rho(k alpha, s2).  It is exactly solvable iff the
rescaled thermal parameter s~ stays at or below s2, which pins down a
threshold k0 for the quantum problem and k0c = sqrt(V2/V1) for the
matching classical Gaussian shift problem.  Above threshold the minimax
risk (worst-case L1 distance to the target) has closed forms; when both
thresholds are exceeded the two contributions couple and the risk is a
numerically evaluated product-law L1 distance.

Qubit purification and dilution enter through a local Gaussian
approximation of displaced spin ensembles: Bloch length r maps to
thermal parameter s = (1 - r)/(1 + r) and shift variance V = 1 - r^2,
the output ensemble carries lam * r.  The largest per-copy rescaling k
with zero risk then yields the optimal copy-number rate k0^2 / lam^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from scipy.integrate import quad

from .channels import AMPLIFY, ATTENUATE, channel_s_tilde, normalize_kind

__all__ = [
    "GaussianProblem",
    "QubitScenario",
    "RiskReport",
    "geometric_l1",
    "gaussian_l1",
    "quantum_threshold",
    "classical_threshold",
    "s_tilde",
    "quantum_minimax_risk",
    "classical_minimax_risk",
    "case4_risk",
    "gaussian_risk",
    "combined_risk",
    "qubit_thresholds",
    "optimal_rate",
]

_SQRT2 = math.sqrt(2.0)
_SQRT_2PI = math.sqrt(2.0 * math.pi)

# Half-width of the quadrature window in units of the larger standard
# deviation; the omitted Gaussian mass at 8 sigma is below 1.3e-15.
_TAIL_SIGMAS = 8.0
_MAX_TERMS = 200_000


def _phi(x: float) -> float:
    """Standard normal CDF."""
    return 0.5 * (1.0 + math.erf(x / _SQRT2))


def _check_thermal(name: str, s: float) -> float:
    if not 0.0 <= s < 1.0:
        raise ValueError(f"{name} must lie in [0, 1), got {s}")
    return float(s)


def geometric_l1(sa: float, sb: float) -> tuple[float, int]:
    """L1 distance between the geometric laws (1 - s) s^n for s = sa, sb.

    Returns (distance, m0) where m0 is the largest integer m with
    (1 - hi) hi^m <= (1 - lo) lo^m for hi = max(sa, sb), lo = min;
    the distance is 2 (hi^(m0+1) - lo^(m0+1)).  At an exact weight tie
    the tied index is kept inside m0; tied terms contribute zero, so
    either convention yields the same distance.
    """
    _check_thermal("sa", sa)
    _check_thermal("sb", sb)
    if sa == sb:
        return 0.0, 0
    hi, lo = (sa, sb) if sa > sb else (sb, sa)
    if lo == 0.0:
        m0 = 0
    else:
        # log-weight gap g(m) = offset + m * slope with slope > 0;
        # m0 is the last index with g(m) <= 0
        slope = math.log(hi / lo)
        offset = math.log((1.0 - hi) / (1.0 - lo))
        m0 = max(0, math.floor(-offset / slope))
        while offset + (m0 + 1) * slope <= 0.0:
            m0 += 1
        while m0 > 0 and offset + m0 * slope > 0.0:
            m0 -= 1
    return 2.0 * (hi ** (m0 + 1) - lo ** (m0 + 1)), m0


def gaussian_l1(var_a: float, var_b: float) -> float:
    """L1 distance between centered normals N(0, var_a) and N(0, var_b)."""
    if var_a <= 0.0 or var_b <= 0.0:
        raise ValueError("variances must be positive")
    if var_a == var_b:
        return 0.0
    hi, lo = (var_a, var_b) if var_a > var_b else (var_b, var_a)
    a, b = math.sqrt(hi), math.sqrt(lo)
    # density crossover; the two CDF gaps on either side add up to the L1
    x_star = math.sqrt(2.0 * hi * lo * math.log(a / b) / (hi - lo))
    return 4.0 * (_phi(x_star / b) - _phi(x_star / a))


def quantum_threshold(kind: str, s1: float, s2: float) -> float:
    """Largest k with an exact thermal rescaling thermal(s1) -> thermal(s2).

    Attenuation requires s1 >= s2 and gives sqrt(s2 (1-s1) / (s1 (1-s2)));
    amplification requires s1 <= s2 and gives sqrt((1-s1) / (1-s2)).
    Equal parameters sit on both boundaries and give 1.
    """
    kind = normalize_kind(kind)
    _check_thermal("s1", s1)
    _check_thermal("s2", s2)
    if s1 == s2:
        return 1.0
    if kind == ATTENUATE:
        if s1 < s2:
            raise ValueError("attenuation threshold needs s1 >= s2")
        return math.sqrt(s2 * (1.0 - s1) / (s1 * (1.0 - s2)))
    if s1 > s2:
        raise ValueError("amplification threshold needs s1 <= s2")
    return math.sqrt((1.0 - s1) / (1.0 - s2))


def classical_threshold(V1: float, V2: float) -> float:
    """Largest k with an exact classical rescaling N(u, V1) -> N(k u, V2)."""
    if V1 <= 0.0 or V2 <= 0.0:
        raise ValueError("variances must be positive")
    return math.sqrt(V2 / V1)


def s_tilde(kind: str, s1: float, k: float) -> float:
    """Thermal parameter after rescaling by k with the kind-matched channel.

    Restricted to the kind's own regime (attenuation 0 < k <= 1,
    amplification k >= 1); channels.channel_s_tilde accepts any k > 0.
    """
    kind = normalize_kind(kind)
    if kind == ATTENUATE and not 0.0 < k <= 1.0:
        raise ValueError(f"attenuation applies for 0 < k <= 1, got {k}")
    if kind == AMPLIFY and k < 1.0:
        raise ValueError(f"amplification applies for k >= 1, got {k}")
    return channel_s_tilde(kind, s1, k)


def quantum_minimax_risk(s1: float, s2: float, k: float, kind: str) -> float:
    """Worst-case L1 risk of the optimal covariant rescaling channel.

    Zero whenever the rescaled parameter s~ lands at or below s2 (a
    noise top-up then finishes the job exactly); otherwise the L1
    distance between thermal(s~) and thermal(s2).
    """
    _check_thermal("s2", s2)
    kind = normalize_kind(kind)
    st = channel_s_tilde(kind, s1, k)
    if st <= s2:
        return 0.0
    # rounding in s~ can land a hair past s2 at k = k0 exactly; the
    # threshold comparison is the authoritative zero test
    ordered = s1 >= s2 if kind == ATTENUATE else s1 <= s2
    if ordered and k <= quantum_threshold(kind, s1, s2):
        return 0.0
    return geometric_l1(st, s2)[0]


def classical_minimax_risk(V1: float, V2: float, k: float) -> float:
    """Worst-case L1 risk of the optimal classical affine rescaling.

    Zero for k <= sqrt(V2/V1); otherwise the L1 distance between
    N(0, k^2 V1) and N(0, V2).
    """
    if k <= 0.0:
        raise ValueError("k must be positive")
    if k <= classical_threshold(V1, V2):
        return 0.0
    return gaussian_l1(k * k * V1, V2)


def _abs_diff_quad(
    c1: float, sig1: float, c2: float, sig2: float, L: float, epsabs: float
) -> tuple[float, float]:
    """Adaptive quadrature of |c1 N(0,sig1^2) - c2 N(0,sig2^2)| over the line.

    The integrand is even, so integrate [0, L] and double.  The density
    crossover is handed to quad as a known kink.  Returns (value, error
    estimate).
    """
    a1 = c1 / (_SQRT_2PI * sig1)
    a2 = c2 / (_SQRT_2PI * sig2)
    inv1 = 0.5 / (sig1 * sig1)
    inv2 = 0.5 / (sig2 * sig2)

    def f(x: float) -> float:
        xx = x * x
        return abs(a1 * math.exp(-inv1 * xx) - a2 * math.exp(-inv2 * xx))

    points = None
    if c1 > 0.0 and c2 > 0.0 and sig1 != sig2:
        x2 = (
            2.0
            * sig1 * sig1 * sig2 * sig2
            * math.log(c2 * sig1 / (c1 * sig2))
            / (sig1 * sig1 - sig2 * sig2)
        )
        if x2 > 0.0:
            xs = math.sqrt(x2)
            if 0.0 < xs < L:
                points = [xs]
    # pin epsrel, else quad stops at its default relative criterion and
    # reports ~1e-8 |I| error estimates that swamp the term budget
    val, err = quad(f, 0.0, L, points=points, epsabs=0.5 * epsabs, epsrel=1e-12, limit=200)
    return 2.0 * val, 2.0 * err


def case4_risk(
    s_t: float, s2: float, var1: float, var2: float, abs_tol: float = 1e-8
) -> float:
    """L1 distance between the joint laws when both thresholds are exceeded.

    Computes integral dx sum_n |g1(x) (1-s_t) s_t^n - g2(x) (1-s2) s2^n|
    with g1 = N(0, var1) and g2 = N(0, var2) densities, by adaptive
    quadrature per photon number, stopping once the geometric tails
    certify the remainder below abs_tol.  Raises RuntimeError with the
    achieved tolerance if the error budget cannot be met.
    """
    _check_thermal("s_t", s_t)
    _check_thermal("s2", s2)
    if var1 <= 0.0 or var2 <= 0.0:
        raise ValueError("variances must be positive")
    if abs_tol <= 0.0:
        raise ValueError("abs_tol must be positive")
    if var1 == var2:
        # common Gaussian factor integrates out term by term
        return geometric_l1(s_t, s2)[0]
    if s_t == s2:
        # common photon-number law factors out of the x integral
        return gaussian_l1(var1, var2)

    sig1, sig2 = math.sqrt(var1), math.sqrt(var2)
    L = _TAIL_SIGMAS * max(sig1, sig2)
    flat_eps = abs_tol * 1e-4
    achieved = math.inf
    # a flat per-term budget can accumulate past abs_tol when s values
    # near 1 need hundreds of terms; the retry shrinks each term's
    # request in proportion to its mass (summed requests < abs_tol / 2)
    for attempt in range(2):
        total = 0.0
        err_quad = 0.0
        n = 0
        while True:
            A = (1.0 - s_t) * s_t**n
            B = (1.0 - s2) * s2**n
            eps_n = flat_eps
            if attempt:
                eps_n = min(flat_eps, max(0.25 * abs_tol * (A + B), 1e-15))
            val, err = _abs_diff_quad(A, sig1, B, sig2, L, eps_n)
            total += val
            err_quad += err
            # summed mass beyond n bounds the dropped terms
            tail = s_t ** (n + 1) + s2 ** (n + 1)
            if tail < 0.25 * abs_tol:
                break
            n += 1
            if n > _MAX_TERMS:
                raise RuntimeError(
                    f"term cap reached at n={n}; achieved tolerance "
                    f"{tail + err_quad:.3e} for requested {abs_tol:.3e}"
                )
        if err_quad + tail <= abs_tol:
            return min(total, 2.0)
        achieved = min(achieved, err_quad + tail)
    raise RuntimeError(
        f"quadrature non-convergence: achieved tolerance "
        f"{achieved:.3e} exceeds requested {abs_tol:.3e}"
    )


@dataclass(frozen=True)
class QubitScenario:
    """Qubit purification/dilution scenario.

    r0_norm is the input Bloch length, lam the output scaling (lam > 1
    purifies, lam < 1 dilutes), and the transformation strength is given
    either as the per-copy rescaling k or as the copy-number rate
    (rate = k^2 / lam^2).  The output Bloch length lam * r0_norm must
    stay physical (<= 1).
    """

    r0_norm: float
    lam: float
    k: Optional[float] = None
    rate: Optional[float] = None

    def __post_init__(self):
        if not 0.0 < self.r0_norm < 1.0:
            raise ValueError("r0_norm must lie in (0, 1)")
        if self.lam <= 0.0:
            raise ValueError("lam must be positive")
        if self.lam * self.r0_norm > 1.0:
            raise ValueError("output Bloch length lam * r0_norm exceeds 1")
        if self.k is not None and self.k <= 0.0:
            raise ValueError("k must be positive")
        if self.rate is not None and self.rate <= 0.0:
            raise ValueError("rate must be positive")
        if self.k is not None and self.rate is not None:
            implied = self.k * self.k / (self.lam * self.lam)
            if abs(self.rate - implied) > 1e-9 * max(1.0, abs(implied)):
                raise ValueError("k and rate are inconsistent (rate = k^2 / lam^2)")

    @property
    def k_value(self) -> float:
        """Per-copy rescaling, derived from the rate when k was not given."""
        if self.k is not None:
            return self.k
        if self.rate is not None:
            return self.lam * math.sqrt(self.rate)
        raise ValueError("scenario carries neither k nor rate")

    # Local Gaussian model of the displaced ensemble
    @property
    def s1(self) -> float:
        return (1.0 - self.r0_norm) / (1.0 + self.r0_norm)

    @property
    def s2(self) -> float:
        rt = self.lam * self.r0_norm
        return (1.0 - rt) / (1.0 + rt)

    @property
    def V1(self) -> float:
        return 1.0 - self.r0_norm * self.r0_norm

    @property
    def V2(self) -> float:
        rt = self.lam * self.r0_norm
        return 1.0 - rt * rt

    @property
    def lambda_tilde(self) -> float:
        """Boundary shrink factor separating the two dilution orderings."""
        return min(1.0, (1.0 - self.r0_norm) / self.r0_norm)


def _require_unsaturated(scenario: QubitScenario) -> None:
    # lam * r0 = 1 makes the output pure (V2 = 0) and the Gaussian
    # model degenerate; thresholds and risks are defined strictly inside
    if scenario.lam * scenario.r0_norm >= 1.0:
        raise ValueError("requires lam * r0_norm < 1")


@dataclass(frozen=True)
class GaussianProblem:
    """Phase-invariant Gaussian rescaling problem.

    Input family: displaced thermal(s1) states with classical shift
    variance V1; target: thermal(s2) at shift k alpha with variance V2.
    """

    s1: float
    s2: float
    V1: float
    V2: float
    k: float

    def __post_init__(self):
        _check_thermal("s1", self.s1)
        _check_thermal("s2", self.s2)
        if self.V1 <= 0.0 or self.V2 <= 0.0:
            raise ValueError("variances must be positive")
        if self.k <= 0.0:
            raise ValueError("k must be positive")

    @classmethod
    def from_qubit(cls, scenario: QubitScenario) -> "GaussianProblem":
        _require_unsaturated(scenario)
        return cls(
            s1=scenario.s1,
            s2=scenario.s2,
            V1=scenario.V1,
            V2=scenario.V2,
            k=scenario.k_value,
        )


@dataclass(frozen=True)
class RiskReport:
    """Outcome of the four-regime classification at a given k.

    case 1: k within both thresholds, exact simulation, zero risk.
    case 2: only the quantum threshold exceeded; total equals the
        thermal-law L1 distance.
    case 3: only the classical threshold exceeded; total equals the
        Gaussian L1 distance.
    case 4: both exceeded; total is the joint product-law integral,
        while classical_risk / quantum_risk record the standalone
        marginal distances that bracket it.

    m0 is the photon-number crossover of the thermal-law distance
    (None when the quantum part does not contribute); s_tilde is the
    rescaled thermal parameter at this k.
    """

    case: int
    k0_quantum: float
    k0_classical: float
    classical_risk: float
    quantum_risk: float
    total_risk: float
    m0: Optional[int]
    s_tilde: Optional[float]

    def as_dict(self) -> dict:
        return {
            "case": self.case,
            "k0_quantum": self.k0_quantum,
            "k0_classical": self.k0_classical,
            "classical_risk": self.classical_risk,
            "quantum_risk": self.quantum_risk,
            "total_risk": self.total_risk,
            "m0": self.m0,
            "s_tilde": self.s_tilde,
        }


def _threshold_pair(s1: float, s2: float, V1: float, V2: float) -> tuple[float, float]:
    if s1 == s2:
        kq = 1.0
    elif s1 > s2:
        kq = quantum_threshold(ATTENUATE, s1, s2)
    else:
        kq = quantum_threshold(AMPLIFY, s1, s2)
    return kq, classical_threshold(V1, V2)


def gaussian_risk(problem: GaussianProblem, abs_tol: float = 1e-8) -> RiskReport:
    """Classify k against both thresholds and evaluate the total risk.

    Boundary values of k belong to the lower regime (the risk is
    continuous across each threshold, and zero contributions stay
    exactly zero on the boundary itself).
    """
    s1, s2, V1, V2, k = problem.s1, problem.s2, problem.V1, problem.V2, problem.k
    kq, kc = _threshold_pair(s1, s2, V1, V2)
    lo, hi = min(kq, kc), max(kq, kc)
    # physical channel family: beamsplitter up to k = 1, amplifier beyond
    st = channel_s_tilde(ATTENUATE if k <= 1.0 else AMPLIFY, s1, k)
    if k <= lo:
        return RiskReport(1, kq, kc, 0.0, 0.0, 0.0, None, st)
    if k <= hi:
        if kq <= kc:
            dist, m0 = geometric_l1(st, s2)
            return RiskReport(2, kq, kc, 0.0, dist, dist, m0, st)
        dist = classical_minimax_risk(V1, V2, k)
        return RiskReport(3, kq, kc, dist, 0.0, dist, None, st)
    q_dist, m0 = geometric_l1(st, s2)
    c_dist = gaussian_l1(k * k * V1, V2)
    total = case4_risk(st, s2, k * k * V1, V2, abs_tol)
    return RiskReport(4, kq, kc, c_dist, q_dist, total, m0, st)


def combined_risk(scenario: QubitScenario, abs_tol: float = 1e-8) -> RiskReport:
    """Total minimax risk of a qubit scenario at its rescaling k."""
    return gaussian_risk(GaussianProblem.from_qubit(scenario), abs_tol)


def qubit_thresholds(scenario: QubitScenario) -> tuple[float, float, float]:
    """(k0_quantum, k0_classical, lambda_tilde) of a qubit scenario.

    k0_classical = sqrt((1 - lam^2 r^2) / (1 - r^2)); lambda_tilde =
    min(1, (1 - r)/r) marks where the dilution threshold ordering flips.
    """
    _require_unsaturated(scenario)
    kq, kc = _threshold_pair(scenario.s1, scenario.s2, scenario.V1, scenario.V2)
    return kq, kc, scenario.lambda_tilde


def optimal_rate(scenario: QubitScenario) -> float:
    """Optimal copy-number rate k0^2 / lam^2 with the governing threshold.

    Purification (lam > 1): (1/lam - r) / (lam^2 (1 - r)), the
    attenuation threshold governs.  Dilution (lam < 1): the classical
    threshold governs for lam < lambda_tilde, giving
    (1/lam^2 - r^2) / (1 - r^2), and the amplification threshold
    otherwise, giving (r + 1/lam) / (lam^2 (r + 1)).  lam = 1 returns 1
    (both thresholds equal 1; the formulas share this limit).
    """
    _require_unsaturated(scenario)
    r, lam = scenario.r0_norm, scenario.lam
    if lam == 1.0:
        return 1.0
    if lam > 1.0:
        return (1.0 / lam - r) / (lam * lam * (1.0 - r))
    if lam < scenario.lambda_tilde:
        return (1.0 / (lam * lam) - r * r) / (1.0 - r * r)
    return (r + 1.0 / lam) / (lam * lam * (r + 1.0))
