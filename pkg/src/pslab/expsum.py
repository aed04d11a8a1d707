"""Exponential sums, sawtooth machinery, FFT torus grids, arc decomposition.

Phase conventions: e(t) = exp(2*pi*i*t) and the transform of a weight f on
the integers is f_hat(alpha) = sum_n f(n) e(alpha*n).  Phases are reduced
mod 1 before exponentiation -- exactly (integer arithmetic on the binary
representation of alpha) for the scalar sums, and in 80-bit extended
precision for the vectorised sparse evaluations -- because the raw product
alpha*n^d overflows double-precision phase accuracy already at desk scale.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import exponents
from .ps_core import PSExponent, ps_members
from .wtrick import SparseWeight

TorusLike = Union[float, Fraction, Tuple[int, int]]


class GridTooCoarseError(ValueError):
    """Grid size below the support length."""


class AliasingError(ValueError):
    """Grid too small to resolve the trigonometric polynomial exactly."""


def e(t: float) -> complex:
    return cmath.exp(2j * math.pi * t)


def _alpha_ratio(alpha: TorusLike) -> Tuple[int, int]:
    """alpha as an exact integer ratio (num, den), den > 0."""
    if isinstance(alpha, tuple):
        a, q = alpha
        if q <= 0:
            raise ValueError("denominator must be positive")
        return a, q
    if isinstance(alpha, Fraction):
        return alpha.numerator, alpha.denominator
    return Fraction(alpha).as_integer_ratio()


def weyl_sum(x: int, d: int, alpha: TorusLike) -> complex:
    """sum_{n <= x} e(alpha * n^d) with exactly reduced phases.

    alpha may be a float (its binary value is used exactly), a Fraction,
    or an (a, q) pair.
    """
    if x < 0:
        raise ValueError("x must be nonnegative")
    num, den = _alpha_ratio(alpha)
    total = 0j
    for n in range(1, x + 1):
        ph = (num * pow(n, d, den)) % den
        total += e(ph / den)
    return total


def ps_weighted_sum(x: int, c: PSExponent, d: int, theta: TorusLike) -> complex:
    """sum over sequence members m <= x of c * m^(d-1/c) * e(m^d * theta)."""
    num, den = _alpha_ratio(theta)
    cf = c.p / c.q
    total = 0j
    for m in ps_members(x, c):
        ph = (num * pow(m, d, den)) % den
        total += cf * m ** (d - 1.0 / cf) * e(ph / den)
    return total


def smooth_weighted_sum(x: int, d: int, theta: TorusLike) -> complex:
    """sum_{m <= x} m^(d-1) * e(m^d * theta)."""
    num, den = _alpha_ratio(theta)
    total = 0j
    for m in range(1, x + 1):
        ph = (num * pow(m, d, den)) % den
        total += m ** (d - 1) * e(ph / den)
    return total


@dataclass(frozen=True)
class DiscrepancyReport:
    difference: float      # |weighted sequence sum - smooth sum|
    envelope: float        # x^(d - (1-theta(d,c))/c)
    ratio: float
    admissible: bool       # c inside the smooth-comparison range


def ps_smooth_discrepancy(x: int, c: PSExponent, d: int,
                          theta: TorusLike) -> DiscrepancyReport:
    """Distance between the weighted sequence sum and the smooth sum.

    Reports the measured difference next to the envelope
    x^(d - (1-theta(d,c))/c); computed even for inadmissible c, with the
    admissibility flag cleared.
    """
    _, _, c3 = exponents.c_bounds(d)
    admissible = 1 < c.c < 1 + c3
    th = float(exponents.theta(d, c.c))
    diff = abs(ps_weighted_sum(x, c, d, theta) - smooth_weighted_sum(x, d, theta))
    envelope = x ** (d - (1 - th) / (c.p / c.q))
    return DiscrepancyReport(difference=diff, envelope=envelope,
                             ratio=diff / envelope, admissible=admissible)


# --- sawtooth -------------------------------------------------------------

def psi(t):
    """Sawtooth t - floor(t) - 1/2 (vectorised)."""
    t = np.asarray(t, dtype=float)
    out = t - np.floor(t) - 0.5
    return float(out) if out.ndim == 0 else out


def delta_psi(t, c: PSExponent):
    """psi(-(t+1)^(1/c)) - psi(-t^(1/c)); always in [-1, 1]."""
    t = np.asarray(t, dtype=float)
    inv = c.q / c.p
    out = psi(-((t + 1.0) ** inv)) - psi(-(t ** inv))
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class PsiApprox:
    """Odd trigonometric approximant of the sawtooth plus error majorant.

    psi*(t) = -sum_{h=1}^{H} a[h-1] * sin(2 pi h t) / (pi h) and
    |psi - psi*|(t) <= b[0] + 2 * sum_{h=1}^{H} b[h] * cos(2 pi h t)
    pointwise; coefficient bounds |a_h/( pi h)| <= C_a/h, b_h <= C_b/H.
    """

    H: int
    a: np.ndarray  # tapered numerators, index h-1
    b: np.ndarray  # majorant cosine coefficients, index h (b[0] constant term)
    C_a: float
    C_b: float


def vaaler_approx(H: int) -> PsiApprox:
    """Tapered-series sawtooth approximant with a nonnegative error majorant.

    The taper V(t) = pi*t*(1-t)*cot(pi*t) + t applied at t = h/(H+1) keeps
    the coefficients within the 1/h envelope of the plain series while the
    pointwise error is dominated by the order-H Fejer kernel divided by
    2H+2 (a nonnegative trigonometric polynomial, so the domination can be
    checked sample by sample).
    """
    if H < 2:
        raise ValueError(f"H must be >= 2, got {H}")
    hs = np.arange(1, H + 1)
    t = hs / (H + 1)
    taper = np.pi * t * (1 - t) / np.tan(np.pi * t) + t
    b = np.empty(H + 1)
    b[0] = 1.0 / (2 * H + 2)
    b[1:] = (1 - hs / (H + 1)) / (2 * H + 2)
    return PsiApprox(H=H, a=taper, b=b,
                     C_a=float(np.max(np.abs(taper)) / math.pi),
                     C_b=float((H) * np.max(b)))


def eval_psi_star(approx: PsiApprox, t) -> np.ndarray:
    """Evaluate the trigonometric approximant (vectorised over t)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    hs = np.arange(1, approx.H + 1)
    phases = 2 * np.pi * np.outer(t, hs)
    return -np.sin(phases) @ (approx.a / (np.pi * hs))


def eval_error_majorant(approx: PsiApprox, t) -> np.ndarray:
    """Evaluate the pointwise error majorant (vectorised over t)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    hs = np.arange(1, approx.H + 1)
    phases = 2 * np.pi * np.outer(t, hs)
    return approx.b[0] + 2 * (np.cos(phases) @ approx.b[1:])


@dataclass(frozen=True)
class PsiErrorStats:
    """Grid statistics of |psi - psi*| against the majorant."""

    H: int
    max_error: float        # dominated by the jump window; ~1/2 for all H
    mean_error: float       # the 1/H-scaling statistic
    max_violation: float    # max(error - majorant); <= 0 when bound holds
    bound_holds: bool


def psi_error_stats(approx: PsiApprox, grid_size: int = 100_000) -> PsiErrorStats:
    """Check the majorant on an offset grid and record error statistics.

    The grid (i + 1/2)/G avoids the exact jump points where psi is
    discontinuous; max_error still saturates near 1/2 at the grid points
    closest to the jumps, so mean_error is the statistic that exhibits
    the 1/H law.
    """
    t = (np.arange(grid_size) + 0.5) / grid_size
    err = np.abs(psi(t) - eval_psi_star(approx, t))
    maj = eval_error_majorant(approx, t)
    violation = float(np.max(err - maj))
    return PsiErrorStats(H=approx.H,
                         max_error=float(err.max()),
                         mean_error=float(err.mean()),
                         max_violation=violation,
                         bound_holds=violation <= 1e-9)


# --- dyadic decomposition experiment --------------------------------------

def h_cutoff(y: float, c: PSExponent, v: float) -> int:
    """Harmonic cutoff H_y = y^(1 - 1/c + v), at least 1."""
    return max(1, int(y ** (1 - c.q / c.p + v)))


def preset_v(d: int, c: PSExponent) -> float:
    """The cutoff tilt v used by the two degree regimes.

    For d <= 11: v = (1/2)(1 + 1/c) * d(d+1)^2/(d(d+1)^2 - 1) - 1.
    For d >= 12: v = (1/c - 1 + v0)/(2 - v0) with v0 from the shift saving.
    """
    inv = c.q / c.p
    if d <= 11:
        m = d * (d + 1) ** 2
        return 0.5 * (1 + inv) * m / (m - 1) - 1
    _, v0 = exponents.d0_v0(d)
    v0 = float(v0)
    return (inv - 1 + v0) / (2 - v0)


def ab_decomposition(y: int, H: int, d: int, theta: TorusLike,
                     c: PSExponent) -> Tuple[float, float]:
    """The two dyadic-block sums controlling the sawtooth correction.

    A(y) = H^-1 sum_{|h|<H} |sum_{y<m<=2y} e(h m^(1/c))| and
    B(y) = y^(1/c-1) sum_{1<=|h|<=H} max_{y<y'<=2y} |sum_{y<m<=y'}
    e(m^d theta + h m^(1/c))|, both by direct summation.
    """
    if y < 2:
        raise ValueError(f"y must be >= 2, got {y}")
    inv = c.q / c.p
    ms = np.arange(y + 1, 2 * y + 1, dtype=float)
    roots = ms ** inv
    num, den = _alpha_ratio(theta)
    base = np.array([(num * pow(int(m), d, den)) % den / den
                     for m in range(y + 1, 2 * y + 1)])

    a_total = abs(len(ms))  # h = 0 term: |sum of 1| = block length
    for h in range(1, H):
        block = np.exp(2j * np.pi * np.mod(h * roots, 1.0)).sum()
        a_total += 2 * abs(block)  # h and -h contribute equal magnitudes
    a_val = a_total / H

    b_total = 0.0
    for h in range(1, H + 1):
        for sign in (1, -1):
            terms = np.exp(2j * np.pi * np.mod(base + sign * h * roots, 1.0))
            prefix = np.cumsum(terms)
            b_total += float(np.max(np.abs(prefix)))
    b_val = y ** (inv - 1) * b_total
    return a_val, b_val


# --- torus grids ----------------------------------------------------------

@dataclass
class FourierGrid:
    """Transform samples values[j] = f_hat(j/M) on the M-point torus grid."""

    M: int
    N: int
    values: np.ndarray  # complex128, length M
    norm1: float        # sum of the weight = values[0] up to fft noise
    source: str = ""


def fourier_grid(f: Union[SparseWeight, np.ndarray], M: int,
                 source: str = "") -> FourierGrid:
    """FFT evaluation of f_hat on the grid {j/M}.

    f is a sparse weight on [N] or a dense array indexed from n = 0.
    """
    if isinstance(f, SparseWeight):
        N = f.N
        if M < N:
            raise GridTooCoarseError(f"M = {M} < N = {N}")
        dense = np.zeros(M)
        for n, wgt in f.weights.items():
            dense[n % M] += wgt
        norm1 = f.mass()
    else:
        arr = np.asarray(f, dtype=float)
        N = len(arr)
        if M < N:
            raise GridTooCoarseError(f"M = {M} < N = {N}")
        dense = np.zeros(M)
        dense[: len(arr)] = arr
        norm1 = float(arr.sum())
    values = np.fft.ifft(dense) * M  # ifft matches the e(+jn/M) convention
    return FourierGrid(M=M, N=N, values=values, norm1=norm1, source=source)


def default_grid_size(N: int) -> int:
    """Next power of two >= 8N."""
    return 1 << max(3, (8 * N - 1).bit_length())


def interval_transform(N: int, alphas: np.ndarray) -> np.ndarray:
    """Closed-form transform of the indicator of [N]: sum_{n<=N} e(alpha n)."""
    alphas = np.asarray(alphas, dtype=float)
    out = np.empty(len(alphas), dtype=complex)
    zero = np.mod(alphas, 1.0) == 0
    safe = np.where(zero, 0.5, alphas)
    out[:] = (np.exp(1j * np.pi * safe * (N + 1))
              * np.sin(np.pi * safe * N) / np.sin(np.pi * safe))
    out[zero] = N
    return out


def sparse_transform(weight: SparseWeight, alphas: np.ndarray,
                     chunk: int = 1 << 22) -> np.ndarray:
    """f_hat(alpha) for a sparse weight at arbitrary torus points.

    Phase products run in extended precision so positions up to ~2^60
    keep phase error below ~1e-10 cycles.
    """
    pos, vals = weight.arrays()
    alphas = np.asarray(alphas, dtype=float)
    out = np.empty(len(alphas), dtype=complex)
    pos_ld = pos.astype(np.longdouble)
    step = max(1, chunk // max(1, len(pos)))
    for start in range(0, len(alphas), step):
        block = alphas[start:start + step].astype(np.longdouble)
        ph = np.mod(block[:, None] * pos_ld[None, :], 1.0).astype(float)
        out[start:start + step] = np.exp(2j * np.pi * ph) @ vals
    return out


def fourier_decay(nu: SparseWeight, M: int) -> float:
    """Grid sup of |nu_hat - 1_[N]_hat| / N (a lower bound on the true sup).

    FFT path; requires M >= 2N so the grid resolves the interval kernel.
    """
    if M < 2 * nu.N:
        raise GridTooCoarseError(f"M = {M} < 2N = {2 * nu.N}")
    grid = fourier_grid(nu, M)
    ref = interval_transform(nu.N, np.arange(M) / M)
    return float(np.max(np.abs(grid.values - ref)) / nu.N)


def fourier_decay_sampled(nu: SparseWeight, samples: int = 4096) -> float:
    """Sampled-grid variant of :func:`fourier_decay` for windows too large
    to FFT: evaluates the sparse transform directly at {j/samples} and the
    interval transform in closed form.  Still a lower bound on the sup.
    """
    alphas = np.arange(samples) / samples
    nu_hat = sparse_transform(nu, alphas)
    ref = interval_transform(nu.N, alphas)
    return float(np.max(np.abs(nu_hat - ref)) / nu.N)


def restriction_moment(grid: FourierGrid, u: float) -> Tuple[float, float]:
    """Grid quadrature (1/M) sum_j |f_hat(j/M)|^u and its normalised ratio.

    The ratio divides by norm1^u / N, the scale the restriction bound
    compares against.
    """
    if u <= 0:
        raise ValueError(f"u must be positive, got {u}")
    moment = float(np.mean(np.abs(grid.values) ** u))
    scale = grid.norm1 ** u / grid.N if grid.norm1 > 0 else float("inf")
    return moment, moment / scale


def restriction_moment_sampled(nu: SparseWeight, u: float,
                               samples: int = 4096) -> Tuple[float, float]:
    """Sampled-quadrature restriction moment for oversized windows."""
    if u <= 0:
        raise ValueError(f"u must be positive, got {u}")
    alphas = np.arange(samples) / samples
    vals = np.abs(sparse_transform(nu, alphas))
    moment = float(np.mean(vals ** u))
    mass = nu.mass()
    scale = mass ** u / nu.N if mass > 0 else float("inf")
    return moment, moment / scale


# --- mean values ----------------------------------------------------------

_COUNT_WINDOW = 1 << 26


def mean_value_count(x: int, d: int, S: int) -> int:
    """Exact count of S-tuples in [x]^S with equal half-sums of d-th powers.

    #{(m_1..m_S): m_1^d+..+m_{S/2}^d = m_{S/2+1}^d+..+m_S^d}, via the
    multiplicity table of S/2-fold power sums (sum of squared
    multiplicities).  Windowed so memory stays bounded.
    """
    if S % 2 != 0 or S < 2:
        raise ValueError(f"S must be even and >= 2, got {S}")
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    if S == 2:
        return x
    half = S // 2
    powers = np.arange(1, x + 1, dtype=object) ** d
    if half == 2 and int(powers[-1]) * 2 < 2 ** 62:
        return _pair_multiplicity_count(np.array([int(v) for v in powers],
                                                 dtype=np.int64))
    # generic path: exact integer keys, full table of half-fold sums
    table: dict = {}
    _accumulate_sums(table, [int(v) for v in powers], half)
    return sum(cnt * cnt for cnt in table.values())


def _pair_multiplicity_count(powers: np.ndarray) -> int:
    """Sum of squared multiplicities of pairwise power sums, windowed."""
    maxv = int(powers[-1]) * 2
    minv = int(powers[0]) * 2
    total = 0
    lo = minv
    while lo <= maxv:
        hi = min(lo + _COUNT_WINDOW, maxv + 1)
        counts = np.zeros(hi - lo, dtype=np.int32)
        for a2 in powers:
            a2 = int(a2)
            j_lo = np.searchsorted(powers, lo - a2, side="left")
            j_hi = np.searchsorted(powers, hi - a2, side="left")
            if j_lo < j_hi:
                counts[powers[j_lo:j_hi] + a2 - lo] += 1
        total += int(np.dot(counts.astype(np.int64), counts.astype(np.int64)))
        lo = hi
    return total


def _accumulate_sums(table: dict, powers: List[int], fold: int) -> None:
    """Multiplicity table of fold-wise sums of the given values."""
    sums = {0: 1}
    for _ in range(fold):
        nxt: dict = {}
        for v, cnt in sums.items():
            for p in powers:
                key = v + p
                nxt[key] = nxt.get(key, 0) + cnt
        sums = nxt
    table.update(sums)


def mean_value_count_naive(x: int, d: int, S: int) -> int:
    """Full S-fold enumeration oracle (tiny x only)."""
    import itertools

    half = S // 2
    total = 0
    lhs: dict = {}
    for combo in itertools.product(range(1, x + 1), repeat=half):
        key = sum(m ** d for m in combo)
        lhs[key] = lhs.get(key, 0) + 1
    for combo in itertools.product(range(1, x + 1), repeat=half):
        total += lhs.get(sum(m ** d for m in combo), 0)
    return total


def weyl_power_grid(x: int, d: int, M: int) -> np.ndarray:
    """Grid samples of the degree-d Weyl sum: W(j/M) = sum_{n<=x} e(j n^d / M).

    Exact through the residue histogram of n^d mod M.
    """
    hist = np.zeros(M)
    for n in range(1, x + 1):
        hist[pow(n, d, M)] += 1
    return np.fft.ifft(hist) * M


def quadrature_vs_count(x: int, d: int, S: int, M: int) -> Tuple[float, int]:
    """Grid quadrature of |Weyl sum|^S against the exact tuple count.

    Needs M > S*x^d so every frequency of the degree-S trig polynomial is
    resolved; the two results then agree to rounding.
    """
    if S % 2 != 0:
        raise ValueError(f"S must be even, got {S}")
    if M <= S * x ** d:
        raise AliasingError(f"M = {M} must exceed S*x^d = {S * x ** d}")
    grid = weyl_power_grid(x, d, M)
    quad = float(np.mean(np.abs(grid) ** S))
    return quad, mean_value_count(x, d, S)


# --- arcs -----------------------------------------------------------------

def dirichlet_approx(alpha: float, Q: int) -> Tuple[int, int]:
    """Best rational a/q with q <= Q and |alpha - a/q| <= 1/(qQ), gcd(a,q)=1.

    The final continued-fraction convergent with denominator <= Q.
    """
    if Q < 1:
        raise ValueError(f"Q must be >= 1, got {Q}")
    frac = Fraction(alpha) if not isinstance(alpha, Fraction) else alpha
    p_prev, q_prev = 1, 0
    p_cur, q_cur = int(math.floor(frac)), 1
    rem = frac - int(math.floor(frac))
    while rem != 0:
        rem = 1 / rem
        a = int(math.floor(rem))
        rem -= a
        p_nxt, q_nxt = a * p_cur + p_prev, a * q_cur + q_prev
        if q_nxt > Q:
            break
        p_prev, q_prev, p_cur, q_cur = p_cur, q_cur, p_nxt, q_nxt
    g = math.gcd(p_cur, q_cur)
    return p_cur // g if g else p_cur, q_cur // g if g else q_cur


@dataclass(frozen=True)
class ArcLabel:
    """Classification of a torus point by the smooth-weight witness."""

    kind: str                     # "major" or "minor"
    witness: float                # |mu_hat(alpha)|
    threshold: float              # x^(d - rho(d)/2)
    a: Optional[int] = None
    q: Optional[int] = None
    envelope: Optional[float] = None
    envelope_ratio: Optional[float] = None


def classify_arc(alpha: float, mu: SparseWeight, x: int, d: int,
                 Q: int = 1000) -> ArcLabel:
    """Label alpha minor when |mu_hat(alpha)| <= x^(d - rho(d)/2), else major.

    Major points get the rational witness (a, q) from the convergent with
    q <= Q and the envelope N * log(x) * q^(-1/d) * (1 + N|alpha - a/q|)^(-1/d).
    """
    witness = float(abs(sparse_transform(mu, np.array([alpha]))[0]))
    r = float(exponents.rho(d))
    threshold = x ** (d - r / 2)
    if witness <= threshold:
        return ArcLabel(kind="minor", witness=witness, threshold=threshold)
    a, q = dirichlet_approx(alpha, Q)
    N = mu.N
    envelope = (N * math.log(x) * q ** (-1.0 / d)
                * (1 + N * abs(alpha - a / q)) ** (-1.0 / d))
    return ArcLabel(kind="major", witness=witness, threshold=threshold,
                    a=a, q=q, envelope=envelope,
                    envelope_ratio=witness / envelope)


def g2_kernel(alpha: float, Q: int, N: int, d: int, kappa: float) -> float:
    """Rational-approximation kernel sum_{q<=Q} sum_{a<q}
    q^(-kappa/d) / (1 + N|sin(pi(alpha - a/q))|)^(kappa/d).

    |sin(pi t)| is comparable to the torus distance of t, making the kernel
    1-periodic and symmetric under alpha -> 1 - alpha.  The small epsilon
    tilt in the q-exponent is evaluated at 0.
    """
    if Q < 1:
        raise ValueError(f"Q must be >= 1, got {Q}")
    if kappa <= d:
        raise ValueError(f"kappa must exceed d, got kappa={kappa}, d={d}")
    expo = kappa / d
    total = 0.0
    for q in range(1, Q + 1):
        a = np.arange(q)
        terms = 1.0 / (1 + N * np.abs(np.sin(np.pi * (alpha - a / q)))) ** expo
        total += q ** (-expo) * float(terms.sum())
    return total
