"""Small-modulus residue trick: majorants, liftings, and comparison weights.

The modulus is ``W = 4*d^3 * prod(p <= w)`` with ``w = (1/2) log log x``,
so at desk scale the prime product is usually empty and a "toy" override
is provided to exercise a nontrivial W.  A residue ``b`` is admissible when
``-b`` is a d-th power of a unit mod W; restricting to one admissible class
and rescaling by ``n = (m^d + b)/W`` produces sparse weights on ``[N]``
with ``N = floor(x^d/W) + 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Set, Tuple

import numpy as np

from .ps_core import PSExponent, PSPrimeSet, ps_members


class UndefinedWError(ValueError):
    """x too small for w = (1/2) log log x to make sense."""


class InadmissibleResidueError(ValueError):
    """-b is not a d-th power of a unit mod W."""


class EmptyResidueSetError(ValueError):
    """No admissible residue exists for this (W, d)."""


def totient(n: int) -> int:
    if n < 1:
        raise ValueError("totient needs n >= 1")
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            result -= result // p
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        result -= result // m
    return result


@dataclass(frozen=True)
class WParams:
    x: int
    d: int
    w: float
    W: int
    N: int
    toy: bool = False

    @property
    def w_heuristic(self) -> float:
        """The heuristic size e^w = sqrt(log x)."""
        return math.sqrt(math.log(self.x))


def w_params(x: int, d: int, toy_w: Optional[int] = None) -> WParams:
    """Modulus W = 4d^3 * prod(p <= w) and window size N = floor(x^d/W)+1.

    ``toy_w`` overrides W directly (the prime product is empty below
    astronomically large x, so this is how experiments exercise larger
    moduli); the default follows the definition exactly.
    """
    if d < 2:
        raise ValueError(f"degree must be >= 2, got {d}")
    if x < 16:
        raise UndefinedWError(f"x must be >= 16 so log log x > 0, got {x}")
    w = 0.5 * math.log(math.log(x))
    if toy_w is not None:
        if toy_w < 2:
            raise ValueError(f"toy W must be >= 2, got {toy_w}")
        W = toy_w
        toy = True
    else:
        W = 4 * d ** 3
        p = 2
        while p <= w:
            if all(p % r for r in range(2, math.isqrt(p) + 1)):
                W *= p
            p += 1
        toy = False
    return WParams(x=x, d=d, w=w, W=W, N=x ** d // W + 1, toy=toy)


def dth_power_units(W: int, d: int) -> Set[int]:
    """{z^d mod W : gcd(z, W) = 1}."""
    if W < 2:
        raise ValueError(f"W must be >= 2, got {W}")
    return {pow(z, d, W) for z in range(1, W + 1) if math.gcd(z, W) == 1}


def power_counts(W: int, d: int) -> Dict[int, int]:
    """Multiplicity of each residue r as a d-th power: |{z in [W]: z^d = r}|."""
    counts: Dict[int, int] = {}
    for z in range(1, W + 1):
        r = pow(z, d, W)
        counts[r] = counts.get(r, 0) + 1
    return counts


def sigma(b: int, W: int, d: int) -> int:
    """|{z in [W] : z^d = -b mod W}| by direct enumeration."""
    if not (1 <= b <= W):
        raise ValueError(f"b must lie in [1, {W}], got {b}")
    target = (-b) % W
    return sum(1 for z in range(1, W + 1) if pow(z, d, W) == target)


def admissible_residues(W: int, d: int) -> List[int]:
    """All b in [W] with -b a d-th power of a unit mod W, increasing."""
    units = dth_power_units(W, d)
    out = []
    for b in range(1, W + 1):
        if (-b) % W in units:
            out.append(b)
    return out


def is_admissible(b: int, W: int, d: int) -> bool:
    return (-b) % W in dth_power_units(W, d)


@dataclass
class SparseWeight:
    """Nonnegative weight supported on a sparse subset of [N]."""

    N: int
    weights: Dict[int, float] = field(default_factory=dict)

    def mass(self) -> float:
        return float(sum(self.weights.values()))

    def support(self) -> List[int]:
        return sorted(self.weights)

    def arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        """(positions, values) sorted by position; positions must fit int64."""
        ns = sorted(self.weights)
        if ns and ns[-1] >= 2 ** 63:
            raise OverflowError("support positions exceed int64")
        pos = np.array(ns, dtype=np.int64)
        vals = np.array([self.weights[n] for n in ns], dtype=float)
        return pos, vals

    def __len__(self) -> int:
        return len(self.weights)


@dataclass
class Majorant(SparseWeight):
    """Prime-power majorant on [N] with its provenance metadata."""

    params: Optional[WParams] = None
    b: int = 0
    sigma_b: int = 0
    c: Optional[PSExponent] = None
    normalization: float = 0.0


def _class_of(p: int, d: int, W: int) -> int:
    """The admissible residue b in [W] hit by p: b = -p^d mod W."""
    b = (-pow(p, d, W)) % W
    return b if b else W


def build_majorant(A: Iterable[int], b: int, params: WParams,
                   c: PSExponent) -> Majorant:
    """Majorant weights (c*phi(W)/(sigma(b)*W)) * p^(d-1/c) * log p.

    Weight sits at n = (p^d + b)/W for each p in A lying in the class
    p^d = -b mod W; A must be a subset of the sequence primes up to x.
    """
    W, d = params.W, params.d
    sig = sigma(b, W, d)
    if sig == 0:
        raise InadmissibleResidueError(f"b = {b} has no d-th root of -b mod {W}")
    cf = c.p / c.q
    norm = cf * totient(W) / (sig * W)
    weights: Dict[int, float] = {}
    for p in A:
        p = int(p)
        if _class_of(p, d, W) != b:
            continue
        n = (p ** d + b) // W
        weights[n] = norm * p ** (d - 1.0 / cf) * math.log(p)
    return Majorant(N=params.N, weights=weights, params=params, b=b,
                    sigma_b=sig, c=c, normalization=norm)


def class_masses(A: Iterable[int], params: WParams,
                 c: PSExponent) -> Dict[int, float]:
    """Majorant mass for every admissible b, in one pass over A."""
    W, d = params.W, params.d
    counts = power_counts(W, d)
    cf = c.p / c.q
    phiW = totient(W)
    masses = {b: 0.0 for b in admissible_residues(W, d)}
    for p in A:
        p = int(p)
        b = _class_of(p, d, W)
        if b in masses:
            sig = counts[(-b) % W]
            masses[b] += cf * phiW / (sig * W) * p ** (d - 1.0 / cf) * math.log(p)
    return masses


def choose_b(A: Iterable[int], params: WParams,
             c: PSExponent) -> Tuple[int, float]:
    """Admissible b of maximal majorant mass (smallest b on ties).

    The chosen mass always meets the pigeonhole floor: it is at least the
    average mass over all admissible residues.
    """
    masses = class_masses(A, params, c)
    if not masses:
        raise EmptyResidueSetError(f"no admissible residue mod {params.W}")
    best = min(masses, key=lambda b: (-masses[b], b))
    assert masses[best] * len(masses) >= sum(masses.values()) - 1e-9
    return best, masses[best]


@dataclass(frozen=True)
class LiftedSet:
    """Positions n in [N] with W*n - b a d-th power of a source element."""

    b: int
    members: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.members)


def lift(A: Iterable[int], b: int, params: WParams) -> LiftedSet:
    """The lifting {n : W*n - b = p^d, p in A}, sorted."""
    W, d = params.W, params.d
    ns = sorted((int(p) ** d + b) // W for p in A
                if _class_of(int(p), d, W) == b)
    return LiftedSet(b=b, members=tuple(ns))


def unlift(lifted: LiftedSet, params: WParams) -> List[int]:
    """Recover the source elements p with p^d = W*n - b (exact roots)."""
    from .ps_core import floor_root_power

    W, d = params.W, params.d
    out = []
    for n in lifted.members:
        target = W * n - lifted.b
        p = floor_root_power(target, 1, d)
        if p ** d != target:
            raise ValueError(f"W*{n} - {lifted.b} is not a perfect {d}-th power")
        out.append(p)
    return out


def build_tau(x: int, c: PSExponent, d: int, b: int,
              params: WParams) -> SparseWeight:
    """Sequence-member weight (c/sigma(b)) * m^(d-1/c) on W*n - b = m^d.

    Like the majorant but over all sequence members m, not only primes,
    and without the phi(W)/W and log factors.
    """
    W = params.W
    sig = sigma(b, W, d)
    if sig == 0:
        raise InadmissibleResidueError(f"b = {b} has no d-th root of -b mod {W}")
    cf = c.p / c.q
    weights: Dict[int, float] = {}
    for m in ps_members(x, c):
        if _class_of(m, d, W) != b:
            continue
        n = (m ** d + b) // W
        weights[n] = (cf / sig) * m ** (d - 1.0 / cf)
    return SparseWeight(N=params.N, weights=weights)


def build_mu(x: int, d: int, b: int, params: WParams) -> SparseWeight:
    """Smooth comparison weight m^(d-1)/sigma(b) on W*n - b = m^d, m <= x."""
    W = params.W
    sig = sigma(b, W, d)
    if sig == 0:
        raise InadmissibleResidueError(f"b = {b} has no d-th root of -b mod {W}")
    target = (-b) % W
    residues = [z for z in range(1, W + 1) if pow(z, d, W) == target]
    weights: Dict[int, float] = {}
    for z in residues:
        for m in range(z, x + 1, W):
            n = (m ** d + b) // W
            weights[n] = weights.get(n, 0.0) + m ** (d - 1) / sig
    return SparseWeight(N=params.N, weights=weights)


def density_delta(count: int, c: PSExponent, x: int) -> float:
    """The transfer density delta = |A|^c * log(x)^c / x."""
    cf = c.p / c.q
    return count ** cf * math.log(x) ** cf / x
