"""Solution counting and triviality classification for power systems.

A system is ``c_1 x_1^d + ... + c_s x_s^d = 0`` with nonzero integer
coefficients summing to zero (translation invariance).  A solution is
trivial relative to a union K of rational subspaces when its vector of
d-th powers (or, for lifted position sets, the raw vector) lies in one of
the subspaces; every subspace must contain the diagonal, so diagonal
tuples are always trivial.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

TABLE_BUDGET = 30_000_000  # max tabulated half-combinations


class NotTranslationInvariantError(ValueError):
    """Coefficients do not sum to zero."""


class DegenerateSystemError(ValueError):
    """A coefficient is zero (or too few variables)."""


class SplitRefusedError(MemoryError):
    """Tabulated half would exceed the memory budget."""


class EnumerationRefusedError(ValueError):
    """Subspace dimension too high for free-coordinate enumeration."""


@dataclass(frozen=True)
class EquationSystem:
    d: int
    coeffs: Tuple[int, ...]

    @property
    def s(self) -> int:
        return len(self.coeffs)


def validate_system(coeffs: Sequence[int], d: int) -> EquationSystem:
    """Accept the system iff all coefficients are nonzero and sum to zero."""
    coeffs = tuple(int(c) for c in coeffs)
    if d < 2:
        raise ValueError(f"degree must be >= 2, got {d}")
    if len(coeffs) < 3:
        raise DegenerateSystemError(f"need s >= 3 variables, got {len(coeffs)}")
    if any(c == 0 for c in coeffs):
        raise DegenerateSystemError("zero coefficient")
    if sum(coeffs) != 0:
        raise NotTranslationInvariantError(
            f"coefficients sum to {sum(coeffs)}, expected 0"
        )
    return EquationSystem(d=d, coeffs=coeffs)


# --- subspace unions -------------------------------------------------------

def _rank(rows: List[List[Fraction]]) -> int:
    """Rank over the rationals by Gaussian elimination."""
    mat = [row[:] for row in rows]
    rank = 0
    cols = len(mat[0]) if mat else 0
    for col in range(cols):
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = mat[rank][col]
        mat[rank] = [v / inv for v in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                factor = mat[r][col]
                mat[r] = [a - factor * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class Subspace:
    """Rational subspace given as the kernel of a constraint matrix."""

    rows: Tuple[Tuple[Fraction, ...], ...]

    @property
    def s(self) -> int:
        return len(self.rows[0])

    def contains(self, vec: Sequence) -> bool:
        vec = [Fraction(v) for v in vec]
        return all(sum(r * v for r, v in zip(row, vec)) == 0 for row in self.rows)

    def dimension(self) -> int:
        return self.s - _rank([list(r) for r in self.rows])


@dataclass(frozen=True)
class SubspaceUnion:
    subspaces: Tuple[Subspace, ...]

    @property
    def s(self) -> int:
        return self.subspaces[0].s

    def contains(self, vec: Sequence) -> bool:
        return any(sub.contains(vec) for sub in self.subspaces)

    def is_diagonal_only(self) -> bool:
        return all(sub.dimension() == 1 for sub in self.subspaces)


def make_subspace(rows: Sequence[Sequence], sys: EquationSystem) -> Subspace:
    """Validate and build one subspace of the coefficient hyperplane.

    Requirements: every constraint annihilates the all-ones vector
    (diagonal containment), the solution set lies inside the hyperplane
    (the coefficient vector is in the row span), and the subspace is a
    proper subspace of the hyperplane (constraint rank >= 2).
    """
    frows = [[Fraction(v) for v in row] for row in rows]
    s = sys.s
    if any(len(row) != s for row in frows):
        raise ValueError(f"constraint rows must have length {s}")
    for row in frows:
        if sum(row) != 0:
            raise ValueError(f"constraint {row} does not contain the diagonal")
    coeff_row = [Fraction(c) for c in sys.coeffs]
    base_rank = _rank(frows)
    if base_rank < 2:
        raise ValueError("subspace is not proper inside the hyperplane")
    if _rank(frows + [coeff_row]) != base_rank:
        raise ValueError("subspace does not lie inside the coefficient hyperplane")
    return Subspace(rows=tuple(tuple(row) for row in frows))


def diagonal_union(sys: EquationSystem) -> SubspaceUnion:
    """The minimal union: just the diagonal {all coordinates equal}."""
    s = sys.s
    rows = [[Fraction(0)] * s for _ in range(s - 1)]
    for i in range(s - 1):
        rows[i][i] = Fraction(1)
        rows[i][i + 1] = Fraction(-1)
    return SubspaceUnion(subspaces=(make_subspace(rows, sys),))


def parse_subspace_file(text: str, sys: EquationSystem) -> SubspaceUnion:
    """Parse the constraint-matrix format: one subspace per blank-line
    separated block, each line a row of rational constraint coefficients.
    """
    blocks: List[List[List[Fraction]]] = [[]]
    for line in text.splitlines():
        line = line.strip()
        if not line:
            if blocks[-1]:
                blocks.append([])
            continue
        if line.startswith("#"):
            continue
        blocks[-1].append([Fraction(tok) for tok in line.split()])
    blocks = [b for b in blocks if b]
    if not blocks:
        raise ValueError("no subspace blocks found")
    return SubspaceUnion(subspaces=tuple(make_subspace(b, sys) for b in blocks))


def is_K_trivial(x: Sequence[int], sys: EquationSystem, K: SubspaceUnion,
                 mode: str = "powers") -> bool:
    """Triviality of a solution: membership of its power vector in K.

    mode="powers" tests (x_1^d, ..., x_s^d) -- the convention for element
    sets; mode="raw" tests the coordinates themselves -- the convention
    for lifted position sets, where triviality passes through the affine
    rescaling.
    """
    if mode == "powers":
        vec = [xi ** sys.d for xi in x]
    elif mode == "raw":
        vec = list(x)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return K.contains(vec)


# --- enumeration -----------------------------------------------------------

@dataclass
class SolutionReport:
    total: int
    trivial: int
    nontrivial: int
    witnesses: List[Tuple[int, ...]] = field(default_factory=list)
    truncated: bool = False
    elapsed: float = 0.0


def _split_positions(sys: EquationSystem) -> Tuple[List[int], List[int]]:
    """Tabulated half gets the ceil(s/2) positions of largest |coefficient|."""
    order = sorted(range(sys.s), key=lambda i: (-abs(sys.coeffs[i]), i))
    half = (sys.s + 1) // 2
    return sorted(order[:half]), sorted(order[half:])


def enumerate_solutions(A: Iterable[int], sys: EquationSystem,
                        K: Optional[SubspaceUnion] = None,
                        cap: int = 100,
                        mode: str = "powers") -> SolutionReport:
    """Exact ordered-tuple solution counts over A^s, with classification.

    Meet-in-the-middle: the half of the coordinates carrying the largest
    coefficients is tabulated by partial sum (exact integer keys), the
    other half probes the table.  Witness collection stops at ``cap`` but
    counts stay exact.  For the diagonal-only union the trivial count is
    |A| by inspection, so only the total needs the table; general unions
    classify every enumerated solution.
    """
    start = time.time()
    elems = sorted({int(a) for a in A})
    if K is None:
        K = diagonal_union(sys)
    if K.s != sys.s:
        raise ValueError("K and the system disagree on the number of variables")
    if not elems:
        return SolutionReport(total=0, trivial=0, nontrivial=0)
    tab_pos, probe_pos = _split_positions(sys)
    n_tab = len(tab_pos)
    if len(elems) ** n_tab > TABLE_BUDGET:
        raise SplitRefusedError(
            f"{len(elems)}^{n_tab} tabulated combinations exceed the budget"
        )
    powers = {a: a ** sys.d for a in elems}
    diagonal_only = K.is_diagonal_only()

    if diagonal_only:
        total = _count_total(elems, powers, sys, tab_pos, probe_pos)
        trivial = len(elems)  # exactly the diagonal tuples
        report = SolutionReport(total=total, trivial=trivial,
                                nontrivial=total - trivial)
        if report.nontrivial > 0 and cap > 0:
            report.witnesses, report.truncated = _collect_nontrivial(
                elems, powers, sys, K, tab_pos, probe_pos, cap, mode)
        report.elapsed = time.time() - start
        return report

    # general union: classify every solution
    table: Dict[int, List[Tuple[int, ...]]] = {}
    for combo in itertools.product(elems, repeat=n_tab):
        key = sum(sys.coeffs[p] * powers[a] for p, a in zip(tab_pos, combo))
        table.setdefault(key, []).append(combo)
    total = trivial = 0
    witnesses: List[Tuple[int, ...]] = []
    truncated = False
    for combo in itertools.product(elems, repeat=len(probe_pos)):
        key = -sum(sys.coeffs[p] * powers[a] for p, a in zip(probe_pos, combo))
        for tab_combo in table.get(key, ()):
            full = [0] * sys.s
            for p, a in zip(tab_pos, tab_combo):
                full[p] = a
            for p, a in zip(probe_pos, combo):
                full[p] = a
            total += 1
            if is_K_trivial(full, sys, K, mode=mode):
                trivial += 1
            elif len(witnesses) < cap:
                witnesses.append(tuple(full))
            else:
                truncated = True
    return SolutionReport(total=total, trivial=trivial,
                          nontrivial=total - trivial, witnesses=witnesses,
                          truncated=truncated, elapsed=time.time() - start)


def _count_total(elems, powers, sys, tab_pos, probe_pos) -> int:
    """Exact total via sorted int64 arrays when safe, dict keys otherwise."""
    bound = max(abs(c) for c in sys.coeffs) * powers[elems[-1]] * sys.s
    if bound < 2 ** 62:
        arr = np.array([powers[a] for a in elems], dtype=np.int64)
        tab = np.zeros(1, dtype=np.int64)
        for p in tab_pos:
            tab = (tab[:, None] + sys.coeffs[p] * arr[None, :]).ravel()
        tab.sort()
        probe = np.zeros(1, dtype=np.int64)
        for p in probe_pos:
            probe = (probe[:, None] + sys.coeffs[p] * arr[None, :]).ravel()
        lo = np.searchsorted(tab, -probe, side="left")
        hi = np.searchsorted(tab, -probe, side="right")
        return int(np.sum(hi - lo))
    table: Dict[int, int] = {}
    for combo in itertools.product(elems, repeat=len(tab_pos)):
        key = sum(sys.coeffs[p] * powers[a] for p, a in zip(tab_pos, combo))
        table[key] = table.get(key, 0) + 1
    total = 0
    for combo in itertools.product(elems, repeat=len(probe_pos)):
        key = -sum(sys.coeffs[p] * powers[a] for p, a in zip(probe_pos, combo))
        total += table.get(key, 0)
    return total


def _collect_nontrivial(elems, powers, sys, K, tab_pos, probe_pos, cap, mode):
    """Second pass gathering up to cap nontrivial witnesses."""
    table: Dict[int, List[Tuple[int, ...]]] = {}
    for combo in itertools.product(elems, repeat=len(tab_pos)):
        key = sum(sys.coeffs[p] * powers[a] for p, a in zip(tab_pos, combo))
        table.setdefault(key, []).append(combo)
    witnesses: List[Tuple[int, ...]] = []
    for combo in itertools.product(elems, repeat=len(probe_pos)):
        key = -sum(sys.coeffs[p] * powers[a] for p, a in zip(probe_pos, combo))
        for tab_combo in table.get(key, ()):
            full = [0] * sys.s
            for p, a in zip(tab_pos, tab_combo):
                full[p] = a
            for p, a in zip(probe_pos, combo):
                full[p] = a
            if not is_K_trivial(full, sys, K, mode=mode):
                if len(witnesses) >= cap:
                    return witnesses, True
                witnesses.append(tuple(full))
    return witnesses, False


def enumerate_solutions_naive(A: Iterable[int], sys: EquationSystem,
                              K: Optional[SubspaceUnion] = None,
                              mode: str = "powers") -> SolutionReport:
    """Full s-fold loop oracle (small sets only)."""
    elems = sorted({int(a) for a in A})
    if K is None:
        K = diagonal_union(sys)
    total = trivial = 0
    witnesses = []
    for combo in itertools.product(elems, repeat=sys.s):
        if sum(c * a ** sys.d for c, a in zip(sys.coeffs, combo)) == 0:
            total += 1
            if is_K_trivial(combo, sys, K, mode=mode):
                trivial += 1
            elif len(witnesses) < 100:
                witnesses.append(combo)
    return SolutionReport(total=total, trivial=trivial,
                          nontrivial=total - trivial, witnesses=witnesses)


# --- structured weighted sums ----------------------------------------------

def k_trivial_weighted_sum(nu, sys: EquationSystem, K: SubspaceUnion,
                           eta_value: float,
                           budget: int = 10_000_000) -> Tuple[float, float]:
    """Weighted count over K against the structured-saving scale.

    Left: sum over integer points of K inside supp(nu)^s of the product
    of weights, enumerated by free coordinates (subspace dimension <= 2).
    Right: mass(nu)^s * N^(-(1+eta)).
    """
    left = 0.0
    for sub in K.subspaces:
        dim = sub.dimension()
        if dim == 1:
            left += sum(w ** sys.s for w in nu.weights.values())
        elif dim == 2:
            left += _dim2_weighted_sum(nu, sub, budget)
        else:
            raise EnumerationRefusedError(
                f"subspace dimension {dim} > 2; enumeration refused"
            )
    mass = nu.mass()
    right = mass ** sys.s * nu.N ** (-(1.0 + eta_value))
    return left, right


def _dim2_weighted_sum(nu, sub: Subspace, budget: int) -> float:
    """Enumerate a 2-dimensional subspace by two free support coordinates."""
    support = sorted(nu.weights)
    if len(support) ** 2 > budget:
        raise EnumerationRefusedError(
            f"{len(support)}^2 free-coordinate pairs exceed the budget"
        )
    s = sub.s
    # reduced row echelon form to solve for pivot coordinates
    mat = [list(row) for row in sub.rows]
    pivots: List[int] = []
    rank = 0
    for col in range(s):
        pr = next((r for r in range(rank, len(mat)) if mat[r][col] != 0), None)
        if pr is None:
            continue
        mat[rank], mat[pr] = mat[pr], mat[rank]
        inv = mat[rank][col]
        mat[rank] = [v / inv for v in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(s) if c not in pivots][:2]
    total = 0.0
    wmap = nu.weights
    for u in support:
        for v in support:
            assign = {free[0]: Fraction(u), free[1]: Fraction(v)}
            point = [Fraction(0)] * s
            ok = True
            for row, pc in zip(mat[:rank], pivots):
                val = -sum(row[fc] * assign[fc] for fc in free)
                if val.denominator != 1:
                    ok = False
                    break
                point[pc] = val
            if not ok:
                continue
            for fc in free:
                point[fc] = assign[fc]
            weight = 1.0
            for coord in point:
                w = wmap.get(int(coord), 0.0)
                if w == 0.0:
                    weight = 0.0
                    break
                weight *= w
            total += weight
    return total


# --- extremal-set experiment -----------------------------------------------

def _creates_nontrivial(a: int, elems: List[int], power_index: Dict[int, int],
                        sys: EquationSystem, K: SubspaceUnion) -> bool:
    """Would adding a to the set create a nontrivial solution?

    For each placement of a, the remaining coordinates except one are
    enumerated over the enlarged set and the last coordinate is solved via
    the power lookup.  O(s * |A|^(s-2)) per candidate, so cheap for s = 3.
    """
    d = sys.d
    a_pow = a ** d
    pool = elems + [a]
    pool_pows = [x ** d for x in pool]
    idx = dict(power_index)
    idx[a_pow] = a
    for pos in range(sys.s):
        rest = [p for p in range(sys.s) if p != pos]
        solve_pos, free_pos = rest[-1], rest[:-1]
        c_solve = sys.coeffs[solve_pos]
        base = sys.coeffs[pos] * a_pow
        for combo in itertools.product(range(len(pool)), repeat=len(free_pos)):
            residual = -base - sum(sys.coeffs[p] * pool_pows[i]
                                   for p, i in zip(free_pos, combo))
            if residual % c_solve != 0:
                continue
            target = residual // c_solve
            last = idx.get(target)
            if last is None:
                continue
            full = [0] * sys.s
            full[pos] = a
            for p, i in zip(free_pos, combo):
                full[p] = pool[i]
            full[solve_pos] = last
            if not is_K_trivial(full, sys, K):
                return True
    return False


def greedy_avoider(x: int, c, sys: EquationSystem,
                   K: Optional[SubspaceUnion] = None):
    """First-fit scan of the sequence primes up to x avoiding nontrivial
    solutions; returns (set, verification report, density envelope).

    The returned report re-verifies the set by independent meet-in-the-
    middle enumeration; its nontrivial count must be zero.
    """
    from . import exponents as expo
    from .ps_core import ps_primes

    if K is None:
        K = diagonal_union(sys)
    chosen: List[int] = []
    power_index: Dict[int, int] = {}
    for p in ps_primes(x, c).members:
        p = int(p)
        if not _creates_nontrivial(p, chosen, power_index, sys, K):
            chosen.append(p)
            power_index[p ** sys.d] = p
    report = enumerate_solutions(chosen, sys, K)
    bound = expo.density_bound(max(x, 3), sys.d, sys.s, c.c) if x >= 3 else None
    return chosen, report, bound
