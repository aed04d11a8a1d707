"""Desk-scale laboratory for Piatetski-Shapiro primes and circle-method experiments.

Subpackages:
    exponents   -- exact rational calculus for every admissibility exponent
    ps_core     -- exact floor-power sequence membership and prime sieving
    wtrick      -- small-modulus residue trick: majorants, liftings, weights
    expsum      -- exponential sums, FFT torus grids, arc classification
    diophantine -- solution counting and triviality classification
    cli         -- experiment orchestration and reproducible sweeps
"""

__version__ = "0.1.0"
