"""Exact combinatorial divisor theory on projective symmetric varieties.

The package decides, for divisors given by coefficients on colors and
G-stable rays of a colored fan, whether they are Cartier, globally
generated, nef, ample, effective or big, and computes effective cones,
big-cone membership, moment and weight polytopes, section highest weights,
decolorations, Q-factorializations and spherical closures.  All arithmetic
is exact rational.
"""

__version__ = "0.1.0"
