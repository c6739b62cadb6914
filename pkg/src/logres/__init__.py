"""Exact toolkit for blow-up resolutions of coordinate-subspace configurations
and logarithmic differential forms on simple normal crossing pairs.

All arithmetic is exact: scalars are arbitrary-precision rationals, polynomials
are sparse with rational coefficients, and every certificate produced by the
package is an exact algebraic identity (no floating point anywhere).
"""

__version__ = "0.1.0"
