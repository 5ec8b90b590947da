"""Arithmetic of prime splitting and residue-field fibres over a field lattice.

The package models a user-declared lattice of monogenic number fields
(defining polynomials plus embedding and automorphism maps), factors primes
through it, realizes each prime's residue field as an explicit finite field
with a naming homomorphism, and builds the norm/projection structure between
fibres.  On top of that sit definable membership predicates, Galois actions
on split primes, and empirical natural-density scans with exact
Chebotarev-style predictions where the declared data supports them.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import ArithPlaneError

__all__ = ["ArithPlaneError", "__version__"]
