"""Exact mirror-symmetry computations for compact toric orbifolds.

The package computes twisted-sector (Box) data of stacky fans, I-functions
and mirror maps of toric orbifolds, Hori-Vafa and Lagrangian Floer
superpotentials, open Gromov-Witten invariants of basic disc classes, and
verifies open crepant-resolution identities for weighted projective spaces
P(1,...,1,n) against their canonical-bundle resolutions.

All combinatorial and series computations are exact (big integers and
rationals); floating point enters only in the analytic-continuation and
numeric sampling layers.
"""

__version__ = "0.1.0"
