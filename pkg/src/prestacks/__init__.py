"""Exact-arithmetic cohomology of prestacks.

Represents prestacks over finite base categories, builds the twisted
Gerstenhaber-Schack complex and the map-graded Hochschild complex of the
Grothendieck construction, and compares them via explicit chain maps and a
homotopy.  Second cohomology classifies first-order deformations over dual
numbers.
"""

__version__ = "0.1.0"
