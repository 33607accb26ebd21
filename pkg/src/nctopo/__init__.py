"""nctopo: spectral and combinatorial topology toolkit.

Subpackages cover set-partition lattices and Mobius functions, exact scalar
moment-cumulant transforms for the four independences, abstract simplicial
complexes with signed boundary matrices, dense symmetric eigensolving and
spectral Betti numbers, exact Smith normal forms, rooted-graph walk
cumulants, Cech/Vietoris-Rips Betti curves with F2 persistence, and
deterministic random-matrix point-cloud generators.  The ``nctopo`` CLI
wires the pieces together.
"""

__version__ = "0.1.0"
