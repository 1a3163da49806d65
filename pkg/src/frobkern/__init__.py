"""frobkern: representation theory of Frobenius kernels at desk scale.

Two layers.  The combinatorial layer (weightcomb, gacohom) evaluates
closed-form results: blocks, complexity, depth, projective height, Heller
orbits, periods, cohomology dimensions.  The oracle layer (fplinalg,
algrep, sl2dist) computes the same quantities from explicit modules over
finite-dimensional algebras in exact F_p arithmetic, so every formula can
be checked against an independent machine computation.
"""

DEFAULT_SEED = 0xF0B

__version__ = "0.1.0"
