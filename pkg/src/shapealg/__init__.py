"""Exact tools for shape algebras of SL(3) and their quantum deformations.

Subpackages: ``scalars`` (Laurent coefficients), ``freealg`` (noncommutative
polynomials), ``rewrite`` (normal forms and bounded completion),
``presentations`` (built-in relation sets), ``weyl`` (Weyl group and
orthocells), ``repmod`` (U_q(sl3) modules), ``bialgebra`` (coproduct checks),
``oracle`` (independent dimension counts) and ``cli``.
"""

__version__ = "0.1.0"
