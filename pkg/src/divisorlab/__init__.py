"""divisorlab: exact and analytic study of the divisor-square summatory sum.

Modules:
    sieve    segmented factorization sieve and exact prefix sums
    zeta     multiprecision zeta, Stieltjes constants, functional equation
    series   truncated Laurent arithmetic and residue coefficients
    zeros    zero-table ingestion and explicit-formula coefficients
    formula  explicit-formula assembly and error reports
    perron   contour quadrature verification
    cli      command-line interface
"""

__version__ = "0.1.0"
