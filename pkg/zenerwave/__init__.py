"""Wave propagation in complex-order fractional Zener rods.

zenerwave checks the thermodynamic restrictions on the coefficients of the
complex-order fractional Zener law, evaluates the complex modulus and the wave
function M(s), inverts the Laplace-domain solution of the rod problem by
oscillatory quadrature and cross-checks the result against a Grünwald-Letnikov
discretisation of the constitutive law.

The main entry point is the CLI module, which runs JSON run specs and writes
CSV, plot-data and manifest files.
"""

__all__ = ["__version__"]
__version__ = "0.1.0"
