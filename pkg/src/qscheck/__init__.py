"""Exact verification of q-congruence families and their p-adic shadows.

Everything here is exact: big-integer Laurent polynomials, canonical
rational functions, cyclotomic-power congruence tests, deterministic
grid certification of parametric identities, and residue arithmetic with
the p-adic Gamma.  No floats, no tolerances.
"""

from .cyclotomic import Verdict, congruent_mod_cyclotomic
from .harness import Report, SuiteSpec, run_suite
from .laurent import LaurentPoly
from .ratfunc import RationalFunc

__version__ = "0.1.0"

__all__ = [
    "LaurentPoly", "RationalFunc", "Verdict", "congruent_mod_cyclotomic",
    "Report", "SuiteSpec", "run_suite", "__version__",
]
