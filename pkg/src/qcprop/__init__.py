"""Presented PROPs of quantum circuit fragments.

Exact semantics over Q(zeta_24), canonical forms modulo the structural
congruence, rule application and proof search, separating interpretations,
scalar bookkeeping and completeness transfer for six circuit fragments.
"""

__version__ = "0.1.0"

from .diagram import (  # noqa: F401
    CanonicalDiagram,
    circuit,
    par,
    parse,
    print_term,
    seq,
    to_canonical,
    to_term,
)
from .field import CycMatrix, CycQ  # noqa: F401
from .fragments import FRAGMENT_NAMES, load_fragment, soundness_check  # noqa: F401
from .semantics import eval_diagram  # noqa: F401
