"""Laurent-data encoding of weight-one cohomology.

Residue pairings on truncated Laurent series, symplectic windows of H',
hyperelliptic Laurent data, elliptic periods and extended abelian
varieties.
"""

from .curves import (
    HyperellipticCurve,
    LaurentData,
    differential_basis,
    expand_at_infinity,
    k0_window,
    verify_annihilator_lemma,
    weierstrass_semigroup,
)
from .eav import (
    ExtendedAV,
    SiegelPoint,
    build_from_curve,
    de_extend,
    extend_from_tau,
    k_preimage,
    polarization_pairing,
    validate,
)
from .errors import LaurentDataError
from .periods import (
    LatticeLambda,
    PeriodData,
    branch_cycles,
    lambda_lattice,
    period_matrix,
    verify_classical_reciprocity,
)
from .series import (
    LaurentSeries,
    MultiLogForm,
    OneForm,
    antidifferentiate,
    differentiate,
    multivar_residue,
    residue_pair,
    series_invert,
    series_mul,
    series_sqrt,
)
from .window import (
    WindowSpec,
    WindowSubspace,
    annihilator,
    isotropy_check,
    quotient_gram,
    reduce_basis,
)

__version__ = "0.1.0"
