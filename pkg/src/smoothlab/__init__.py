"""smoothlab: a numerical laboratory for moduli of smoothness and for
Besov / Lizorkin-Triebel norms, including their uniformly-localized
versions, on grid-sampled functions."""

from .config import RunConfig
from .errors import (ConfigError, DegenerateScaleWarning, DomainMarginError,
                     EmptyDomainError, GridMismatchError, LatticeError,
                     SmoothlabError, SmoothnessTagError)
from .grid import (GridFunction, GridOffset, Region, check_leibniz1,
                   check_leibniz2, check_telescoping, diff1, diff2, multiply,
                   sample, translate)
from .norms import (BESOV, LIZORKIN_TRIEBEL, NormFunctional, SmoothnessParams,
                    TQuadrature, TranslationLattice, besov1_lu_intrinsic,
                    besov1_seminorm, besov_base, besov_lu_intrinsic,
                    besov_seminorm, deriv_central, eta, graded_base, lp_base,
                    lp_lu_norm, lp_norm, modulus_profiles, omega,
                    sobolev1_base, sobolev_norm, tl_base, tl_lu_intrinsic,
                    tl_pointwise, tl_seminorm)
from .testlab import (GeneratedFunction, MonotoneSequence, check_malpha,
                      check_marchaud, default_corpus,
                      estimate_smoothness_slope, generate,
                      oracle_omega_bruteforce, random_monotone_sequence)
from .verify import (EquivalenceReport, run_all, run_equivalence,
                     run_identities, run_malpha, run_marchaud, spread_of)
from .windows import (BumpWindow, make_window, window_independence_ratio,
                      windowed_lu_norm)

__version__ = "0.1.0"
