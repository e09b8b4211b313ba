"""Squeezing of SU(1,1) coherent states under H = 2 omega K_z + 2 lambda K_x."""
from su11squeeze._version import __version__
from su11squeeze.bgcs import (
    BgcsParams,
    bgcs_strong_coupling_window,
    bgcs_transport,
    bgcs_variances,
    bgcs_variances_strong,
    bgcs_variances_weak,
    bgcs_zero_intensity_factors,
)
from su11squeeze.errors import (
    ConvergenceFailure,
    NumericalOverflowError,
    SqueezeError,
    TruncationInsufficient,
)
from su11squeeze.fock import (
    FockBasisSpec,
    FockVector,
    adaptive_truncation,
    bgcs_fock_vector,
    build_generators,
    evolve,
    expectations,
    oracle_moments,
    pcs_fock_vector,
)
from su11squeeze.hamiltonian import (
    CouplingParams,
    MomentState,
    PropagatorCoefficients,
    Regime,
    adjoint_matrix,
    classify_regime,
    coefficients,
    propagate_moments,
    transport_matrix,
)
from su11squeeze.kernels import BACKEND
from su11squeeze.pcs import (
    PcsParams,
    SqueezingReport,
    pcs_initial_factors,
    pcs_resonance_variances,
    pcs_squeeze_condition,
    pcs_strong_coupling_exponents,
    pcs_transport,
    pcs_variances,
    pcs_weak_coupling_check,
)
from su11squeeze.scan import GridSpec, Profile, RegionMap, figure, scan_plane
from su11squeeze.special import bessel_i, bessel_i_ratio, log_gamma

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
