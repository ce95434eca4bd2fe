"""Local quantum Fisher information and local quantum uncertainty for 2 x d states."""

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    DomainError,
    InvalidInput,
    InvalidSpec,
    NonHermitianInput,
    NotPositive,
    NumericalError,
    QcorrError,
    RankDeficient,
    SizeTooLarge,
    ZeroFisher,
    ZeroTrace,
)
from .models import (
    AnisotropicXYParams,
    ChainParams,
    IsotropicFieldParams,
    chain_hamiltonian,
    gibbs_state,
    paper_lqfi_anisotropic,
    paper_lqfi_isotropic_field,
    paper_lqu_anisotropic,
    paper_lqu_isotropic_field,
    xy_anisotropic_state,
    xy_isotropic_field_state,
)
from .quantifiers import (
    BlochDirection,
    Convention,
    CorrelationReport,
    audit_inequalities,
    correlation_report,
    cramer_rao_bound,
    lqfi,
    lqu,
    matrix_m,
    matrix_w,
    qfi,
    qfi_local,
    skew_information,
)
from .spectral import DensityMatrix, SpectralDecomposition, eigh, kron, make_density, spectral_fn

__version__ = "0.1.0"
