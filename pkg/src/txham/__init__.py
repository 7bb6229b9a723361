"""TX-state Hamiltonian of the silicon T centre.

Strain, Zeeman and Stark response of the bound-exciton hole over all 24
lattice orientations, with transition spectra, branching ratios and
least-squares parameter fitting.
"""

from .angular import BASIS_ORDER, JOperators, build_j_operators, j_cubed, sym_product
from .elasticity import (
    ComplianceConstants,
    PiezoTensorParams,
    piezo_shift,
    stress_for_direction,
    stress_to_strain,
)
from .errors import (
    DegenerateAxesError,
    InvalidStackError,
    ManifoldOverlapError,
    NonHermitianError,
    NonSymmetricStrainError,
    TxModelError,
    UnsupportedKindError,
    ZeroFieldError,
    ZeroTotalRateError,
)
from .fitting import (
    DataPoint,
    FitProblem,
    FitResult,
    FreeParameter,
    SpectralDataset,
    dataset_from_csv,
    dataset_to_csv,
    fit,
    objective,
    predict_dataset,
    residuals,
    synthesize_dataset,
)
from .hamiltonian import (
    CubicStarkParams,
    FieldConfig,
    HZ_PER_EV,
    MU_B_EV_PER_T,
    ModelParams,
    assemble_tx_hamiltonian,
    ground_zeeman_splitting,
    h_stark_acceptor_quadratic,
    h_strain,
    h_zeeman,
    internal_strain_tensor,
    stark_shift_linear,
    stark_shift_quadratic,
)
from .linalg import EigenSystem, congruence_transform, eig_hermitian_4
from .orientations import (
    OrientationFrame,
    OrientationSet,
    applied_tensor_to_defect,
    defect_tensor_to_crystal,
    enumerate_orientations,
    field_transform,
)
from .spectra import (
    BranchingRatio,
    DielectricLayer,
    DielectricStack,
    GroupingReport,
    SpinComposition,
    TransitionSet,
    degeneracy_grouping,
    effective_field,
    eigenvector_composition,
    field_rotation_sweep,
    hole_g_factor,
    radiative_branching_ratio,
    stark_sweep,
    total_stark_shift,
    transition_set,
    tx_doublet_lines,
)

__version__ = "0.1.0"
