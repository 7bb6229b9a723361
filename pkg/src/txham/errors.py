"""Exception types raised by the model layers."""


class TxModelError(Exception):
    """Base class for all model-domain failures."""


class NonHermitianError(TxModelError):
    """Matrix handed to the eigensolver violates the Hermiticity tolerance."""


class NonSymmetricStrainError(TxModelError):
    """Strain or stress tensor is not symmetric."""


class ManifoldOverlapError(TxModelError):
    """TX0 and TX1 eigenvalue windows interleave; doublet selection is invalid."""


class ZeroFieldError(TxModelError):
    """Operation requires a nonzero magnetic field."""


class ZeroTotalRateError(TxModelError):
    """Both spin-1/2 projections of the selected excited state vanish."""


class DegenerateAxesError(TxModelError):
    """Sweep axes are zero or (anti)parallel."""


class InvalidStackError(TxModelError):
    """Dielectric stack is empty or contains nonphysical layers."""


class UnsupportedKindError(TxModelError):
    """No predictor exists for this dataset kind."""
