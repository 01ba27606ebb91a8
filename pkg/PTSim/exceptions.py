"""Custom exceptions for PTSim.

Every error derives from ``PTSimError``. ``DomainError`` marks numerical or
physical failures (CLI exit code 1); ``FormatError`` marks unreadable or
tampered input files (CLI exit code 2).
"""


class PTSimError(Exception):
    """Base class for all PTSim errors."""

    exit_code: int = 1


class DomainError(PTSimError):
    """A numerical or physical precondition does not hold."""

    exit_code = 1


class FormatError(PTSimError):
    """An input file cannot be parsed or fails its self-check."""

    exit_code = 2


# ==================== linalg ====================


class DimensionMismatch(DomainError, ValueError):
    """Raised when operand shapes are incompatible.

    Common causes:
        - Non-square matrix passed where a square one is required
        - H, P and T of a system file with different sizes
        - Coefficient vector length different from the frame dimension
    """

    pass


class SingularMatrix(DomainError):
    """Raised when a solve meets a numerically singular matrix.

    The reciprocal condition estimate fell below ``ToleranceConfig.cond_floor``
    (default 1e-12), or a frame is rank deficient.

    How to fix:
        - Check that the eigenvector frame Psi' has full rank
        - Move the model parameters away from an exceptional point
        - Loosen the floor via the config file if the input is known to be
          merely ill-conditioned:
            >>> ToleranceConfig(cond_floor=1e-14)
    """

    pass


class ConvergenceFailure(DomainError):
    """Raised when the eigenvalue iteration does not converge."""

    pass


class OverflowRisk(DomainError):
    """Raised when expm is asked to exponentiate a matrix with a huge norm.

    ``expm`` refuses inputs with 1-norm above ``ToleranceConfig.overflow_bound``
    (default 1e6); the result would overflow double precision long before
    squaring finishes.

    How to fix:
        - Shorten the evolution time t in exp(-itH)
        - Rescale the Hamiltonian units
    """

    pass


# ==================== pt-canonical ====================


class NotPTSymmetric(DomainError):
    """Raised when a system fails one of the defining PT relations."""

    pass


class UnsupportedStructure(DomainError):
    """Raised when H cannot be canonicalised by the supported paths.

    Supported inputs are diagonalizable Hamiltonians with well separated
    eigenvalue clusters (degenerate clusters only for real eigenvalues),
    the closed-form two-level Bender model, and caller-supplied frames.

    Common causes:
        - H is defective (non-trivial Jordan block); eigenvectors coalesce
        - A complex eigenvalue is degenerate
        - Two clusters are closer than ``cluster_gap * ||H||``

    How to fix:
        Supply the canonical frame yourself:
            >>> canonical_from_frame(H, psi_prime, J, S)
    """

    pass


class NegativeEpsilon(DomainError):
    """Raised when the metric forces a sign epsilon_i = -1.

    Only metrics whose canonical signs are all +1 are supported. A real
    eigenvalue cluster whose eta-Gram matrix is not positive definite has
    a negative sign.
    """

    pass


class ExceptionalPoint(DomainError):
    """Raised at an exceptional point (Delta = 0 in the Bender model).

    Eigenvalues and eigenvectors coalesce there and the canonical frame
    does not exist.
    """

    pass


class UnbrokenRegime(DomainError):
    """Raised when the closed-form broken-phase Bender model is requested
    with Delta > 0.

    How to fix:
        Canonicalise the same Hamiltonian with the generic path:
            >>> canonical_pair(PTSystem(H, P, T))
    """

    pass


# ==================== dilation ====================


class SingularFrame(DomainError):
    """Raised when S - Psi^dag Psi is numerically singular.

    How to fix:
        Rescale the frame first (the default ``rescale=True`` does this):
            >>> build_dilation(H, canon)  # routes through scale_frame
    """

    pass


class VerificationFailure(DomainError):
    """Raised when a constructed object fails its own identities.

    ``build_dilation`` and ``embed_unbroken`` check Hermiticity and the
    frame identities before returning. A failure indicates a conditioning
    breakdown; the message lists the offending residual.
    """

    pass


class IndexOutOfRange(DomainError, IndexError):
    """Raised when a 1-based frame index lies outside 1..n."""

    pass


InvalidIndex = IndexOutOfRange


class BrokenSymmetry(DomainError):
    """Raised when an embedding is requested for a broken-PT Hamiltonian.

    An isometric embedding with e^{-itH~} Psi~ = Psi~ e^{-itJ} exists only
    in the unbroken case. Use ``build_dilation`` instead.
    """

    pass


# ==================== weak-measurement ====================


class VanishingOverlap(DomainError):
    """Raised when |<phi_f|phi_i>| is below ``overlap_floor``.

    The weak value is undefined for orthogonal pre- and post-selection.
    """

    pass


class NullEtaNorm(DomainError):
    """Raised when <u|u>_eta vanishes and the eta-expectation is undefined."""

    pass


class NullDenominator(DomainError):
    """Raised when a_i conj(a_s(i)) + conj(a_i) a_s(i) vanishes in a collapse."""

    pass


# ==================== repro ====================


class RegimeViolation(DomainError):
    """Raised when a sweep leaves the broken regime or hits det(S - Psi^dag Psi) = 0."""

    pass


# ==================== files ====================


class MatrixFormatError(FormatError):
    """Raised when a matrix, system or setup file cannot be parsed."""

    pass


class BundleFormatError(FormatError):
    """Raised when a dilation bundle is malformed or fails its residual re-check.

    Bundles are self-verifying: any entry perturbed by more than about 1e-6
    breaks the frame identities or Hermiticity and the load is rejected.
    """

    pass


class ScenarioFormatError(FormatError):
    """Raised when a self-test scenario YAML is malformed or names an unknown check."""

    pass
