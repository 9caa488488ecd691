"""Exception types raised across the package.

Every error carries enough context (dimension, residual, offending value)
to diagnose the failure without re-running the computation.
"""

from __future__ import annotations


class EntrospecError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(EntrospecError):
    """A density-matrix invariant failed."""


class NotHermitian(ValidationError):
    def __init__(self, residual: float, tol: float):
        self.residual = residual
        self.tol = tol
        super().__init__(
            f"matrix is not Hermitian: max |M - M^*| = {residual:.3e} "
            f"exceeds tolerance {tol:.1e}"
        )


class NotPositiveSemidefinite(ValidationError):
    def __init__(self, min_eigenvalue: float, tol: float):
        self.min_eigenvalue = min_eigenvalue
        self.tol = tol
        super().__init__(
            f"matrix is not positive semidefinite: smallest eigenvalue "
            f"{min_eigenvalue:.3e} is below -{tol:.1e}"
        )


class TraceNotOne(ValidationError):
    def __init__(self, trace: float, tol: float):
        self.trace = trace
        self.tol = tol
        super().__init__(
            f"trace is {trace!r}, differs from 1 by more than {tol:.1e}"
        )


class NoConvergence(EntrospecError):
    """Iterative eigensolver failed to reach its threshold."""

    def __init__(self, sweeps: int, off_norm: float, tol: float):
        self.sweeps = sweeps
        self.off_norm = off_norm
        self.tol = tol
        super().__init__(
            f"Jacobi iteration did not converge after {sweeps} sweeps: "
            f"off-diagonal norm {off_norm:.3e} > {tol:.1e}"
        )


class SingularSample(EntrospecError):
    """A random draw produced a degenerate object (e.g. rank-deficient QR)."""


class LambdaOutOfRange(EntrospecError):
    """Mixing parameter outside the domain of the requested quantity."""

    def __init__(self, lam: float, domain: str):
        self.lam = lam
        self.domain = domain
        super().__init__(f"lambda = {lam!r} is outside {domain}")


class SingularEndpoint(EntrospecError):
    """Quantity undefined at this endpoint (division by lambda, log of 0)."""

    def __init__(self, lam: float, what: str):
        self.lam = lam
        self.what = what
        super().__init__(f"{what} is undefined at lambda = {lam!r}")


class DimensionMismatch(EntrospecError):
    def __init__(self, n_left: int, n_right: int):
        self.n_left = n_left
        self.n_right = n_right
        super().__init__(
            f"states live in different dimensions: {n_left} vs {n_right}"
        )


class SpectraMismatch(EntrospecError):
    """A unitary witness was requested for spectrally distinct states."""

    def __init__(self, distance: float, tol: float):
        self.distance = distance
        self.tol = tol
        super().__init__(
            f"no unitary witness exists: sorted spectra differ by "
            f"{distance:.3e}, more than {tol:.1e}"
        )


class WitnessInconsistency(EntrospecError):
    """Entropy comparison called two states equivalent but their spectra
    disagree: the entropy tolerance is too loose for the spectrum tolerance.
    """

    def __init__(self, max_gap: float, distance: float):
        self.max_gap = max_gap
        self.distance = distance
        super().__init__(
            f"entropy gaps (max {max_gap:.3e} bits) are inside tolerance but "
            f"spectra differ by {distance:.3e}; tolerances are misconfigured"
        )


class BadNodeCount(EntrospecError):
    def __init__(self, got: int, needed: int):
        self.got = got
        self.needed = needed
        super().__init__(
            f"finite node test needs at least {needed} distinct nodes in "
            f"(0, 1], got {got}"
        )


class OracleDomain(EntrospecError):
    """Entropy oracle was queried outside its declared domain."""

    def __init__(self, lam: float, domain: str):
        self.lam = lam
        self.domain = domain
        super().__init__(f"oracle queried at lambda = {lam!r}, outside {domain}")


class IllConditioned(EntrospecError):
    """Least-squares fit residual too large to trust the coefficients."""

    def __init__(self, residual: float, bound: float):
        self.residual = residual
        self.bound = bound
        super().__init__(
            f"polynomial fit residual {residual:.3e} exceeds {bound:.1e}; "
            f"samples are inconsistent with a degree-n determinant curve"
        )


class ComplexRoots(EntrospecError):
    """Recovered polynomial has roots too far from the real axis."""

    def __init__(self, max_imag: float, tol: float):
        self.max_imag = max_imag
        self.tol = tol
        super().__init__(
            f"fitted polynomial has a root with |imag| = {max_imag:.3e} "
            f"(tolerance {tol:.1e}); cannot map to a real spectrum"
        )


class DegreeDeficit(EntrospecError):
    """Root finding returned fewer roots than the trimmed degree requires."""

    def __init__(self, got: int, expected: int):
        self.got = got
        self.expected = expected
        super().__init__(
            f"expected {expected} polynomial roots, found {got}"
        )


class ParseError(EntrospecError):
    """Matrix file or CLI input could not be parsed."""
