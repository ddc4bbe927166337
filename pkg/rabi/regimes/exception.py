"""
Contains all exceptions used by the regime classification toolkit.
"""
from typing import Optional

__all__ = (
    'RegimesError',
    'InternalError',
    'ContractError',
    'ParityError',
    'DomainError',
    'BoundaryDomainError',
    'SolverError',
    'TruncationError',
    'ThresholdTooLargeError',
    'SingularSensitivityError',
    'FitError',
)


class RegimesError(Exception):
    """
    General error of this package. All other exceptions are derived
    from this class.
    """


class InternalError(RegimesError):
    """
    The toolkit reached a state that should be impossible (e.g. a
    point classified as both perturbative regions). Always report
    occurrences of this error!
    """


class ContractError(RegimesError, ValueError):
    """
    A precondition or invariant of a value or operation has been
    violated, such as negative frequencies, an asymmetric matrix or
    states of different dimension.
    """


class ParityError(ContractError):
    """
    A state of definite parity was required but the state spreads
    over both parity chains.
    """


class DomainError(ContractError):
    """
    A closed-form expression has been evaluated outside of the
    parameter range it has been derived for.
    """


class BoundaryDomainError(DomainError):
    """
    The pUSC boundary energy has been requested for a coupling outside
    of ``(0, 1/sqrt(2)]``.

    Arguments:
        - `g_over_omega`: The offending coupling ratio.
    """
    def __init__(self, g_over_omega: float) -> None:
        self.g_over_omega = g_over_omega

    def __str__(self) -> str:
        return ('pUSC boundary undefined at g/omega = {!r} '
                '(domain is (0, 1/sqrt(2)])').format(self.g_over_omega)


class SolverError(RegimesError):
    """
    An eigensolver did not converge within its iteration limit.

    Arguments:
        - `index`: The index of the eigenvalue that failed to
          converge.
        - `iterations`: The number of iterations spent on it.
    """
    def __init__(self, index: int, iterations: int) -> None:
        self.index = index
        self.iterations = iterations

    def __str__(self) -> str:
        return 'Eigenvalue #{} did not converge after {} iterations'.format(
            self.index, self.iterations)


class TruncationError(RegimesError):
    """
    The photon-number cutoff is too small for the requested result,
    either because an eigenvector carries too much weight on the top
    Fock levels or because the cutoff would exceed the hard cap.

    Arguments:
        - `n_max`: The cutoff at which the problem was detected.
        - `tail`: The offending tail probability (if any).
        - `reason`: A short description.
    """
    def __init__(self, n_max: int, reason: str, tail: Optional[float] = None) -> None:
        self.n_max = n_max
        self.reason = reason
        self.tail = tail

    def __str__(self) -> str:
        if self.tail is None:
            return 'Truncation n_max={} insufficient: {}'.format(self.n_max, self.reason)
        return 'Truncation n_max={} insufficient: {} (tail={:.3e})'.format(
            self.n_max, self.reason, self.tail)


class ThresholdTooLargeError(RegimesError):
    """
    The degeneracy threshold exceeds the last maximum of the scaled
    Laguerre envelope, so no crossing beyond that maximum exists.

    Arguments:
        - `n`: The oscillator index.
        - `delta_th`: The requested threshold.
        - `maximum`: The value of the last maximum.
    """
    def __init__(self, n: int, delta_th: float, maximum: float) -> None:
        self.n = n
        self.delta_th = delta_th
        self.maximum = maximum

    def __str__(self) -> str:
        return ('No pDSC crossing for n={}: threshold {} exceeds the last maximum '
                '{:.6g}').format(self.n, self.delta_th, self.maximum)


class SingularSensitivityError(RegimesError):
    """
    The derivative of the degeneracy condition vanishes at the given
    root, so the first-order shift is undefined.
    """


class FitError(RegimesError):
    """
    The least-squares design matrix is rank deficient.
    """
