"""
Classification of the coupling regimes of the quantum Rabi model into
perturbative ultrastrong, non-perturbative and perturbative deep-strong
regions, together with the exact and approximate spectra, static
observables and dynamics the classification is validated against.
"""
import itertools

from .boundaries import *  # noqa
from .common import *  # noqa
from .core import *  # noqa
from .dynamics import *  # noqa
from .eigensolve import *  # noqa
from .exception import *  # noqa
from .observables import *  # noqa
from .output import *  # noqa
from .perturbative import *  # noqa
from .scan import *  # noqa
from .special import *  # noqa
from .util import *  # noqa

__all__ = tuple(itertools.chain(
    ('bin', 'typing'),
    boundaries.__all__,  # noqa
    common.__all__,  # noqa
    core.__all__,  # noqa
    dynamics.__all__,  # noqa
    eigensolve.__all__,  # noqa
    exception.__all__,  # noqa
    observables.__all__,  # noqa
    output.__all__,  # noqa
    perturbative.__all__,  # noqa
    scan.__all__,  # noqa
    special.__all__,  # noqa
    util.__all__,  # noqa
))

__status__ = 'Beta'
__version__ = '1.0.0'
