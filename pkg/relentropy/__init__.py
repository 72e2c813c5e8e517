"""relentropy: finite-sample concentration bounds for the empirical relative entropy."""

from relentropy.bounds import conjecture_form_bound, lower_tail_bound, mean_upper_bound, \
    mgf_bound, moment_bound, subgamma_envelope, tail_bound, types_bound, upper_tail_bound, \
    variance_bound
from relentropy.config import config
from relentropy.divergence import CountVector, ProbabilityVector, empirical_kl, kl_divergence, \
    phi, phi_parts
from relentropy.inversion import confidence_radius, gof_pvalue, sample_size

__version__ = config.VERSION

__all__ = [
    'CountVector',
    'ProbabilityVector',
    'confidence_radius',
    'conjecture_form_bound',
    'empirical_kl',
    'gof_pvalue',
    'kl_divergence',
    'lower_tail_bound',
    'mean_upper_bound',
    'mgf_bound',
    'moment_bound',
    'phi',
    'phi_parts',
    'sample_size',
    'subgamma_envelope',
    'tail_bound',
    'types_bound',
    'upper_tail_bound',
    'variance_bound',
]
