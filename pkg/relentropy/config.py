"""Configuration module for relentropy.

Holds numeric tolerances, search limits and harness defaults in one place.
The only environment variable consulted is NO_COLOR; everything else is a
code default that callers override per call with keyword arguments.
"""

import os


class Config(object):
    """Application configuration."""

    VERSION = '1.0.0'

    # Probability vectors
    PROB_TOL = 1e-12

    # Exact oracle
    ATOM_MERGE_TOL = 1e-13
    ENUMERATION_BUDGET = 10 ** 7
    ENUMERATION_CHUNK = 20000

    # Bounds
    BOUNDARY_GUARD = 1e-9

    # Inversion
    BISECTION_MAX_ITER = 200
    BISECTION_RTOL = 1e-9

    # Monte Carlo
    MC_CONFIDENCE = 0.999
    MC_BOOTSTRAP_RESAMPLES = 400
    MC_BLOCK_SIZE = 50000

    # Certification tolerances
    CERT_TOL_MGF = 1e-10
    CERT_TOL_TAIL = 1e-12
    CERT_TOL_MARGIN = 1e-12

    # Runtime
    THREADS = os.cpu_count() or 1
    NO_COLOR = 'NO_COLOR' in os.environ

    @classmethod
    def validate(cls):
        """Validate that the configured values are usable.

        Returns:
            tuple: (is_valid, problems)
        """
        problems = []
        positive = [
            'PROB_TOL',
            'ATOM_MERGE_TOL',
            'ENUMERATION_BUDGET',
            'ENUMERATION_CHUNK',
            'BOUNDARY_GUARD',
            'BISECTION_MAX_ITER',
            'BISECTION_RTOL',
            'MC_BOOTSTRAP_RESAMPLES',
            'MC_BLOCK_SIZE',
            'THREADS',
        ]
        for key in positive:
            if not getattr(cls, key, 0) > 0:
                problems.append('{} must be positive'.format(key))

        if not 0.0 < cls.MC_CONFIDENCE < 1.0:
            problems.append('MC_CONFIDENCE must lie in (0, 1)')

        return len(problems) == 0, problems

    @classmethod
    def to_dict(cls):
        """Convert config to dictionary (for report echoes).

        Returns:
            dict: Configuration values keyed by attribute name
        """
        return {key: getattr(cls, key) for key in sorted(dir(cls)) if key.isupper()}


# Create singleton instance
config = Config()
