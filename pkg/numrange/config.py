import logging
import os
from contextlib import contextmanager

import chanfig

from . import defaults
from .errors import InvalidInputError

SEED_ENV = "NUMRANGE_SEED"


class RunConfig(chanfig.Config):
    """Parameters of one run.

    Every report embeds ``config.dict()`` so a run can be repeated from its
    artifacts alone.

    Attributes:
        n (int): range dimension.
        seed (int): master seed; all streams are derived from it.
        samples (int): Haar samples per cloud.
        restarts (int): Stiefel ascent restarts per direction.
        epsilon (float or None): cone radius, adaptive when None.
        delta_min (float): cone constant threshold in ``(0, 1]``.
        directions (int): boundary directions used to pick corner candidates and
            to sharpen clouds.
        exterior_count (int): random exterior probes per column.
        refine (bool): sharpen clouds with support maximizers.
        workers (int): threads for sampling, restarts and cone tests.
        suite_directions (int): directions per property check.
        suite_compressions (int): random compressions checked for inclusion.
        tolerances (dict): overrides of the tolerances in :mod:`numrange.defaults`.
    """

    def __init__(self, *args, **kwargs):
        super().__init__()
        self.n = 1
        self.seed = 0
        self.samples = defaults.SAMPLES
        self.restarts = defaults.RESTARTS
        self.epsilon = None
        self.delta_min = defaults.DELTA_MIN
        self.directions = defaults.DIRECTIONS
        self.exterior_count = defaults.EXTERIOR_COUNT
        self.refine = True
        self.workers = 1
        self.suite_directions = defaults.SUITE_DIRECTIONS
        self.suite_compressions = defaults.SUITE_COMPRESSIONS
        self.tolerances = {}
        if args or kwargs:
            self.merge(*args, **kwargs)

    @classmethod
    def from_file(cls, path, **overrides):
        """Load from a JSON or YAML file, then apply non-None ``overrides``."""
        config = cls(chanfig.load(path).dict())
        config.merge({k: v for k, v in overrides.items() if v is not None})
        return config

    def apply_env(self, environ=None):
        """Let ``NUMRANGE_SEED`` override the seed."""
        environ = os.environ if environ is None else environ
        value = environ.get(SEED_ENV)
        if value not in (None, ""):
            try:
                self.seed = int(value, 0)
            except ValueError as e:
                raise InvalidInputError(f"{SEED_ENV} must be an integer, got {value!r}") from e
            logging.getLogger(__name__).info("seed %d taken from %s", self.seed, SEED_ENV)
        return self

    def check(self):
        """Raise :class:`InvalidInputError` on non-positive counts or ``delta_min`` outside ``(0, 1]``."""
        for name in ("n", "samples", "restarts", "directions", "workers", "suite_directions", "suite_compressions"):
            value = self.get(name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise InvalidInputError(f"{name} must be a positive integer, got {value!r}")
        if not isinstance(self.exterior_count, int) or self.exterior_count < 0:
            raise InvalidInputError(f"exterior_count must be a non-negative integer, got {self.exterior_count!r}")
        if not 0 < float(self.delta_min) <= 1:
            raise InvalidInputError(f"delta_min must lie in (0, 1], got {self.delta_min}")
        if self.epsilon is not None and not float(self.epsilon) > 0:
            raise InvalidInputError(f"epsilon must be positive, got {self.epsilon}")
        for key, value in self.tolerances.items():
            if key not in defaults.TOLERANCE_KEYS:
                known = ", ".join(defaults.TOLERANCE_KEYS)
                raise InvalidInputError(f"unknown tolerance {key!r}, expected one of {known}")
            if not float(value) > 0:
                raise InvalidInputError(f"tolerance {key} must be positive, got {value}")
        return self

    def tolerance(self, name):
        return float(self.tolerances.get(name, getattr(defaults, name)))

    @contextmanager
    def applied_tolerances(self):
        """Temporarily install the tolerance overrides in :mod:`numrange.defaults`."""
        saved = {}
        try:
            for key, value in self.tolerances.items():
                saved[key] = getattr(defaults, key)
                setattr(defaults, key, float(value))
            yield self
        finally:
            for key, value in saved.items():
                setattr(defaults, key, value)


def as_config(config=None, **kwargs):
    """Coerce ``None``, a mapping or a :class:`RunConfig` into a checked :class:`RunConfig`."""
    if isinstance(config, RunConfig):
        out = config
        if kwargs:
            out = RunConfig(config.dict())
            out.merge(kwargs)
    else:
        out = RunConfig(dict(config or {}), **kwargs)
    return out.check()
