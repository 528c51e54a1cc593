# -*- coding: utf-8 -*-

# stdlib
import os

# pypi
from pyramid.exceptions import ConfigurationError
from pyramid.settings import asbool

# local
from .evaluator import DEFAULT_FUEL
from .runtime import DEFAULT_MAX_STEPS


# ==============================================================================


SETTINGS_PREFIX = "semp."

configs_bool = ("color", "randomize", "trace", "json", "check_errors")
configs_int = ("fuel", "max_steps")
configs_int_none = ("seed",)

DEFAULTS = {
    "color": True,
    "fuel": DEFAULT_FUEL,
    "max_steps": DEFAULT_MAX_STEPS,
    "randomize": False,
    "seed": None,
    "trace": False,
    "json": False,
    "check_errors": False,
}

# environment variable -> setting key
ENVIRON_KEYS = {
    "SEMP_COLOR": "semp.color",
    "SEMP_FUEL": "semp.fuel",
    "SEMP_MAX_STEPS": "semp.max_steps",
    "SEMP_CHECK_ERRORS": "semp.check_errors",
}


# ------------------------------------------------------------------------------


def settings_from_environ(environ=None):
    """
    The `semp.*` settings found in the environment.

    :param environ: dict, defaults to ``os.environ``
    """
    if environ is None:
        environ = os.environ
    return {key: environ[var] for (var, key) in ENVIRON_KEYS.items() if var in environ}


def _parse_settings(settings):
    """
    Convenience function to collect settings prefixed by 'semp.' and
    coerce settings to ``int`` and ``bool`` as needed. Missing keys get
    their defaults.

    :param settings: dict
    """
    keys = [s for s in settings if s.startswith(SETTINGS_PREFIX)]

    options = dict(DEFAULTS)

    for k in keys:
        param = k[len(SETTINGS_PREFIX) :]
        if param not in DEFAULTS:
            raise ConfigurationError("unknown setting `%s`" % k)
        options[param] = settings[k]

    # coerce bools
    for b in configs_bool:
        options[b] = asbool(options[b])

    # coerce ints
    for i in configs_int:
        try:
            options[i] = int(options[i])
        except (TypeError, ValueError):
            raise ConfigurationError(
                "`semp.%s` must be an integer, not %r" % (i, options[i])
            )
        if options[i] <= 0:
            raise ConfigurationError("`semp.%s` must be positive" % i)

    # allow "None" to be a value for some ints
    for i in configs_int_none:
        if options[i] is None or options[i] == "None":
            options[i] = None
        else:
            try:
                options[i] = int(options[i])
            except (TypeError, ValueError):
                raise ConfigurationError(
                    "`semp.%s` must be an integer, not %r" % (i, options[i])
                )

    # check for settings conflict
    if options["seed"] is not None and not options["randomize"]:
        err = "cannot specify `semp.seed` without `semp.randomize`"
        raise ConfigurationError(err)

    return options
