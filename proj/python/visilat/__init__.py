"""Python front end for the visilat core.

Arguments are plain Python data (dicts, lists, ints); they travel to C++ as JSON.
"""

import json

from . import _visilat
from ._visilat import CapExceeded, ConfigError, FieldError

__all__ = [
    "CapExceeded",
    "ConfigError",
    "FieldError",
    "field_info",
    "primes",
    "is_visible",
    "predict",
    "count",
    "oracle",
    "run",
]

RATIONAL = {"kind": "rational"}


def _field(field):
    if field in ("Q", None):
        field = RATIONAL
    elif isinstance(field, int):
        field = {"kind": "quadratic", "d": field}
    return json.dumps(field)


def field_info(field):
    return json.loads(_visilat.field_info(_field(field)))


def primes(field, max_norm, seed=0):
    return [json.loads(line) for line in _visilat.primes(_field(field), max_norm, seed)]


def is_visible(field, z, x):
    return _visilat.is_visible(_field(field), json.dumps(z), json.dumps(x))


def predict(field, m, S, X=10000, seed=0):
    return json.loads(_visilat.predict(_field(field), m, json.dumps(S), X, seed))


def count(field, m, S, region, mode="sieve", samples=100000, seed=0, transform=None):
    return json.loads(
        _visilat.count(
            _field(field),
            m,
            json.dumps(S),
            json.dumps(region),
            mode,
            samples,
            seed,
            "" if transform is None else json.dumps(transform),
        )
    )


def oracle(field, m, S, window=3, seed=0):
    return json.loads(_visilat.oracle(_field(field), m, json.dumps(S), window, seed))


def run(config, include_timing=True):
    """Returns (exit_code, report dict, csv text)."""
    code, report, csv = _visilat.run(json.dumps(config), include_timing)
    return code, json.loads(report), csv
