"""Python access to the stablefrac C++ core.

Fields are numpy arrays of shape (N,) * dim sampled on ``Grid.coords()``.
Reports come back as plain dicts.
"""

import json

from . import _stablefrac as _core
from ._stablefrac import (
    Grid,
    Model,
    StablefracError,
    abs_moment,
    density_1d,
    frac_gradient,
    gaussian_bump,
    generator,
    model_from_json,
    product_model,
    rayleigh_quotient,
    registry_names,
    rotational_model,
    semigroup,
)

__all__ = [
    "Grid",
    "Model",
    "StablefracError",
    "abs_moment",
    "density_1d",
    "evaluate_inequality",
    "frac_gradient",
    "gaussian_bump",
    "generator",
    "minimize_sobolev",
    "model_from_json",
    "moments",
    "product_model",
    "rayleigh_quotient",
    "rectangle_perimeter",
    "registry_names",
    "rotational_model",
    "run_cli",
    "semigroup",
]


def evaluate_inequality(name, model, grid, seed=0):
    return json.loads(_core.evaluate_inequality(name, model, grid, seed))


def moments(model, p_list=(1.5, 2.0)):
    return json.loads(_core.moments(model, list(p_list)))


def rectangle_perimeter(model, grid, half, ts):
    """Classical perimeter study of the centred box with the given half-widths."""
    return json.loads(_core.rectangle_perimeter(model, grid, list(half), list(ts)))


def minimize_sobolev(model, grid, p=2.0, max_iter=10000):
    """Returns (summary dict, minimizer array)."""
    summary, field = _core.minimize_sobolev(model, grid, p, max_iter)
    return json.loads(summary), field


def run_cli(*args):
    return _core.cli_run([str(a) for a in args])
