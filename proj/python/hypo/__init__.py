# SPDX-License-Identifier: Apache-2.0
"""Global hypoellipticity of systems of vector fields on T^m x M."""

import json
import os

from . import _core
from ._core import InputError, PreconditionError, ResonanceError, __version__

__all__ = [
    "InputError",
    "PreconditionError",
    "ResonanceError",
    "__version__",
    "classify",
    "resonances",
    "solve",
    "witness",
    "check_condition",
    "content_hash",
]


def _source(spec):
    """Returns (toml text, base dir) for a path or inline TOML text."""
    if isinstance(spec, os.PathLike) or (isinstance(spec, str) and "\n" not in spec and os.path.isfile(spec)):
        path = os.fspath(spec)
        with open(path, encoding="utf-8") as fh:
            return fh.read(), os.path.dirname(os.path.abspath(path))
    return spec, os.getcwd()


def classify(spec, tau_max=64, j_max=64, L_max=1000, sigma_grid=(), build_witness=True, embed_fields=False):
    text, base = _source(spec)
    return json.loads(
        _core.classify_json(text, base, tau_max, j_max, L_max, list(sigma_grid), build_witness, embed_fields)
    )


def resonances(spec, j_max=20):
    text, base = _source(spec)
    lines = _core.resonances_csv(text, base, j_max).splitlines()
    head = lines[0].split(",")
    rows = []
    for line in lines[1:]:
        cells = line.split(",")
        rows.append({k: (int(v) if k == "j" else float(v)) for k, v in zip(head, cells)})
    return rows


def solve(spec, rhs_csv, formula="auto"):
    text, base = _source(spec)
    return json.loads(_core.solve_json(text, base, list(rhs_csv), formula))


def witness(spec, kind="sign-change", j_max=64):
    text, base = _source(spec)
    return json.loads(_core.witness_json(text, base, kind, j_max))


def check_condition(alpha, eigenvalues, sigma, mu=0.5, n=1, L_max=1000):
    alpha = [str(a) for a in alpha]
    return json.loads(_core.diophantine_json(alpha, list(eigenvalues), sigma, mu, n, L_max))


def content_hash(data):
    return _core.content_hash(data)
