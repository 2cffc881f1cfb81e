"""Normal holonomy of spacelike submanifolds.

Every function takes the same JSON documents as the ``normhol`` command line
tool (as a dict or a JSON string) and returns the report as a dict.
"""

import json

from ._core import DEFAULT_SEED, SUBCOMMANDS, InputError, InternalError, execute

__all__ = [
    "DEFAULT_SEED",
    "InputError",
    "InternalError",
    "SUBCOMMANDS",
    "run",
    "curvature",
    "screen",
    "decompose",
    "classify_bbi",
    "weak_berger",
    "curvature_space",
    "geometry",
    "pipeline",
]


def run(subcommand, data, mode=None, tol=1e-9, seed=DEFAULT_SEED):
    """Run ``subcommand`` on ``data`` and return the report."""
    text = data if isinstance(data, str) else json.dumps(data)
    return json.loads(execute(subcommand, text, mode or "", tol, seed))


def _command(name):
    def call(data, mode=None, tol=1e-9, seed=DEFAULT_SEED):
        return run(name, data, mode=mode, tol=tol, seed=seed)

    call.__name__ = name.replace("-", "_")
    call.__doc__ = f"Report of the ``{name}`` subcommand."
    return call


curvature = _command("curvature")
screen = _command("screen")
decompose = _command("decompose")
classify_bbi = _command("classify-bbi")
weak_berger = _command("weak-berger")
curvature_space = _command("curvature-space")
geometry = _command("geometry")
pipeline = _command("pipeline")
