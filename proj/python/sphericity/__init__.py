"""Sharp radial-angle and layer-width bounds for convex curves in space forms."""

import json

from ._core import *  # noqa: F401,F403
from ._core import __version__, run as _run


def run_config(config):
    """Run a configuration (dict or JSON text); returns (report dict, exit code)."""
    text = config if isinstance(config, str) else json.dumps(config)
    report, code = _run(text)
    return json.loads(report), code
