"""Small file and formatting helpers shared by the harness and the CLI."""

import os
import tempfile


def format_float(x) -> str:
    """Print a double with 17 significant digits (exact round trip)."""
    return format(float(x), ".17g")


def write_text_atomic(path, text: str):
    """Write via a temp file in the same directory plus rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise
