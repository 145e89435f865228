"""
Utility functions shared by the CLI and the experiment builders.
"""
import csv
import io
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable, List, Sequence, Union

from .errors import ParameterError


def format_number(value) -> str:
    """
    Render a number for CSV output.

    Integers stay integers; floats use the shortest round-trip repr, which is
    locale independent and stable across runs.
    """
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(value)


def render_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    """
    Render rows as CSV text with a header, ',' separators and LF endings.

    Args:
        header: Column names
        rows: Row sequences; numeric cells go through format_number

    Returns:
        CSV document as a string
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([
            cell if isinstance(cell, str) else format_number(cell)
            for cell in row
        ])
    return buf.getvalue()


def atomic_write_text(content: str, output_path: Union[str, Path]) -> str:
    """
    Save text to disk atomically.

    The content goes to a temporary file in the target directory, which is
    then renamed over the destination, so a failed run never leaves a
    partial file behind.

    Args:
        content: Content to save
        output_path: Path where to save the file

    Returns:
        Absolute path to saved file
    """
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)

    fd, tmp_name = tempfile.mkstemp(
        dir=str(output_path.parent), prefix=f".{output_path.name}.", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(content)
        os.replace(tmp_name, output_path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise

    return str(output_path.absolute())


def resolve_output_dir(explicit: Union[str, Path, None] = None) -> Path:
    """
    Pick the output directory: explicit flag, then MOTAG_OUTPUT_DIR, then cwd.
    """
    if explicit:
        return Path(explicit)
    env_dir = os.environ.get("MOTAG_OUTPUT_DIR")
    if env_dir:
        return Path(env_dir)
    return Path.cwd()


def rho_sweep(decade_min: int, decade_max: int, per_decade: int = 10) -> List[float]:
    """
    Log-spaced rho values from 10**decade_min to 10**decade_max inclusive.

    Exponents are built from integers so that exact decades (10, 100, ...)
    come out exact.
    """
    if per_decade < 1 or decade_max < decade_min:
        raise ParameterError("need per_decade >= 1 and decade_max >= decade_min")
    steps = range(decade_min * per_decade, decade_max * per_decade + 1)
    return [10.0 ** (step / per_decade) for step in steps]
