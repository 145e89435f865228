"""
Run manifests: the metadata sidecar written next to every CSV output.

A CSV `table1.csv` is accompanied by `table1.manifest.json` holding the
command, its resolved parameters, the seed, the tool version, every output
of the run and the wall-clock duration.
"""
import json
import logging
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from .. import __version__
from ..utils import atomic_write_text, render_csv

logger = logging.getLogger(__name__)

MANIFEST_SUFFIX = ".manifest.json"


def manifest_path(csv_path: Path) -> Path:
    """Sidecar path for an output file: same directory, same stem."""
    csv_path = Path(csv_path)
    return csv_path.with_name(csv_path.stem + MANIFEST_SUFFIX)


class RunManifest:
    """
    Records one CLI run and the files it produced.

    Attributes:
        command: Subcommand name
        parameters: Resolved scenario or query parameters
        seed: Root seed, None for deterministic computations
        outputs: Paths of the CSV files written so far
        started_at: ISO timestamp of the start of the run
    """

    def __init__(self, command: str, parameters: Dict[str, Any], seed: Optional[int] = None):
        self.command = command
        self.parameters = parameters
        self.seed = seed
        self.outputs: List[str] = []
        self.started_at = datetime.now(timezone.utc).isoformat()
        self._clock = time.monotonic()

    def write_csv(self, path: Path, header, rows) -> str:
        """Write a CSV output atomically and remember it."""
        return self.write_csvs([(path, header, rows)])[0]

    def write_csvs(self, tables: Sequence[Tuple[Path, Sequence[str], Iterable]]) -> List[str]:
        """
        Write several CSV outputs as one unit.

        Every table is rendered before the first file is touched; if a later
        write fails, the files already written by this call are removed, so
        a run leaves either all of its outputs or none.

        Args:
            tables: (path, header, rows) triples

        Returns:
            Absolute paths of the written files
        """
        rendered = [(Path(path), render_csv(header, rows)) for path, header, rows in tables]
        written: List[str] = []
        try:
            for path, text in rendered:
                written.append(atomic_write_text(text, path))
        except BaseException:
            for done in written:
                Path(done).unlink(missing_ok=True)
            raise
        for done in written:
            logger.info("wrote %s", done)
        self.outputs.extend(written)
        return written

    def to_dict(self) -> Dict[str, Any]:
        return {
            'command': self.command,
            'parameters': self.parameters,
            'seed': self.seed,
            'version': __version__,
            'outputs': list(self.outputs),
            'started_at': self.started_at,
            'duration_seconds': round(time.monotonic() - self._clock, 6),
        }

    def finish(self) -> List[str]:
        """
        Write one sidecar per output, after all outputs exist.

        Returns:
            Paths of the manifest files
        """
        record = json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"
        return [atomic_write_text(record, manifest_path(Path(out))) for out in self.outputs]

    @staticmethod
    def load(path: Path) -> Dict[str, Any]:
        """Read a manifest sidecar back."""
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
