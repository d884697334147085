import hashlib
import json
import logging
import os
from typing import Any, Dict, Iterable, Mapping, Optional, Sequence, Union

import pandas as pd

from src import __version__
from src.errors import IoError, SchemaError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
UNITS_COMMENT = '# natural units hbar=kB=1'

Rows = Union[pd.DataFrame, Iterable[Mapping[str, Any]]]


class CsvExporter:
    def __init__(self, float_format: str = '%.12g'):
        """
        Initialize the CSV exporter

        Args:
            float_format (str): printf-style format for floating point cells
        """
        self.float_format = float_format

    def _frame(self, rows: Rows, schema: Sequence[str]) -> pd.DataFrame:
        """
        Check rows against the declared schema and return them as a DataFrame

        Raises:
            SchemaError: Missing or extra columns
        """
        if isinstance(rows, pd.DataFrame):
            frame = rows
        else:
            records = list(rows)
            for record in records:
                if set(record) != set(schema):
                    raise SchemaError(f"Row {dict(record)} does not match schema {list(schema)}")
            frame = pd.DataFrame(records, columns=list(schema))
        if list(frame.columns) != list(schema):
            raise SchemaError(f"Columns {list(frame.columns)} do not match schema {list(schema)}")
        return frame

    def emit_csv(self, rows: Rows, schema: Sequence[str], path: str) -> str:
        """
        Write rows to a CSV file with version and units comment lines

        Row order is kept as given; empty input produces a header-only file.

        Args:
            rows: DataFrame or iterable of dicts keyed by the schema columns
            schema (sequence): Column names in output order
            path (str): Destination file

        Returns:
            str: The path written
        """
        frame = self._frame(rows, schema)
        try:
            directory = os.path.dirname(path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(path, 'w', newline='') as f:
                f.write(f"# schema_version: {SCHEMA_VERSION}\n")
                f.write(f"{UNITS_COMMENT}\n")
                frame.to_csv(f, index=False, float_format=self.float_format, lineterminator='\n')
        except OSError as e:
            logger.error(f"Failed to write CSV {path}: {str(e)}")
            raise IoError(f"Cannot write {path}: {e.strerror}") from e
        logger.info(f"Wrote {len(frame)} rows to {path}")
        return path

    def write_metadata(self, path: str, config_text: str, wall_time: float,
                       notes: str = '', extra: Optional[Dict[str, Any]] = None) -> str:
        """
        Write the JSON sidecar describing a run

        Args:
            path (str): Destination file
            config_text (str): Serialized run configuration, hashed into the sidecar
            wall_time (float): Duration of the run in seconds
            notes (str): Free text copied from the preset
            extra (dict): Additional command-specific results

        Returns:
            str: The path written
        """
        metadata = {
            'config_sha256': hashlib.sha256(config_text.encode('utf-8')).hexdigest(),
            'tool_version': __version__,
            'schema_version': SCHEMA_VERSION,
            'wall_time_seconds': round(wall_time, 3),
            'notes': notes,
            'results': extra or {},
        }
        try:
            directory = os.path.dirname(path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(path, 'w') as f:
                json.dump(metadata, f, indent=2)
                f.write('\n')
        except OSError as e:
            logger.error(f"Failed to write metadata {path}: {str(e)}")
            raise IoError(f"Cannot write {path}: {e.strerror}") from e
        logger.info(f"Wrote run metadata to {path}")
        return path

    def write_plot_script(self, path: str, csv_path: str, schema: Sequence[str]) -> str:
        """
        Write a matplotlib script plotting the last column of a CSV against the first

        Rows are grouped by any text column (partition), so each partition gets a line.
        """
        x, y = schema[0], schema[-1]
        script = f'''import matplotlib.pyplot as plt
import pandas as pd

frame = pd.read_csv({csv_path!r}, comment='#')
groups = [c for c in frame.columns if frame[c].dtype == object]
if groups:
    for key, part in frame.groupby(groups):
        plt.plot(part[{x!r}], part[{y!r}], marker='o', label=str(key))
    plt.legend()
else:
    for column in frame.columns[1:]:
        plt.plot(frame[{x!r}], frame[column], marker='o', label=column)
    plt.legend()
plt.xlabel({x!r})
plt.ylabel({y!r})
plt.show()
'''
        try:
            with open(path, 'w') as f:
                f.write(script)
        except OSError as e:
            logger.error(f"Failed to write plot script {path}: {str(e)}")
            raise IoError(f"Cannot write {path}: {e.strerror}") from e
        logger.info(f"Wrote plot script to {path}")
        return path
