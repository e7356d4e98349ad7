"""CSV dataset files: header ``x,y``, one observation per row."""

from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from cleaning.cleaner import DatasetCleaner
from cleaning.ingest_report import IngestReport
from core.dataset import Dataset
from core.errors import DatasetIOError, DatasetParseError

HEADER = 'x,y'


def read_dataset(path: str, report: Optional[IngestReport] = None) -> Dataset:
    """Load and clean a dataset file.

    The header must be exactly ``x,y`` (a UTF-8 byte-order mark and CRLF line
    endings are tolerated). Data rows start at line 2.
    """
    file = Path(path)
    try:
        with file.open('r', encoding='utf-8-sig', newline='') as fh:
            header = fh.readline().rstrip('\r\n')
    except OSError as e:
        raise DatasetIOError(f"cannot read {path}: {e}")
    except UnicodeDecodeError as e:
        raise DatasetParseError(f"not UTF-8 text: {e}", 1)
    if header != HEADER:
        raise DatasetParseError(f"header must be exactly {HEADER!r} (got {header!r})", 1)

    try:
        frame = pd.read_csv(
            file, encoding='utf-8-sig', dtype=str, keep_default_na=False,
            skip_blank_lines=False,
        )
    except pd.errors.EmptyDataError:
        raise DatasetParseError("no data rows", 2)
    except pd.errors.ParserError as e:
        raise DatasetParseError(f"malformed CSV: {e}")
    except OSError as e:
        raise DatasetIOError(f"cannot read {path}: {e}")

    cleaner = DatasetCleaner(report if report is not None else IngestReport())
    return cleaner.clean_frame(frame, first_line=2)


def dataset_frame(x, y) -> pd.DataFrame:
    return pd.DataFrame({'x': np.asarray(x, dtype=np.int64), 'y': np.asarray(y, dtype=float)})


def write_frame(frame: pd.DataFrame, path: Optional[str], stream=None):
    """Write with LF endings and round-trip float formatting."""
    text = frame.to_csv(index=False, lineterminator='\n', float_format='%.17g')
    if path:
        try:
            Path(path).write_text(text, encoding='utf-8')
        except OSError as e:
            raise DatasetIOError(f"cannot write {path}: {e}")
    elif stream is not None:
        stream.write(text)
        stream.flush()


def write_dataset(x, y, path: Optional[str], stream=None):
    write_frame(dataset_frame(x, y), path, stream)


def describe(data: Dataset) -> dict:
    """Min, quartiles, mean and max of x and y."""
    frame = dataset_frame(data.x, data.y)
    out = {}
    for column in ('x', 'y'):
        values = frame[column]
        out[column] = {
            'min': float(values.min()),
            'q25': float(values.quantile(0.25)),
            'median': float(values.median()),
            'mean': float(values.mean()),
            'q75': float(values.quantile(0.75)),
            'max': float(values.max()),
        }
    return out
