"""Row cleaning for (count, positive real) dataset files."""

import math
from typing import Any, List, Optional, Tuple, TYPE_CHECKING

import pandas as pd

from core.dataset import Dataset
from core.errors import DatasetParseError, InvalidObservation
from core.params import Observation, check_counts, check_positive

if TYPE_CHECKING:
    from cleaning.ingest_report import IngestReport

# Text that stands for a missing value in exported spreadsheets.
MISSING_TOKENS = ('', 'nan', 'none', 'null', 'na', '#error!')


class DatasetCleaner:
    """Turns raw CSV cells into validated observations."""

    def __init__(self, report: Optional['IngestReport'] = None):
        """Initialize cleaner with optional ingest report for tracking."""
        self.report = report

    @staticmethod
    def is_missing(value: Any) -> bool:
        if value is None:
            return True
        if isinstance(value, float) and math.isnan(value):
            return True
        return str(value).strip().lower() in MISSING_TOKENS

    def clean_count(self, value: Any) -> Tuple[Optional[int], Optional[str]]:
        """Parse a count. Returns (value, None) or (None, reason).

        Whole numbers written with a decimal part ("3.0") are accepted and
        recorded as coercions.
        """
        if self.is_missing(value):
            return None, "x is missing"
        text = str(value).strip()
        try:
            number = float(text)
        except ValueError:
            return None, f"x is not a number: {text!r}"
        try:
            check_counts(number)
        except InvalidObservation as e:
            return None, str(e)
        if not text.lstrip('+').isdigit() and self.report:
            self.report.record_coercion('x', text)
        return int(number), None

    def clean_positive(self, value: Any) -> Tuple[Optional[float], Optional[str]]:
        """Parse a strictly positive real. Returns (value, None) or (None, reason)."""
        if self.is_missing(value):
            return None, "y is missing"
        text = str(value).strip()
        try:
            number = float(text)
        except ValueError:
            return None, f"y is not a number: {text!r}"
        try:
            check_positive(number)
        except InvalidObservation as e:
            return None, str(e)
        return number, None

    def clean_row(self, line: int, raw_x: Any, raw_y: Any) -> Optional[Observation]:
        """Clean one data row; rejected rows are recorded and return None."""
        if self.is_missing(raw_x) and self.is_missing(raw_y):
            if self.report:
                self.report.record_blank_line(line)
            return None

        if self.report:
            self.report.record_row()
        x, x_issue = self.clean_count(raw_x)
        y, y_issue = self.clean_positive(raw_y)
        issues = [msg for msg in (x_issue, y_issue) if msg]
        if issues:
            if self.report:
                self.report.record_rejection(line, str(raw_x), str(raw_y), '; '.join(issues))
            return None
        if self.report:
            self.report.record_accepted()
        return Observation(x, y)

    def clean_frame(self, frame: pd.DataFrame, first_line: int = 2) -> Dataset:
        """Clean a two-column x,y frame into a :class:`Dataset`.

        ``first_line`` is the file line of the first data row. Every row is
        checked; the load is refused with the first offending line if any row
        was rejected.
        """
        rows: List[Observation] = []
        first_issue = None
        for offset, (raw_x, raw_y) in enumerate(zip(frame['x'], frame['y'])):
            line = first_line + offset
            before = len(self.report.rejections) if self.report else 0
            cleaned = self.clean_row(line, raw_x, raw_y)
            if cleaned is not None:
                rows.append(cleaned)
            elif first_issue is None and not (self.is_missing(raw_x) and self.is_missing(raw_y)):
                reason = self.report.rejections[before]['reason'] if self.report else self._reason(raw_x, raw_y)
                first_issue = (line, reason)

        if first_issue is not None:
            raise DatasetParseError(first_issue[1], first_issue[0])
        if not rows:
            raise DatasetParseError("no data rows", first_line)
        return Dataset.from_observations(rows)

    def _reason(self, raw_x: Any, raw_y: Any) -> str:
        issues = [self.clean_count(raw_x)[1], self.clean_positive(raw_y)[1]]
        return '; '.join(msg for msg in issues if msg)
