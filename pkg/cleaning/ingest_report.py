"""Ingest reporting - tracks what happened to each row of a dataset file."""

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional


@dataclass
class IngestReport:
    """Tracks rejections and value coercions while a CSV dataset is cleaned.

    This records what was actually done to the rows, so a refused load can
    point at every offending line rather than just the first.
    """

    rows_read: int = 0
    rows_accepted: int = 0

    # Rejected rows: line number, raw values and the reason
    rejections: List[Dict[str, object]] = field(default_factory=list)

    # Coercions: field -> original text -> count (e.g. x written as "3.0")
    coercions: Dict[str, Dict[str, int]] = field(default_factory=lambda: defaultdict(lambda: defaultdict(int)))

    # Blank lines inside the data block
    blank_lines: List[int] = field(default_factory=list)

    def record_row(self):
        self.rows_read += 1

    def record_accepted(self):
        self.rows_accepted += 1

    def record_rejection(self, line: int, raw_x: str, raw_y: str, reason: str):
        """Record a row that could not become an observation."""
        self.rejections.append({'line': line, 'x': raw_x, 'y': raw_y, 'reason': reason})

    def record_coercion(self, field_name: str, original: str):
        """Record a value that was accepted after normalization."""
        self.coercions[field_name][original] += 1

    def record_blank_line(self, line: int):
        self.blank_lines.append(line)

    @property
    def first_rejection(self) -> Optional[Dict[str, object]]:
        return self.rejections[0] if self.rejections else None

    def get_summary(self) -> Dict:
        """Get a summary of the ingest."""
        return {
            'rows_read': self.rows_read,
            'rows_accepted': self.rows_accepted,
            'rows_rejected': len(self.rejections),
            'values_coerced': sum(sum(counts.values()) for counts in self.coercions.values()),
            'blank_lines_skipped': len(self.blank_lines),
        }

    def generate_markdown(self) -> str:
        """Generate a markdown report of all actions taken."""
        lines = []

        if self.rejections:
            lines.append("## Rejected Rows")
            lines.append("")
            lines.append(f"**{len(self.rejections)} rows were rejected:**")
            lines.append("")
            lines.append("| Line | x | y | Reason |")
            lines.append("|------|---|---|--------|")
            shown = self.rejections if len(self.rejections) <= 20 else self.rejections[:10]
            for item in shown:
                lines.append(f"| {item['line']} | `{item['x']}` | `{item['y']}` | {item['reason']} |")
            if len(shown) < len(self.rejections):
                lines.append(f"| ... | | | and {len(self.rejections) - len(shown)} more |")
            lines.append("")

        if self.coercions:
            lines.append("## Value Coercions")
            lines.append("")
            lines.append("| Field | Original | Count |")
            lines.append("|-------|----------|-------|")
            for field_name, originals in sorted(self.coercions.items()):
                for original, count in sorted(originals.items()):
                    lines.append(f"| {field_name} | `{original}` | {count} |")
            lines.append("")

        if self.blank_lines:
            lines.append("## Blank Lines Skipped")
            lines.append("")
            lines.append(', '.join(str(n) for n in self.blank_lines))
            lines.append("")

        lines.append("## Summary")
        lines.append("")
        summary = self.get_summary()
        lines.append(f"- **Rows read:** {summary['rows_read']}")
        lines.append(f"- **Rows accepted:** {summary['rows_accepted']}")
        lines.append(f"- **Rows rejected:** {summary['rows_rejected']}")
        lines.append(f"- **Values coerced:** {summary['values_coerced']}")
        lines.append(f"- **Blank lines skipped:** {summary['blank_lines_skipped']}")
        lines.append("")

        return '\n'.join(lines)
