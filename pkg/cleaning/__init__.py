"""Data cleaning module for x,y dataset files."""

from .cleaner import DatasetCleaner
from .ingest_report import IngestReport

__all__ = ['DatasetCleaner', 'IngestReport']
