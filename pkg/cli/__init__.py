from .main import build_parser, main
from .report import RunReport

__all__ = ['build_parser', 'main', 'RunReport']
