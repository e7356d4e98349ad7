"""Environment configuration for the command line."""

import os

from dotenv import load_dotenv

from core.errors import InvalidConfig

THREADS_VAR = 'BPGC_THREADS'


def load_settings():
    """Load ``.env`` from the working directory without overriding the environment."""
    load_dotenv()


def default_threads() -> int:
    raw = os.getenv(THREADS_VAR)
    if raw is None or raw.strip() == '':
        return 1
    try:
        threads = int(raw)
    except ValueError:
        raise InvalidConfig(f"{THREADS_VAR} must be an integer (got {raw!r})")
    if threads < 1:
        raise InvalidConfig(f"{THREADS_VAR} must be >= 1 (got {threads})")
    return threads
