#!/usr/bin/env python3
"""Run the bpgc command line from a source checkout: ``python main.py fit --data d.csv``."""

import sys

from cli.main import main

if __name__ == "__main__":
    sys.exit(main())
