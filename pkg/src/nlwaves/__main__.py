"""Module entry point: python -m nlwaves."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
