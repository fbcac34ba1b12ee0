"""Entry point for ``python -m blowuprank``."""

import sys

from blowuprank.cli import main

if __name__ == "__main__":
    sys.exit(main())
