"""Module entry point: python -m rlk ..."""

import sys

from .cli import main

sys.exit(main())
