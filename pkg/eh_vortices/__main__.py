"""Allow running as `python -m eh_vortices`."""

import sys

from eh_vortices.cli import main

sys.exit(main())
