"""python -m hsdpa_ee delegates to the CLI."""

import sys

from .cli_report import main

sys.exit(main())
