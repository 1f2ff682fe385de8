import sys

from .cli_reports.main import main

sys.exit(main())
