import sys

from superflag.cli import main

sys.exit(main())
