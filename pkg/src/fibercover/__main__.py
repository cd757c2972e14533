import sys

from fibercover.cli import main

sys.exit(main())
