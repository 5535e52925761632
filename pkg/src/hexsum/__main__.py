import sys

from hexsum.cli import main

sys.exit(main())
