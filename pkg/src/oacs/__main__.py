import sys

from oacs.cli import main

sys.exit(main())
