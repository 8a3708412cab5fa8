import sys

from hfsurgery.cli import main

sys.exit(main())
