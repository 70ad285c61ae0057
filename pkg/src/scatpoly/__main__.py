import sys

from scatpoly.cli import main

sys.exit(main())
