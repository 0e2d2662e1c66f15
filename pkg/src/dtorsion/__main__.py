import sys

from dtorsion.cli import main

sys.exit(main())
