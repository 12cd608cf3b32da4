import sys

from pecco.cli import main

sys.exit(main())
