import sys

from polyfiber.cli import main

sys.exit(main())
