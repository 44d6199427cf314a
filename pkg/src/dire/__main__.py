import sys

from dire.cli import main

sys.exit(main())
