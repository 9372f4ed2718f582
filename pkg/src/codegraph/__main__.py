import sys

from codegraph.cli import main

sys.exit(main())
