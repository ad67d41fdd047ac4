import sys

from picardcone.cli import main

sys.exit(main())
