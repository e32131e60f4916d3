import sys

from iondesign.cli import main

sys.exit(main())
