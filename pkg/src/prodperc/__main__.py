import sys

from prodperc.cli import main

sys.exit(main())
