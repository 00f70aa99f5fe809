import sys

from nonclassical.cli import main

sys.exit(main())
