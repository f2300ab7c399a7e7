import sys

from ayat.cli import main

sys.exit(main())
