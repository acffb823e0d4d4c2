import sys

from halphen.cli import main

sys.exit(main())
