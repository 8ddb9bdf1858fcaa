import sys

from sdkernel.cli import main

sys.exit(main())
