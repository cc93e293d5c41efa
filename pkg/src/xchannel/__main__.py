import sys

from xchannel.cli import main

sys.exit(main())
