import sys

from CARBONSIM.cli import main


sys.exit(main())
