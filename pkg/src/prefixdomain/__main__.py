import sys

from prefixdomain.cli import main

sys.exit(main())
