# isotower/__main__.py
import sys

from isotower.cli import main

sys.exit(main())
