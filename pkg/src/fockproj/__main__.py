"""Allow `python -m fockproj`."""
import sys

from .cli import main

sys.exit(main())
