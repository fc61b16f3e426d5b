"""
Run the sigstruct acceptance suite.

Equivalent to `python -m src.cli.main verify-paper`; extra arguments are
passed through (for example `--only theorem1 --out reports/verify.json`).
"""

import os
import sys

# Add project root to path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.cli.main import main


if __name__ == "__main__":
    sys.exit(main(["verify-paper"] + sys.argv[1:]))
