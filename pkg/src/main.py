#!/usr/bin/env python3
"""
Executable entry point for qdslim.
"""

import os
import sys

# Add parent directory to path to import qdslim
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from qdslim.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
