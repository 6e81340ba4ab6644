#!/usr/bin/env python3
"""Run the acceptance checks and print one PASS/FAIL line per criterion.

Set FAILOVER_ZOO_DIR to a directory of Topology Zoo GraphML files to include
the full-scale tier.
"""

import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    sys.exit(pytest.main([str(ROOT / "tests" / "test_acceptance.py"), "-q", "-rs", "-p", "no:cacheprovider",
                          *sys.argv[1:]]))
