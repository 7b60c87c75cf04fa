#!/usr/bin/env python3
"""
Simple run script for Conic Farkas.
"""

import sys
from conic_farkas.main import main

if __name__ == "__main__":
    sys.exit(main())
