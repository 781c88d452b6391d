#!/usr/bin/env python3
"""
T-depth Synthesis Tool
Entry point: python tdepth_tool.py <synth|estimate|verify|tables|gadget-check> ...
"""

import os
import sys

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from modules.cli import main

if __name__ == "__main__":
    sys.exit(main())
