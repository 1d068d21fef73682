import os
import sys

# the package is imported from the repository root, the same way main.py does
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
