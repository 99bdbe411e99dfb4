import os
import sys

# allow running pytest straight from a checkout without installing
sys.path.insert(0, os.path.join(os.path.dirname(__file__), os.pardir, "src"))
