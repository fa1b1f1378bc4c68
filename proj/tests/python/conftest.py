import os
import sys

# In-tree runs: the extension lives in the build directory and the package
# sources under python/. Installed wheels need neither variable.
for var in ("HCSC_EXT_DIR", "HCSC_PKG_DIR"):
    path = os.environ.get(var)
    if path and path not in sys.path:
        sys.path.insert(0, path)
