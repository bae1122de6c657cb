import os
import sys

# Under ctest the freshly built extension must win over any installed copy.
_build = os.environ.get("LEVITSIM_PYTHON_DIR")
if _build:
    sys.meta_path[:] = [f for f in sys.meta_path if type(f).__name__ != "ScikitBuildRedirectingFinder"]
    sys.path.insert(0, _build)
    for name in [m for m in sys.modules if m == "levitsim" or m.startswith("levitsim.")]:
        del sys.modules[name]
