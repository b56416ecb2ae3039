import os
import sys

# When run from the CMake tree the compiled module lives in the build
# directory; point the package there. An installed wheel needs neither hook.
_mod_dir = os.environ.get("HFBL_MODULE_DIR")
_pkg_dir = os.environ.get("HFBL_PKG_DIR")
if _pkg_dir:
    sys.path.insert(0, _pkg_dir)
if _mod_dir:
    import importlib.util

    for name in os.listdir(_mod_dir):
        if name.startswith("_core") and (name.endswith(".so") or name.endswith(".pyd")):
            spec = importlib.util.spec_from_file_location(
                "hfbl._core", os.path.join(_mod_dir, name)
            )
            module = importlib.util.module_from_spec(spec)
            sys.modules["hfbl._core"] = module
            spec.loader.exec_module(module)
            break
