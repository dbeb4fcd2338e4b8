import importlib


def test_import_core_modules_importable() -> None:
    # Top-level package
    assert importlib.import_module("polysum") is not None

    # Layers, bottom to top
    assert importlib.import_module("polysum.exact.lp") is not None
    assert importlib.import_module("polysum.geometry.polytope") is not None
    assert importlib.import_module("polysum.minkowski") is not None
    assert importlib.import_module("polysum.generators.families") is not None
    assert importlib.import_module("polysum.verify.suite") is not None
    assert importlib.import_module("polysum.cli") is not None
