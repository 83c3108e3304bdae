"""Smoke test for the Python extension.

Build the module first:

    cargo build --release -p ssnm-py --features extension-module
    python3 python/smoke_test.py [path/to/libssnm.so]
"""

import importlib.util
import json
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load(lib):
    tmp = pathlib.Path(tempfile.mkdtemp())
    target = tmp / "ssnm.so"
    shutil.copy(lib, target)
    spec = importlib.util.spec_from_file_location("ssnm", target)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    lib = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else ROOT / "target" / "release" / "libssnm.so"
    ssnm = load(lib)

    assert ssnm.simplify("sin(x)^2 + cos(x)^2") == "1"
    assert ssnm.is_zero("(x+1)^2 - x^2 - 2*x - 1")

    m = ssnm.Manifold.preset("morris-thorne")
    assert m.dim == 4
    assert m.components("ricci") == [([2, 2], "2*b^2/(b^2+X2^2)^2")]
    assert m.components("kk") == []
    assert m.validate() == (9, 9)

    report = json.loads(m.report(seed=0))
    by_id = {item["id"]: item for item in report["items"]}
    assert by_id["I.3"]["factor"] == "b^2/(3*(b^2+X2^2)^2)"
    assert len(report["items"]) == 12

    flat = ssnm.Manifold.from_manifest(
        "dim = 3\ncoords = x, y, z\ng[1][1] = 1\ng[2][2] = 1\ng[3][3] = 1\nconnection = levi-civita\n"
    )
    assert flat.components("riemann") == []

    try:
        ssnm.Manifold.preset("torus")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown preset must raise")

    print("python smoke test OK")


if __name__ == "__main__":
    main()
