"""Smoke test for the `dgs` Python extension.

Build the extension first:

    cargo build -p dgs-py --release --features extension-module

then run `python3 python/smoke_test.py` from the repository root. Set
DGS_EXTENSION to point at a different build of the shared library.
"""

import importlib.machinery
import importlib.util
import os
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DEFAULT = os.path.join(ROOT, "target", "release", "libdgs.so")


def load():
    path = os.environ.get("DGS_EXTENSION", DEFAULT)
    if not os.path.exists(path):
        sys.exit(f"extension not found at {path}; build it with cargo first")
    loader = importlib.machinery.ExtensionFileLoader("dgs", path)
    spec = importlib.util.spec_from_file_location("dgs", path, loader=loader)
    module = importlib.util.module_from_spec(spec)
    loader.exec_module(module)
    return module


def main():
    dgs = load()
    assert dgs.SCHEMA_VERSION.startswith("dgs-report/")

    k2 = dgs.Graph.from_graph6("A_")
    assert k2.order == 2 and k2.edges() == [(0, 1)]
    assert dgs.certify(k2)["kind"] == "NotControllable"
    assert dgs.spectrum_key(k2) == ([1, 0, -1], [1, 0, 0])

    with open(os.path.join(ROOT, "crates", "core", "tests", "data", "golden_n20.txt")) as f:
        golden = dgs.Graph.from_adjacency(f.read())
    b = 7 * 11 * 383 * 210857 * 231734663160530708115251000501057
    assert dgs.det_walk(golden) == -(2**13) * b
    assert dgs.snf_shape(golden) == ("1×10, 2×7, 4, 4, 4b", b)
    verdict = dgs.certify(golden)
    assert verdict["kind"] == "DgsByExtended", verdict["kind"]
    assert verdict["evidence"]["rank2_w"] == 10

    cert = dgs.certify_squarefree(45)
    assert cert["status"] == "NotSquareFree" and cert["repeated_prime"] == "3"
    assert dgs.certify_squarefree(105)["status"] == "SquareFree"

    g = dgs.Graph.random(10, 3)
    assert dgs.isomorphic(g, dgs.Graph.from_graph6(g.graph6()))
    for mate in dgs.gm_mates(g):
        h = dgs.Graph.from_graph6(mate["graph6"])
        assert dgs.spectrum_key(g) == dgs.spectrum_key(h)
        assert not dgs.isomorphic(g, h)

    rows = dgs.run_survey([10], 50, 1)
    assert rows[0]["n"] == 10 and rows[0]["samples"] == 50
    assert 0 <= rows[0]["count_fn"] <= 50

    print("python smoke test passed")


if __name__ == "__main__":
    main()
