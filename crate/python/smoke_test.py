"""Import the compiled extension and run each scenario once.

Build first with
    cargo build --release -p ncgeom-python --features extension-module
or install the package with maturin from crates/python.
"""

import importlib.util
import json
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        import ncgeom_py

        return ncgeom_py
    except ImportError:
        pass
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libncgeom_py.so"
        if lib.exists():
            tmp = pathlib.Path(tempfile.mkdtemp()) / "ncgeom_py.so"
            shutil.copy(lib, tmp)
            spec = importlib.util.spec_from_file_location("ncgeom_py", tmp)
            module = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(module)
            return module
    sys.exit("ncgeom_py not built; see the module docstring")


def required_failures(report):
    return [c["id"] for c in report["checks"] if c["required"] and not c["passed"]]


def main():
    nc = load()
    assert nc.SCHEMA_VERSION == 1
    assert nc.parse_scalar(" 1/2 + 0i ") == "1/2"
    try:
        nc.parse_scalar("zz")
    except ValueError:
        pass
    else:
        raise AssertionError("bad scalar accepted")

    proj = json.loads(nc.run_projective())
    assert proj["scenario"] == "projective"
    assert required_failures(proj) == []

    cl = json.loads(nc.run_connes_lott(mu=["0", "1"]))
    ids = {c["id"]: c for c in cl["checks"]}
    assert ids["nabla_square.table.mu=0"]["passed"]
    assert ids["curvature.mu=1"]["passed"]

    mg = json.loads(nc.run_matrix_geometry(n=2, seed=7, trials=3))
    ids = {c["id"]: c for c in mg["checks"]}
    assert ids["calculus.dim_omega1"]["passed"]
    assert ids["riemann.closed_form"]["passed"]

    both = json.loads(nc.run_all(trials=2, mu=["0"]))
    assert [s["scenario"] for s in both["scenarios"]] == ["connes-lott", "matrix-geometry", "projective"]

    for name, report in (("projective", proj), ("connes-lott", cl), ("matrix-geometry", mg)):
        failed = required_failures(report)
        print(f"{name}: {len(report['checks'])} checks, required failures: {failed or 'none'}")
    print("smoke test ok")


if __name__ == "__main__":
    main()
