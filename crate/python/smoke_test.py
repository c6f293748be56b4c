"""Builds the extension module and exercises it end to end."""

import importlib
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build():
    subprocess.run(
        ["cargo", "build", "--release", "-p", "cubecat-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    lib = ROOT / "target" / "release" / "libcubecat_py.so"
    out = Path(tempfile.mkdtemp(prefix="cubecat-py-"))
    shutil.copy(lib, out / "cubecat.so")
    sys.path.insert(0, str(out))
    return importlib.import_module("cubecat")


def main():
    cc = build()

    plain = cc.Site("plain")
    conn = cc.Site("connections")
    assert plain.hom_count(1, 1) == 3
    assert plain.hom_count(2, 1) == 4
    assert conn.hom_count(2, 1) == 5
    for n in range(4):
        assert plain.hom_count(0, n) == 2**n
    for m in range(3):
        for n in range(3):
            assert conn.hom_count(m, n) == conn.hom_count_formula(m, n)

    homs = plain.morphisms(2, 1)
    ident = plain.identity(1)
    for f in homs:
        assert ident @ f == f
        nf = f.normal_form()
        assert set(nf) >= {"gamma", "sigma", "delta", "xi"}
    assert len(set(homs)) == len(homs)

    square = cc.Presheaf.boundary(plain, 2)
    assert square.homology(2) == [(1, []), (1, []), (0, [])]
    cube = cc.Presheaf.representable(plain, 2)
    assert cube.realize(2) == [4, 9, 16]
    assert cube.homology(2) == [(1, []), (0, []), (0, [])]

    t = cc.Presheaf.parse(plain, "tensor:rep:1:boundary:1", 2)
    assert t.counts() == [4, 6, 8]

    sigma = cc.Site("sigma")
    reports = sigma.verify("site-axioms", 2)
    assert all(r["passed"] for r in reports)

    try:
        plain.hom_count(99, 1)
    except ValueError:
        pass
    else:
        raise AssertionError("oversized degree accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
