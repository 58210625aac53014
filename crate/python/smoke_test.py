#!/usr/bin/env python3
"""Smoke test for the orbit_atlas extension module.

Build the module first, then run this script:

    cargo build -p orbit-atlas-py --release
    python3 python/smoke_test.py

The script copies the built shared library into a temp directory under the
importable name and exercises the main entry points against known values.
"""

import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def locate_library() -> pathlib.Path:
    candidates = [
        ROOT / "target" / profile / "liborbit_atlas_py.so"
        for profile in ("release", "debug")
    ]
    existing = [c for c in candidates if c.exists()]
    if not existing:
        sys.exit(
            "liborbit_atlas_py.so not found; run "
            "`cargo build -p orbit-atlas-py --release` first"
        )
    return max(existing, key=lambda c: c.stat().st_mtime)


def main() -> None:
    lib = locate_library()
    with tempfile.TemporaryDirectory() as tmp:
        shutil.copy(lib, pathlib.Path(tmp) / "orbit_atlas.so")
        sys.path.insert(0, tmp)
        import orbit_atlas as oa

        # q-analogs
        assert oa.q_binomial(4, 2, 2) == 35
        assert oa.q_binomial(24, 12, 2) > 10**40  # arbitrary precision
        assert oa.q_multinomial([1, 1, 1], 2) == 21

        # partition calculus
        assert oa.dominance_geq([3, 0, 0], [1, 1, 1])
        assert not oa.dominance_geq([1, 1, 1], [3, 0, 0])
        assert oa.conjugate([3]) == [1, 1, 1]
        assert oa.raising([1, 1, 1], 0) == [2, 1, 0]
        assert oa.raising_witness([1, 1, 1], [3]) == [2, 0]
        assert oa.raising_witness([3, 1, 0], [2, 2, 0]) is None
        assert oa.grass_dim(2, 4) == 4
        assert oa.flag_dim([1, 1, 1]) == 3

        # subspaces
        spaces = oa.enumerate_subspaces(4, 2, 2)
        assert len(spaces) == 35
        assert spaces[0].dim == 2 and spaces[0].ambient_dim == 4
        line = oa.Subspace.from_spanning_set(2, 4, [[1, 0, 0, 0]])
        assert any(s.contains(line) for s in spaces)
        assert oa.count_flags([1, 1, 1, 1], 3) == 2080

        # skeletons and fixed-locus dimensions
        assert len(oa.enumerate_skeletons(3)) == 6
        assert oa.fixed_flag_dim([[2, 2]], [2, 2]) == 2
        assert oa.unipotent_fixed_flag_count([2, 1], [1, 1, 1], 3) == 7

        # orbit counting, two independent algorithms
        trivial = oa.GroupSpec(2, 2, [])
        report = trivial.orbit_count(grass=1)
        assert report.orbit_count == 3 and report.orbit_sizes == [1, 1, 1]
        gl2 = oa.GroupSpec(2, 2, [[[1, 1], [0, 1]], [[0, 1], [1, 0]]])
        assert gl2.group_order() == 6
        assert gl2.orbit_count(grass=1).orbit_count == 1
        assert gl2.burnside_count(grass=1) == 1
        borel = oa.GroupSpec(
            2,
            3,
            [
                [[1, 1, 0], [0, 1, 0], [0, 0, 1]],
                [[1, 0, 0], [0, 1, 1], [0, 0, 1]],
                [[1, 0, 1], [0, 1, 0], [0, 0, 1]],
            ],
        )
        flags = borel.orbit_count(flag=[1, 1, 1])
        assert flags.orbit_count == 6
        assert flags.orbit_count == borel.burnside_count(flag=[1, 1, 1])

        # the incidence transform
        assert oa.build_a(4, 1, 2, 2) == [[6, 1], [0, 7]]
        assert oa.solve_epsilon(4, 1, 2, 2) == ["-1/42", "1/7"]
        assert oa.check_transform(4, 1, 2, 2)

        # error mapping
        try:
            oa.GroupSpec(4, 2, [])
        except ValueError:
            pass
        else:
            raise AssertionError("composite modulus must be rejected")

    print("smoke test OK")


if __name__ == "__main__":
    main()
