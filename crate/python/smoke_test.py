"""Smoke test for the Python extension.

Build and install with `maturin develop -m crates/py/Cargo.toml`, or copy
target/<profile>/libkleinian_py.so to kleinian.so somewhere on PYTHONPATH.
"""

import json

import kleinian


def main():
    g = kleinian.Group("E8")
    assert g.order == 120 and g.projective_order == 60
    assert all(holds for _, holds in g.relations())
    assert sorted(g.mckay_dimensions()) == [1, 2, 2, 3, 3, 4, 4, 5, 6]
    assert g.mckay_matches_diagram()

    marks, null = kleinian.affine_marks("E8")
    assert marks == null == [1, 2, 3, 4, 5, 6, 4, 2, 3]

    p = kleinian.divisor_profile("D", 4, c="3")
    mults = {cid: m for cid, _, m in p.components}
    assert mults["d2"] == 2 and mults["d1"] == mults["e1"] == mults["e2"] == 1
    assert p.matches_diagram()
    assert json.loads(p.to_json())["diagram_match"]["kind"] == "D4"
    assert p.to_dot().startswith("graph")

    y = kleinian.divisor_profile("A3", candidate="Y")
    assert not y.matches_diagram()

    report = kleinian.verify("D5", c="zeta(3)")
    assert report.passed, report.checks
    assert json.loads(report.to_json())["kind"] == "D5"

    accepted, _, recovered = kleinian.probe("D6", "(2 - Y)*(X - 3*Y)", c="-3")
    assert accepted and recovered == "-3"
    accepted, reason, _ = kleinian.probe("A3", "Y")
    assert not accepted and "multiplicity" in reason

    assert kleinian.normalize_number("1 + zeta(3) + zeta(3)^2") == "0"

    try:
        kleinian.verify("D", 4, c="1")
    except ValueError as e:
        assert "degenerate" in str(e)
    else:
        raise AssertionError("c = 1 should be rejected for D4")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
