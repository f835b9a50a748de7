"""Smoke test for the etalift Python extension.

Build with `cargo build --release -p etalift-py`, then copy
target/release/libetalift_py.so next to this file as etalift_py.so
(or run python/build_ext.sh), and run `python3 python/smoke_test.py`.
"""

import json
import sys

import etalift_py as el


def main() -> int:
    z3 = el.Ring.integers(3)
    rho = z3.rho()
    assert str(z3.parse("rho^3")) == "1"
    assert (rho * rho * rho) == z3.one()
    assert (z3.eta() + z3.one()) == rho

    ed = el.eta_data(5)
    assert ed["x_inv_is_neg_y"] is True

    assert el.gpoly(2)["g_display"] == ["-1"]

    b = el.QWeyl(3)
    assert str(b.word("xy")) == "ρ·yx + 1"
    assert b.word("xyxyy") == b.rewrite("xyxyy", "random:5")
    x3 = b.x() ** 3
    assert x3.commutator(b.y()).is_zero()

    z9 = el.Ring.quotient(3, m=9)
    cert = el.galois_build(z9.parse("1"))
    assert cert["factorization"] and cert["order_p"] and cert["fixed_ring"]

    f3 = el.Ring.quotient(3, eta_power=1)
    lift = el.galois_lift(z9, f3.parse("1"))
    assert lift["reduction_matches"]

    az = el.azumaya(2, symbolic=True)
    assert az["locus_matches"] and az["symbolic"]["exponent"] == 8

    dcp = el.dcp_sweep(2, samples=5)
    assert all(c["psi_invertible"] for c in dcp["cases"])

    bl = el.brauer_lift(json.dumps({"base": {"p": 2, "m": 4}}), json.dumps({"eta_power": 1}), "1", "1")
    assert bl["lift_azumaya"] and bl["reduces"]

    try:
        el.Ring.integers(4)
    except ValueError:
        pass
    else:
        raise AssertionError("composite p accepted")

    print("etalift_py", el.__version__, "smoke test ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
