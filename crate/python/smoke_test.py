"""Smoke test for the symscope extension module.

Build first: pip install --no-build-isolation -e crates/python
"""

import json
import pathlib

import symscope

SCENARIOS = pathlib.Path(__file__).resolve().parent.parent / "crates" / "cli" / "scenarios"


def load(name):
    return (SCENARIOS / name).read_text()


def main():
    bundle = json.loads(symscope.diagnose(load("rho1_vs_rho2.json")))
    dist = next(r for r in bundle["reports"] if r["diagnostic"] == "restriction_distance")
    assert max(dist["values"]) < 1e-12, dist
    verdicts = {r["state"]: r["verdict"] for r in bundle["reports"] if r["diagnostic"] == "charge_coherence"}
    assert verdicts == {"rho1": "PERSISTENT", "rho2": "PERSISTENT"}, verdicts

    plus = json.loads(symscope.diagnose(load("plus_product_strong.json"), seed=5))
    assert all(r["verdict"] == "VANISHING" for r in plus["reports"] if r["diagnostic"] == "charge_coherence")
    assert not symscope.inconclusive(load("plus_product_strong.json"))

    ring = json.loads(symscope.anomaly(load("dressed_flip_anomaly.json")))
    assert ring["class_trivial"] is False

    table = json.loads(symscope.sweep(load("size_sweep.json"), [4, 6]))
    assert {row["size"] for row in table["rows"]} == {4, 6}

    pauli = load("pauli_2cocycle.json")
    assert symscope.check_cocycle(pauli) == (True, False)
    assert symscope.trivialize(pauli) is None
    assert symscope.same_class(pauli, load("pauli_2cocycle_transposed.json"))
    eta = json.loads(symscope.trivialize(load("symmetric_2cocycle.json")))
    assert eta["degree"] == 1

    try:
        symscope.diagnose('{"schema_version": 1, "chain": {"num_sites": 4}, "bogus": 1}')
    except ValueError as e:
        assert "bogus" in str(e)
    else:
        raise AssertionError("unknown field accepted")

    print(f"symscope {symscope.__version__}: smoke test passed")


if __name__ == "__main__":
    main()
