"""Smoke test for the labshift Python bindings."""

import json

import labshift_py as ls


def main():
    assert ls.expand("56") == [2, 1]
    assert ls.expand("50") is None
    assert ls.expand("20", preset="paper") == [2, 1]

    chi1 = json.dumps({"kind": "generated", "generators": [[[1, 1]]]})
    assert ls.window(chi1, 50) == [-7, 0, 7]

    ex8a = json.dumps({"kind": "builtin", "name": "ex8a"})
    assert ls.label_window(ex8a, 3) == "⟨χ1+χ2, χ1+χ3, χ2+χ3⟩"
    assert json.loads(ls.check(ex8a, "simple", 6))["verdict"] == "fails-with-witness"
    assert json.loads(ls.check(ex8a, "finitary", 6))["verdict"] == "holds-on-window"

    ok, report = ls.zoo_verify()
    assert ok, report

    code, out = ls.cli(["tf", "--example", "--radius", "120"])
    assert code == 1
    assert json.loads(out)["result"]["candidate"] == "2N"

    print("smoke test passed")


if __name__ == "__main__":
    main()
