"""Smoke test for the chtest Python module."""

import os
import sys

import chtest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIXTURES = os.path.join(ROOT, "fixtures")


def main() -> int:
    fig2 = chtest.Program.load(os.path.join(FIXTURES, "fig2"))
    assert "Bar" in fig2.classes, fig2.classes
    assert fig2.tests() == ["method:FooBarTest.fooTest/0"]

    static = chtest.Model.distill(fig2, mode="static")
    poly = chtest.Model.distill(fig2, mode="poly")
    assert static.select_for_class("Bar") == []
    assert poly.select_for_class("Bar") == ["class:FooBarTest"]
    assert static.select_for_class("Foo") == poly.select_for_class("Foo")
    assert static.relinked("poly").to_json() == poly.to_json()

    doc = poly.to_json()
    assert chtest.Model.from_json(doc).to_json() == doc

    pre = chtest.Program.load(os.path.join(FIXTURES, "fig4_pre"))
    post = chtest.Program.load(os.path.join(FIXTURES, "fig4_post"))
    model = chtest.Model.distill(pre, mode="poly")
    added = model.extend(pre, post)
    assert added and len(model) == max(added) + 1

    inline = chtest.Program.parse({
        "a.moo": "class A { int v() { return 1; } }\n"
                 "class ATest { void testV() { A a = new A(); assert a.v() == 1; } }\n",
    })
    results = chtest.run_suite(inline)
    assert results == [("method:ATest.testV/0", "pass", None)], results
    assert len(chtest.mutants(inline)) == 1

    report = chtest.evaluate(fig2)
    assert report.rows() == [("Bar", 1, 1, 0, 1, "improved")], report.rows()
    assert report.reduction_ratio_b > report.reduction_ratio_a
    assert report.to_csv() == chtest.evaluate(fig2).to_csv()

    full = ["t%d" % i for i in range(4908)]
    assert round(chtest.reduction_ratio(full, full[:2327]), 3) == 0.474

    try:
        chtest.Program.parse({"bad.moo": "class {"})
    except ValueError as e:
        assert "bad.moo" in str(e)
    else:
        raise AssertionError("malformed source accepted")

    print("python smoke test: ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
