import io
import json
import subprocess
import sys

import pytest

from viropatch.cli import Malformed, main, parse_rational
from viropatch.triangulation import primitive_triangulation, trivial_subdivision


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def tri_doc(tau):
    doc = {"kind": "triangulation", "points": [list(p) for p in tau.config.points],
           "cells": [list(c) for c in tau.cells]}
    if tau.lift is not None:
        doc["lift"] = [str(x) for x in tau.lift]
    return doc


def signs_doc(tau, signs):
    tri = tri_doc(tau)
    del tri["kind"]
    return {"kind": "signs", "triangulation": tri, "signs": signs}


def test_certify_trivial(tmp_path):
    path = write(tmp_path, "t.json", tri_doc(trivial_subdivision(3, 2)))
    code, text = run("certify", path)
    assert code == 0 and text.startswith("certified convex")


def test_certify_flat_lift_names_the_cell(tmp_path):
    doc = {"kind": "triangulation", "points": [[0, 0], [1, 0], [0, 1], [1, 1]],
           "cells": [[0, 1, 2], [1, 2, 3]], "lift": [0, 0, 0, 0]}
    code, text = run("certify", write(tmp_path, "flat.json", doc))
    assert code == 1
    assert text.startswith("NOT CONVEX: cell 0 [[0, 0], [1, 0], [0, 1]]")


def test_certify_malformed(tmp_path):
    path = tmp_path / "cut.json"
    path.write_text('{"kind": "triangulation", "points": [[0, 0], [1')
    assert run("certify", str(path))[0] == 2
    bad = write(tmp_path, "bad.json", {"kind": "triangulation", "points": [[0, 0]],
                                       "cells": [[0]], "lift": ["2/4"]})
    assert run("certify", bad)[0] == 2
    assert run("certify", str(tmp_path / "missing.json"))[0] == 2
    wrong = write(tmp_path, "wrong.json", {"kind": "lift-pair", "k": 1, "n": 1, "a": [0, 0], "b": [0, 0]})
    assert run("certify", wrong)[0] == 2


def test_harnack_fixture_round_trip(tmp_path):
    fixture = tmp_path / "h4.json"
    assert run("harnack", "--m", "4", "--out", str(fixture))[0] == 0
    code, text = run("patchwork", str(fixture), "--betti")
    assert code == 0 and text == "b = (4, 4)\n"
    exported = tmp_path / "cx.json"
    assert run("patchwork", str(fixture), "--export-complex", str(exported))[0] == 0
    code, again = run("patchwork", str(exported))
    assert code == 0 and again == "b = (4, 4)\n"


def test_degree_one_fixture(tmp_path):
    tau = primitive_triangulation(1, 2)
    path = write(tmp_path, "line.json", signs_doc(tau, [1, -1, 1]))
    assert run("patchwork", path, "--betti") == (0, "b = (1, 1)\n")


def test_all_plus_conic_regions(tmp_path):
    tau = primitive_triangulation(2, 2)
    path = write(tmp_path, "conic.json", signs_doc(tau, [1] * 6))
    code, text = run("patchwork", path, "--betti", "--regions")
    assert code == 0
    assert text.splitlines() == [
        "b = (1, 1)",
        "region +: components = 1 [bounded], double plane b0 = 1",
        "region -: components = 1 [bounded]",
    ]


def test_patchwork_rejects_non_primitive(tmp_path):
    tau = trivial_subdivision(2, 2)
    path = write(tmp_path, "np.json", signs_doc(tau, [1] * 6))
    code, text = run("patchwork", path)
    assert code == 1 and text.startswith("NOT PRIMITIVE")
    short = write(tmp_path, "short.json", signs_doc(primitive_triangulation(2, 2), [1] * 5))
    assert run("patchwork", short)[0] == 2


def test_ambient():
    assert run("ambient", "--n", "3", "--m", "2") == (0, "b = (1, 1, 1, 1)\neuler characteristic = 0\n")
    assert run("ambient", "--n", "2")[0] == 2


def test_mixed_worked_example():
    code, text = run("mixed", "--k", "1", "--n", "2", "--a", "0,1,2", "--b", "0,0,0", "--verify")
    assert code == 0
    lines = text.splitlines()
    assert lines[1] == "sigma = (0, 1, 2)"
    assert lines[-1] == "oracle match"


def test_mixed_not_mixed():
    code, text = run("mixed", "--k", "1", "--n", "2", "--a", "0,0,0", "--b", "0,0,0", "--verify")
    assert code == 1
    assert "NOT MIXED: indices (0, 1, 2) share 0" in text
    assert "oracle match (oracle is not mixed either)" in text


def test_mixed_negative_values_and_bad_input():
    code, text = run("mixed", "--k", "1", "--n", "1", "--a", "-1,1/2", "--b", "0,-3")
    assert code == 0 and "keys 2a_i - b_i = (-2, 4)" in text
    assert run("mixed", "--k", "1", "--n", "1", "--a", "x,1", "--b", "0,0")[0] == 2
    assert run("mixed", "--k", "1", "--n", "2", "--a", "0,1", "--b", "0,0")[0] == 2


@pytest.mark.parametrize("rk,r2,lead,b0", [("0", "-1,1", "-1", 2), ("0", "1,2", "-1", 0),
                                           ("0,3", "-1,1", "-1", 2)])
def test_doubled_line(rk, r2, lead, b0):
    code, text = run("doubled-line", "--roots-k", rk, "--roots-2k", r2, "--lead-sign", lead)
    assert code == 0 and text.endswith(f"b0 = {b0}\n")


def test_doubled_line_shared_root():
    code, text = run("doubled-line", "--roots-k", "1", "--roots-2k", "-1,1", "--lead-sign", "1")
    assert code == 1 and text.startswith("transversality violated")


def test_bounds_table():
    code, text = run("bounds", "--table", "--max-n", "7")
    assert code == 0
    rows = text.splitlines()[1:]
    assert len(rows) == 7
    assert rows[6].startswith("7 | 854473649/6719569920 (~0.1272) | 233/630 (~0.3698) | "
                              "108518153423/6719569920 (~16.15) | 14912/315 (~47.34)")


def test_bounds_gap_and_seeds():
    code, text = run("bounds", "--t-gap", "5..7")
    assert code == 0 and text.count("gap holds") == 3
    code, text = run("bounds", "--t-gap", "4..5")
    assert code == 1 and "n = 4: gap fails" in text
    code, text = run("bounds", "--seeds", "5/3,10/3")
    assert code == 0 and "zeta_03 >= 13/36" in text
    assert run("bounds", "--t-gap", "3..5")[0] == 2


def test_bounds_request_document(tmp_path):
    path = write(tmp_path, "req.json", {"kind": "bounds-request", "max_n": 3, "seeds": ["27/16", "27/8"]})
    code, text = run("bounds", path, "--table")
    assert code == 0 and "zeta_03 >= 35/96" in text and text.splitlines()[-1].startswith("3 | 35/96")


def test_reports_are_deterministic():
    assert run("bounds", "--table") == run("bounds", "--table")


def test_bad_thread_setting(monkeypatch):
    monkeypatch.setenv("PATCHWORK_THREADS", "-3")
    assert run("bounds", "--table")[0] == 2


def test_unknown_command():
    assert run("frobnicate")[0] == 2


def test_parse_rational():
    assert parse_rational(5) == 5 and str(parse_rational("-3/4")) == "-3/4"
    for bad in ("6/8", "1/0", "1/-2", "a", True, 1.5):
        with pytest.raises(Malformed):
            parse_rational(bad)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "viropatch", "bounds", "--t-gap", "5..5"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout == "n = 5: gap holds (22181/107520 > 2/15)\n"
