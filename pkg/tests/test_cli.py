"""Command-line front end: exit codes, reports, plots and scene files."""

from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest

from boundary_index import HalfInt
from boundary_index.cli import main
from boundary_index.errors import SceneError
from boundary_index.scene import parse_scene, write_atomic


def scene(tmp_path, manifold, field, mode=None, options="", name="s.toml"):
    lines = ["[scene]"]
    if manifold is not None:
        lines.append(f'manifold = "{manifold}"')
    lines.append(f'field = "{field}"')
    if mode:
        lines.append(f'mode = "{mode}"')
    text = "\n".join(lines) + "\n"
    if options:
        text += "\n[options]\n" + options + "\n"
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def run(argv, tmp_path, name="r.json"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def test_verify_pass(tmp_path):
    s = scene(tmp_path, "disk2", "(1, 0)", "T1")
    code, rep = run(["verify", "--scene", s, "--theorem", "1"], tmp_path)
    assert code == 0
    assert rep["lhs"] == {"num": 1, "den": 1} and rep["pass"] is True and rep["status"] == "pass"
    assert rep["bundle"]["per_zero"] and rep["hypothesis_log"]


def test_verify_uses_scene_mode(tmp_path):
    s = scene(tmp_path, "interval", "(x1)", "T2")
    code, rep = run(["verify", "--scene", s], tmp_path)
    assert code == 0 and rep["theorem_id"] == "T2" and rep["lhs"] == {"num": 1, "den": 2}


def test_verify_hypothesis_violation(tmp_path):
    s = scene(tmp_path, "disk2", "(1, 0)", "T2")
    code, rep = run(["verify", "--scene", s, "--theorem", "2"], tmp_path)
    assert code == 2
    assert rep["status"] == "hypothesis_violated" and rep["pass"] is False
    assert any(abs(w[0]) < 1e-9 and abs(w[1] - 1) < 1e-9 for w in rep["error"]["witnesses"])


def test_verify_missing_manifold(tmp_path):
    s = scene(tmp_path, None, "(1, 0)")
    code, rep = run(["verify", "--scene", s, "--theorem", "1"], tmp_path)
    assert code == 1
    assert rep["error"]["type"] == "SceneError" and rep["error"]["line"] == 1
    assert "line 1" in rep["error"]["message"]


def test_verify_unknown_manifold_line(tmp_path):
    p = tmp_path / "s.toml"
    p.write_text('# comment\n[scene]\nfield = "(1, 0)"\nmanifold = "torus"\n')
    code, rep = run(["verify", "--scene", str(p), "--theorem", "1"], tmp_path)
    assert code == 1 and rep["error"]["line"] == 4


def test_verify_non_isolated_is_hypothesis_violation(tmp_path):
    s = scene(tmp_path, "disk2", "((x1 - 1)^2 - x2^2, 2*(x1 - 1)*x2)")
    code, rep = run(["verify", "--scene", s, "--theorem", "1"], tmp_path)
    assert code == 2 and rep["error"]["type"] == "NonIsolatedZero"
    assert rep["error"]["zero_kind"] == "zero_of_boundary_field"
    # ball3 (1,0,0): the normal field vanishes on a whole great circle
    s = scene(tmp_path, "ball3", "(1, 0, 0)")
    code, rep = run(["verify", "--scene", s, "--theorem", "4"], tmp_path)
    assert code == 2 and rep["error"]["zero_kind"] == "zero_of_normal_field"


def test_verify_failed_identity_exits_one(tmp_path, monkeypatch):
    """A report whose two sides differ is a failure, not a hypothesis problem."""
    import boundary_index.cli as cli
    from boundary_index.verify import TheoremReport

    def wrong(m, f, **kw):
        return TheoremReport("T1", m.name, f.source_text, HalfInt(1), HalfInt(2), None)

    monkeypatch.setitem(cli.THEOREMS, "1", wrong)
    code, rep = run(["verify", "--scene", scene(tmp_path, "disk2", "(1, 0)"), "--theorem", "1"], tmp_path)
    assert code == 1 and rep["pass"] is False and rep["status"] == "fail"


def test_verify_s3_and_double(tmp_path):
    s = scene(tmp_path, "disk2", "(1, 0)")
    code, rep = run(["verify", "--scene", s, "--theorem", "s3"], tmp_path)
    assert code == 0 and [r["theorem_id"] for r in rep["reports"]] == ["S3a", "S3b"]
    code, rep = run(["verify", "--scene", s, "--theorem", "double"], tmp_path)
    assert code == 0 and len(rep["reports"]) == 8


def test_missing_scene_file(tmp_path):
    code, rep = run(["verify", "--scene", str(tmp_path / "nope.toml"), "--theorem", "1"], tmp_path)
    assert code == 1 and "cannot read scene file" in rep["error"]["message"]


# ---------------------------------------------------------------------------
# index
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "manifold,field,point,kind,value",
    [
        ("interval", "(x1)", "0", "normal", {"num": 1, "den": 2}),
        ("disk2", "(x1, -x2)", "0,0", "interior", {"num": -1, "den": 1}),
        ("disk2", "(x1 - 1, x2)", "1,0", "tangential", {"num": 1, "den": 1}),
        ("ball3", "(1, 0, 0)", "1,0,0", "normal", {"num": -1, "den": 2}),
    ],
)
def test_index(tmp_path, manifold, field, point, kind, value):
    s = scene(tmp_path, manifold, field)
    code, rep = run(["index", "--scene", s, "--point", point, "--kind", kind], tmp_path)
    assert code == 0 and rep["value"] == value
    prov = rep["provenance"]
    assert prov["eps"] > 0 and "halvings" in prov


def test_index_not_a_zero(tmp_path):
    s = scene(tmp_path, "disk2", "(x1, -x2)")
    code, rep = run(["index", "--scene", s, "--point", "0.5,0", "--kind", "interior"], tmp_path)
    assert code == 2 and rep["error"]["type"] == "HypothesisViolated"


def test_index_bad_point(tmp_path):
    s = scene(tmp_path, "disk2", "(x1, -x2)")
    code, rep = run(["index", "--scene", s, "--point", "0", "--kind", "interior"], tmp_path)
    assert code == 1 and "2 coordinates" in rep["error"]["message"]


def test_epsilon_override(tmp_path):
    s = scene(tmp_path, "disk2", "(x1 - 1, x2)", options="epsilon = 0.08")
    code, rep = run(["index", "--scene", s, "--point", "1,0", "--kind", "normal"], tmp_path)
    assert code == 0 and rep["provenance"]["eps"] == 0.08
    code, rep = run(["index", "--scene", s, "--point", "1,0", "--kind", "normal", "--epsilon", "0.03"], tmp_path)
    assert code == 0 and rep["provenance"]["eps"] == 0.03 and rep["scene"]["options"]["epsilon"] == 0.03


# ---------------------------------------------------------------------------
# plot and catalog
# ---------------------------------------------------------------------------


def test_plot_disk(tmp_path):
    s = scene(tmp_path, "disk2", "(1, 0)")
    out = tmp_path / "d.svg"
    assert main(["plot", "--scene", s, "--out", str(out)]) == 0
    svg = out.read_text()
    assert svg.startswith("<svg") or svg.startswith("<?xml")
    assert 'class="outline"' in svg
    assert svg.count('class="zero typeplus"') == 1 and svg.count('class="zero typeminus"') == 1
    assert ">−1</text>" in svg and ">+1</text>" in svg
    assert svg.count("<polygon") > 20  # arrow heads


def test_plot_interval_and_interior(tmp_path):
    out = tmp_path / "i.svg"
    assert main(["plot", "--scene", scene(tmp_path, "interval", "(x1)"), "--out", str(out)]) == 0
    svg = out.read_text()
    assert 'class="zero type0"' in svg and ">+1/2</text>" in svg
    assert main(["plot", "--scene", scene(tmp_path, "disk2", "(x1, -x2)"), "--out", str(out)]) == 0
    assert 'class="zero interior"' in out.read_text() and ">−1</text>" in out.read_text()


def test_plot_refuses_dimension_three(tmp_path):
    out = tmp_path / "b.svg"
    assert main(["plot", "--scene", scene(tmp_path, "ball3", "(1, 0, 0)"), "--out", str(out)]) == 1
    assert not out.exists()


def test_catalog(tmp_path, capsys):
    code, rep = run(["catalog"], tmp_path)
    assert code == 0
    assert [(r["name"], r["euler"]) for r in rep["manifolds"]] == [
        ("interval", 1), ("disk2", 1), ("annulus", 0), ("pants", -1), ("ball3", 1), ("solidtorus", 0),
    ]
    assert main(["catalog"]) == 0
    assert "solidtorus" in capsys.readouterr().out


# ---------------------------------------------------------------------------
# reports and scenes
# ---------------------------------------------------------------------------


def test_report_round_trip(tmp_path):
    s = scene(tmp_path, "interval", "(x1 - 0.5)")
    code, rep = run(["verify", "--scene", s, "--theorem", "3"], tmp_path)
    assert code == 0
    assert HalfInt.from_json(rep["lhs"]) == HalfInt(0)
    vals = [HalfInt.from_json(e["value"]) for e in rep["bundle"]["per_zero"] if e["definition"] != "boundary_field"]
    assert sorted(vals) == [HalfInt(-1), HalfInt(-1), HalfInt(2)]
    assert sum(vals, HalfInt(0)) == HalfInt.from_json(rep["terms"]["ind_star_nu"])


def test_byte_identical_outputs(scenes_dir, tmp_path):
    for k in range(2):
        assert main(["verify", "--scene", str(scenes_dir / "ball3_bumped_sink.toml"), "--out", str(tmp_path / f"r{k}.json")]) == 0
        assert main(["plot", "--scene", str(scenes_dir / "disk2_constant.toml"), "--out", str(tmp_path / f"p{k}.svg")]) == 0
    assert (tmp_path / "r0.json").read_bytes() == (tmp_path / "r1.json").read_bytes()
    assert (tmp_path / "p0.svg").read_bytes() == (tmp_path / "p1.svg").read_bytes()


def test_atomic_write(tmp_path):
    target = tmp_path / "out.json"
    target.write_text("old")
    write_atomic(target, "new\n")
    assert target.read_text() == "new\n"
    assert sorted(os.listdir(tmp_path)) == ["out.json"]


@pytest.mark.parametrize(
    "options,msg",
    [
        ("epsilon = 0.5", "epsilon"),
        ("epsilon = 0", "epsilon"),
        ("tol = 1e-3", "tol"),
        ("seed = 1.5", "seed"),
        ("colour = 1", "unknown key"),
    ],
)
def test_scene_option_ranges(options, msg):
    text = f'[scene]\nmanifold = "disk2"\nfield = "(1, 0)"\n\n[options]\n{options}\n'
    with pytest.raises(SceneError) as info:
        parse_scene(text)
    assert msg in str(info.value) and info.value.line == 6


def test_scene_field_errors_carry_line():
    with pytest.raises(SceneError) as info:
        parse_scene('[scene]\nmanifold = "disk2"\nfield = "(x1, x3)"\n')
    assert info.value.line == 3
    with pytest.raises(SceneError) as info:
        parse_scene('[scene]\nmanifold = "disk2"\nfield = "(1, 0"\n')
    assert info.value.line == 3
    with pytest.raises(SceneError) as info:
        parse_scene('[scene\nmanifold = "disk2"\n')
    assert info.value.line == 1


def test_zero_hints(tmp_path):
    p = tmp_path / "h.toml"
    p.write_text('[scene]\nmanifold = "disk2"\nfield = "(x1 - 0.3, x2 + 0.2)"\nzero_hints = [[0.31, -0.19]]\n')
    code, rep = run(["verify", "--scene", str(p), "--theorem", "1"], tmp_path)
    assert code == 0 and rep["scene"]["zero_hints"] == [[0.31, -0.19]]
    with pytest.raises(SceneError):
        parse_scene('[scene]\nmanifold = "disk2"\nfield = "(1, 0)"\nzero_hints = [[1, 2, 3]]\n')


def test_shipped_scenes_parse(scenes_dir):
    from boundary_index.scene import load_scene

    for p in sorted(scenes_dir.glob("*.toml")):
        s = load_scene(p)
        assert s.mode in {"T1", "T2", "T3", "T4"}


def test_console_entry_point(tmp_path):
    s = scene(tmp_path, "interval", "(x1)")
    res = subprocess.run(
        [sys.executable, "-m", "boundary_index", "verify", "--scene", s, "--theorem", "1"],
        capture_output=True, text=True, check=False,
    )
    assert res.returncode == 0 and json.loads(res.stdout)["pass"] is True
