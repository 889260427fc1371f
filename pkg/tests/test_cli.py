import json
import os

import pytest

from gmconj.cli import main
from gmconj.manifest import ManifestError, parse_manifest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
MANIFESTS = os.path.join(ROOT, "manifests")


def mpath(name):
    return os.path.join(MANIFESTS, name)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


# --- validate ----------------------------------------------------------------

def test_validate_samples_ok(capsys):
    for name in ("two_trefoil.toml", "klein_trefoil.toml",
                 "figure_eight_trefoil.toml", "sol_torus_bundle.toml",
                 "sol_double_klein.toml"):
        code, out = run(capsys, "validate", mpath(name))
        assert code == 0, name
        assert out.startswith("valid"), name


def test_validate_identity_gluing_cites_fibers(capsys):
    code = main(["validate", mpath("invalid_identity_gluing.toml")])
    captured = capsys.readouterr()
    assert code == 1
    assert "fiber" in captured.err


def test_validate_empty_file_is_usage_error(tmp_path, capsys):
    p = tmp_path / "empty.toml"
    p.write_text("")
    code, _ = run(capsys, "validate", str(p))
    assert code == 2


def test_validate_missing_file(capsys):
    code, _ = run(capsys, "validate", mpath("no_such_file.toml"))
    assert code == 2


MALFORMED = [
    "not toml at all [",
    "format = 2\n[[piece]]\nid = 'v1'\nkind = 'seifert'",
    "format = 1",                                        # neither graph nor sol
    "format = 1\n[sol]\ncase = 'torus-bundle'",          # missing monodromy
    "format = 1\n[sol]\ncase = 'weird'",
    "format = 1\n[[piece]]\nkind = 'seifert'",           # missing id
    "format = 1\n[[piece]]\nid = 'v1'\nkind = 'what'",
    ("format = 1\n[[piece]]\nid = 'v1'\nkind = 'seifert'\n"
     "orientable_base = true\ngenus = 0\nboundaries = 1\nb = 0\n"
     "exceptional = [[2, 1, 9]]"),
    ("format = 1\n[[piece]]\nid = 'v1'\nkind = 'klein'\n"
     "[[edge]]\nid = 'e1'\norigin = ['v1']\nend = ['v1', 1]\n"
     "matrix = [[1, 0], [0, 1]]"),
    ("format = 1\n[[piece]]\nid = 'v1'\nkind = 'klein'\n"
     "[[edge]]\nid = 'e1'\norigin = ['v1', 1]\nend = ['v1', 1]\n"
     "matrix = [[1, 0]]"),
]


def test_malformed_manifests_exit_2(tmp_path, capsys):
    for i, text in enumerate(MALFORMED):
        with pytest.raises(ManifestError):
            parse_manifest(text)
        p = tmp_path / f"bad{i}.toml"
        p.write_text(text)
        code, _ = run(capsys, "validate", str(p))
        assert code == 2, text


# --- decide ------------------------------------------------------------------

def test_decide_cross_piece_positive(capsys):
    code, out = run(capsys, "decide", mpath("two_trefoil.toml"),
                    "-u", "v1.c1 v1.c2", "-v", "v2.h^-1", "--verify")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "verdict: true"
    assert lines[2] == "certificate: ii"
    assert lines[3].startswith("path: ") and len(lines[3].split()) <= 5


def test_decide_fibers_negative_exact(capsys):
    code, out = run(capsys, "decide", mpath("two_trefoil.toml"),
                    "-u", "v1.h", "-v", "v2.h", "--verify", "--verify-radius", "4")
    assert code == 0
    assert out == "verdict: false\ncertificate: exact-negative\n"


def test_decide_identity_witness(capsys):
    code, out = run(capsys, "decide", mpath("two_trefoil.toml"),
                    "-u", "v1.c1", "-v", "v1.c1")
    assert code == 0
    assert "verdict: true" in out and "witness: 1" in out


def test_decide_json_matches_text(capsys):
    code, out = run(capsys, "decide", mpath("two_trefoil.toml"),
                    "-u", "v1.c1 v1.c2", "-v", "v2.h^-1", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "true" and data["certificate"] == "ii"


def test_decide_deterministic(capsys):
    runs = set()
    for _ in range(3):
        _, out = run(capsys, "decide", mpath("two_trefoil.toml"),
                     "-u", "v1.c2 t_e1 v2.c1 t_e1^-1", "-v",
                     "v1.c2 t_e1 v2.c1 t_e1^-1")
        runs.add(out)
    assert len(runs) == 1


def test_decide_sol_torus_bundle(capsys):
    code, out = run(capsys, "decide", mpath("sol_torus_bundle.toml"),
                    "-u", "x t", "-v", "t")
    assert code == 0
    assert out.splitlines()[0] == "verdict: true"
    assert "witness: y^-1" in out
    code, out = run(capsys, "decide", mpath("sol_torus_bundle.toml"),
                    "-u", "t^3", "-v", "t^2")
    assert code == 0
    assert out.splitlines()[0] == "verdict: false"


def test_decide_sol_double_klein(capsys):
    code, out = run(capsys, "decide", mpath("sol_double_klein.toml"),
                    "-u", "a1^2 b1", "-v", "a1^2 b1^3")
    assert code == 0
    assert out.splitlines()[0] == "verdict: true"
    code, out = run(capsys, "decide", mpath("sol_double_klein.toml"),
                    "-u", "a1^2 b1", "-v", "a1^4 b1")
    assert code == 0
    assert out.splitlines()[0] == "verdict: false"


def test_decide_hyperbolic_meridians(capsys):
    code, out = run(capsys, "decide", mpath("figure_eight_trefoil.toml"),
                    "-u", "h1.a", "-v", "h1.b")
    assert code == 0
    assert out.splitlines()[0] == "verdict: true"


def test_decide_bad_word_exit_2(capsys):
    code, _ = run(capsys, "decide", mpath("two_trefoil.toml"),
                  "-u", "v1.zzz", "-v", "v2.h")
    assert code == 2


# --- sub ---------------------------------------------------------------------

def test_sub_word_empty_is_trivial(capsys):
    code, out = run(capsys, "sub", mpath("two_trefoil.toml"), "word", "")
    assert code == 0 and out == "verdict: true\n"


def test_sub_word_fiber_nontrivial(capsys):
    code, out = run(capsys, "sub", mpath("two_trefoil.toml"), "word", "v1.h")
    assert code == 0 and out == "verdict: false\n"


def test_sub_parallel_example(capsys):
    code, out = run(capsys, "sub", mpath("two_trefoil.toml"),
                    "parallel", "v1", "T1", "v1.c1 v1.c2")
    assert code == 0
    assert "element: (-1, 0)" in out


def test_sub_cosets_line_example(capsys):
    code, out = run(capsys, "sub", mpath("two_trefoil.toml"),
                    "cosets", "v1", "T1", "T1", "v1.c1", "v1.c1")
    assert code == 0
    assert "kind: line" in out and "step: v1.h | v1.h" in out


def test_sub_reduce_pinches_crossing(capsys):
    code, out = run(capsys, "sub", mpath("two_trefoil.toml"),
                    "reduce", "v1.c1 t_e1 v2.h t_e1^-1")
    assert code == 0
    assert "steps: 0" in out


def test_sub_unknown_vertex_exit_1(capsys):
    code, _ = run(capsys, "sub", mpath("two_trefoil.toml"),
                  "parallel", "v9", "1", "v1.h")
    assert code == 1


def test_sub_wrong_arity_exit_2(capsys):
    code, _ = run(capsys, "sub", mpath("two_trefoil.toml"), "parallel", "v1")
    assert code == 2
