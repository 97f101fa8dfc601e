import json
import re
from fractions import Fraction

import pytest

from oracles import BREXIT_PROPS, brexit_consistency
from tafkit import cli
from conftest import GOLDEN


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = cli.main([str(a) for a in argv])
        out = capsys.readouterr()
        return code, out.out, out.err
    return _run


@pytest.fixture
def three_cycle(tmp_path):
    p = tmp_path / "three-cycle.json"
    p.write_text(json.dumps({"arguments": ["a", "b", "c"],
                             "attacks": [["a", "b"], ["b", "c"], ["c", "a"]]}))
    return p


def test_validate(run, brexit_path, tmp_path):
    code, out, _ = run("validate", brexit_path)
    assert code == 0 and out == "valid\n"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"taif-version": 1, "illocutions": [{"id": "p"}],
                               "applications": [{"id": "s", "kind": "support",
                                                 "scheme": "deductive-support",
                                                 "premises": ["p"], "conclusion": "x"}]}))
    code, out, _ = run("validate", bad, "--format", "json")
    report = json.loads(out)
    assert code == 1 and report["valid"] is False
    assert report["violations"][0]["element"] == "/applications/0/conclusion"


def test_eval_matches_oracle(run, brexit_path, tmp_path):
    values = {p: "0" for p in BREXIT_PROPS}
    values.update(brexit="0.8", eu_harms_uk="0.6", eu_bad_intentions="0.9",
                  eu_harms_uk_fishermen="0.8", eu_must_harm_eu_fishermen="0.6")
    lab = tmp_path / "l.json"
    lab.write_text(json.dumps(values))
    expected = brexit_consistency({p: Fraction(v) for p, v in values.items()})
    code, out, _ = run("eval", brexit_path, lab, "--property", "consistency", "--grid", 10)
    assert code == 0
    assert out == f"{int(expected * 10)}/10\n"


def test_eval_rejects_partial_labelling(run, brexit_path, tmp_path):
    lab = tmp_path / "l.json"
    lab.write_text(json.dumps({"brexit": 1}))
    code, _, err = run("eval", brexit_path, lab, "--property", "consistency")
    assert code == 1 and "missing" in err


def test_search_consistency_golden(run, brexit_path):
    code, out, _ = run("search", brexit_path, "--property", "consistency",
                       "--grid", 2, "--depth", 1, "--format", "json")
    assert code == 0
    assert out == (GOLDEN / "brexit_search_consistency_k2.json").read_text(encoding="utf-8")


def test_search_grounded_golden(run, brexit_path):
    code, out, _ = run("search", brexit_path, "--property", "grounded", "--grid", 2,
                       "--format", "json")
    assert code == 0
    assert out == (GOLDEN / "brexit_search_grounded_k2.json").read_text(encoding="utf-8")


def test_search_text_and_output_file(run, three_cycle, tmp_path):
    target = tmp_path / "out.txt"
    code, out, _ = run("search", three_cycle, "--property", "grounded", "--top", 2,
                       "-o", target)
    assert code == 0 and out == ""
    assert target.read_text() == "#1 1/1 a=0/1 b=0/1 c=0/1\n#2 0/1 a=0/1 b=0/1 c=1/1\n"


def test_dung(run, three_cycle):
    assert run("dung", three_cycle, "--kind", "stable")[:2] == (0, "no stable extension\n")
    assert run("dung", three_cycle, "--kind", "preferred")[1] == "{}\n"
    code, out, _ = run("dung", three_cycle, "--kind", "conflict-free", "--format", "json")
    assert json.loads(out)["extensions"] == [[], ["a"], ["b"], ["c"]]


def test_actors(run, brexit_path):
    code, out, _ = run("actors", brexit_path, "--grid", 1, "--depth", 0)
    report = json.loads(out)
    assert code == 0
    assert report["similarity"]["A"]["B"] == report["similarity"]["B"]["A"]
    assert set(report["actors"]) == {"A", "B"}


def test_project_and_export(run, brexit_path, three_cycle):
    code, out, _ = run("project", brexit_path)
    assert code == 0 and json.loads(out)["taf-version"] == 1
    code, out, _ = run("export", brexit_path)
    assert out == (GOLDEN / "brexit.dot").read_text(encoding="utf-8")
    code, out, _ = run("export", three_cycle)
    assert code == 0 and '"a->b"' in out


def test_exit_codes(run, brexit_path, tmp_path):
    assert run("validate", tmp_path / "missing.json")[0] == 2
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert run("validate", junk)[0] == 1
    assert run("search", junk, "--property", "consistency")[0] == 1
    code, _, err = run("search", brexit_path, "--property", "consistency", "--grid", 10)
    assert code == 3 and str(11 ** 11) in err
    with pytest.raises(SystemExit) as exc:
        cli.main(["search", str(brexit_path)])
    assert exc.value.code == 2


def test_threads_do_not_change_output(run, brexit_path):
    outs = [run("search", brexit_path, "--property", "consistency", "--grid", 2,
                "--depth", 1, "--threads", t)[1] for t in (1, 4)]
    assert outs[0] == outs[1]


def _help_text():
    parser = cli.build_parser()
    out = parser.format_help()
    for name, sub in parser._subparsers._group_actions[0].choices.items():
        out += "\n" + sub.format_help()
    return out


def test_help_golden(monkeypatch):
    monkeypatch.setenv("COLUMNS", "80")
    assert _help_text() == (GOLDEN / "help.txt").read_text(encoding="utf-8")


def test_help_documents_every_flag():
    parser = cli.build_parser()
    for name, sub in parser._subparsers._group_actions[0].choices.items():
        text = sub.format_help()
        for action in sub._actions:
            for flag in action.option_strings:
                assert flag in text, (name, flag)
            assert action.help, (name, action.dest)
