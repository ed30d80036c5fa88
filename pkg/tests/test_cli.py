import json

import pytest

from src.cli import CliUsageError, build_parser, main, parse_triple, parse_word, parse_words
from src.config import config
from src.reports import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, compare_golden, render_table


def gcm_path(name: str) -> str:
    return str(config.gcm_dir / f"{name}.json")


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


class TestParsing:
    def test_words(self):
        assert parse_word("e") == ()
        assert parse_word("0,1") == (0, 1)
        assert parse_word("s0s1") == (0, 1)
        with pytest.raises(CliUsageError):
            parse_word("s0x")

    def test_words_triplet(self, a2):
        w1, w2, v = parse_words("e|s0|0", a2)
        assert (w1.word, w2.word, v.word) == ((), (0,), (0,))
        with pytest.raises(CliUsageError):
            parse_words("e|s0", a2)
        with pytest.raises(CliUsageError):
            parse_words("e|s3|s3", a2)

    def test_triple(self, affine_a1):
        t = parse_triple("1,1;1,1;2,2,-1", affine_a1)
        assert t.mu.coords == (2, 2, -1)
        with pytest.raises(CliUsageError):
            parse_triple("1;2", affine_a1)

    def test_usage_error_exit_code(self):
        with pytest.raises(SystemExit) as info:
            build_parser().parse_args(["face", "--gcm", "x.json"])
        assert info.value.code == EXIT_USAGE


class TestCommands:
    def test_algebra(self, capsys):
        code, out = run(capsys, "algebra", "--gcm", gcm_path("affine_a1"))
        payload = json.loads(out)
        assert code == EXIT_PASS
        assert payload["type"] == "affine"
        assert payload["dim_E"] == 8
        assert payload["null_root"] == [1, 1]
        assert payload["untwisted_affine"]

    def test_algebra_table(self, capsys):
        code, out = run(capsys, "algebra", "--gcm", gcm_path("a2"), "--format", "table")
        assert code == EXIT_PASS
        assert out.splitlines()[0] == "finite, dim h = 2, dim E = 6"

    @pytest.mark.parametrize("name", ["a1", "a2"])
    def test_inequalities_golden(self, capsys, name):
        code, out = run(capsys, "inequalities", "--gcm", gcm_path(name), "--max-length", "4")
        assert code == EXIT_PASS
        ok, diff = compare_golden(json.loads(out), config.golden_dir / f"{name}_inequalities.json")
        assert ok, diff

    def test_face_golden(self, capsys):
        code, out = run(capsys, "face", "--gcm", gcm_path("a1"), "--words", "s0|e|s0")
        assert code == EXIT_PASS
        ok, diff = compare_golden(json.loads(out), config.golden_dir / "a1_face.json")
        assert ok, diff

    def test_face_not_coefficient_one(self, capsys):
        code, _ = run(capsys, "face", "--gcm", gcm_path("a2"), "--words", "s0|s1|s0s1")
        assert code == EXIT_FAIL

    def test_member_agreement(self, capsys):
        code, out = run(capsys, "member", "--gcm", gcm_path("a1"), "--triple", "1;1;3")
        payload = json.loads(out)
        assert code == EXIT_PASS
        assert not payload["screen_member"]
        assert payload["gamma"]["status"] == "not_up_to"
        assert payload["violated"][0]["value"] == "-1/2"

    def test_member_lattice(self, capsys):
        code, out = run(capsys, "member", "--gcm", gcm_path("affine_a1"), "--triple", "1,0;0,0;0,0")
        payload = json.loads(out)
        assert code == EXIT_PASS
        assert not payload["lattice_condition"]
        assert payload["gamma"]["status"] == "lattice_obstruction"

    def test_irredundant(self, capsys, tmp_path):
        out_path = tmp_path / "irr.json"
        code, out = run(capsys, "irredundant", "--gcm", gcm_path("a1"), "--out", str(out_path))
        assert code == EXIT_PASS
        assert out == ""
        payload = json.loads(out_path.read_text(encoding="utf-8"))
        assert payload["count"] == payload["irredundant_count"] == 3
        assert payload["all_verified"]

    def test_irredundant_affine_fails(self, capsys):
        code, _ = run(capsys, "irredundant", "--gcm", gcm_path("affine_a1"), "--max-length", "1")
        assert code == EXIT_FAIL

    def test_config_file_overridden_by_flags(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"gcm": gcm_path("a2"), "max_length": 1}), encoding="utf-8")
        code, out = run(capsys, "inequalities", "--config", str(cfg), "--max-length", "4")
        assert code == EXIT_PASS
        assert json.loads(out)["count"] == 12


class TestErrors:
    def test_missing_gcm(self, capsys):
        code, _ = run(capsys, "algebra")
        assert code == EXIT_USAGE

    def test_bad_gcm_file(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"matrix": [[2, 1], [-1, 2]]}', encoding="utf-8")
        code, _ = run(capsys, "algebra", "--gcm", str(path))
        assert code == EXIT_USAGE

    def test_levi_out_of_range(self, capsys):
        code, _ = run(capsys, "face", "--gcm", gcm_path("a2"), "--levi", "5", "--words", "e|e|e")
        assert code == EXIT_USAGE

    def test_unknown_suite(self):
        with pytest.raises(SystemExit) as info:
            main(["selftest", "--suite", "nope"])
        assert info.value.code == EXIT_USAGE


def test_render_selftest_table():
    payload = {"command": "selftest", "overall": "PASS",
               "suites": [{"name": "sl2_cone", "status": "PASS", "message": None}]}
    assert render_table(payload).splitlines()[-1] == "overall = PASS"
