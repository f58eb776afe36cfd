import os

from esequiv.cli import run


def out_of(capsys):
    return capsys.readouterr().out


class TestCheck:
    def test_related_exits_zero(self, capsys):
        assert run(["check", "hhb", "--expr", "a", "--expr", "a+a"]) == 0
        assert "related" in out_of(capsys)

    def test_unrelated_exits_one(self, capsys):
        assert run(["check", "iso", "--expr", "a", "--expr", "a+a"]) == 1
        assert "not related" in out_of(capsys)

    def test_witness_flag(self, capsys):
        assert run(["check", "st", "--expr", "a;a", "--expr", "a||a", "--witness"]) == 1
        assert "witness:" in out_of(capsys)

    def test_bad_expression_exits_two(self, capsys):
        assert run(["check", "iso", "--expr", "a +", "--expr", "a"]) == 2

    def test_non_prime_exits_two(self):
        assert run(["check", "iso", "--expr", "(a+b);c", "--expr", "a"]) == 2

    def test_missing_input_exits_two(self):
        assert run(["check", "iso", "--expr", "a"]) == 2

    def test_missing_file_exits_two(self):
        assert run(["check", "iso", "--file", "/nonexistent.es", "--expr", "a"]) == 2


class TestMatrix:
    def test_seq_vs_par(self, capsys):
        assert run(["matrix", "--expr", "a;a", "--expr", "a||a"]) == 0
        out = out_of(capsys)
        assert "bits: 1010000000" in out

    def test_mixed_expr_and_file(self, tmp_path, capsys):
        path = tmp_path / "x.es"
        path.write_text("es v1\nevent 0 a\nevent 1 a\ncause 0 1\n")
        assert run(["matrix", "--file", str(path), "--expr", "a;a"]) == 0
        assert "bits: 1111111111" in out_of(capsys)


class TestStructureCommands:
    def test_validate(self, capsys):
        assert run(["validate", "--expr", "(a||b)+(a;b)"]) == 0
        out = out_of(capsys)
        assert "events: 4" in out and "configurations: 6" in out

    def test_show_roundtrips(self, tmp_path, capsys):
        assert run(["show", "--expr", "a;b"]) == 0
        text = out_of(capsys)
        path = tmp_path / "roundtrip.es"
        path.write_text(text)
        assert run(["validate", "--file", str(path)]) == 0

    def test_show_dot(self, capsys):
        assert run(["show", "--expr", "a;b", "--dot"]) == 0
        assert "digraph es" in out_of(capsys)

    def test_lts_dot(self, capsys):
        assert run(["lts", "--expr", "(a||b)+(a;b)", "--mode", "i", "--dot"]) == 0
        assert out_of(capsys).count("->") == 6

    def test_lts_modes(self, capsys):
        for mode in ("i", "s", "p"):
            assert run(["lts", "--expr", "a||b", "--mode", mode]) == 0


class TestFixturesCommand:
    def test_all_green(self, capsys):
        assert run(["fixtures"]) == 0
        assert "0 mismatched" in out_of(capsys)


class TestSpectrumCommand:
    def test_small_run_deterministic(self, capsys):
        args = [
            "spectrum", "--class", "cs", "--pairs", "6", "--seed", "5",
            "--max-size", "6", "--alphabet", "1", "--table",
        ]
        assert run(args) == 0
        first = out_of(capsys)
        assert run(args) == 0
        assert out_of(capsys) == first
        assert "violations: 0" in first


class TestSearchCommand:
    def test_writes_pairs_and_certificate(self, tmp_path, capsys):
        out_dir = str(tmp_path / "results")
        rc = run([
            "search", "--coarse", "it", "--fine", "st", "--max-n", "3",
            "--labels", "1", "--out", out_dir,
        ])
        assert rc == 0
        names = sorted(os.listdir(out_dir))
        assert names == ["certificate.txt", "pair_000_left.es", "pair_000_right.es"]
        assert run(["validate", "--file", os.path.join(out_dir, "pair_000_left.es")]) == 0

    def test_empty_search_exits_one(self, tmp_path, capsys):
        rc = run([
            "search", "--coarse", "iso", "--fine", "it", "--max-n", "3",
            "--out", str(tmp_path / "none"),
        ])
        assert rc == 1
        assert "no pair" in out_of(capsys)
