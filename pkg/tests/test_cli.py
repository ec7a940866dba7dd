"""End-to-end command line checks, driving replab.cli.main directly.

One test goes through ``python3 -m replab`` to cover the module entry
point; everything else calls main() in-process for speed.
"""

import json
import subprocess
import sys
from fractions import Fraction

import pytest

import oracles
from replab import forbidden, structures
from replab.cli import main
from replab.games import Game, game_to_json, preset_game, unit_tuples
from replab.search import export_wcnf


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- value --------------------------------------------------------------------


def test_value_report(tmp_path, capsys):
    code, out, err = run(capsys, [
        "value", "--preset", "anticorr", "--q", "3",
        "--cache-dir", str(tmp_path / "cache")])
    assert code == 0 and err == ""
    assert out.splitlines() == [
        "game:          anticorr",
        "params:        q=3, repeat=1",
        "value:         2/3",
        "method:        exact-bb",
        "status:        computed",
    ]


def test_value_second_run_is_cached(tmp_path, capsys):
    argv = ["value", "--preset", "anticorr", "--cache-dir", str(tmp_path / "c")]
    code, out, _ = run(capsys, argv)
    assert code == 0 and "status:        computed" in out
    code, out, _ = run(capsys, argv)
    assert code == 0 and "status:        cached" in out
    assert "value:         2/3" in out


def test_value_json_is_deterministic(capsys):
    argv = ["value", "--preset", "anticorr", "--no-cache", "--json"]
    _, first, _ = run(capsys, argv)
    _, second, _ = run(capsys, argv)
    assert first == second
    doc = json.loads(first)
    assert "timestamp" not in doc
    assert doc["game"] == "anticorr"
    assert doc["value"] == "2/3"
    assert doc["strategy"] is not None


def test_value_recheck_catches_corrupted_record(tmp_path, capsys):
    cache = tmp_path / "cache"
    argv = ["value", "--preset", "anticorr", "--cache-dir", str(cache)]
    assert main(argv) == 0
    capsys.readouterr()
    record_path, = (cache / "records").glob("*.json")
    doc = json.loads(record_path.read_text())
    doc["value"] = "1/3"
    record_path.write_text(json.dumps(doc))

    # without --recheck the cached record is trusted as-is
    code, out, _ = run(capsys, argv)
    assert code == 0 and "value:         1/3" in out

    code, _, err = run(capsys, argv + ["--recheck"])
    assert code == 1
    assert err.startswith("error: cached record failed recheck")


def test_value_from_game_file(tmp_path, capsys):
    path = tmp_path / "game.json"
    path.write_text(json.dumps(game_to_json(preset_game("anticorr", q=3))))
    argv = ["value", "--game", str(path), "--cache-dir", str(tmp_path / "c")]
    code, out, _ = run(capsys, argv)
    assert code == 0
    assert "game:          file" in out
    assert "value:         2/3" in out
    code, out, _ = run(capsys, argv)
    assert "status:        cached" in out


def test_value_game_source_errors(tmp_path, capsys):
    path = tmp_path / "game.json"
    path.write_text(json.dumps(game_to_json(preset_game("anticorr", q=3))))

    code, _, err = run(capsys, ["value", "--game", str(path),
                                "--preset", "anticorr", "--no-cache"])
    assert code == 2 and "not both" in err

    code, _, err = run(capsys, ["value", "--no-cache"])
    assert code == 2 and "a game is required" in err

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, ["value", "--game", str(bad), "--no-cache"])
    assert code == 2 and "not JSON" in err

    empty = tmp_path / "empty.json"
    empty.write_text("{}")
    code, _, err = run(capsys, ["value", "--game", str(empty), "--no-cache"])
    assert code == 2

    code, _, err = run(capsys, ["value", "--game", str(tmp_path / "absent.json"),
                                "--no-cache"])
    assert code == 2 and "cannot read" in err


def test_value_budget_exceeded(capsys):
    code, _, err = run(capsys, ["value", "--preset", "anticorr",
                                "--budget", "10", "--no-cache"])
    assert code == 3 and err.startswith("error:")


# -- density ------------------------------------------------------------------


def test_density_line_search(capsys):
    code, out, _ = run(capsys, ["density", "line", "--q", "2", "--n", "3",
                                "--no-cache"])
    assert code == 0
    assert "family:        line" in out
    assert "value:         3/8" in out
    assert "witness size:  3 of 8" in out
    assert "method:        exact-bb" in out


def test_density_line_closed_form(capsys):
    code, out, _ = run(capsys, ["density", "line", "--q", "2", "--n", "5",
                                "--method", "closed-form", "--no-cache"])
    assert code == 0
    assert "value:         5/16" in out
    assert "method:        closed-form" in out


def test_density_square_and_corner(capsys):
    code, out, _ = run(capsys, ["density", "square", "--n", "1", "--no-cache"])
    assert code == 0 and "value:         3/4" in out
    code, out, _ = run(capsys, ["density", "corner", "--n", "1", "--no-cache"])
    assert code == 0 and "value:         1/2" in out


def test_density_grid(capsys):
    code, out, _ = run(capsys, ["density", "grid", "--p", "3", "--k", "2",
                                "--n", "1", "--no-cache"])
    assert code == 0
    assert "value:         8/9" in out
    assert "witness size:  8 of 9" in out


def test_density_recheck_passes_on_good_records(tmp_path, capsys):
    # witness-carrying record: recheck re-verifies freeness of the witness
    argv = ["density", "line", "--q", "2", "--n", "3",
            "--cache-dir", str(tmp_path / "c")]
    assert main(argv) == 0
    code, out, _ = run(capsys, argv + ["--recheck"])
    assert code == 0 and "status:        cached" in out

    # witness-free record (large closed form): recheck recomputes the value
    argv = ["density", "line", "--q", "2", "--n", "13",
            "--method", "closed-form", "--cache-dir", str(tmp_path / "c")]
    assert main(argv) == 0
    capsys.readouterr()
    code, out, _ = run(capsys, argv + ["--recheck"])
    assert code == 0 and "status:        cached" in out


def test_density_wcnf_export(tmp_path, capsys):
    out_path = tmp_path / "line.wcnf"
    code, out, _ = run(capsys, ["density", "line", "--q", "2", "--n", "3",
                                "--wcnf", str(out_path)])
    assert code == 0
    hyper = structures.lines(2, 3).to_hypergraph(with_generators=False)
    assert out_path.read_text() == export_wcnf(hyper)
    assert out.strip() == (f"wrote WCNF: 8 points, {len(hyper.edges)} "
                           f"hard clauses -> {out_path}")


# -- eqn ----------------------------------------------------------------------


def test_eqn_unitvec(capsys):
    code, out, _ = run(capsys, ["eqn", "--preset", "unitvec", "--q", "3",
                                "--n", "2", "--no-cache"])
    assert code == 0
    assert "family:        forbidden-free" in out
    assert "value:         2/3" in out
    assert "witness size:  6 of 9" in out


def test_eqn_grid(capsys):
    code, out, _ = run(capsys, ["eqn", "--preset", "grid", "--p", "3",
                                "--k", "2", "--n", "1", "--no-cache"])
    assert code == 0
    assert "value:         8/9" in out
    assert "witness size:  8 of 9" in out


def test_eqn_emit_witness(tmp_path, capsys):
    payload_path = tmp_path / "witness.json"
    code, _, _ = run(capsys, ["eqn", "--preset", "unitvec", "--q", "3",
                              "--n", "2", "--no-cache",
                              "--emit-witness", str(payload_path)])
    assert code == 0
    eq = forbidden.compute_eq(list(unit_tuples(3)), 2)
    assert json.loads(payload_path.read_text()) == {
        "support": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        "n": 2,
        "witness": sorted([list(w) for w in eq.witness]),
        "value": "2/3",
    }


def test_eqn_wcnf_matches_brute_force(tmp_path, capsys):
    out_path = tmp_path / "eq.wcnf"
    code, out, _ = run(capsys, ["eqn", "--preset", "unitvec", "--q", "3",
                                "--n", "2", "--wcnf", str(out_path)])
    assert code == 0 and "wrote WCNF: 9 points" in out
    header, clauses = oracles.parse_wcnf(out_path.read_text())
    assert header == (9, 16, 10)
    # minimum unsatisfied soft clauses = points outside a maximum free set
    assert oracles.wcnf_optimum(header, clauses) == 9 - 6


def test_eqn_point_budget(capsys):
    code, _, err = run(capsys, ["eqn", "--preset", "unitvec", "--q", "3",
                                "--n", "5", "--no-cache"])
    assert code == 3 and err.startswith("error:")


# -- repeat ---------------------------------------------------------------------


def test_repeat_summary(capsys):
    code, out, _ = run(capsys, ["repeat", "--preset", "anticorr", "--q", "3",
                                "--n", "2", "--no-cache"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "game:              anticorr {'q': 3}"
    assert "players:           3" in lines
    assert "rounds:            2" in lines
    assert "support:           3 -> 9" in lines
    assert "question tuples:   [4, 4, 4]" in lines
    assert "answer tuples:     [4, 4, 4]" in lines


def test_repeat_solve(capsys):
    code, out, _ = run(capsys, ["repeat", "--preset", "unitvec", "--q", "3",
                                "--n", "2", "--solve", "--no-cache"])
    assert code == 0
    assert "value:             0/1" in out


def test_repeat_json(capsys):
    code, out, _ = run(capsys, ["repeat", "--preset", "anticorr", "--q", "3",
                                "--n", "2", "--no-cache", "--json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["support"] == 9
    assert payload["base_support"] == 3
    assert payload["question_alphabets"] == [4, 4, 4]


# -- verify ---------------------------------------------------------------------


def test_verify_dhj_range(capsys):
    code, out, _ = run(capsys, ["verify", "dhj", "--q", "3", "--n", "1..2",
                                "--no-cache"])
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 2
    assert all(line.startswith("PASS dhj") for line in lines)


def test_verify_square_range(capsys):
    code, out, _ = run(capsys, ["verify", "square", "--n", "1..2", "--no-cache"])
    assert code == 0
    assert all(line.startswith("PASS square") for line in out.splitlines())


def test_verify_grid(capsys):
    code, out, _ = run(capsys, ["verify", "grid", "--p", "3", "--k", "2",
                                "--n", "1", "--no-cache"])
    assert code == 0
    assert "8/9" in out and out.startswith("PASS grid")


def test_verify_val_bound(capsys):
    code, out, _ = run(capsys, ["verify", "val-bound", "--preset", "anticorr",
                                "--q", "3", "--n", "1", "--no-cache"])
    assert code == 0
    assert out.startswith("PASS val-bound anticorr n=1")


def test_verify_val_bound_rejects_nonuniform_weights(tmp_path, capsys):
    game = Game(
        question_alphabets=((0, 1), (0, 1)),
        answer_alphabets=((0, 1), (0, 1)),
        support=((0, 0), (1, 1)),
        weights=(Fraction(1, 3), Fraction(2, 3)),
        predicate=lambda x, a: a[0] == a[1],
    )
    path = tmp_path / "lopsided.json"
    path.write_text(json.dumps(game_to_json(game)))
    code, _, err = run(capsys, ["verify", "val-bound", "--game", str(path),
                                "--n", "1", "--no-cache"])
    assert code == 2 and "uniformly weighted" in err


def test_verify_thm_answer_game_full_search(capsys):
    code, out, _ = run(capsys, ["verify", "thm-answer-game", "--preset",
                                "unitvec", "--q", "3", "--n", "1", "--no-cache"])
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 4
    assert all(line.startswith("PASS") for line in lines)
    assert "full search value 2/3" in out


def test_verify_thm_answer_game_budget_skip(capsys):
    code, out, _ = run(capsys, ["verify", "thm-answer-game", "--preset", "ghz",
                                "--n", "2", "--no-cache"])
    assert code == 0
    assert all(line.startswith("PASS") for line in out.splitlines())
    assert "full search skipped (budget)" in out


def test_verify_thm_answer_game_single_round_only(capsys):
    code, _, err = run(capsys, ["verify", "thm-answer-game", "--preset",
                                "unitvec", "--n", "1..2", "--no-cache"])
    assert code == 2 and "one round count" in err


# -- fuzz -----------------------------------------------------------------------


def test_fuzz_reports_zero_violations(capsys):
    code, out, _ = run(capsys, ["fuzz-prop34", "--preset", "anticorr",
                                "--q", "3", "--n", "2", "--trials", "50",
                                "--seed", "7", "--no-cache"])
    assert code == 0
    assert "violations:  0" in out
    assert "trials:      50" in out


def test_fuzz_refuses_perfect_base_game(capsys):
    code, _, err = run(capsys, ["fuzz-prop34", "--preset", "anticorr",
                                "--q", "2", "--no-cache"])
    assert code == 4
    assert "below 1" in err


# -- parser ---------------------------------------------------------------------


def test_threads_flag_accepted(capsys):
    code, out, _ = run(capsys, ["--threads", "4", "value", "--preset",
                                "anticorr", "--no-cache"])
    assert code == 0 and "value:         2/3" in out


def test_missing_command_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "replab", "value", "--preset", "anticorr",
         "--no-cache"],
        capture_output=True, text=True, cwd=tmp_path)
    assert proc.returncode == 0
    assert "value:         2/3" in proc.stdout
