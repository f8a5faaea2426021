"""Command-line interface: exit codes, file round-trips, table output."""

import csv
import json

import pytest

from irs_routing.cli import entrypoint
from irs_routing.scene import build_bundled_scenario, load_scenario
from irs_routing.solver import SCHEMES


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def drop_runtime(rows):
    k = rows[0].index("runtime_ms")
    return [r[:k] + r[k + 1:] for r in rows]


@pytest.fixture(scope="module")
def chain_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "chain.json"
    assert entrypoint(["gen", "--kind", "chain", "--n-irs", "2", "--out", str(path)]) == 0
    return str(path)


@pytest.fixture(scope="module")
def solved_bundled(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "solution.json"
    rc = entrypoint(["solve", "--out", str(path)])
    assert rc == 0
    return str(path)


# ---------------------------------------------------------------------------
# solve


def test_solve_defaults_report_every_user(capsys, solved_bundled):
    entrypoint(["solve"])
    out = capsys.readouterr().out
    assert "feasible=yes" in out
    assert "objective (min user gain): -47.43 dB" in out
    for u in (14, 15, 16, 17):
        assert f"user {u}: route 0->" in out


def test_solution_file_carries_routes_and_beam_indices(solved_bundled):
    with open(solved_bundled) as fh:
        doc = json.load(fh)
    assert set(doc) == {
        "scheme", "mode", "feasible", "admitted", "objective_db",
        "q_used", "explored_nodes", "wall_time_ms", "users",
    }
    assert doc["scheme"] == "maxmin" and doc["mode"] == "discrete"
    assert doc["feasible"] is True
    assert doc["admitted"] == [14, 15, 16, 17]
    assert doc["objective_db"] == pytest.approx(-47.43, abs=0.05)
    for u, rec in doc["users"].items():
        assert rec["route"][0] == 0 and rec["route"][-1] == int(u)
        assert isinstance(rec["bs_beam"], int)
        assert [p for p, _, _ in rec["panel_beams"]] == rec["route"][1:-1]
        for _, i1, i2 in rec["panel_beams"]:
            assert isinstance(i1, int) and isinstance(i2, int)


def test_continuous_mode_is_recorded_in_the_solution(tmp_path, chain_file):
    out = tmp_path / "cont.json"
    rc = entrypoint(["solve", "--scenario", chain_file, "--mode", "continuous",
                     "--out", str(out)])
    assert rc == 0
    with open(out) as fh:
        doc = json.load(fh)
    assert doc["mode"] == "continuous"
    assert doc["scheme"] == "continuous"


def test_unservable_users_exit_infeasible(tmp_path, capsys):
    scn = tmp_path / "crowded.json"
    assert entrypoint(["gen", "--kind", "random", "--out", str(scn)]) == 0
    rc = entrypoint(["solve", "--scenario", str(scn)])
    out = capsys.readouterr().out
    assert rc == 3
    assert "feasible=no" in out
    assert "note: admitted 2 of 3 users" in out


# ---------------------------------------------------------------------------
# validate


def test_validate_accepts_solver_output(capsys, solved_bundled):
    rc = entrypoint(["validate", "--solution", solved_bundled])
    assert rc == 0
    assert "ok: 4 routes satisfy all path constraints" in capsys.readouterr().out


def test_validate_names_the_broken_constraint(tmp_path, capsys, solved_bundled):
    with open(solved_bundled) as fh:
        doc = json.load(fh)
    doc["users"]["15"]["route"] = [0, 1, 15]       # reuses user 14's first panel
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    rc = entrypoint(["validate", "--solution", str(bad)])
    err = capsys.readouterr().err
    assert rc == 4
    assert "share panel 1" in err


def test_validate_reports_scenario_stats(capsys):
    rc = entrypoint(["validate"])
    assert rc == 0
    assert "ok: 13 panels, 4 users, 24x24 elements, 32 BS antennas" in (
        capsys.readouterr().out
    )


def test_validate_rejects_broken_scenario_files(tmp_path, capsys):
    bad = tmp_path / "broken.json"
    bad.write_text('{"nodes": []}')
    assert entrypoint(["validate", "--scenario", str(bad)]) == 4
    assert "invalid scenario" in capsys.readouterr().err
    assert entrypoint(["validate", "--scenario", str(tmp_path / "missing.json")]) == 4


# ---------------------------------------------------------------------------
# gen


def test_generated_bundled_file_round_trips(tmp_path):
    out = tmp_path / "bundled.json"
    assert entrypoint(["gen", "--out", str(out)]) == 0
    assert load_scenario(str(out)) == build_bundled_scenario()


def test_generated_random_and_chain_files_validate(tmp_path, capsys):
    for args in (["--kind", "random", "--seed", "3"], ["--kind", "chain"]):
        out = tmp_path / f"{args[1]}.json"
        assert entrypoint(["gen", *args, "--out", str(out)]) == 0
        assert entrypoint(["validate", "--scenario", str(out)]) == 0
    capsys.readouterr()


def test_impossible_layouts_exit_invalid(tmp_path, capsys):
    rc = entrypoint(["gen", "--kind", "random", "--room-x", "40", "--room-y", "12",
                     "--los-threshold", "2.0", "--out", str(tmp_path / "x.json")])
    assert rc == 4
    assert "error: no routable layout" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# usage errors


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["sweep", "--sweep-axis", "m0", "--sweep-values", "8"],   # missing --out
        ["sweep", "--sweep-axis", "bogus", "--sweep-values", "8", "--out", "t.csv"],
        ["solve", "--mode", "sideways"],
    ],
)
def test_bad_usage_exits_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        entrypoint(argv)
    assert exc.value.code == 2
    capsys.readouterr()


# ---------------------------------------------------------------------------
# sweep


def test_sweep_over_codebook_bits(tmp_path, capsys, chain_file):
    out = tmp_path / "bits.csv"
    rc = entrypoint(["sweep", "--scenario", chain_file, "--sweep-axis", "b0",
                     "--sweep-values", "2,3", "--schemes", "maxmin",
                     "--out", str(out)])
    assert rc == 0
    assert "wrote 2 rows" in capsys.readouterr().out
    rows = read_rows(str(out))
    assert len(rows) == 3
    assert [r[0] for r in rows[1:]] == ["b0", "b0"]
    assert [r[1] for r in rows[1:]] == ["2", "3"]


def test_sweep_defaults_to_every_routing_scheme(tmp_path, chain_file, capsys):
    out = tmp_path / "m.csv"
    rc = entrypoint(["sweep", "--scenario", chain_file, "--sweep-axis", "m0",
                     "--sweep-values", "3", "--out", str(out)])
    assert rc == 0
    rows = read_rows(str(out))
    assert [r[2] for r in rows[1:]] == list(SCHEMES)
    capsys.readouterr()


def test_sweep_over_alpha_uses_evaluation_metrics(tmp_path, chain_file, capsys):
    out = tmp_path / "a.csv"
    rc = entrypoint(["sweep", "--scenario", chain_file, "--sweep-axis", "alpha",
                     "--sweep-values", "2.5", "--realizations", "2",
                     "--out", str(out)])
    assert rc == 0
    rows = read_rows(str(out))
    assert [r[2] for r in rows[1:]] == ["cascade", "overall_scatter", "interference"]
    capsys.readouterr()


def test_sweep_with_no_values_writes_just_the_header(tmp_path, capsys):
    out = tmp_path / "empty.csv"
    rc = entrypoint(["sweep", "--sweep-axis", "m0", "--sweep-values", "",
                     "--out", str(out)])
    assert rc == 0
    assert "wrote 0 rows" in capsys.readouterr().out
    assert out.read_text().strip() == "axis,value,scheme,objective_db,feasible,runtime_ms,seed"


# ---------------------------------------------------------------------------
# evaluate


def test_evaluate_tables_are_reproducible(tmp_path, chain_file, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["evaluate", "--scenario", chain_file, "--realizations", "3",
            "--alpha", "2.5,3.0", "--seed", "5"]
    assert entrypoint(argv + ["--out", str(a)]) == 0
    assert entrypoint(argv + ["--out", str(b)]) == 0
    assert drop_runtime(read_rows(str(a))) == drop_runtime(read_rows(str(b)))
    capsys.readouterr()


def test_evaluate_prints_metrics_without_an_output_path(capsys, chain_file):
    rc = entrypoint(["evaluate", "--scenario", chain_file, "--realizations", "2"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "alpha=2.5 cascade: " in out and " dB" in out
    assert "alpha=2.5 interference: n/a" in out   # single user, nothing scatters in


def test_evaluate_accepts_a_solution_file(tmp_path, chain_file, capsys):
    sol = tmp_path / "sol.json"
    assert entrypoint(["solve", "--scenario", chain_file, "--out", str(sol)]) == 0
    fresh, reused = tmp_path / "fresh.csv", tmp_path / "reused.csv"
    base = ["evaluate", "--scenario", chain_file, "--realizations", "2"]
    assert entrypoint(base + ["--out", str(fresh)]) == 0
    assert entrypoint(base + ["--solution", str(sol), "--out", str(reused)]) == 0
    assert drop_runtime(read_rows(str(fresh))) == drop_runtime(read_rows(str(reused)))
    capsys.readouterr()
