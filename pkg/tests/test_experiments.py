import json

import numpy as np
import pytest

import regsubmax.datasets as ds
from regsubmax.cli import main
from regsubmax.experiments import (ALGORITHMS, OBJECTIVES, RESULT_FIELDS,
                                   ExperimentConfig, emit_results,
                                   parse_results, run_experiment)


@pytest.fixture()
def digraph_file(tmp_path):
    path = tmp_path / "graph.txt"
    ds.write_edge_list(ds.random_digraph(25, 0.1, seed=2), path)
    return path


@pytest.fixture()
def features_file(tmp_path):
    rng = np.random.default_rng(8)
    path = tmp_path / "points.csv"
    ds.save_matrix_csv(rng.normal(size=(12, 2)), path)
    return path


def base_config(dataset, **kw) -> ExperimentConfig:
    cfg = ExperimentConfig(dataset=str(dataset))
    return cfg.override(**kw)


def test_config_from_file_and_coercion(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"dataset": "d.txt", "algos": ["greedy", "sieve"],
                             "ks": [2, 4], "seeds": [0, 1], "eps": 0.2}))
    cfg = ExperimentConfig.from_file(p)
    assert cfg.dataset == "d.txt"
    assert cfg.algos == ("greedy", "sieve")
    assert cfg.ks == (2, 4)
    assert cfg.seeds == (0, 1)
    assert cfg.eps == 0.2
    assert cfg.delta == 0.1  # untouched default


def test_config_rejects_unknown_keys(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"dataset": "d.txt", "budget": 3}))
    with pytest.raises(ValueError, match="budget"):
        ExperimentConfig.from_file(p)
    p.write_text(json.dumps([1, 2]))
    with pytest.raises(ValueError, match="flat JSON"):
        ExperimentConfig.from_file(p)


def test_override_ignores_none_and_wins_otherwise():
    cfg = ExperimentConfig(dataset="a.txt", eps=0.2, ks=(3,))
    out = cfg.override(eps=None, ks=(5, 7), dataset=None)
    assert out.dataset == "a.txt"
    assert out.eps == 0.2
    assert out.ks == (5, 7)


def test_validate_rejects_bad_values():
    with pytest.raises(ValueError, match="dataset"):
        ExperimentConfig().validate()
    with pytest.raises(ValueError, match="objective"):
        ExperimentConfig(dataset="d", objective="nope").validate()
    with pytest.raises(ValueError, match="algorithm"):
        ExperimentConfig(dataset="d", algos=("nope",)).validate()
    with pytest.raises(ValueError, match="budget"):
        ExperimentConfig(dataset="d", ks=(0,)).validate()
    with pytest.raises(ValueError, match="seed"):
        ExperimentConfig(dataset="d", seeds=()).validate()
    with pytest.raises(ValueError, match="machine"):
        ExperimentConfig(dataset="d", machines=0).validate()


def test_registries_cover_documented_ids():
    assert set(ALGORITHMS) == {"greedy", "distorted-greedy", "sieve",
                               "threshold-streaming", "distorted-streaming",
                               "distributed", "brute-force"}
    assert set(OBJECTIVES) == {"vertex-cover", "facility-location", "log-det",
                               "saturating-coverage", "slc-mode"}


def test_run_experiment_grid_shape_and_identity(digraph_file):
    cfg = base_config(digraph_file, algos=("greedy", "distorted-greedy"),
                      ks=(2, 4), seeds=(0, 1, 2))
    rows, round_rows = run_experiment(cfg)
    assert len(rows) == 2 * 2 * 3
    assert round_rows == []  # no distributed cell
    for row in rows:
        assert row.f_value == pytest.approx(row.g_value - row.ell_value)
        assert row.oracle_calls >= 1
        assert row.dataset == digraph_file.name
    # deterministic cells: greedy ignores the seed, so its rows agree
    greedy_f = {r.f_value for r in rows if r.algorithm == "greedy" and r.k == 2}
    assert len(greedy_f) == 1


def test_run_experiment_duplicate_cells_collapse(digraph_file):
    cfg = base_config(digraph_file, algos=("greedy", "greedy"), ks=(3, 3),
                      seeds=(0, 0))
    rows, _ = run_experiment(cfg)
    assert len(rows) == 1


def test_run_experiment_deterministic_modulo_wall(digraph_file):
    cfg = base_config(digraph_file,
                      algos=("sieve", "distorted-streaming", "distributed"),
                      ks=(3,), seeds=(0, 1), stream_order="shuffled")
    a, _ = run_experiment(cfg)
    b, _ = run_experiment(cfg)

    def strip(rows):
        return [tuple(getattr(r, f) for f in RESULT_FIELDS if f != "wall_ms")
                for r in rows]

    assert strip(a) == strip(b)


def test_run_experiment_writes_csv_and_rounds_sidecar(digraph_file, tmp_path):
    out = tmp_path / "res.csv"
    cfg = base_config(digraph_file, algos=("distributed",), ks=(3,),
                      seeds=(0,), eps=0.5, machines=2, out=str(out))
    rows, round_rows = run_experiment(cfg)
    assert out.exists()
    parsed = parse_results(out)
    assert len(parsed) == len(rows) == 1
    assert parsed[0].algorithm == "distributed"
    assert parsed[0].f_value == pytest.approx(rows[0].f_value, rel=1e-8)
    # provenance with commas survives the CSV round trip
    assert parsed[0].provenance == rows[0].provenance
    assert "," in parsed[0].provenance
    sidecar = tmp_path / "res.csv.rounds.csv"
    assert sidecar.exists()
    lines = sidecar.read_text().splitlines()
    assert lines[0] == ("dataset,algorithm,k,eps,m,seed,round,pool_sets,"
                        "pool_elements,shard_sizes,oracle_calls")
    assert len(lines) == 1 + len(round_rows) == 3  # eps=0.5 -> two rounds


def test_emit_results_header_and_floats(tmp_path, digraph_file):
    cfg = base_config(digraph_file, algos=("greedy",), ks=(2,), seeds=(0,))
    rows, _ = run_experiment(cfg)
    out = tmp_path / "r.csv"
    emit_results(rows, out)
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(RESULT_FIELDS)
    assert len(lines) == 2
    with pytest.raises(ValueError, match="header"):
        bad = tmp_path / "bad.csv"
        bad.write_text("x,y\n1,2\n")
        parse_results(bad)


def test_stream_order_changes_streaming_cells(digraph_file):
    natural = base_config(digraph_file, algos=("sieve",), ks=(3,), seeds=(0, 1))
    shuffled = natural.override(stream_order="shuffled")
    rows_n, _ = run_experiment(natural)
    rows_s, _ = run_experiment(shuffled)
    # natural order ignores the seed entirely
    assert rows_n[0].f_value == rows_n[1].f_value
    assert rows_n[0].provenance == rows_n[1].provenance
    assert len(rows_s) == 2  # shuffled runs still produce one row per seed


def test_facility_objective_runs(features_file):
    cfg = base_config(features_file, objective="facility-location",
                      algos=("greedy", "brute-force"), ks=(2,), seeds=(0,))
    rows, _ = run_experiment(cfg)
    brute = next(r for r in rows if r.algorithm == "brute-force")
    greedy = next(r for r in rows if r.algorithm == "greedy")
    assert brute.f_value >= greedy.f_value - 1e-9
    assert 0.0 <= brute.f_value <= 1.0  # similarity scores live in [0, 1]


def test_cli_run_prints_rows(digraph_file, capsys):
    rc = main(["run", "--dataset", str(digraph_file), "--algo",
               "greedy,sieve", "--k", "2,3", "--seed", "0"])
    assert rc == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 4
    assert all("f=" in line and "calls=" in line for line in out)


def test_cli_run_with_config_and_flag_override(digraph_file, tmp_path, capsys):
    cfgf = tmp_path / "cfg.json"
    cfgf.write_text(json.dumps({"dataset": str(digraph_file),
                                "algos": ["greedy"], "ks": [2]}))
    out = tmp_path / "res.csv"
    rc = main(["run", "--config", str(cfgf), "--k", "3,4",
               "--out", str(out)])
    assert rc == 0
    assert "wrote 2 rows" in capsys.readouterr().out
    parsed = parse_results(out)
    assert sorted(r.k for r in parsed) == [3, 4]  # flag beat the file


def test_cli_run_unknown_algo_fails_fast(digraph_file):
    with pytest.raises(ValueError, match="unknown algorithm"):
        main(["run", "--dataset", str(digraph_file), "--algo", "magic"])


def test_cli_validate_passes_on_shipped_oracles(digraph_file, capsys):
    rc = main(["validate", "--dataset", str(digraph_file), "--triples", "200"])
    out = capsys.readouterr().out
    assert rc == 0
    assert out.count("[PASS]") == 5
    assert "[FAIL]" not in out


def test_cli_validate_requires_dataset(capsys):
    rc = main(["validate"])
    assert rc == 2


def test_cli_gen_digraph_round_trips(tmp_path, capsys):
    out = tmp_path / "g.txt"
    rc = main(["gen", "digraph", "--n", "30", "--p", "0.1", "--seed", "5",
               "--out", str(out)])
    assert rc == 0
    assert "edges" in capsys.readouterr().out
    g = ds.load_edge_list(out)
    assert g.n <= 30
    assert out.read_text().startswith("# random digraph n=30")


def test_cli_gen_slc_writes_meta(tmp_path, capsys):
    out = tmp_path / "kernel.csv"
    rc = main(["gen", "slc", "--n", "6", "--mu", "0.5", "--sigma", "0.7",
               "--seed", "3", "--out", str(out)])
    assert rc == 0
    L = ds.load_matrix_csv(out)
    assert L.shape == (6, 6)
    assert np.allclose(L, L.T)
    meta = json.loads((tmp_path / "kernel.csv.meta.json").read_text())
    assert meta["kind"] == "slc"
    assert meta["seed"] == 3
    # generated kernel is usable end to end
    rc2 = main(["run", "--dataset", str(out), "--objective", "slc-mode",
                "--algo", "distorted-greedy", "--k", "2", "--seed", "0"])
    assert rc2 == 0


def test_slc_mode_greedy_matches_brute_force(tmp_path):
    out = tmp_path / "kernel.csv"
    ds.save_generated_matrix(
        __import__("regsubmax").sample_slc_matrix(7, seed=11), out,
        {"kind": "slc"})
    cfg = base_config(out, objective="slc-mode",
                      algos=("distorted-greedy", "brute-force"), ks=(3,),
                      seeds=(0,))
    rows, _ = run_experiment(cfg)
    by_algo = {r.algorithm: r for r in rows}
    assert (by_algo["distorted-greedy"].f_value
            <= by_algo["brute-force"].f_value + 1e-9)
