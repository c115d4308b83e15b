import json

import pytest

from chargedgauss.cli import (EXIT_OK, EXIT_UNSUPPORTED, ExperimentConfig,
                              load_config, main)


def test_load_config_defaults():
    cfg = load_config(None)
    assert cfg.alpha == 0.5 and cfg.gamma == 2.0
    assert cfg.charges == ((0.3 + 0.0j, 0.5),)


def test_load_config_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"alpha": 1.0, "gamma": 3.0,
                                "charges": [{"re": 0.1, "im": 0.2,
                                             "beta": 0.4}]}))
    cfg = load_config(str(path))
    assert cfg.alpha == 1.0
    assert cfg.charges == ((0.1 + 0.2j, 0.4),)


def test_load_config_rejects_N_and_gamma(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"N": 10, "gamma": 2.0}))
    with pytest.raises(ValueError):
        load_config(str(path))


def test_potential_ties_N_to_degree():
    cfg = ExperimentConfig()
    assert cfg.potential(n=25).N == 50.0


def test_support_command(tmp_path):
    rc = main(["--out", str(tmp_path), "support"])
    assert rc == EXIT_OK
    geom = json.loads((tmp_path / "geometry.json").read_text())
    assert geom["kind"] == "disk_with_cavities"
    assert (tmp_path / "boundary.csv").exists()
    assert (tmp_path / "support.svg").exists()


def test_support_exterior(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"alpha": 0.5, "gamma": 2.0,
                               "charges": [{"re": 2.0, "beta": 0.5}]}))
    rc = main(["--config", str(cfg), "--out", str(tmp_path), "support"])
    assert rc == EXIT_OK
    geom = json.loads((tmp_path / "geometry.json").read_text())
    assert geom["kind"] == "exterior_map"


def test_unsupported_configuration_exit_code(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"alpha": 0.5, "gamma": 2.0,
                               "charges": [{"re": 0.3, "beta": 0.5},
                                           {"re": 3.0, "beta": 0.5}]}))
    rc = main(["--config", str(cfg), "--out", str(tmp_path), "support"])
    assert rc == EXIT_UNSUPPORTED


def test_zeros_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        rc = main(["--out", str(out), "--degree", "6",
                   "--quad", "24,64,1e-12", "zeros"])
        assert rc == EXIT_OK
    assert (a / "zeros_n6.csv").read_bytes() == (b / "zeros_n6.csv").read_bytes()


def test_verify_quick(tmp_path):
    rc = main(["--out", str(tmp_path), "--quick", "verify"])
    assert rc == EXIT_OK
    rep = json.loads((tmp_path / "verify.json").read_text())
    assert rep["passed"]
