import json

import pytest

from toeplitz_aut.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen(capsys):
    assert run(capsys, "gen", "--depth", "2", "--range", "0:9") == (0, "110_0100_0\n", "")
    code, out, _ = run(capsys, "gen", "--range=-5:-1", "--offset")
    assert out == "offset=-5\n10000\n"


def test_group(capsys):
    assert run(capsys, "group", "residue", "5/2", "--mod", "25")[1] == "15\n"
    assert run(capsys, "group", "nf", "7/4")[1] == "[-2,-1,1]\n"
    assert run(capsys, "group", "add", "5/2", "5/2")[1] == "5/1 [0,2]\n"
    assert run(capsys, "group", "value", "0", "2")[1] == "5/1\n"
    code, _, err = run(capsys, "group", "nf", "1/3")
    assert code == 1 and "NotMember" in err
    assert run(capsys, "group", "residue", "5/2")[0] == 2


def test_periods_and_language(capsys):
    assert run(capsys, "periods")[1] == "1 5 25 125\n"
    assert run(capsys, "language", "--length", "40", "--count")[1] == "710\n"
    assert run(capsys, "language", "--length", "2")[1] == "00\n01\n10\n11\n"


def test_skeleton_and_phase(capsys):
    assert run(capsys, "skeleton", "--level", "1", "--range", "0:4")[1] == "1_0_0\n"
    assert run(capsys, "skeleton", "--range", "0:4")[0] == 2
    assert run(capsys, "phase", "--window", "10000", "--offset", "-5")[1] == "0 mod 5\n"
    # cells 3..12 of x(w) placed at 0..9 form a window of sigma^3 x(w)
    assert run(capsys, "phase", "--window", "1010010100")[1] == "3 mod 5\n"


def test_sigma_compose_decompose(capsys, tmp_path):
    s1 = tmp_path / "s1.json"
    assert run(capsys, "sigma", "--j", "1", "--out", str(s1))[0] == 0
    code, out, _ = run(capsys, "decompose", "--rule", str(s1), "--format", "json")
    assert json.loads(out) == {"coeffs": [0, 1], "value": "5/2", "residual_level": 1}
    sq = tmp_path / "sq.json"
    run(capsys, "compose", "--rule", str(s1), "--rule", str(s1), "--out", str(sq))
    assert run(capsys, "decompose", "--rule", str(sq))[1] == "[0,2] 5/1\n"
    assert run(capsys, "decompose", "--coeffs", "[-2, 1]")[1] == "[-2,1] 1/2\n"


def test_complexity_csv(capsys, tmp_path):
    out = tmp_path / "n.csv"
    code, text, _ = run(capsys, "complexity", "--from", "10", "--to", "2000", "--csv", str(out))
    assert code == 0 and "recurrence: ok" in text
    rows = out.read_text().splitlines()
    assert rows[0] == "k,n_k" and rows[1] == "10,65" and rows[-1] == "2000,676625"


def test_search(capsys, tmp_path):
    code, out, _ = run(capsys, "search", "--radius", "1", "--out", str(tmp_path / "rules"))
    assert code == 0 and out.startswith("3 rules")
    assert len(list((tmp_path / "rules").glob("*.json"))) == 3


def test_params_from_config_and_flags(capsys, tmp_path):
    cfg = tmp_path / "p.json"
    cfg.write_text(json.dumps({"p": 7, "p_prime": 3, "q": 3, "w": "1_0_1_0"}))
    assert run(capsys, "gen", "--depth", "1", "--range", "0:6", "--config", str(cfg))[1] == "1_0_1_0\n"
    code, _, err = run(capsys, "gen", "--range", "0:3", "--w", "1__00")
    assert code == 2 and "invalid parameters" in err


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gen"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2
    assert run(capsys, "verify", "--suite", "13")[0] == 2


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "1,2,11")
    assert code == 0
    assert [line.split()[0] for line in out.splitlines()] == ["PASS"] * 3


def test_outputs_are_reproducible(capsys):
    a = run(capsys, "sigma", "--j", "2")
    b = run(capsys, "sigma", "--j", "2")
    assert a == b
