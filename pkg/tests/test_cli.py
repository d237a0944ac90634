import json
import math

import pytest

from eprgame.cli import main
from eprgame.equilibrium import EquilibriumReport
from eprgame.probset import TSIRELSON, BehaviorSet, chsh_delta

EQ_EPS = [1.0 if j in (2, 6, 10, 14) else 0.0 for j in range(1, 17)]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def usage_exit(capsys, *argv):
    with pytest.raises(SystemExit) as info:
        main(list(argv))
    capsys.readouterr()
    return info.value.code


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(path)


class TestSolveClassical:
    def test_lists_both_pure_equilibria(self, capsys):
        code, out, _ = run(capsys, "solve-classical", "--omega", "0.6666666667")
        assert code == 0
        assert "{(S,B),(S,S)}" in out and "{(B,B),(B,S)}" in out
        assert "mixed-strategy case analysis" in out

    def test_verify_mixed_profile(self, capsys):
        code, out, _ = run(capsys, "solve-classical", "--omega", "0.6666666667",
                           "--profile", "0.5,1,0.6666666667,0")
        assert code == 0
        assert ": equilibrium" in out
        assert "(0.6666666667,1.333333333),(0.6666666667,1.333333333)" in out

    def test_fraction_arguments(self, capsys):
        code, data = run_json(capsys, "solve-classical", "--omega", "2/3", "--profile", "1/2,1,2/3,0")
        assert code == 0 and data["equilibrium"]
        assert data["payoffs"] == pytest.approx([2 / 3, 4 / 3, 2 / 3, 4 / 3], abs=1e-15)

    def test_rejection_reported(self, capsys):
        code, out, _ = run(capsys, "solve-classical", "--omega", "2/3", "--profile", "0,0,1,1")
        assert code == 0 and "not an equilibrium" in out

    def test_json_round_trips_through_report(self, capsys):
        _, data = run_json(capsys, "solve-classical", "--omega", "2/3", "--profile", "0.5,1,0.25,0")
        r = EquilibriumReport.from_json(data)
        assert r.to_json() == data

    def test_search_json(self, capsys):
        code, data = run_json(capsys, "solve-classical", "--omega", "2/3")
        assert code == 0
        assert sorted(p["quadruple"] for p in data["pure"]) == ["{(B,B),(B,S)}", "{(S,B),(S,S)}"]
        assert any(m["profile"] == pytest.approx([0.5, 1, 2 / 3, 0]) for m in data["mixed"])
        for m in data["mixed"]:
            assert EquilibriumReport.from_json(m).to_json() == m

    @pytest.mark.parametrize("argv", [
        ["--omega", "1.5"],
        ["--omega", "abc"],
        ["--omega", "0.5", "--profile", "0.5,1,2"],
        ["--omega", "0.5", "--profile", "0.5,1,2,0"],
        ["--omega", "0.5", "--bogus"],
        [],
    ])
    def test_usage_errors(self, capsys, argv):
        assert usage_exit(capsys, "solve-classical", *argv) == 2

    def test_custom_game_file(self, capsys, tmp_path):
        from eprgame.game import BOS_FIG1
        path = write(tmp_path, "game.json", BOS_FIG1.to_json())
        code, out, _ = run(capsys, "solve-classical", "--omega", "2/3", "--game", path)
        assert code == 0 and "{(S,B),(S,S)}" in out

    def test_malformed_game_file(self, capsys, tmp_path):
        path = write(tmp_path, "game.json", "{not json")
        assert run(capsys, "solve-classical", "--omega", "0.5", "--game", path)[0] == 4
        path = write(tmp_path, "game2.json", {"omega": 0.5})
        assert run(capsys, "solve-classical", "--omega", "0.5", "--game", path)[0] == 4


class TestSolveQuantum:
    @pytest.mark.parametrize("w", ["0.6666666667", "0", "1"])
    def test_same_equilibrium(self, capsys, w):
        code, out, _ = run(capsys, "solve-quantum", "--omega", w)
        assert code == 0
        assert "marginals (p,q,p',q') = (1,1,0,0)" in out
        assert "payoffs (A1,A2),(B1,B2) = (0,2),(0,2)" in out
        assert "delta = -2  class = local" in out

    def test_json(self, capsys):
        code, data = run_json(capsys, "solve-quantum", "--omega", "0.25")
        assert code == 0
        r = EquilibriumReport.from_json(data)
        assert list(r.behavior.eps) == EQ_EPS
        assert r.to_json() == data
        assert data["classical_equilibrium"] is False

    def test_range(self, capsys):
        assert usage_exit(capsys, "solve-quantum", "--omega", "-0.1") == 2


class TestGenerate:
    def test_singlet(self, capsys):
        code, data = run_json(capsys, "generate", "--state", "singlet",
                              "--angles", "0,1.5707963268,0.7853981634,-0.7853981634")
        assert code == 0
        assert abs(data["delta"]) == pytest.approx(TSIRELSON, abs=1e-9)
        assert data["class"] == "quantum-violating" and data["factorizable"] is False

    def test_zerozero_uniform(self, capsys):
        code, out, _ = run(capsys, "generate", "--state", "zerozero", "--angles", "0,0,0,0")
        assert code == 0
        b = BehaviorSet.from_json(json.loads(out.splitlines()[0]))
        assert b.eps == pytest.approx((0.25,) * 16, abs=1e-15)
        assert "delta = 0" in out

    def test_plusminus_equilibrium_set(self, capsys):
        code, data = run_json(capsys, "generate", "--state", "plusminus", "--angles", "0,0,0,0")
        assert code == 0
        assert data["eps"] == pytest.approx(EQ_EPS, abs=1e-12)
        assert data["delta"] == pytest.approx(-2, abs=1e-12)
        assert BehaviorSet.from_json(data).eps == tuple(data["eps"])

    def test_state_file(self, capsys, tmp_path):
        r = 1 / math.sqrt(2)
        path = write(tmp_path, "bell.json", {"re": [r, 0, 0, r], "im": [0, 0, 0, 0]})
        code, data = run_json(capsys, "generate", "--state", path, "--angles", "0,0,0,0")
        assert code == 0
        assert chsh_delta(BehaviorSet.from_json(data)) == pytest.approx(data["delta"])

    def test_unnormalized(self, capsys, tmp_path):
        path = write(tmp_path, "bad.json", {"re": [1, 1, 0, 0]})
        code, _, err = run(capsys, "generate", "--state", path, "--angles", "0,0,0,0")
        assert code == 3
        assert "1.000e+00" in err

    def test_malformed_state(self, capsys, tmp_path):
        path = write(tmp_path, "bad.json", {"re": [1, 0]})
        assert run(capsys, "generate", "--state", path, "--angles", "0,0,0,0")[0] == 4
        path = write(tmp_path, "bad2.json", "[1, 2")
        assert run(capsys, "generate", "--state", path, "--angles", "0,0,0,0")[0] == 4

    def test_unknown_preset(self, capsys):
        assert run(capsys, "generate", "--state", "nosuch", "--angles", "0,0,0,0")[0] == 2

    def test_bad_angles(self, capsys):
        assert usage_exit(capsys, "generate", "--state", "singlet", "--angles", "0,0,0") == 2
        assert usage_exit(capsys, "generate", "--state", "singlet", "--angles", "0,0,0,x") == 2


class TestCheck:
    def test_uniform(self, capsys, tmp_path):
        path = write(tmp_path, "uniform.json", {"eps": [0.25] * 16})
        code, out, _ = run(capsys, "check", "--set", path)
        assert code == 0
        assert "valid = True" in out and "delta = 0" in out and "factorizable = True" in out

    def test_octet_input(self, capsys, tmp_path):
        path = write(tmp_path, "mu.json", {"mu": [0, 0, 0, 0, 0, 0, 1, 0]})
        code, data = run_json(capsys, "check", "--set", path)
        assert code == 0 and data["eps"] == EQ_EPS and data["delta"] == -2

    def test_invalid_set(self, capsys, tmp_path):
        path = write(tmp_path, "bad.json", {"eps": [1, 0, 0, 0] + [0.25] * 12})
        code, data = run_json(capsys, "check", "--set", path)
        assert code == 3
        assert not data["valid"]
        assert "loc:e1+e2=e5+e6" in data["violations"]

    def test_factorizable_flag(self, capsys, tmp_path):
        pr = [0.5, 0, 0, 0.5] * 3 + [0, 0.5, 0.5, 0]
        path = write(tmp_path, "pr.json", {"eps": pr})
        assert run(capsys, "check", "--set", path)[0] == 0
        assert run(capsys, "check", "--set", path, "--factorizable")[0] == 3
        code, data = run_json(capsys, "check", "--set", path)
        assert data["class"] == "super-quantum" and data["delta"] == 4

    def test_infeasible_octet(self, capsys, tmp_path):
        path = write(tmp_path, "mu.json", {"mu": [1] * 8})
        assert run(capsys, "check", "--set", path)[0] == 3

    @pytest.mark.parametrize("payload", ["{oops", json.dumps({"eps": [0.25] * 15}),
                                         json.dumps({"eps": ["a"] * 16}), json.dumps({"x": 1})])
    def test_malformed(self, capsys, tmp_path, payload):
        path = write(tmp_path, "bad.json", payload)
        assert run(capsys, "check", "--set", path)[0] == 4

    def test_non_finite(self, capsys, tmp_path):
        path = write(tmp_path, "nan.json", '{"eps": [NaN, 0.25, 0.25, 0.25, 0.25, 0.25, 0.25, 0.25,'
                                           ' 0.25, 0.25, 0.25, 0.25, 0.25, 0.25, 0.25, 0.25]}')
        assert run(capsys, "check", "--set", path)[0] == 3

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "check", "--set", str(tmp_path / "none.json"))[0] == 4


class TestTable:
    def test_alice_combined_cell(self, capsys):
        code, data = run_json(capsys, "table", "--which", "alice-combined", "--omega", "0.6666666667")
        assert code == 0
        r, c = data["rows"].index("(S,B)"), data["columns"].index("(S,B)")
        assert data["cells"][r][c] == [0.5, 1.0]

    def test_bob_type1_cell(self, capsys):
        code, data = run_json(capsys, "table", "--which", "bob-type1", "--omega", "0.5")
        r, c = data["rows"].index("S"), data["columns"].index("(S,B)")
        assert data["cells"][r][c] == [1.0]

    def test_one_sided_equilibrium(self, capsys):
        code, out, _ = run(capsys, "table", "--which", "one-sided")
        assert code == 0 and "Nash equilibrium: (B,(B,S))" in out

    def test_byte_identical(self, capsys):
        outs = {run(capsys, "table", "--which", "combined", "--omega", "2/3")[1] for _ in range(3)}
        assert len(outs) == 1
        assert "1.333333333" in outs.pop()

    def test_unknown_table(self, capsys):
        assert usage_exit(capsys, "table", "--which", "nope") == 2


class TestOracle:
    def test_certifies_mixed(self, capsys):
        code, data = run_json(capsys, "oracle", "--omega", "2/3", "--profile", "1/2,1,2/3,0", "--grid", "11")
        assert code == 0 and data["certified"]

    def test_finds_deviation(self, capsys):
        code, out, _ = run(capsys, "oracle", "--omega", "2/3", "--profile", "0,0,1,1")
        assert code == 0
        assert "A1: best deviation 1 payoff 2 gain 2" in out
        assert "certified = False" in out

    def test_grid_too_small(self, capsys):
        assert usage_exit(capsys, "oracle", "--omega", "0.5", "--profile", "0,0,0,0", "--grid", "1") == 2


def test_no_verb(capsys):
    assert usage_exit(capsys) == 2


def test_module_entry_point():
    import subprocess
    import sys
    res = subprocess.run([sys.executable, "-m", "eprgame", "solve-quantum", "--omega", "0.5"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "class = local" in res.stdout
