import pytest

from helpers import forged_counting_trace
from prefixdomain.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_kc_demo(capsys):
    code, out = run(capsys, "kc-demo", "--requests", "1,2,2")
    assert code == 0
    assert out.out.split() == ["0", "10", "11"]
    code, out = run(capsys, "kc-demo", "--requests", "1,1,1")
    assert code == 1
    assert out.out.split() == ["0", "1"]


def test_schedule(capsys):
    code, out = run(capsys, "schedule", "--blocks", "3")
    assert code == 0
    assert out.out.splitlines() == ["1 1 2 eps", "2 3 6 eps", "3 7 14 0"]


def test_member(capsys):
    assert run(capsys, "member", "--string", "0110")[1].out.strip() == "true"
    assert run(capsys, "member", "--string", "1000000")[1].out.strip() == "false"
    assert run(capsys, "member", "--string", "0120")[0] == 2


def test_simulate_and_tools(capsys, tmp_path):
    path = tmp_path / "run.trace"
    code, out = run(
        capsys, "simulate", "--bob", "adversarial", "--levels", "7,14", "--c", "1",
        "--depth", "14", "--seed", "2", "--keep-going", "--out", str(path),
    )
    assert code == 0
    assert "fire c=1 window=[7,14]" in out.out
    assert run(capsys, "verify-trace", str(path))[0] == 0
    code, out = run(capsys, "audit-counting", str(path))
    assert code == 0 and out.out.rstrip().endswith("pass")
    code, out = run(capsys, "density", str(path), "--set", "0", "--set", "1")
    assert code == 0 and len(out.out.splitlines()) == 2
    code, out = run(capsys, "b-seq", str(path), "--c", "1")
    assert code == 0 and "cumulative=" in out.out

    again = tmp_path / "again.trace"
    code, _ = run(capsys, "simulate", "--bob", "replay", "--replay-from", str(path),
                  "--c", "1", "--depth", "14", "--keep-going", "--out", str(again))
    assert code == 0
    assert again.read_text() == path.read_text()


def test_same_seed_same_trace(capsys, tmp_path):
    a, b = tmp_path / "a.trace", tmp_path / "b.trace"
    for p in (a, b):
        run(capsys, "simulate", "--bob", "random", "--depth", "12", "--seed", "9", "--out", str(p))
    assert a.read_text() == b.read_text()


def test_verify_failures(capsys, tmp_path):
    path = tmp_path / "run.trace"
    run(capsys, "simulate", "--bob", "greedy_kc", "--depth", "10", "--seed", "1", "--out", str(path))
    lines = path.read_text().splitlines()
    i = next(k for k, line in enumerate(lines) if line.startswith("1 "))
    t, p, x = lines[i].split()
    lines[i] = f"{t} {p} {x[:-1]}{'1' if x[-1] == '0' else '0'}"
    tampered = tmp_path / "tampered.trace"
    tampered.write_text("\n".join(lines) + "\n")
    assert run(capsys, "verify-trace", str(tampered))[0] == 1
    cut = tmp_path / "cut.trace"
    cut.write_text("\n".join(lines[:5]) + "\n")
    assert run(capsys, "verify-trace", str(cut))[0] == 2
    assert run(capsys, "verify-trace", str(tmp_path / "missing"))[0] == 2


def test_audit_forged(capsys, tmp_path):
    path = tmp_path / "forged.trace"
    path.write_text("\n".join(forged_counting_trace()) + "\n")
    code, out = run(capsys, "audit-counting", str(path))
    assert code == 1
    assert "VIOLATION" in out.out and "fraction@fire=1/2^1" in out.out


def test_audit_without_fire(capsys, tmp_path):
    path = tmp_path / "quiet.trace"
    run(capsys, "simulate", "--bob", "greedy_kc", "--depth", "4", "--requests", "2", "--out", str(path))
    assert run(capsys, "audit-counting", str(path))[0] == 2


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--bob", "nobody"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
