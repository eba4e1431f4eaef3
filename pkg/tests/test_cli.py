import pytest

from coriolis_sim.cli import main


def test_glider_export_row_count(tmp_path, capsys):
    out = tmp_path / "t.csv"
    rc = main([
        "simulate", "--scenario", "glider", "--omega", "1",
        "--impulse", "0.5,0,0", "--duration", "10", "--export", str(out),
    ])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 1001  # header + 10 s at 1e-3 dt, stride 10
    summary = capsys.readouterr().out
    assert "samples=1000" in summary
    assert "curvature=straight" in summary  # glider defaults to the inertial vantage


def test_ball_no_rotation_is_straight(tmp_path, capsys):
    rc = main([
        "simulate", "--scenario", "ball", "--omega", "0",
        "--impulse", "0.3,0,0", "--duration", "2",
    ])
    assert rc == 0
    assert "curvature=straight" in capsys.readouterr().out


def test_rotating_vantage_reports_right(capsys):
    rc = main([
        "simulate", "--scenario", "glider", "--omega", "1",
        "--impulse", "0.5,0,0", "--duration", "5", "--vantage", "rotating",
    ])
    assert rc == 0
    assert "curvature=right" in capsys.readouterr().out


def test_missing_scenario_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--duration", "1"])
    assert exc.value.code == 2


def test_bad_impulse_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--scenario", "ball", "--impulse", "1,2"])
    assert exc.value.code == 2


def test_unwritable_export_exits_1(tmp_path):
    rc = main([
        "simulate", "--scenario", "ball", "--impulse", "0.1,0,0",
        "--duration", "0.1", "--export", str(tmp_path / "no" / "dir" / "t.csv"),
    ])
    assert rc == 1


def test_determinism_byte_identical_exports(tmp_path):
    outs = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        rc = main([
            "simulate", "--scenario", "ball", "--omega", "0.8", "--mu-k", "0.2",
            "--mu-s", "0.3", "--impulse", "0.4,0.1,0", "--duration", "3",
            "--export", str(out),
        ])
        assert rc == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_device_script_run(tmp_path, capsys):
    script = tmp_path / "script.csv"
    script.write_text("tick,x,y,z\n0,0.02,0,0\n500,0,0.02,0\n")
    out = tmp_path / "t.csv"
    rc = main([
        "simulate", "--scenario", "ball", "--omega", "0.5",
        "--duration", "1", "--device-script", str(script), "--export", str(out),
    ])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 101
    # the coupling pulled the ball off center
    last = lines[-1].split(",")
    assert abs(float(last[1])) > 1e-3


def test_config_file_defaults(tmp_path, capsys):
    cfg = tmp_path / "sim.cfg"
    cfg.write_text("scenario=glider\nomega=1\nimpulse=0.5,0,0\nduration=2\n")
    rc = main(["simulate", "--scenario", "glider", "--config", str(cfg)])
    assert rc == 0
    assert "samples=200" in capsys.readouterr().out


def test_config_file_explicit_flag_wins(tmp_path, capsys):
    cfg = tmp_path / "sim.cfg"
    cfg.write_text("duration=2\n")
    rc = main([
        "simulate", "--scenario", "glider", "--impulse", "0.5,0,0",
        "--duration", "1", "--config", str(cfg),
    ])
    assert rc == 0
    assert "samples=100" in capsys.readouterr().out


def test_balance_command(tmp_path, capsys):
    roster = tmp_path / "roster.csv"
    roster.write_text(
        "id,gpa\n" + "\n".join(
            f"s{i},{g}" for i, g in enumerate([4.0, 3.8, 3.6, 3.4, 3.2, 3.0, 2.8, 2.6])
        ) + "\n"
    )
    rc = main(["balance", "--roster", str(roster), "-k", "2"])
    assert rc == 0
    out = capsys.readouterr().out
    j = float(out.splitlines()[0].split("=")[1].split("(")[0])
    assert j == pytest.approx(0.0, abs=1e-12)
    assert "G1:" in out and "G2:" in out
    assert "var=0.2100" in out


def test_report_command(tmp_path, capsys):
    roster = tmp_path / "roster.csv"
    rows = ["id,gpa,quiz_score"]
    gpas = [4.0, 3.8, 3.6, 3.4, 3.2, 3.0, 2.8, 2.6]
    scores = [80, 78, 76, 74, 72, 70, 68, 66]
    for i, (g, s) in enumerate(zip(gpas, scores)):
        rows.append(f"s{i},{g},{s}")
    roster.write_text("\n".join(rows) + "\n")
    pairs = tmp_path / "pairs.csv"
    pairs.write_text("G1-G2,G1,G2,Simulation exposure\n")
    csv_out = tmp_path / "report.csv"
    rc = main(["report", "--roster", str(roster), "--pairs", str(pairs),
               "-k", "2", "--csv", str(csv_out)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "G1-G2" in out
    assert csv_out.read_text().startswith("pair_id,")


def test_balance_bad_roster_exits_2(tmp_path):
    roster = tmp_path / "roster.csv"
    roster.write_text("id,gpa\na,3.0\nb,3.1\nc,3.2\n")
    rc = main(["balance", "--roster", str(roster), "-k", "2"])
    assert rc == 2


def test_missing_roster_file_exits_1(tmp_path):
    rc = main(["balance", "--roster", str(tmp_path / "none.csv"), "-k", "2"])
    assert rc == 1
