import json

import pytest

from locap.cli import main
from locap.entropyopt import load_codebook
from locap import protocol


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def strip_metadata(payload):
    return {k: v for k, v in payload.items() if k != "metadata"}


def csv_payload(text):
    return [line for line in text.splitlines() if not line.startswith("#")]


def test_capacity_command(capsys):
    code, payload = run_json(capsys, ["capacity", "-N", "2", "-M", "4", "--ma", "2"])
    assert code == 0
    assert payload["span_dim"] == 8
    assert payload["capacity_bits"] == 3.0
    assert payload["regime"] == "BALANCED"
    assert payload["metadata"]["command"] == "capacity"
    assert payload["metadata"]["params"]["n_photons"] == 2


def test_capacity_3_5_2(capsys):
    code, payload = run_json(capsys, ["capacity", "-N", "3", "-M", "5", "--ma", "2"])
    assert code == 0
    assert payload["span_dim"] == 18


def test_capacity_invalid_split(capsys):
    assert main(["capacity", "-N", "2", "-M", "4", "--ma", "4"]) == 2
    assert "error" in capsys.readouterr().err


def test_span_command(capsys):
    code, payload = run_json(capsys, ["span", "-N", "3", "-M", "6", "--ma", "3"])
    assert code == 0
    assert payload["rank"] == 38
    assert payload["match"] is True
    assert payload["singular_gap"] > 1e3


def test_span_single_photon(capsys):
    code, payload = run_json(capsys, ["span", "-N", "1", "-M", "2", "--ma", "1"])
    assert code == 0
    assert payload["rank"] == 2


def test_span_byte_determinism(capsys):
    argv = ["span", "-N", "2", "-M", "4", "--ma", "2", "--seed", "7"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    second = capsys.readouterr().out
    assert first == second


def test_span_sweep_csv(capsys):
    code = main(["span", "-N", "2", "-M", "4"])
    out = capsys.readouterr().out
    assert code == 0
    lines = csv_payload(out)
    assert lines[0] == "N,M,M_A,rank,bound,match,singular_gap"
    assert len(lines) == 4
    assert lines[1].startswith("2,4,1,3,3,true")


def test_optimize_writes_codebook(tmp_path, capsys):
    out_file = tmp_path / "book.json"
    code, payload = run_json(capsys, [
        "optimize", "-N", "2", "-M", "4", "--ma", "2", "-X", "4",
        "--restarts", "2", "--max-iter", "800", "--seed", "9",
        "--threads", "1", "--out", str(out_file)])
    assert code == 0
    assert payload["s_max_bits"] == pytest.approx(2.0, abs=1e-5)
    book, meta = load_codebook(out_file)
    assert book.num_symbols == 4
    assert meta["command"] == "optimize"


def test_optimize_thread_count_invariance(tmp_path, capsys):
    payloads = []
    for threads in ("1", "2"):
        code, payload = run_json(capsys, [
            "optimize", "-N", "2", "-M", "4", "--ma", "2", "-X", "3",
            "--restarts", "2", "--max-iter", "400", "--seed", "11",
            "--threads", threads])
        assert code == 0
        payloads.append(strip_metadata(payload))
    assert payloads[0] == payloads[1]


def test_sweep_csv(tmp_path):
    csv_file = tmp_path / "sweep.csv"
    code = main(["sweep", "-N", "2", "-M", "4", "--ma", "2",
                 "--x-range", "2:3", "--restarts", "2", "--max-iter", "500",
                 "--threads", "1", "--seed", "3", "--csv", str(csv_file)])
    assert code == 0
    lines = csv_payload(csv_file.read_text())
    assert lines[0] == "X,S_max_bits,log2X,capacity_bits,converged,restarts_used"
    assert len(lines) == 3
    first = lines[1].split(",")
    assert first[0] == "2"
    assert float(first[1]) == pytest.approx(1.0, abs=1e-5)


def test_verify_protocol_default_passes(capsys):
    assert main(["verify-protocol"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out
    assert "1.250000000000" in out


def test_verify_protocol_broken_params_fails(tmp_path, capsys):
    params = protocol.default_params()
    params.phases[2] = 0.0
    path = tmp_path / "broken.json"
    protocol.save_params(path, params)
    assert main(["verify-protocol", "--params", str(path)]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out
    assert "phase_parity" in out


def test_verify_protocol_emit_codebook_roundtrip(tmp_path, capsys):
    book_file = tmp_path / "protocol_book.json"
    assert main(["verify-protocol", "--emit-codebook", str(book_file)]) == 0
    capsys.readouterr()
    code, payload = run_json(capsys, [
        "optimize", "-N", "2", "-M", "4", "--ma", "2", "-X", "8",
        "--restarts", "1", "--max-iter", "300", "--seed", "1",
        "--threads", "1", "--warm-start", str(book_file)])
    assert code == 0
    assert payload["s_max_bits"] == pytest.approx(3.0, abs=1e-9)


def test_verify_protocol_random_family(capsys):
    assert main(["verify-protocol", "--family", "random", "--seed", "5"]) == 0


def test_asymptotics_csv(capsys):
    code = main(["asymptotics", "--n-list", "2,16,64"])
    out = capsys.readouterr().out
    assert code == 0
    lines = csv_payload(out)
    assert lines[0] == "N,M,M_A,log2_dS,log2_dH,dualrail_bits"
    rows = {}
    for line in lines[1:]:
        cells = line.split(",")
        rows[(int(cells[0]), int(cells[2]))] = [float(c) for c in cells[3:]]
    # ratio 1/3 at N=2 rounds Alice down to a single mode, still emitted
    assert (2, 1) in rows
    # balanced column at N=64: one-bit gap window
    log2_ds, log2_dh, dualrail = rows[(64, 64)]
    assert 0.8 <= log2_dh - log2_ds <= 1.2
    assert dualrail == 64.0
    # bounds: dual rail below, Hilbert dimension above
    for (n, _ma), (ds, dh, rail) in rows.items():
        assert ds <= dh + 1e-9
        assert rail <= dh


def test_asymptotics_env_outdir(tmp_path, monkeypatch):
    monkeypatch.setenv("LOCAP_OUTDIR", str(tmp_path))
    assert main(["asymptotics", "--n-list", "2,4", "--csv", "table.csv"]) == 0
    assert (tmp_path / "table.csv").exists()


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as excinfo:
        main(["capacity", "-N", "2"])
    assert excinfo.value.code == 2
