import json
import subprocess
import sys

import pytest

from coverkit.cli import dump_json, main

GL2_KP = {
    "catalog": {"name": "GL", "size": 2},
    "form": {"N": 2, "q_basis": [0, 0], "b_offdiag": [1]},
}


@pytest.fixture()
def gl2_doc(tmp_path):
    path = tmp_path / "gl2.json"
    path.write_text(json.dumps(GL2_KP))
    return str(path)


def test_analyze_text_output(gl2_doc, capsys):
    assert main(["analyze", gl2_doc]) == 0
    out = capsys.readouterr().out
    assert "K ≅ Z/2" in out
    assert "pi1 ≅ Z" in out


def test_analyze_json_round_trip(gl2_doc, tmp_path, capsys):
    assert main(["analyze", gl2_doc, "--json"]) == 0
    first = capsys.readouterr().out
    report_path = tmp_path / "report.json"
    report_path.write_text(first)
    assert main(["analyze", str(report_path), "--json"]) == 0
    second = capsys.readouterr().out
    assert first == second  # byte-stable under re-ingestion
    report = json.loads(first)
    assert dump_json(report) == first


def test_obstruction_command(gl2_doc, capsys):
    assert main(["obstruction", gl2_doc, "--chi", "1"]) == 0
    out = capsys.readouterr().out
    assert "solutions: 1 + 2Z" in out
    assert main(["obstruction", gl2_doc, "--chi", "0"]) == 0
    out = capsys.readouterr().out
    assert "solutions: 0 + 2Z" in out


def test_obstruction_chi_reduction_and_errors(gl2_doc, capsys):
    # integer coordinates reduce mod the invariant factors and are accepted
    assert main(["obstruction", gl2_doc, "--chi", "5"]) == 0
    out = capsys.readouterr().out
    assert "solutions: 1 + 2Z" in out
    # wrong length exits 2
    assert main(["obstruction", gl2_doc, "--chi", "1,0"]) == 2
    # non-integer exits 2
    assert main(["obstruction", gl2_doc, "--chi", "x"]) == 2


def test_obstruction_document_block(tmp_path, capsys):
    doc = dict(GL2_KP)
    doc["obstruction"] = {"chi": [1]}
    path = tmp_path / "doc.json"
    path.write_text(json.dumps(doc))
    assert main(["obstruction", str(path)]) == 0
    assert "solutions: 1 + 2Z" in capsys.readouterr().out


def test_analyze_sl2_trivial_k(tmp_path, capsys):
    doc = {"catalog": {"name": "SL", "size": 2}, "form": {"N": 2, "q_basis": [1], "b_offdiag": []}}
    path = tmp_path / "sl2.json"
    path.write_text(json.dumps(doc))
    assert main(["analyze", str(path)]) == 0
    assert "K ≅ 0" in capsys.readouterr().out


def test_hilbert_command(capsys):
    assert main(["hilbert", "Qp:2", "-1", "-1"]) == 0
    assert capsys.readouterr().out.strip() == "-1"
    assert main(["hilbert", "Qp:3", "-1", "-1"]) == 0
    assert capsys.readouterr().out.strip() == "+1"


def test_hilbert_laurent_elements_after_separator(capsys):
    # element strings starting with '-' need the usual '--' separator
    assert main(["hilbert", "Fq((t)):5", "--", "-1:3,0:1", "1:1"]) == 0
    out = capsys.readouterr().out.strip()
    assert out in ("+1", "-1")


def test_hilbert_unsupported_field(capsys):
    assert main(["hilbert", "Fq((t)):2", "0:1", "0:1"]) == 2


def test_tame_command(capsys):
    assert main(["tame", "Fq((t)):5", "4", "1:1", "0:2"]) == 0
    assert capsys.readouterr().out.strip() == "3 (mod 4; primitive root 2)"


def test_genuine_command(tmp_path, capsys):
    assert main(["genuine", "sample_documents/genuine_q2.json"]) == 0
    out = capsys.readouterr().out
    assert "genuine character exists: no" in out
    doc = json.loads(open("sample_documents/genuine_q2.json").read())
    doc["genuine_character"]["field"] = "Qp:3"
    path = tmp_path / "q3.json"
    path.write_text(json.dumps(doc))
    assert main(["genuine", str(path)]) == 0
    assert "genuine character exists: yes" in capsys.readouterr().out


def test_catalog_command(capsys):
    assert main(["catalog", "GL", "--size", "2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["root_datum"]["simple_coroots"] == [[1, -1]]
    assert main(["catalog", "Nope", "--size", "2"]) == 2


def test_missing_file_exit_1(capsys):
    assert main(["analyze", "/nonexistent/file.json"]) == 1


def test_malformed_json_exit_1(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"catalog": {"name": "GL",')
    assert main(["analyze", str(path)]) == 1
    err = capsys.readouterr().err
    assert "line" in err and "column" in err


def test_invalid_document_exit_2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"form": {"N": 2, "q_basis": []}}))
    assert main(["analyze", str(path)]) == 2


def test_sample_document_runs(capsys):
    assert main(["obstruction", "sample_documents/gl2_kp.json"]) == 0
    assert "solutions: 1 + 2Z" in capsys.readouterr().out


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "coverkit.cli", "hilbert", "Qp:2", "-1", "-1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "-1"
