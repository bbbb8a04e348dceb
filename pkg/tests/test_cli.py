import json
import subprocess
import sys

import pytest

from jatranslit.cli import main


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_translit_stdout(tmp_path, capsys):
    src = tmp_path / "in.txt"
    src.write_text("קאל אלכׄזרי\nדׄלך\n", encoding="utf-8")
    code, out, _ = run(["translit", src], capsys)
    assert code == 0
    assert out == "قال الخزري\nذلك\n"


def test_translit_mode_before_and_after_subcommand(tmp_path, capsys):
    src = tmp_path / "in.txt"
    src.write_text("דׄלך\n", encoding="utf-8")
    assert run(["--mode", "dotless", "translit", src], capsys)[1] == "دلك\n"
    assert run(["translit", "--mode", "dotless", src], capsys)[1] == "دلك\n"


def test_translit_empty_file(tmp_path, capsys):
    src = tmp_path / "empty.txt"
    src.write_text("")
    out = tmp_path / "out.txt"
    code, _, _ = run(["translit", src, "-o", out], capsys)
    assert code == 0
    assert out.read_bytes() == b""


def test_translit_custom_mapping(tmp_path, capsys):
    src = tmp_path / "in.txt"
    src.write_text("שנהׄ\n", encoding="utf-8")
    mapping = tmp_path / "map.tsv"
    mapping.write_text("ה+dot\tه\nה\tة\n", encoding="utf-8")
    assert run(["--mapping", mapping, "translit", src], capsys)[1] == "شنه\n"


def test_translit_warnings_file(tmp_path, capsys):
    src = tmp_path / "in.txt"
    src.write_text("קאל xyz\n", encoding="utf-8")
    out = tmp_path / "out.txt"
    run(["translit", src, "-o", out], capsys)
    assert out.read_text(encoding="utf-8") == "قال xyz\n"
    assert "xyz" in (tmp_path / "out.txt.warnings.log").read_text(encoding="utf-8")


def test_ingest(tmp_path, data_dir, capsys):
    code, out, _ = run(["ingest", data_dir / "mixed.ja.txt", data_dir / "mixed.ar.txt", "-o", tmp_path], capsys)
    assert code == 0
    assert "Hebrew               6 (54.55%)" in out
    assert (tmp_path / "source_tokens.tsv").exists()


def test_line_mismatch_is_an_error(tmp_path, data_dir, capsys):
    ref = tmp_path / "two.txt"
    ref.write_text("a\nb\n")
    code, _, err = run(["align", data_dir / "mixed.ja.txt", ref, "-o", tmp_path / "a.tsv"], capsys)
    assert code == 1
    assert "error" in err


def test_align_then_score(tmp_path, data_dir, capsys):
    tsv = tmp_path / "a.tsv"
    run(["align", data_dir / "khazari.ja.txt", data_dir / "khazari.ar.txt", "-o", tsv], capsys)
    code, out, _ = run(["score-accuracy", tsv], capsys)
    assert code == 0
    assert out == "dotted: Acc=57.1 (4/7)\n"
    _, out, _ = run(["score-accuracy", tsv, "--column", "dotless", "--json"], capsys)
    assert json.loads(out)["accuracy"] == 28.6


def test_correct_and_score_m2(tmp_path, data_dir, capsys):
    report = tmp_path / "rep"
    run(["pipeline", data_dir / "khazari.ja.txt", data_dir / "khazari.ar.txt", "-o", report, "--no-figures"], capsys)
    hyp = tmp_path / "hyp.txt"
    hyp.write_text(
        "".join(json.loads(line)["dotted"] + " " for line in (report / "rows.jsonl").read_text(encoding="utf-8").splitlines()).strip() + "\n",
        encoding="utf-8",
    )
    corrected = tmp_path / "corr.txt"
    code, _, _ = run(["correct", hyp, "--backend", "identity", "-o", corrected], capsys)
    assert code == 0
    code, out, _ = run(["score-m2", "--gold", report / "gold.m2", "--system-text", corrected, "--json"], capsys)
    d = json.loads(out)
    assert (d["precision"], d["recall"], d["f1"], d["f_half"]) == (100.0, 0.0, 0.0, 0.0)
    code, out, _ = run(["score-m2", "--gold", report / "gold.m2", "--system", report / "gold.m2"], capsys)
    assert out.startswith("P=100.0 R=100.0 F1=100.0 F0.5=100.0")


def test_correct_needs_backend(tmp_path, capsys):
    src = tmp_path / "x.txt"
    src.write_text("x\n")
    with pytest.raises(SystemExit):
        main(["correct", str(src)])


def test_classify_errors(tmp_path, capsys):
    table = tmp_path / "err.tsv"
    table.write_text(
        "source\ttranslit\tcorrected\treference\tlabel\n"
        "כׄלקהׄ\tخلقة\tخلق\tخلقة\tJA\n"
        "אלאב\tالاب\tالآب\tالأب\tJA\n"
        "בהא\tبها\tUNK\tبها\tJA\n",
        encoding="utf-8",
    )
    code, out, err = run(["classify-errors", table], capsys)
    assert code == 0
    assert [line.split("\t")[-1] for line in out.splitlines()[1:]] == ["unnecessary_change", "alif_hamza", "unk_output"]
    assert "alif_hamza" in err


def test_pipeline_outputs(tmp_path, data_dir, capsys):
    code, out, _ = run(
        ["pipeline", data_dir / "mixed.ja.txt", data_dir / "mixed.ar.txt", "-o", tmp_path, "--backend", "identity"],
        capsys,
    )
    assert code == 0
    assert "Label statistics" in out
    for name in ("alignment.tsv", "gold.m2", "system.m2", "corrected.txt", "summary.json", "figures/labels.png", "figures/scores.png"):
        assert (tmp_path / name).exists(), name


def test_console_script_module():
    proc = subprocess.run([sys.executable, "-m", "jatranslit.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "pipeline" in proc.stdout
