import hashlib
import json
import shutil
import subprocess
import sys

import pytest

from resume_rater.cli import main

from conftest import FIXTURES, RESUMES

PROFILE = FIXTURES / "profile_software.json"


def run(capsys, *argv):
    try:
        code = main([str(a) for a in argv])
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def model_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("model") / "model.json"
    assert main(["train", "--corpus", str(RESUMES), "--model", str(path), "-K", "4", "--seed", "7",
                 "--iters", "200"]) == 0
    return path


def digest(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_train_writes_model_and_summary(capsys, tmp_path):
    out_path = tmp_path / "m.json"
    code, out, _ = run(capsys, "train", "--corpus", RESUMES, "--model", out_path, "-K", 4, "--seed", 7, "--iters", 50)
    assert code == 0
    summary = json.loads(out)
    assert summary["K"] == 4 and summary["D"] == 8 and summary["iterations"] == 50
    assert summary["V"] == len(json.loads(out_path.read_text())["vocabulary"])


def test_train_is_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        code, _, _ = run(capsys, "train", "--corpus", RESUMES, "--model", p, "-K", 4, "--seed", 7, "--iters", 50)
        assert code == 0
    assert digest(a) == digest(b)


def test_train_empty_corpus(capsys, tmp_path):
    empty = tmp_path / "empty"
    empty.mkdir()
    code, out, err = run(capsys, "train", "--corpus", empty, "--model", tmp_path / "m.json", "-K", 2)
    assert code == 2
    assert str(empty) in err
    assert out == ""


def test_train_bad_config_is_usage_error(capsys, tmp_path):
    code, _, err = run(capsys, "train", "--corpus", RESUMES, "--model", tmp_path / "m.json", "-K", 0)
    assert code == 1
    assert "-K" in err
    code, _, _ = run(capsys, "train", "--corpus", RESUMES, "--model", tmp_path / "m.json", "-K", 2, "--alpha", "-1")
    assert code == 2


def test_missing_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 1


def test_parse_fig3(capsys):
    code, out, _ = run(capsys, "parse", RESUMES / "john_doe.txt")
    assert code == 0
    data = json.loads(out)
    assert data["email"] == "cmcturland@email.com"
    assert data["number"] == "(123) 456-7890"
    assert data["city"] == "New York"
    assert data["work_duration"] == "3 years 8 months"
    assert data["education_duration"] == "3 years 7 months"
    assert data["rating"] is None


def test_parse_empty_file(capsys, tmp_path):
    path = tmp_path / "ada_lovelace.txt"
    path.write_text("")
    code, out, _ = run(capsys, "parse", path)
    assert code == 0
    data = json.loads(out)
    assert data["name"] == "Ada Lovelace"
    assert data["email"] is None and data["work_exp"] == [] and data["skills"] == ""


def test_parse_malformed_range(capsys, tmp_path):
    path = tmp_path / "x.txt"
    path.write_text("Experience\nEngineer\nMay 2015 - April 2012\n")
    code, out, err = run(capsys, "parse", path)
    assert code == 2 and out == "" and "after it ends" in err


def test_parse_unreadable(capsys, tmp_path):
    code, _, err = run(capsys, "parse", tmp_path / "missing.txt")
    assert code == 1 and "does not exist" in err


def test_parse_reference_date(capsys):
    code, out, _ = run(capsys, "parse", RESUMES / "emily_chen.txt", "--reference-date", "2020-06")
    assert code == 0
    # July 2016 - May 2019 (34) plus June 2019 - present = June 2020 (12)
    assert json.loads(out)["work_duration"] == "3 years 10 months"


def test_parse_with_rating(capsys, model_file):
    code, out, _ = run(capsys, "parse", RESUMES / "john_doe.txt", "--rate", "--model", model_file,
                       "--profile", PROFILE, "--corpus", RESUMES, "--explain")
    assert code == 0
    data = json.loads(out)
    assert 0 <= data["rating"] <= 10
    assert data["rating"] == round(data["rating"], 2)
    b = data["breakdown"]
    assert b["final_score"] == b["km"] * b["wm"]


def test_parse_rate_needs_inputs(capsys):
    code, _, err = run(capsys, "parse", RESUMES / "john_doe.txt", "--rate")
    assert code == 1 and "--model" in err


def test_stats_then_rate(capsys, model_file, tmp_path):
    stats_path = tmp_path / "stats.json"
    code, out, _ = run(capsys, "stats", "--corpus", RESUMES, "--model", model_file, "--profile", PROFILE,
                       "--output", stats_path)
    assert code == 0
    stats = json.loads(out)
    assert stats == json.loads(stats_path.read_text())
    assert stats["corpus_size"] == 8 and stats["sd"] > 0

    code, out, _ = run(capsys, "rate", "--corpus", RESUMES, "--model", model_file, "--profile", PROFILE,
                       "--stats", stats_path)
    assert code == 0
    rated = json.loads(out)
    assert [r["doc_id"] for r in rated] == sorted(r["doc_id"] for r in rated)
    assert all(0 <= r["rating"] <= 10 for r in rated)
    # stats computed on demand from the same corpus give the same ratings
    code, out2, _ = run(capsys, "rate", "--corpus", RESUMES, "--model", model_file, "--profile", PROFILE)
    assert json.loads(out2) == rated


def test_topics_blocks(capsys, model_file):
    code, out, _ = run(capsys, "topics", "--model", model_file, "--doc-id", "john_doe", "-n", 5)
    assert code == 0
    data = json.loads(out)
    assert len(data["keywords"]) == 5
    assert len(data["topics"]) == 4
    scores = [float(b["topic_score"]) for b in data["topics"]]
    assert scores == sorted(scores, reverse=True)
    for block in data["topics"]:
        assert {"topic", "topic_score"} <= set(block)
        probs = [float(v) for k, v in block.items() if k not in ("topic", "topic_score")]
        assert probs == sorted(probs, reverse=True)
    assert abs(sum(data["doc_topics"].values()) - 1) <= 1e-9


def test_topics_single_term(capsys, model_file):
    code, out, _ = run(capsys, "topics", "--model", model_file, "--doc-id", "jane_roe", "-n", 1)
    data = json.loads(out)
    assert len(data["keywords"]) == 1
    assert all(len(b) == 3 for b in data["topics"])


def test_topics_unknown_doc(capsys, model_file):
    code, out, err = run(capsys, "topics", "--model", model_file, "--doc-id", "nobody")
    assert code == 2 and out == "" and "nobody" in err


@pytest.fixture
def predictions(tmp_path, capsys):
    pred_dir = tmp_path / "preds"
    pred_dir.mkdir()
    for path in sorted(RESUMES.glob("*.txt")):
        assert main(["parse", str(path)]) == 0
        (pred_dir / f"{path.stem}.json").write_text(capsys.readouterr().out)
    return pred_dir


def test_eval_report(capsys, predictions, tmp_path):
    report_path = tmp_path / "report.json"
    code, out, _ = run(capsys, "eval", "--predictions", predictions, "--gold", FIXTURES / "gold.json",
                       "--report", report_path)
    assert code == 0
    rows = {line[:14].strip(): line.split()[-3:] for line in out.splitlines()[1:7]}
    assert list(rows) == ["College Name", "Degree", "Email", "Location", "Name", "Skills"]
    report = json.loads(report_path.read_text())
    for entity, printed in rows.items():
        m = report["per_entity"][entity]
        assert printed == [f"{m['precision']:.3f}", f"{m['recall']:.3f}", f"{m['f1']:.3f}"]


def test_eval_perfect(capsys, tmp_path, gazetteers):
    pred_dir = tmp_path / "p"
    pred_dir.mkdir()
    (pred_dir / "ada.json").write_text(json.dumps({
        "name": "Ada", "email": "ada@x.org", "number": None, "city": "London", "work_exp": [],
        "education": ["B.S. Mathematics", "University of Cambridge"], "work_duration": "0 years 0 months",
        "education_duration": "0 years 0 months", "skills": "Python, Sql", "rating": None,
    }))
    gold = tmp_path / "gold.json"
    gold.write_text(json.dumps([{"doc_id": "ada", "entities": {
        "Name": ["Ada"], "Email": ["ada@x.org"], "Location": ["london"], "Skills": ["python", "sql"],
        "Degree": ["B.S. Mathematics"], "College Name": ["University of Cambridge"]}}]))
    code, out, _ = run(capsys, "eval", "--predictions", pred_dir, "--gold", gold)
    assert code == 0
    for line in out.splitlines()[1:7]:
        assert line.split()[-3:] == ["1.000", "1.000", "1.000"]


def test_eval_id_mismatch(capsys, predictions, tmp_path):
    shutil.copy(predictions / "john_doe.json", predictions / "stranger.json")
    (predictions / "jane_roe.json").unlink()
    code, out, err = run(capsys, "eval", "--predictions", predictions, "--gold", FIXTURES / "gold.json")
    assert code == 2 and out == ""
    assert "stranger" in err and "jane_roe" in err


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "resume_rater", "parse", str(RESUMES / "john_doe.txt")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["name"] == "John Doe"
