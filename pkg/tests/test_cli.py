import numpy as np
import pytest

from hingsent.cli import main

TRAIN_TSV = """t1\tyeh movie bahut accha hai kya baat\tpositive
t2\tbura film bakwas worst movie\tnegative
t3\tthik thak hai movie theek\tneutral
t4\t@user accha accha zabardast http://x.y\tpositive
t5\tbEkAr bura nahi pasand\tnegative
t6\tmovie okay hai bas\tneutral
t7\tshandar accha kamaal zabardast\tpositive
t8\tghatiya bakwas bura worst\tnegative
"""

VAL_TSV = """v1\taccha movie zabardast\tpositive
v2\tbakwas bura film\tnegative
v3\tthik hai okay\tneutral
"""

TEST_TSV = """x1\tzabardast accha shandar\tpositive
x2\tworst bakwas ghatiya\tnegative
x3\tokay thik bas\tneutral
"""

CONLL = """meta\t7\tnegative
yeh\tHin
bura\tHin

meta\t9
kya\tHin
baat\tHin
"""


@pytest.fixture
def data(tmp_path):
    (tmp_path / "train.tsv").write_text(TRAIN_TSV, encoding="utf-8")
    (tmp_path / "val.tsv").write_text(VAL_TSV, encoding="utf-8")
    (tmp_path / "test.tsv").write_text(TEST_TSV, encoding="utf-8")
    (tmp_path / "blocks.conll").write_text(CONLL, encoding="utf-8")
    return tmp_path


def _train_args(data, out, extra=()):
    return ["--quiet", "train", "--arch", "lstm",
            "--input", str(data / "train.tsv"), "--val", str(data / "val.tsv"),
            "--epochs", "2", "--batch-size", "4", "--seed", "7",
            "--vocab-size", "50", "--seq-len", "8",
            "--out", str(out), *extra]


class TestStats:
    def test_tsv(self, data, capsys):
        assert main(["--quiet", "stats", "--input", str(data / "train.tsv")]) == 0
        out = dict(line.split("\t") for line in capsys.readouterr().out.splitlines())
        assert out["sentence_count"] == "8"
        assert int(out["word_count"]) > 0

    def test_conll(self, data, capsys):
        rc = main(["--quiet", "stats", "--input", str(data / "blocks.conll"),
                   "--format", "conll"])
        assert rc == 0
        out = dict(line.split("\t") for line in capsys.readouterr().out.splitlines())
        assert out["sentence_count"] == "2"

    def test_missing_file_exit_2(self, data):
        assert main(["--quiet", "stats", "--input", str(data / "nope.tsv")]) == 2

    def test_empty_file_exit_1(self, data, capsys):
        (data / "empty.tsv").write_text("", encoding="utf-8")
        assert main(["--quiet", "stats", "--input", str(data / "empty.tsv")]) == 1
        assert "empty corpus" in capsys.readouterr().err

    def test_unknown_arch_usage_error(self, data):
        with pytest.raises(SystemExit) as exc:
            main(_train_args(data, data / "m")[:3] + ["--arch", "transformer"])
        assert exc.value.code == 2


class TestPreprocess:
    def test_writes_tokens_and_stoplist(self, data):
        out = data / "tokens.tsv"
        stop = data / "tf.txt"
        rc = main(["--quiet", "preprocess", "--input", str(data / "train.tsv"),
                   "--out", str(out), "--tf-size", "2",
                   "--hindi-stoplist-out", str(stop)])
        assert rc == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 8
        assert lines[0].split("\t")[0] == "t1"
        assert len(stop.read_text(encoding="utf-8").split()) == 2


class TestTrainPredict:
    def test_train_writes_artifacts(self, data):
        out = data / "run"
        assert main(_train_args(data, out)) == 0
        for name in ["model.hgsm", "vocab.tsv", "english_stopwords.txt",
                     "hindi_stopwords.txt", "history.tsv"]:
            assert (out / name).exists(), name
        history = (out / "history.tsv").read_text(encoding="utf-8").splitlines()
        assert len(history) == 1 + 2  # header + one row per epoch

    def test_train_deterministic_byte_identical(self, data):
        out1, out2 = data / "r1", data / "r2"
        assert main(_train_args(data, out1)) == 0
        assert main(_train_args(data, out2)) == 0
        assert (out1 / "model.hgsm").read_bytes() == (out2 / "model.hgsm").read_bytes()

    def test_predict_rows_and_determinism(self, data):
        out = data / "run"
        assert main(_train_args(data, out)) == 0
        probs1, probs2 = data / "p1.tsv", data / "p2.tsv"
        for path in (probs1, probs2):
            rc = main(["--quiet", "predict", "--model", str(out / "model.hgsm"),
                       "--input", str(data / "test.tsv"), "--out", str(path)])
            assert rc == 0
        assert probs1.read_bytes() == probs2.read_bytes()
        lines = probs1.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 3
        for line in lines:
            fields = line.split("\t")
            assert len(fields) == 4
            assert abs(sum(float(v) for v in fields[1:]) - 1.0) < 1e-6

    def test_predict_rejects_mismatched_vocab(self, data, capsys):
        out = data / "run"
        assert main(_train_args(data, out)) == 0
        (out / "vocab.tsv").write_text("<pad>\t0\n<oov>\t1\nintruder\t2\n",
                                       encoding="utf-8")
        rc = main(["--quiet", "predict", "--model", str(out / "model.hgsm"),
                   "--input", str(data / "test.tsv"), "--out", str(data / "p.tsv")])
        assert rc == 1
        assert "vocab" in capsys.readouterr().err


class TestEnsembleEvaluate:
    def _write_probs(self, path, rows):
        with open(path, "w", encoding="utf-8") as f:
            for uid, row in rows:
                f.write(uid + "\t" + "\t".join(f"{v:.6f}" for v in row) + "\n")

    def test_ensemble_matches_rule(self, data, capsys):
        p1, p2 = data / "m1.tsv", data / "m2.tsv"
        self._write_probs(p1, [("a", [0.5, 0.3, 0.2]), ("b", [0.2, 0.3, 0.5])])
        self._write_probs(p2, [("a", [0.1, 0.6, 0.3]), ("b", [0.2, 0.5, 0.3])])
        out = data / "pred.tsv"
        rc = main(["--quiet", "ensemble", "--probs", str(p1), str(p2),
                   "--out", str(out)])
        assert rc == 0
        assert out.read_text(encoding="utf-8") == "a\tneutral\nb\tneutral\n"

    def test_single_input_argmax(self, data):
        p1 = data / "m1.tsv"
        self._write_probs(p1, [("a", [0.2, 0.3, 0.5])])
        out = data / "pred.tsv"
        assert main(["--quiet", "ensemble", "--probs", str(p1), "--out", str(out)]) == 0
        assert out.read_text(encoding="utf-8") == "a\tpositive\n"

    def test_four_files_match_brute_force_oracle(self, data):
        rng = np.random.default_rng(77)
        n = 25
        ids = [f"s{i}" for i in range(n)]
        paths = []
        for k in range(4):
            raw = rng.uniform(0.05, 1.0, size=(n, 3))
            raw /= raw.sum(axis=1, keepdims=True)
            path = data / f"model{k}.tsv"
            self._write_probs(path, list(zip(ids, raw)))
            paths.append(path)
        out = data / "pred.tsv"
        assert main(["--quiet", "ensemble", "--probs", *map(str, paths),
                     "--out", str(out)]) == 0

        # independent loop-nest evaluation over the values as written to disk
        file_rows = []
        for path in paths:
            rows = [[float(v) for v in line.split("\t")[1:]]
                    for line in path.read_text(encoding="utf-8").splitlines()]
            file_rows.append(rows)
        names = ["negative", "neutral", "positive"]
        expected = []
        for i in range(n):
            best_j, best_v = 0, -1.0
            for j in range(3):
                v = max(file_rows[k][i][j] for k in range(4))
                if v > best_v:
                    best_j, best_v = j, v
            expected.append(f"{ids[i]}\t{names[best_j]}")
        assert out.read_text(encoding="utf-8").splitlines() == expected

    def test_rejects_non_probability_rows(self, data):
        p1 = data / "m1.tsv"
        self._write_probs(p1, [("a", [0.9, 0.8, 0.7])])
        rc = main(["--quiet", "ensemble", "--probs", str(p1),
                   "--out", str(data / "pred.tsv")])
        assert rc == 1

    def test_mismatched_rows_exit_1(self, data):
        p1, p2 = data / "m1.tsv", data / "m2.tsv"
        self._write_probs(p1, [("a", [0.5, 0.3, 0.2])])
        self._write_probs(p2, [("a", [0.5, 0.3, 0.2]), ("b", [0.2, 0.3, 0.5])])
        rc = main(["--quiet", "ensemble", "--probs", str(p1), str(p2),
                   "--out", str(data / "pred.tsv")])
        assert rc == 1

    def test_ensemble_from_model_files(self, data):
        out1, out2 = data / "ma", data / "mb"
        assert main(_train_args(data, out1)) == 0
        assert main(_train_args(data, out2, extra=["--seed", "9"])) == 0
        pred = data / "pred_models.tsv"
        rc = main(["--quiet", "ensemble",
                   "--models", str(out1 / "model.hgsm"), str(out2 / "model.hgsm"),
                   "--input", str(data / "test.tsv"), "--out", str(pred)])
        assert rc == 0
        lines = pred.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 3
        assert all(line.split("\t")[1] in ("negative", "neutral", "positive")
                   for line in lines)

    def test_ensemble_rejects_probs_and_models_together(self, data):
        p1 = data / "m1.tsv"
        self._write_probs(p1, [("a", [0.5, 0.3, 0.2])])
        rc = main(["--quiet", "ensemble", "--probs", str(p1),
                   "--models", "x.hgsm", "--out", str(data / "p.tsv")])
        assert rc == 2

    def test_evaluate_fixture_weighted_f1(self, data, capsys):
        gold = data / "gold.tsv"
        gold.write_text("a\tx\tnegative\nb\ty\tnegative\nc\tz\tneutral\nd\tw\tpositive\n",
                        encoding="utf-8")
        pred = data / "pred.tsv"
        pred.write_text("a\tnegative\nb\tneutral\nc\tneutral\nd\tpositive\n",
                        encoding="utf-8")
        assert main(["--quiet", "evaluate", "--gold", str(gold), "--pred", str(pred)]) == 0
        out = capsys.readouterr().out
        assert "0.7500" in out  # weighted F1 of the documented fixture

    def test_evaluate_unknown_pred_id_exit_1(self, data, capsys):
        gold = data / "gold.tsv"
        gold.write_text("a\tx\tpositive\n", encoding="utf-8")
        pred = data / "pred.tsv"
        pred.write_text("a\tpositive\nghost\tneutral\n", encoding="utf-8")
        rc = main(["--quiet", "evaluate", "--gold", str(gold), "--pred", str(pred)])
        assert rc == 1
        assert "ghost" in capsys.readouterr().err

    def test_evaluate_identical_files_all_ones(self, data, capsys):
        gold = data / "gold.tsv"
        gold.write_text("a\tx\tpositive\nb\ty\tnegative\nc\tz\tneutral\n", encoding="utf-8")
        pred = data / "pred.tsv"
        pred.write_text("a\tpositive\nb\tnegative\nc\tneutral\n", encoding="utf-8")
        assert main(["--quiet", "evaluate", "--gold", str(gold), "--pred", str(pred)]) == 0
        assert "1.0000" in capsys.readouterr().out

    def test_evaluate_machine_report(self, data):
        gold = data / "gold.tsv"
        gold.write_text("a\tx\tnegative\nb\ty\tnegative\nc\tz\tneutral\nd\tw\tpositive\n",
                        encoding="utf-8")
        pred = data / "pred.tsv"
        pred.write_text("a\tnegative\nb\tneutral\nc\tneutral\nd\tpositive\n",
                        encoding="utf-8")
        report = data / "metrics.tsv"
        rc = main(["--quiet", "evaluate", "--gold", str(gold), "--pred", str(pred),
                   "--report-out", str(report)])
        assert rc == 0
        rows = [line.split("\t") for line in
                report.read_text(encoding="utf-8").splitlines()]
        assert ["weighted_f1", "-", "0.75"] in rows


class TestReproduce:
    def test_full_recipe(self, data, capsys):
        out = data / "repro"
        rc = main(["--quiet", "reproduce",
                   "--input", str(data / "train.tsv"), "--val", str(data / "val.tsv"),
                   "--test", str(data / "test.tsv"),
                   "--epochs", "2", "--batch-size", "4", "--seed", "3",
                   "--vocab-size", "50", "--seq-len", "8",
                   "--out", str(out)])
        assert rc == 0
        for arch in ["lstm", "lstm-conv", "bilstm", "cnn"]:
            assert (out / f"{arch}.hgsm").exists()
            assert (out / f"{arch}_probs.tsv").exists()
        pred_lines = (out / "predictions.tsv").read_text(encoding="utf-8").splitlines()
        assert len(pred_lines) == 3
        assert "weighted f1" in capsys.readouterr().out
        assert (out / "metrics.tsv").exists()

    def test_reproduce_models_usable_by_ensemble(self, data):
        out = data / "repro2"
        rc = main(["--quiet", "reproduce",
                   "--input", str(data / "train.tsv"), "--val", str(data / "val.tsv"),
                   "--test", str(data / "test.tsv"),
                   "--epochs", "1", "--batch-size", "4", "--seed", "3",
                   "--vocab-size", "50", "--seq-len", "8",
                   "--out", str(out)])
        assert rc == 0
        pred = data / "re_ens.tsv"
        rc = main(["--quiet", "ensemble",
                   "--models", str(out / "lstm.hgsm"), str(out / "cnn.hgsm"),
                   "--input", str(data / "test.tsv"), "--out", str(pred)])
        assert rc == 0
        assert len(pred.read_text(encoding="utf-8").splitlines()) == 3
