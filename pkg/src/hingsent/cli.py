"""Command-line interface.

Subcommands: stats, preprocess, train, predict, ensemble, evaluate, and
reproduce (the full four-model recipe from one seed). Exit codes: 0 on
success, 1 on data or validation failures, 2 on usage errors (including
unreadable input paths). Logs go to stderr (level via HINGSENT_LOG or
--quiet); data only ever goes to the output files.

A train run writes into its --out directory: model.hgsm, vocab.tsv,
english_stopwords.txt, hindi_stopwords.txt and history.tsv. The model file
records sha256 digests of the three text artifacts; predict refuses to run
when the artifacts it is given do not hash to the recorded values.
"""

from __future__ import annotations

import argparse
import hashlib
import logging
import os
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import models, preprocess, training, vectorize
from .corpus import CorpusError, RawTweet, Sentiment, corpus_stats, parse_conll, parse_tsv, write_predictions
from .ensemble import combine
from .metrics import confusion, f1_report, format_report, write_report_machine
from .models import ArchId, ModelConfig
from .preprocess import StopList
from .training import ModelFormatError, ProbMatrix, TrainHyper

log = logging.getLogger("hingsent")


class UsageError(ValueError):
    """Bad flag combination; maps to exit code 2."""

MODEL_FILENAME = "model.hgsm"
VOCAB_FILENAME = "vocab.tsv"
ENGLISH_STOPLIST_FILENAME = "english_stopwords.txt"
HINDI_STOPLIST_FILENAME = "hindi_stopwords.txt"
HISTORY_FILENAME = "history.tsv"


def _read_corpus(path: str, fmt: str) -> list[RawTweet]:
    with open(path, encoding="utf-8") as f:
        return parse_tsv(f) if fmt == "tsv" else parse_conll(f)


def _sha256(path: Path) -> bytes:
    return hashlib.sha256(path.read_bytes()).digest()


def _load_english_stoplist(path: Optional[str]) -> StopList:
    if path is None:
        return preprocess.load_english_stoplist()
    with open(path, encoding="utf-8") as f:
        return preprocess.load_english_stoplist(f)


# ----------------------------------------------------------------- commands

def cmd_stats(args) -> int:
    stats = corpus_stats(_read_corpus(args.input, args.format))
    print(f"sentence_count\t{stats.sentence_count}")
    print(f"avg_char_length\t{stats.avg_char_length:.6g}")
    print(f"vocab_size\t{stats.vocab_size}")
    print(f"word_count\t{stats.word_count}")
    return 0


def cmd_preprocess(args) -> int:
    corpus = _read_corpus(args.input, args.format)
    english = _load_english_stoplist(args.english_stoplist)
    stemmed = preprocess.clean_and_stem(corpus, english)
    if args.hindi_stoplist:
        with open(args.hindi_stoplist, encoding="utf-8") as f:
            hindi = preprocess.load_tf_stoplist(f)
    else:
        hindi = preprocess.build_tf_stoplist([stemmed], args.tf_size)
    cleaned = preprocess.apply_stoplist(stemmed, hindi)
    with open(args.out, "w", encoding="utf-8") as f:
        for tw in cleaned:
            line = f"{tw.id}\t{' '.join(tw.tokens)}"
            if tw.label is not None:
                line += f"\t{tw.label.label()}"
            f.write(line + "\n")
    if args.hindi_stoplist_out:
        with open(args.hindi_stoplist_out, "w", encoding="utf-8") as f:
            preprocess.save_stoplist(hindi, f)
    log.info("preprocessed %d tweets -> %s", len(cleaned), args.out)
    return 0


def _prepare_training_artifacts(args, out_dir: Path):
    """Shared by train and reproduce: build stop lists, vocabulary and the
    encoded splits; write the text artifacts and return everything."""
    train_corpus = _read_corpus(args.train_input, args.format)
    val_corpus = _read_corpus(args.val_input, args.format)
    test_corpus = _read_corpus(args.test_input, args.format) if getattr(args, "test_input", None) else None

    english = _load_english_stoplist(args.english_stoplist)
    stemmed_train = preprocess.clean_and_stem(train_corpus, english)
    stemmed_val = preprocess.clean_and_stem(val_corpus, english)
    stemmed_test = preprocess.clean_and_stem(test_corpus, english) if test_corpus else None

    if args.hindi_stoplist:
        with open(args.hindi_stoplist, encoding="utf-8") as f:
            hindi = preprocess.load_tf_stoplist(f)
    else:
        tf_sources = [stemmed_train, stemmed_val]
        if stemmed_test:
            tf_sources.append(stemmed_test)
        hindi = preprocess.build_tf_stoplist(tf_sources, args.tf_size)

    final_train = preprocess.apply_stoplist(stemmed_train, hindi)
    final_val = preprocess.apply_stoplist(stemmed_val, hindi)
    final_test = preprocess.apply_stoplist(stemmed_test, hindi) if stemmed_test else None

    vocab = vectorize.build_vocab(final_train, args.vocab_size)

    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / VOCAB_FILENAME, "w", encoding="utf-8") as f:
        vectorize.save_vocab(vocab, f)
    with open(out_dir / ENGLISH_STOPLIST_FILENAME, "w", encoding="utf-8") as f:
        preprocess.save_stoplist(english, f)
    with open(out_dir / HINDI_STOPLIST_FILENAME, "w", encoding="utf-8") as f:
        preprocess.save_stoplist(hindi, f)

    hashes = {
        "vocab": _sha256(out_dir / VOCAB_FILENAME),
        "english_stoplist": _sha256(out_dir / ENGLISH_STOPLIST_FILENAME),
        "hindi_stoplist": _sha256(out_dir / HINDI_STOPLIST_FILENAME),
    }
    enc_train = vectorize.encode_corpus(final_train, vocab, args.seq_len)
    enc_val = vectorize.encode_corpus(final_val, vocab, args.seq_len)
    enc_test = vectorize.encode_corpus(final_test, vocab, args.seq_len) if final_test else None
    return vocab, hashes, enc_train, enc_val, enc_test, test_corpus


def _train_one(arch: ArchId, config: ModelConfig, hyper: TrainHyper,
               enc_train, enc_val, out_path: Path, hashes, history_path: Path):
    model = models.build_model(arch, config, hyper.seed)
    log.info("training %s (seed %d, %d epochs)", arch.value, hyper.seed, hyper.epochs)
    model, history = training.train(model, enc_train, enc_val, hyper)
    with open(out_path, "wb") as f:
        training.save_model(model, f, artifact_hashes=hashes)
    with open(history_path, "w", encoding="utf-8") as f:
        training.save_history(history, f)
    log.info("%s: final loss %.4f, accuracy %.4f, val F1 %.4f", arch.value,
             history[-1].train_loss, history[-1].train_accuracy,
             history[-1].val_weighted_f1)
    return model


def cmd_train(args) -> int:
    out_dir = Path(args.out)
    vocab, hashes, enc_train, enc_val, _, _ = _prepare_training_artifacts(args, out_dir)
    config = ModelConfig(vocab_size=args.vocab_size, seq_len=args.seq_len)
    hyper = TrainHyper(epochs=args.epochs, batch_size=args.batch_size,
                       learning_rate=args.lr, seed=args.seed)
    _train_one(ArchId.from_string(args.arch), config, hyper, enc_train, enc_val,
               out_dir / MODEL_FILENAME, hashes, out_dir / HISTORY_FILENAME)
    return 0


def _load_model_and_artifacts(model_path: str, vocab_path: Optional[str],
                              english_path: Optional[str], hindi_path: Optional[str]):
    mp = Path(model_path)
    with open(mp, "rb") as f:
        model, hashes = training.load_model(f)
    paths = {
        "vocab": Path(vocab_path) if vocab_path else mp.parent / VOCAB_FILENAME,
        "english_stoplist": Path(english_path) if english_path else mp.parent / ENGLISH_STOPLIST_FILENAME,
        "hindi_stoplist": Path(hindi_path) if hindi_path else mp.parent / HINDI_STOPLIST_FILENAME,
    }
    for name, path in paths.items():
        if name in hashes and _sha256(path) != hashes[name]:
            raise CorpusError(
                f"{name} artifact {path} does not match the digest recorded "
                f"in the model file (trained with different artifacts?)")
    with open(paths["vocab"], encoding="utf-8") as f:
        vocab = vectorize.load_vocab(f)
    with open(paths["english_stoplist"], encoding="utf-8") as f:
        english = preprocess.load_english_stoplist(f)
    with open(paths["hindi_stoplist"], encoding="utf-8") as f:
        hindi = preprocess.load_tf_stoplist(f)
    return model, vocab, english, hindi


def cmd_predict(args) -> int:
    model, vocab, english, hindi = _load_model_and_artifacts(
        args.model, args.vocab, args.english_stoplist, args.hindi_stoplist)
    corpus = _read_corpus(args.input, args.format)
    cleaned = preprocess.apply_stoplist(preprocess.clean_and_stem(corpus, english), hindi)
    encoded = vectorize.encode_corpus(cleaned, vocab, model.config.seq_len)
    probs = training.predict_proba(model, encoded)
    with open(args.out, "w", encoding="utf-8") as f:
        for tw, row in zip(corpus, probs.rows):
            f.write(f"{tw.id}\t{row[0]:.17g}\t{row[1]:.17g}\t{row[2]:.17g}\n")
    log.info("wrote %d probability rows -> %s", len(probs), args.out)
    return 0


def _read_probs_file(path: str) -> tuple[list[str], np.ndarray]:
    ids, rows = [], []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 4:
                raise CorpusError(f"{path}:{lineno}: expected 'id p0 p1 p2'")
            ids.append(fields[0])
            rows.append([float(v) for v in fields[1:]])
    arr = np.array(rows).reshape(-1, 3)
    if arr.size:
        sums = arr.sum(axis=1)
        # printed rows are only good to ~1e-6; renormalize so the strict
        # in-memory distribution invariant holds
        if (arr < 0).any() or (np.abs(sums - 1.0) > 1e-3).any():
            raise CorpusError(f"{path}: rows are not probability distributions")
        arr /= sums[:, None]
        np.clip(arr, 1e-15, 1.0 - 1e-15, out=arr)
    return ids, arr


def cmd_ensemble(args) -> int:
    if bool(args.probs) == bool(args.models):
        raise UsageError("give either --probs files or --models files, not both")
    all_ids, matrices = None, []
    if args.probs:
        for path in args.probs:
            ids, rows = _read_probs_file(path)
            if all_ids is None:
                all_ids = ids
            elif ids != all_ids:
                raise CorpusError(f"{path}: ids or row count differ from {args.probs[0]}")
            matrices.append(ProbMatrix(rows=rows, model_tag=path))
    else:
        if not args.input:
            raise UsageError("--models needs --input to predict on")
        corpus = _read_corpus(args.input, args.format)
        all_ids = [tw.id for tw in corpus]
        for path in args.models:
            model, vocab, english, hindi = _load_model_and_artifacts(
                path, None, None, None)
            cleaned = preprocess.apply_stoplist(
                preprocess.clean_and_stem(corpus, english), hindi)
            encoded = vectorize.encode_corpus(cleaned, vocab, model.config.seq_len)
            matrices.append(training.predict_proba(model, encoded))
    labels = combine(matrices)
    with open(args.out, "w", encoding="utf-8") as f:
        write_predictions(all_ids, labels, f)
    log.info("combined %d models over %d rows -> %s", len(matrices), len(all_ids), args.out)
    return 0


def _read_label_file(path: str) -> dict[str, Sentiment]:
    out: dict[str, Sentiment] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise CorpusError(f"{path}:{lineno}: expected 'id<TAB>label'")
            out[fields[0]] = Sentiment.from_string(fields[1])
    return out


def cmd_evaluate(args) -> int:
    gold_corpus = _read_corpus(args.gold, args.format)
    gold = {}
    for tw in gold_corpus:
        if tw.label is None:
            raise CorpusError(f"gold corpus entry {tw.id!r} has no label")
        gold[tw.id] = tw.label
    pred = _read_label_file(args.pred)
    for uid in pred:
        if uid not in gold:
            raise CorpusError(f"prediction id {uid!r} not present in gold corpus")
    for uid in gold:
        if uid not in pred:
            raise CorpusError(f"gold id {uid!r} missing from predictions")
    ordered = sorted(gold)
    report = f1_report(confusion([gold[u] for u in ordered], [pred[u] for u in ordered]))
    print(format_report(report))
    if args.report_out:
        with open(args.report_out, "w", encoding="utf-8") as f:
            write_report_machine(report, f)
    return 0


def cmd_reproduce(args) -> int:
    out_dir = Path(args.out)
    vocab, hashes, enc_train, enc_val, enc_test, test_corpus = \
        _prepare_training_artifacts(args, out_dir)
    config = ModelConfig(vocab_size=args.vocab_size, seq_len=args.seq_len)

    prob_matrices = []
    for index, arch in enumerate(ArchId):
        hyper = TrainHyper(epochs=args.epochs, batch_size=args.batch_size,
                           learning_rate=args.lr, seed=args.seed + index)
        # flat layout keeps every model next to the shared artifacts, so
        # `ensemble --models` and `predict` work on the files as written
        model = _train_one(arch, config, hyper, enc_train, enc_val,
                           out_dir / f"{arch.value}.hgsm", hashes,
                           out_dir / f"{arch.value}_history.tsv")
        if enc_test:
            probs = training.predict_proba(model, enc_test)
            with open(out_dir / f"{arch.value}_probs.tsv", "w", encoding="utf-8") as f:
                for tw, row in zip(test_corpus, probs.rows):
                    f.write(f"{tw.id}\t{row[0]:.17g}\t{row[1]:.17g}\t{row[2]:.17g}\n")
            prob_matrices.append(probs)

    if not enc_test:
        log.info("no test corpus supplied; trained %d models", len(list(ArchId)))
        return 0

    labels = combine(prob_matrices)
    pred_path = out_dir / "predictions.tsv"
    with open(pred_path, "w", encoding="utf-8") as f:
        write_predictions([tw.id for tw in test_corpus], labels, f)
    log.info("ensemble predictions -> %s", pred_path)

    if all(tw.label is not None for tw in test_corpus):
        report = f1_report(confusion([tw.label for tw in test_corpus], labels))
        print(format_report(report))
        with open(out_dir / "metrics.tsv", "w", encoding="utf-8") as f:
            write_report_machine(report, f)
    else:
        log.info("test corpus unlabeled; skipping evaluation")
    return 0


# -------------------------------------------------------------------- wiring

def _add_format_flag(p):
    p.add_argument("--format", choices=["tsv", "conll"], default="tsv",
                   help="corpus file format")


def _add_pipeline_flags(p):
    p.add_argument("--english-stoplist", metavar="PATH",
                   help="override the bundled English stop-word list")
    p.add_argument("--hindi-stoplist", metavar="PATH",
                   help="reuse a saved TF-derived stop list instead of recounting")
    p.add_argument("--tf-size", type=int, default=preprocess.DEFAULT_TF_STOPLIST_SIZE,
                   help="size of the TF-derived stop list (default 1000)")


def _add_train_flags(p, default_epochs):
    p.add_argument("--input", dest="train_input", required=True, metavar="PATH",
                   help="labeled training corpus")
    p.add_argument("--val", dest="val_input", required=True, metavar="PATH",
                   help="labeled validation corpus")
    _add_format_flag(p)
    _add_pipeline_flags(p)
    p.add_argument("--epochs", type=int, default=default_epochs)
    p.add_argument("--batch-size", type=int, default=128)
    p.add_argument("--lr", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--vocab-size", type=int, default=vectorize.DEFAULT_VOCAB_SIZE)
    p.add_argument("--seq-len", type=int, default=vectorize.DEFAULT_SEQ_LEN)
    p.add_argument("--out", required=True, metavar="DIR",
                   help="directory for the model and its companion artifacts")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hingsent",
        description="Sentiment classification of code-mixed Hinglish tweets.")
    parser.add_argument("--quiet", action="store_true", help="suppress progress logs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="print corpus statistics")
    p.add_argument("--input", required=True, metavar="PATH")
    _add_format_flag(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("preprocess", help="run the cleaning pipeline, write tokens")
    p.add_argument("--input", required=True, metavar="PATH")
    _add_format_flag(p)
    _add_pipeline_flags(p)
    p.add_argument("--out", required=True, metavar="PATH")
    p.add_argument("--hindi-stoplist-out", metavar="PATH",
                   help="also export the TF-derived stop list")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("train", help="train one architecture")
    p.add_argument("--arch", required=True,
                   choices=[a.value for a in ArchId])
    _add_train_flags(p, default_epochs=200)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="write per-example probability rows")
    p.add_argument("--model", required=True, metavar="PATH")
    p.add_argument("--input", required=True, metavar="PATH")
    _add_format_flag(p)
    p.add_argument("--vocab", metavar="PATH",
                   help="vocabulary export (default: next to the model file)")
    p.add_argument("--english-stoplist", metavar="PATH")
    p.add_argument("--hindi-stoplist", metavar="PATH")
    p.add_argument("--out", required=True, metavar="PATH")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("ensemble", help="combine probability files into predictions")
    p.add_argument("--probs", nargs="+", metavar="PATH",
                   help="probability files from `predict`")
    p.add_argument("--models", nargs="+", metavar="PATH",
                   help="model files to predict with first (needs --input)")
    p.add_argument("--input", metavar="PATH",
                   help="corpus to predict on when --models is used")
    _add_format_flag(p)
    p.add_argument("--out", required=True, metavar="PATH")
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("evaluate", help="score predictions against gold labels")
    p.add_argument("--gold", required=True, metavar="PATH")
    _add_format_flag(p)
    p.add_argument("--pred", required=True, metavar="PATH")
    p.add_argument("--report-out", metavar="PATH",
                   help="also write a machine-readable metric/class/value block")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("reproduce",
                       help="four 5-epoch trainings + ensemble + evaluation from one seed")
    p.add_argument("--test", dest="test_input", metavar="PATH",
                   help="test corpus to predict on and (when labeled) score")
    _add_train_flags(p, default_epochs=5)
    p.set_defaults(func=cmd_reproduce)
    return parser


def _setup_logging(quiet: bool) -> None:
    level_name = os.environ.get("HINGSENT_LOG", "info" if not quiet else "warning")
    level = getattr(logging, level_name.upper(), logging.INFO)
    if quiet:
        level = max(level, logging.WARNING)
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _setup_logging(args.quiet)
    try:
        return args.func(args)
    except FileNotFoundError as err:
        print(f"hingsent: cannot open {err.filename}", file=sys.stderr)
        return 2
    except UsageError as err:
        print(f"hingsent: {err}", file=sys.stderr)
        return 2
    except (CorpusError, ModelFormatError, ValueError, RuntimeError) as err:
        print(f"hingsent: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
