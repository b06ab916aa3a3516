"""Sentiment classification of code-mixed Hinglish tweets.

Pipeline: corpus parsing, six-step text cleaning (handles, URLs,
punctuation, English stop words, Porter2 stemming, TF-derived
high-frequency list), frequency-ranked vectorization, four small neural
classifiers trained from scratch with hand-derived gradients, and a
per-class-max ensemble over their probability outputs.
"""

from .corpus import CorpusStats, RawTweet, Sentiment, corpus_stats, parse_conll, parse_tsv
from .ensemble import combine
from .metrics import MetricsReport, confusion, f1_report
from .models import ArchId, Model, ModelConfig, build_model, forward
from .preprocess import TokenizedTweet, run_pipeline
from .stemmer import stem
from .training import ProbMatrix, TrainHyper, load_model, predict_proba, save_model, train
from .vectorize import IdSequence, Vocabulary, build_vocab, encode

__version__ = "0.1.0"
