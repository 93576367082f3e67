"""Resume parsing, LDA topic modelling and corpus-standardized rating."""

from .corpus import RawDocument, TokenizedDocument, Vocabulary, build_vocabulary, to_bow, tokenize
from .entities import DateRange, Gazetteer, Gazetteers, MalformedRangeError, ParsedResume, parse_resume
from .evaluation import EvalReport, GoldAnnotation, evaluate_corpus, evaluate_entity, render_report
from .lda import KeywordList, LdaConfig, LdaModel, infer_unseen, top_keywords, train
from .scorer import CorpusStats, DomainProfile, ScoreBreakdown, corpus_stats, rate_resume, rating

__version__ = "0.1.0"
