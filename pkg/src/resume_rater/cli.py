"""Command-line entry point: train, parse, topics, stats, rate, eval."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus, entities, evaluation, lda, scorer

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits 2 by default
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _reference_date(value: str) -> tuple[int, int]:
    try:
        year, month = value.split("-")
        ym = (int(year), int(month))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected YYYY-MM, got {value!r}") from None
    if not 1 <= ym[1] <= 12:
        raise argparse.ArgumentTypeError(f"month out of range in {value!r}")
    return ym


def _positive_int(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def _stopwords(args) -> frozenset[str]:
    if args.stopwords:
        return corpus.load_wordlist(_existing(args.stopwords))
    return corpus.default_stopwords()


def _gazetteers(args) -> entities.Gazetteers:
    if args.gazetteers:
        return entities.Gazetteers.from_dir(_existing(args.gazetteers))
    return entities.Gazetteers.default()


def _existing(path: str) -> Path:
    p = Path(path)
    if not p.exists():
        raise UsageError(f"path does not exist: {p}")
    return p


def _load_corpus(directory: str) -> list[corpus.RawDocument]:
    docs = corpus.read_corpus(_existing(directory))
    if not docs:
        raise DataError(f"no .txt documents in corpus directory {directory}")
    return docs


# -- commands ----------------------------------------------------------------


def cmd_train(args) -> int:
    docs = _load_corpus(args.corpus)
    stop = _stopwords(args)
    token_lists = [corpus.tokenize(d.text, stop) for d in docs]
    vocab = corpus.build_vocabulary(token_lists, args.min_count)
    bows = [corpus.to_bow(t, vocab) for t in token_lists]
    config = lda.LdaConfig(K=args.K, alpha=args.alpha, eta=args.eta, iterations=args.iters, seed=args.seed)
    model = lda.train(bows, config, vocab, [d.id for d in docs])
    model.save(args.model)
    _emit({"model": str(args.model), "K": config.K, "V": len(vocab), "D": len(docs), "iterations": config.iterations})
    return EXIT_OK


def _corpus_scores(args, model, profile, stop):
    """Final scores for every corpus document, keyed by doc id."""
    scores = {}
    for doc in _load_corpus(args.corpus):
        tokens = corpus.tokenize(doc.text, stop)
        idx = model.doc_ids.index(doc.id) if doc.id in model.doc_ids else None
        km, wm, _ = scorer.score_document(model, tokens, profile, args.n, idx, args.seed)
        scores[doc.id] = scorer.final_score(km, wm)
    return scores


def _resolve_stats(args, model, profile, stop) -> scorer.CorpusStats:
    if args.stats:
        return scorer.CorpusStats.load(_existing(args.stats))
    if not args.corpus:
        raise UsageError("rating needs --stats or --corpus to standardize scores")
    return scorer.corpus_stats(list(_corpus_scores(args, model, profile, stop).values()))


def _rate_one(args, raw, parsed, model, profile, stats, stop) -> scorer.ScoreBreakdown:
    tokens = corpus.tokenize(raw.text, stop)
    idx = model.doc_ids.index(raw.id) if raw.id in model.doc_ids else None
    return scorer.rate_resume(
        parsed, model, tokens, profile, stats, args.n, idx, args.seed, args.allow_zero_sd
    )


def _rating_inputs(args):
    if not (args.model and args.profile):
        raise UsageError("rating needs --model and --profile")
    model = lda.LdaModel.load(_existing(args.model))
    profile = scorer.DomainProfile.load(_existing(args.profile))
    stop = _stopwords(args)
    return model, profile, stop, _resolve_stats(args, model, profile, stop)


def cmd_parse(args) -> int:
    path = _existing(args.file)
    raw = corpus.RawDocument(path.stem, path.name, path.read_text(encoding="utf-8"))
    parsed = entities.parse_resume(raw, _gazetteers(args), args.reference_date)
    out = parsed.to_dict()
    if args.rate:
        model, profile, stop, stats = _rating_inputs(args)
        breakdown = _rate_one(args, raw, parsed, model, profile, stats, stop)
        out = parsed.to_dict()
        if args.explain:
            out["breakdown"] = breakdown.to_dict()
    _emit(out)
    return EXIT_OK


def cmd_rate(args) -> int:
    model, profile, stop, stats = _rating_inputs(args)
    gaz = _gazetteers(args)
    results = []
    for raw in _load_corpus(args.corpus):
        parsed = entities.parse_resume(raw, gaz, args.reference_date)
        breakdown = _rate_one(args, raw, parsed, model, profile, stats, stop)
        item = {"doc_id": raw.id, **parsed.to_dict()}
        if args.explain:
            item["breakdown"] = breakdown.to_dict()
        results.append(item)
    _emit(results)
    return EXIT_OK


def cmd_stats(args) -> int:
    if not (args.model and args.profile):
        raise UsageError("stats needs --model and --profile")
    model = lda.LdaModel.load(_existing(args.model))
    profile = scorer.DomainProfile.load(_existing(args.profile))
    stats = scorer.corpus_stats(list(_corpus_scores(args, model, profile, _stopwords(args)).values()))
    text = json.dumps(stats.to_dict(), indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return EXIT_OK


def cmd_topics(args) -> int:
    model = lda.LdaModel.load(_existing(args.model))
    try:
        d = model.doc_index(args.doc_id)
    except KeyError as exc:
        raise DataError(str(exc.args[0])) from None
    theta = lda.doc_topics(model, d)
    keywords = lda.top_keywords(model, d, args.n)
    blocks = []
    for k in sorted(range(model.num_topics), key=lambda k: (-theta[k], k))[: args.topics]:
        block = {term: f"{p:.8g}" for term, p in lda.top_topic_terms(model, k, args.n)}
        block["topic_score"] = f"{theta[k]:.8g}"
        block["topic"] = str(k)
        blocks.append(block)
    _emit({
        "doc_id": args.doc_id,
        "doc_topics": {str(k): float(p) for k, p in enumerate(theta)},
        "keywords": {term: f"{p:.8g}" for term, p in keywords.entries},
        "topics": blocks,
    })
    return EXIT_OK


def cmd_eval(args) -> int:
    golds = evaluation.load_gold(_existing(args.gold))
    pred_dir = _existing(args.predictions)
    predictions = {
        p.stem: entities.ParsedResume.from_dict(json.loads(p.read_text(encoding="utf-8")))
        for p in sorted(pred_dir.glob("*.json"))
    }
    try:
        report = evaluation.evaluate_corpus(predictions, golds, _gazetteers(args))
    except evaluation.AlignmentError as exc:
        raise DataError(f"id mismatch: {exc}") from None
    sys.stdout.write(evaluation.render_report(report, summary=True))
    if args.report:
        Path(args.report).write_text(json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


# -- wiring ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="resume-rater", description="Parse, topic-model and rate plain-text resumes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def text_opts(p):
        p.add_argument("--stopwords", help="stopword file (one word per line)")

    def gaz_opts(p):
        p.add_argument("--gazetteers", help="directory with skills/cities/colleges/degrees .txt files")
        p.add_argument("--reference-date", type=_reference_date, default=entities.DEFAULT_REFERENCE_DATE,
                       metavar="YYYY-MM", help="date that 'Present' resolves to")

    def rate_opts(p):
        p.add_argument("--model")
        p.add_argument("--profile")
        p.add_argument("--stats")
        p.add_argument("--corpus", help="reference corpus for on-demand stats")
        p.add_argument("-n", type=_positive_int, default=30, help="LDA keywords per document")
        p.add_argument("--seed", type=int, default=0, help="seed for unseen-document inference")
        p.add_argument("--explain", action="store_true")
        p.add_argument("--allow-zero-sd", action="store_true", help="rate 5 when corpus sd is zero")
        text_opts(p)

    p = sub.add_parser("train", help="train an LDA model on a corpus directory")
    p.add_argument("--corpus", required=True)
    p.add_argument("--model", required=True, help="output model JSON")
    p.add_argument("-K", type=_positive_int, required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--eta", type=float, default=0.01)
    p.add_argument("--iters", type=_positive_int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-count", type=_positive_int, default=1)
    text_opts(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("parse", help="extract entities from one resume")
    p.add_argument("file")
    p.add_argument("--rate", action="store_true", help="also compute the rating")
    gaz_opts(p)
    rate_opts(p)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("rate", help="parse and rate every resume in a corpus")
    gaz_opts(p)
    rate_opts(p)
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("stats", help="compute corpus score statistics for a profile")
    rate_opts(p)
    p.add_argument("--output", help="also write the stats JSON here")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("topics", help="show a document's topics and keywords")
    p.add_argument("--model", required=True)
    p.add_argument("--doc-id", required=True)
    p.add_argument("-n", type=_positive_int, default=30)
    p.add_argument("--topics", type=_positive_int, default=4, help="number of topic blocks")
    p.set_defaults(func=cmd_topics)

    p = sub.add_parser("eval", help="score extracted entities against gold annotations")
    p.add_argument("--predictions", required=True, help="directory of parsed-resume JSON files")
    p.add_argument("--gold", required=True)
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--gazetteers")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("rate", "stats") and not args.corpus:
        parser.error(f"{args.command} requires --corpus")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
