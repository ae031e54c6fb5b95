"""Command-line entry point.

Subcommands: dict-build, dict-stats, train, tag, eval, selftrain, serve,
bench. Data goes to stdout, logs to stderr; "-" means stdin/stdout. Usage
errors exit 2, data errors exit 1.
"""

import argparse
import json
import logging
import sys
import time

from . import _kernels
from .conllu import (
    load_abbreviations,
    read_conllu,
    tokenize,
    write_conllu,
)
from .errors import DictagError
from .evaluation import build_report
from .morphdict import MorphDict, load_binary, load_dictionary, save_binary
from .pipeline import annotate, self_train
from .rescore import candidate_table, rescore_sentence
from .service import MorphService, ServiceConfig
from .tagger import load_model, predict, save_model, train

_DICT_MAGIC = b"DTDC"


def _load_dict(path, order):
    with open(path, "rb") as fh:
        magic = fh.read(4)
    if magic == _DICT_MAGIC:
        return load_binary(path)
    return load_dictionary(path, column_order=order)


def _read_sentences(path):
    if path == "-":
        return read_conllu(sys.stdin)
    return read_conllu(path)


def _write_text(text, path):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _read_text(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _cmd_dict_build(args):
    mdict = load_dictionary(args.input, column_order=args.order)
    save_binary(mdict, args.output)
    print(
        f"wrote {args.output}: {mdict.n_forms} forms, "
        f"{mdict.n_analyses} analyses, {mdict.n_lemmas} lemmas",
        file=sys.stderr,
    )
    return 0


def _cmd_dict_stats(args):
    mdict = _load_dict(args.dict, args.order)
    histogram = {}
    for form in mdict.forms():
        amb = mdict.ambiguity(form)
        label = "9+" if amb >= 9 else str(amb)
        histogram[label] = histogram.get(label, 0) + 1
    print(f"source: {mdict.source}")
    print(f"forms: {mdict.n_forms}")
    print(f"analyses: {mdict.n_analyses}")
    print(f"lemmas: {mdict.n_lemmas}")
    print("ambiguity histogram (forms per analysis count):")
    for label in sorted(histogram, key=lambda x: (x == "9+", x)):
        print(f"  {label}: {histogram[label]}")
    return 0


def _cmd_train(args):
    corpus = _read_sentences(args.input)
    model = train(corpus, epochs=args.epochs, seed=args.seed,
                  temperature=args.temperature)
    save_model(model, args.output)
    print(
        f"trained on {len(corpus)} sentences: {len(model.tags)} tags, "
        f"{len(model.rules)} rules, {len(model.feature_index)} features",
        file=sys.stderr,
    )
    return 0


def _annotate_debug(model, mdict, sentences):
    """Annotate while streaming per-token candidate tables to stderr."""
    mdict = mdict if mdict is not None else MorphDict({}, source="empty")
    out = []
    for sent in sentences:
        forms = sent.forms()
        dists = predict(model, sent)
        choices = rescore_sentence(mdict, forms, dists)
        for form, dist in zip(forms, dists):
            for row in candidate_table(mdict, form, dist):
                print(json.dumps(row, ensure_ascii=False), file=sys.stderr)
        tokens = tuple(
            tok.with_annotation(c.lemma, c.tag)
            for tok, c in zip(sent.tokens, choices)
        )
        out.append(type(sent)(tokens, sent.comments, sent.extra_lines))
    return out


def _cmd_tag(args):
    model = load_model(args.model)
    mdict = _load_dict(args.dict, args.dict_order) if args.dict else None
    if args.input_format == "text":
        abbrevs = load_abbreviations(args.abbrev) if args.abbrev else None
        sentences = tokenize(_read_text(args.input), abbreviations=abbrevs)
    else:
        sentences = _read_sentences(args.input)
    if args.debug:
        annotated = _annotate_debug(model, mdict, sentences)
    else:
        annotated = annotate(model, sentences, mdict=mdict, threads=args.threads)
    _write_text(write_conllu(annotated), args.output)
    return 0


def _cmd_eval(args):
    gold = {"all": _read_sentences(args.gold)}
    system = {"all": _read_sentences(args.system)}
    baselines = {}
    for spec in args.baseline or ():
        name, _, path = spec.partition("=")
        if not path:
            raise DictagError(f"--baseline needs NAME=PATH, got {spec!r}")
        baselines[name] = {"all": _read_sentences(path)}
    mdict = _load_dict(args.dict, args.dict_order) if args.dict else None
    report = build_report(gold, system, mdict=mdict, baselines=baselines)
    if args.json:
        _write_text(json.dumps(report.to_dict(), ensure_ascii=False, indent=2) + "\n",
                    args.json)
    print(report.render())
    return 0


def _cmd_selftrain(args):
    gold = _read_sentences(args.gold)
    raw = _read_sentences(args.raw)
    mdict = _load_dict(args.dict, args.dict_order) if args.dict else None
    result = self_train(gold, raw, epochs=args.epochs, seed=args.seed,
                        mdict=mdict, threads=args.threads)
    save_model(result.model, args.output)
    prov_path = args.output + ".provenance.json"
    with open(prov_path, "w", encoding="utf-8") as fh:
        json.dump(result.provenance, fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    print(f"wrote {args.output} and {prov_path}", file=sys.stderr)
    return 0


def _cmd_serve(args):
    logging.basicConfig(level=logging.INFO, stream=sys.stderr,
                        format="%(message)s")
    model = load_model(args.model)
    mdict = _load_dict(args.dict, args.dict_order) if args.dict else None
    config = ServiceConfig(
        model=model,
        model_name=args.model_name,
        mdict=mdict,
        size_limit=args.size_limit,
        workers=args.workers,
    )
    service = MorphService(config, host=args.host, port=args.port)
    print(f"listening on http://{service.host}:{service.port}", file=sys.stderr)
    try:
        service.serve_forever()
    except KeyboardInterrupt:
        service.shutdown()
    return 0


def _cmd_bench(args):
    model = load_model(args.model)
    mdict = _load_dict(args.dict, args.dict_order) if args.dict else None
    corpus = _read_sentences(args.input)
    words = sum(len(s.tokens) for s in corpus)
    if words == 0:
        raise DictagError("benchmark corpus is empty")
    if args.backends == "all":
        backends = _kernels.available_backends()
    elif args.backends == "auto":
        backends = [_kernels.BACKEND]
    else:
        backends = [args.backends]
    modes = [("off", None)] + ([("on", mdict)] if mdict is not None else [])
    for name in backends:
        with _kernels.backend(name):
            for label, d in modes:
                annotate(model, corpus[: min(3, len(corpus))], mdict=d)  # warm-up
                start = time.perf_counter()
                for _ in range(args.repeat):
                    annotate(model, corpus, mdict=d, threads=args.threads)
                elapsed = time.perf_counter() - start
                rate = words * args.repeat / elapsed
                print(
                    f"backend={name} dictionary={label} words={words} "
                    f"repeat={args.repeat} seconds={elapsed:.3f} "
                    f"words_per_second={rate:.1f}"
                )
    return 0


def _add_dict_args(parser, required=False):
    parser.add_argument("--dict", required=required,
                        help="dictionary file (TSV or binary cache)")
    parser.add_argument("--dict-order", default="form-lemma-tag",
                        choices=("form-lemma-tag", "lemma-tag-form"),
                        help="column order of a TSV dictionary")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dictag",
        description="Morphosyntactic tagging and lemmatization with "
                    "dictionary-constrained rescoring.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dict-build", help="compile a TSV dictionary to binary")
    p.add_argument("--input", required=True)
    p.add_argument("--order", default="form-lemma-tag",
                   choices=("form-lemma-tag", "lemma-tag-form"))
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_dict_build)

    p = sub.add_parser("dict-stats", help="entry counts and ambiguity histogram")
    p.add_argument("--dict", required=True)
    p.add_argument("--order", default="form-lemma-tag",
                   choices=("form-lemma-tag", "lemma-tag-form"))
    p.set_defaults(func=_cmd_dict_stats)

    p = sub.add_parser("train", help="train the tagger on gold CoNLL-U")
    p.add_argument("--input", required=True, help="gold CoNLL-U ('-' = stdin)")
    p.add_argument("--output", required=True, help="model file to write")
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--temperature", type=float, default=1.0)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("tag", help="annotate text or CoNLL-U")
    p.add_argument("--model", required=True)
    _add_dict_args(p)
    p.add_argument("--input", default="-", help="input file ('-' = stdin)")
    p.add_argument("--input-format", default="conllu", choices=("conllu", "text"))
    p.add_argument("--output", default="-", help="output file ('-' = stdout)")
    p.add_argument("--abbrev", help="abbreviation list for the tokenizer")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--debug", action="store_true",
                   help="emit candidate tables as JSON lines on stderr")
    p.set_defaults(func=_cmd_tag)

    p = sub.add_parser("eval", help="score system output against gold")
    p.add_argument("--gold", required=True)
    p.add_argument("--system", required=True)
    _add_dict_args(p)
    p.add_argument("--baseline", action="append", metavar="NAME=PATH",
                   help="another system output to compute error reduction against")
    p.add_argument("--json", help="also write the report as JSON to this path")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("selftrain", help="two-stage self-training")
    p.add_argument("--gold", required=True)
    p.add_argument("--raw", required=True)
    p.add_argument("--output", required=True)
    _add_dict_args(p)
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_cmd_selftrain)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--model", required=True)
    _add_dict_args(p)
    p.add_argument("--model-name", default="default")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--size-limit", type=int, default=1 << 20)
    p.add_argument("--workers", type=int, default=8)
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("bench", help="tagging throughput benchmark")
    p.add_argument("--model", required=True)
    _add_dict_args(p)
    p.add_argument("--input", required=True, help="CoNLL-U corpus to tag")
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--backends", default="all",
                   choices=("auto", "all", "pure", "cython"))
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DictagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
