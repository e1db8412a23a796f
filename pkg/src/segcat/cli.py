"""Command-line tooling over the engine, morphology, lexicon, and memories.

Exit codes: 0 success, 1 resource or validation failure, 2 I/O failure.
Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import engine, features, lexicon as lexicon_mod
from . import memory as memory_mod
from . import morphology, transforms
from .resources import ResourceError, default_pack_path, load_pack

EXIT_OK = 0
EXIT_RESOURCE = 1
EXIT_IO = 2


def _err(message):
    print(message, file=sys.stderr)


def _load_pack_or_die(directory):
    try:
        return load_pack(directory)
    except ResourceError as exc:
        _err("resource error: %s" % exc)
        raise SystemExit(EXIT_RESOURCE)


def _read_text_or_die(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        _err("cannot read %s: %s" % (path, exc))
        raise SystemExit(EXIT_IO)


# ---------------------------------------------------------------------------
# translate


def cmd_translate(args):
    text = _read_text_or_die(args.file)
    pack = _load_pack_or_die(args.resources)
    translations = engine.translate_document(text, pack)
    if args.first_option:
        doc = memory_mod.assemble_document(
            [t.first_option_text() for t in translations]
        )
        sys.stdout.write(doc + "\n" if doc else "")
    else:
        for n, translation in enumerate(translations):
            print("%d. %s" % (n + 1, translation.source))
            for seg in translation.segments:
                if seg.kind == "gray":
                    print("   [gray] %s" % seg.text)
                else:
                    print("   [%s] %s" % (seg.segment_id, seg.text))
                    for k, option in enumerate(seg.options):
                        print("      %d) %s" % (k, option))
    if args.tmx:
        tm = memory_mod.TranslationMemory(
            name="translate",
            source_lang=pack.source_lang,
            target_lang=pack.target_lang,
        )
        for translation in translations:
            if translation.segments and translation.fully_translated():
                tm.record(
                    translation.source,
                    memory_mod.capitalize_sentence(translation.first_option_text()),
                )
        try:
            memory_mod.export_tmx(tm, args.tmx)
        except OSError as exc:
            _err("cannot write %s: %s" % (args.tmx, exc))
            raise SystemExit(EXIT_IO)
        _err("wrote %d units to %s" % (len(tm), args.tmx))
    return EXIT_OK


# ---------------------------------------------------------------------------
# morph


def _find_cascade(pack, name):
    for group in (pack.src_morph, pack.tgt_morph):
        if name in group:
            return group[name]
    _err(
        "no cascade %r in pack (have: %s)"
        % (name, ", ".join(sorted(set(pack.src_morph) | set(pack.tgt_morph))))
    )
    raise SystemExit(EXIT_RESOURCE)


def cmd_morph_analyze(args):
    pack = _load_pack_or_die(args.resources)
    transducer = _find_cascade(pack, args.cascade)
    analyses = sorted(
        morphology.analyze(args.word.lower(), transducer),
        key=morphology.Analysis.sort_key,
    )
    for analysis in analyses:
        print(
            "%s_%s %s"
            % (analysis.root, analysis.pos, features.serialize(analysis.features))
        )
    return EXIT_OK


def cmd_morph_generate(args):
    pack = _load_pack_or_die(args.resources)
    transducer = _find_cascade(pack, args.cascade)
    try:
        fs = features.parse(args.features)
    except features.FeatureError as exc:
        _err("bad feature structure: %s" % exc)
        return EXIT_RESOURCE
    try:
        surfaces = morphology.generate(args.root, transducer.pos, fs, transducer)
    except morphology.MissingFeatureError as exc:
        _err(str(exc))
        return EXIT_RESOURCE
    for surface in sorted(surfaces):
        if args.raw:
            print(surface)
        else:
            print(morphology.realize_triforms(surface, pack.triforms))
    return EXIT_OK


def cmd_morph_compile(args):
    try:
        transducers = morphology.load_cascades(args.file, cache=True)
    except FileNotFoundError as exc:
        _err("cannot read %s" % exc.filename)
        return EXIT_IO
    except morphology.MorphError as exc:
        _err("compile error: %s" % exc)
        return EXIT_RESOURCE
    for name, t in transducers.items():
        print(
            "%s: pos=%s direction=%s states=%d arcs=%d"
            % (name, t.pos, t.direction, t.n_states, len(t.arcs))
        )
    _err("cache written to %s.bin" % args.file)
    return EXIT_OK


# ---------------------------------------------------------------------------
# lint


def _inventories(resources):
    if not resources:
        return None, None
    pack = _load_pack_or_die(resources)
    return pack.pos_inventory, pack.feature_inventory or None


def cmd_lexicon_lint(args):
    pos_inventory, feature_inventory = _inventories(args.resources)
    try:
        segments, errors, warnings = lexicon_mod.lint_lexicon(
            args.file, pos_inventory, feature_inventory
        )
    except OSError as exc:
        _err("cannot read %s: %s" % (args.file, exc))
        return EXIT_IO
    for warning in warnings:
        print("warning: %s" % warning)
    for error in errors:
        print("error: %s" % error)
    print("%d entries, %d errors, %d warnings" % (len(segments), len(errors), len(warnings)))
    return EXIT_RESOURCE if errors else EXIT_OK


def cmd_rules_lint(args):
    pos_inventory, _ = _inventories(args.resources)
    try:
        rules, errors = transforms.lint_rules(args.file, pos_inventory)
    except OSError as exc:
        _err("cannot read %s: %s" % (args.file, exc))
        return EXIT_IO
    for error in errors:
        print("error: %s" % error)
    print("%d rules, %d errors" % (len(rules), len(errors)))
    return EXIT_RESOURCE if errors else EXIT_OK


# ---------------------------------------------------------------------------
# tm


def cmd_tm_export(args):
    tm = memory_mod.TranslationMemory.load_journal(args.journal)
    try:
        memory_mod.export_tmx(tm, args.out)
    except OSError as exc:
        _err("cannot write %s: %s" % (args.out, exc))
        return EXIT_IO
    _err("exported %d units" % len(tm))
    return EXIT_OK


def cmd_tm_import(args):
    try:
        imported = memory_mod.import_tmx(args.tmx)
    except FileNotFoundError as exc:
        _err("cannot read %s" % exc.filename)
        return EXIT_IO
    except memory_mod.TmxError as exc:
        _err(str(exc))
        return EXIT_RESOURCE
    tm = memory_mod.TranslationMemory.load_journal(
        args.journal,
        source_lang=imported.source_lang,
        target_lang=imported.target_lang,
    )
    for unit in imported.units:
        tm.record(unit.source_seg, unit.target_seg, origin=unit.origin)
    _err(
        "imported %d units into %s (%d skipped)"
        % (len(imported), args.journal, imported.import_skipped)
    )
    return EXIT_OK


def cmd_tm_match(args):
    tm = memory_mod.TranslationMemory.load_journal(args.journal)
    matches = memory_mod.fuzzy_match(
        tm, args.sentence, threshold=args.threshold, k=args.k
    )
    for m in matches:
        print("%.4f\t%s\t%s" % (m.score, m.unit.source_seg, m.unit.target_seg))
    return EXIT_OK


# ---------------------------------------------------------------------------
# serve


def cmd_serve(args):
    import uvicorn

    from .server import create_app

    pack = _load_pack_or_die(args.resources)
    app = create_app(
        pack,
        memory_path=args.memory,
        session_journal=args.sessions,
        max_text=args.max_text,
        ui_dir=args.ui,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="segcat",
        description="Segment-based computer-assisted translation workbench.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_resources(p):
        p.add_argument(
            "--resources",
            default=str(default_pack_path()),
            help="resource pack directory (default: built-in es-gn pack)",
        )

    p = sub.add_parser("translate", help="translate a document file")
    p.add_argument("file")
    add_resources(p)
    p.add_argument(
        "--first-option",
        action="store_true",
        help="emit a plain target document taking option 0 everywhere",
    )
    p.add_argument("--tmx", help="write fully-translated sentences to a TMX file")
    p.set_defaults(func=cmd_translate)

    morph = sub.add_parser("morph", help="exercise the morphology").add_subparsers(
        dest="subcommand", required=True
    )
    p = morph.add_parser("analyze", help="analyze one word")
    p.add_argument("cascade")
    p.add_argument("word")
    add_resources(p)
    p.set_defaults(func=cmd_morph_analyze)
    p = morph.add_parser("generate", help="generate surface forms")
    p.add_argument("cascade")
    p.add_argument("root")
    p.add_argument("features", help="feature structure, e.g. '[persona=1, número=pl]'")
    p.add_argument("--raw", action="store_true", help="keep abstract triform symbols")
    add_resources(p)
    p.set_defaults(func=cmd_morph_generate)
    p = morph.add_parser("compile", help="compile a cascade file (writes cache)")
    p.add_argument("file")
    p.set_defaults(func=cmd_morph_compile)

    lexp = sub.add_parser("lexicon", help="lexicon tooling").add_subparsers(
        dest="subcommand", required=True
    )
    p = lexp.add_parser("lint", help="report every problem in a lexicon file")
    p.add_argument("file")
    p.add_argument("--resources", default=None, help="pack for pos/feature inventories")
    p.set_defaults(func=cmd_lexicon_lint)

    rulesp = sub.add_parser("rules", help="transform-rule tooling").add_subparsers(
        dest="subcommand", required=True
    )
    p = rulesp.add_parser("lint", help="report every problem in a rule file")
    p.add_argument("file")
    p.add_argument("--resources", default=None, help="pack for the pos inventory")
    p.set_defaults(func=cmd_rules_lint)

    tmp = sub.add_parser("tm", help="translation-memory tooling").add_subparsers(
        dest="subcommand", required=True
    )
    p = tmp.add_parser("export", help="journal to TMX")
    p.add_argument("journal")
    p.add_argument("out")
    p.set_defaults(func=cmd_tm_export)
    p = tmp.add_parser("import", help="TMX into a journal")
    p.add_argument("tmx")
    p.add_argument("journal")
    p.set_defaults(func=cmd_tm_import)
    p = tmp.add_parser("match", help="fuzzy-match a sentence against a journal")
    p.add_argument("journal")
    p.add_argument("sentence")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--threshold", type=float, default=0.0)
    p.set_defaults(func=cmd_tm_match)

    # flags win over SEGCAT_* environment variables, which win over defaults
    env = os.environ
    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument(
        "--resources",
        default=env.get("SEGCAT_RESOURCES", str(default_pack_path())),
        help="resource pack directory (default: built-in es-gn pack)",
    )
    p.add_argument("--host", default=env.get("SEGCAT_HOST", "127.0.0.1"))
    p.add_argument("--port", type=int, default=int(env.get("SEGCAT_PORT", "8000")))
    p.add_argument(
        "--memory",
        default=env.get("SEGCAT_MEMORY", "segcat-memory.tmj"),
        help="memory journal path",
    )
    p.add_argument(
        "--sessions",
        default=env.get("SEGCAT_SESSIONS", "segcat-sessions.jsonl"),
        help="session journal path",
    )
    p.add_argument(
        "--max-text", type=int, default=int(env.get("SEGCAT_MAX_TEXT", str(100 * 1024)))
    )
    p.add_argument(
        "--ui",
        default=env.get("SEGCAT_UI"),
        help="directory with the built web UI",
    )
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except memory_mod.MemoryError_ as exc:
        _err(str(exc))
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
