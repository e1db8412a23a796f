"""The translation pipeline: from raw text to per-segment options.

A sentence runs through seven steps: tokenize and analyze every token,
apply the morphosyntactic transforms, match generalized segments, select a
non-overlapping covering set, copy agreement features, order target items
per the target pattern (variables are translated recursively and inlined),
and generate target word forms with triform realization.  Spans the lexicon
cannot cover come back as gray pass-through segments for the human
translator.

Everything here is pure: for a fixed resource pack the same sentence always
produces the same translation, and sentences of a document may be translated
concurrently.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Optional

from . import lexicon as lexicon_mod
from . import features, morphology
from .resources import ResourcePack
from .transforms import AnalyzedToken, apply_transforms

logger = logging.getLogger(__name__)

# A variable bound to a token whose own translation needs another variable
# can recurse; segments are word-scale so a shallow cap is plenty.
MAX_VAR_DEPTH = 5

# ---------------------------------------------------------------------------
# Sentence splitting and tokenization

_ABBREVIATIONS = {
    "sr.", "sra.", "srta.", "dr.", "dra.", "prof.", "ud.", "uds.",
    "etc.", "pág.", "núm.", "art.",
}

_TOKEN_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)


def split_sentences(text):
    """Split text on sentence-final punctuation followed by whitespace.

    Opening inverted marks attach to the following sentence; a short
    abbreviation stoplist keeps ``Dr. Gómez`` together.
    """
    sentences = []
    current = ""
    for i, ch in enumerate(text):
        current += ch
        if ch in ".!?":
            nxt = i + 1
            if nxt >= len(text) or text[nxt].isspace():
                words = current.strip().split()
                last_word = words[-1].casefold() if words else ""
                if not (ch == "." and last_word in _ABBREVIATIONS):
                    sentence = current.strip()
                    if sentence:
                        sentences.append(sentence)
                    current = ""
    tail = current.strip()
    if tail:
        sentences.append(tail)
    return sentences


@dataclass(frozen=True)
class Token:
    text: str  # lowercased
    span: tuple  # (start, end) in the original sentence


_CONTRACTIONS = {"del": ("de", "el"), "al": ("a", "el")}


def tokenize(sentence):
    """Lowercased word and punctuation tokens with original char spans.

    The contractions del/al expand to two tokens that both keep the
    contraction's character span, so transform and lexicon patterns see
    uniform ``de el`` / ``a el`` sequences.
    """
    tokens = []
    for m in _TOKEN_RE.finditer(sentence):
        text = m.group().lower()
        span = (m.start(), m.end())
        if text in _CONTRACTIONS:
            for part in _CONTRACTIONS[text]:
                tokens.append(Token(part, span))
        else:
            tokens.append(Token(text, span))
    return tokens


# ---------------------------------------------------------------------------
# Display structures


@dataclass(frozen=True)
class OptionDetail:
    """How one option string was produced (inspected by tests and the UI)."""

    text: str
    option_index: int = 0
    lex_features: tuple = ()  # ((target item index, root, pos, FS), ...)
    source_analyses: tuple = ()  # ((source item index, Analysis), ...)
    var_options: tuple = ()  # ((variable name, (sub option strings, ...)), ...)


@dataclass(frozen=True)
class DisplaySegment:
    kind: str  # "translated" | "gray"
    token_span: tuple  # (start, end) over the transformed token sequence
    char_span: tuple  # (start, end) over the original sentence
    text: str  # original source substring
    options: tuple = ()  # ordered target strings; empty iff gray
    segment_id: Optional[str] = None
    details: tuple = ()  # OptionDetail per option
    token_char_spans: tuple = ()  # provenance: original intervals it covers

    def __post_init__(self):
        if self.kind == "translated" and not self.options:
            raise ValueError("translated segment with no options")
        if self.kind == "gray" and self.options:
            raise ValueError("gray segment with options")


@dataclass(frozen=True)
class SentenceTranslation:
    source: str
    segments: tuple  # of DisplaySegment

    def first_option_text(self):
        """Option 0 for translated segments, source text for gray ones."""
        return " ".join(
            seg.options[0] if seg.kind == "translated" else seg.text
            for seg in self.segments
        )

    def fully_translated(self):
        return all(seg.kind == "translated" for seg in self.segments)


# ---------------------------------------------------------------------------
# Pipeline steps


def analyze_token(token: Token, pack: ResourcePack) -> AnalyzedToken:
    analyses = set()
    for transducer in pack.analyzers():
        analyses |= morphology.analyze(token.text, transducer)
    return AnalyzedToken.make(token.text, (token.span,), analyses)


class _Translator:
    """Renders matched segments for one sentence (steps 5 to 7)."""

    def __init__(self, pack, sentence):
        self.pack = pack
        self.sentence = sentence

    # -- rendering one lexical target item

    def render_lex_item(self, item, fs):
        """Generated and realized surfaces for one target item; [] if stuck."""
        surfaces = set()
        for transducer in self.pack.generators_for(item.pos):
            try:
                surfaces |= morphology.generate(item.root, item.pos, fs, transducer)
            except morphology.MissingFeatureError as exc:
                logger.debug("generate %s_%s: %s", item.root, item.pos, exc)
        return sorted(
            morphology.realize_triforms(s, self.pack.triforms) for s in surfaces
        )

    # -- rendering one option of one match

    def render_option(self, match, option_index, tokens, depth):
        """All (text, detail) pairs this option yields; [] when it fails."""
        segment = match.segment
        option = segment.options[option_index]
        bound = dict(match.lex_bindings)
        var_index = dict(match.var_bindings)
        parts = []  # per target item: candidate strings
        lex_features = []
        var_options = []
        for j, item in enumerate(option.items):
            if item.kind == "lit":
                parts.append([item.word])
                continue
            if item.kind == "var":
                token = tokens[var_index[item.name]]
                sub = self.var_option_texts(token, depth)
                if not sub:
                    # untranslatable variable: pass its source token through,
                    # the in-option counterpart of a gray segment
                    sub = [token.text]
                parts.append([sub[0]])
                var_options.append((item.name, tuple(sub)))
                continue
            fs = item.template
            for agr in segment.agreements:
                if agr.option_index != option_index or agr.tgt_index != j:
                    continue
                analysis = bound.get(agr.src_index)
                if analysis is None:
                    continue
                fs = features.copy_features(analysis.features, fs, agr.feature_names)
                if fs is None:
                    logger.warning(
                        "entry %s: agreement %d->%d:%d clashes; option dropped",
                        segment.id, agr.src_index, agr.option_index, agr.tgt_index,
                    )
                    return []
            surfaces = self.render_lex_item(item, fs)
            if not surfaces:
                return []
            parts.append(surfaces)
            lex_features.append((j, item.root, item.pos, fs))
        texts = [""]
        for candidates in parts:
            texts = [
                (t + " " + c if t else c) for t in texts for c in candidates
            ]
        return [
            (
                text,
                OptionDetail(
                    text=text,
                    option_index=option_index,
                    lex_features=tuple(lex_features),
                    source_analyses=tuple(match.lex_bindings),
                    var_options=tuple(var_options),
                ),
            )
            for text in texts
        ]

    # -- rendering a selected match plus its sibling bindings

    def render_match(self, match, siblings, tokens, depth):
        """Ordered option texts and details; empty tuple degrades to gray."""
        texts, details, seen = [], [], set()
        for m in [match] + [s for s in siblings if s is not match]:
            order = sorted(
                range(len(m.segment.options)),
                key=lambda k: (m.segment.options[k].weight, k),
            )
            for k in order:
                for text, detail in self.render_option(m, k, tokens, depth):
                    if text not in seen:
                        seen.add(text)
                        texts.append(text)
                        details.append(detail)
        return tuple(texts), tuple(details)

    # -- recursive variable translation

    def var_option_texts(self, token, depth):
        """Option strings for a variable-bound token (same pipeline, steps 3-7)."""
        if depth >= MAX_VAR_DEPTH:
            logger.warning("variable recursion deeper than %d; giving up", MAX_VAR_DEPTH)
            return []
        segments = self.segments_for([token], base=0, depth=depth + 1)
        if len(segments) == 1 and segments[0].kind == "translated":
            return list(segments[0].options)
        return []

    # -- steps 3/4 plus assembly over a token slice

    def segments_for(self, tokens, base, depth):
        matches = lexicon_mod.match_segments(tokens, self.pack.lexicon)
        selected = lexicon_mod.select_and_fuse(matches, len(tokens))
        rendered = {}
        for m in selected:
            siblings = [
                s
                for s in matches
                if s.segment.id == m.segment.id and s.span() == m.span()
            ]
            options, details = self.render_match(m, siblings, tokens, depth)
            if options:
                rendered[m.span()] = (m, options, details)
        segments = []
        gray_run = []

        def flush_gray():
            if gray_run:
                segments.append(self._gray_segment(tokens, gray_run[0], gray_run[-1] + 1, base))
                gray_run.clear()

        pos = 0
        spans = sorted(rendered)
        for start, end in spans:
            while pos < start:
                gray_run.append(pos)
                pos += 1
            flush_gray()
            m, options, details = rendered[(start, end)]
            segments.append(self._translated_segment(tokens, m, options, details, base))
            pos = end
        while pos < len(tokens):
            gray_run.append(pos)
            pos += 1
        flush_gray()
        return segments

    def _covering_span(self, tokens, start, end):
        intervals = [span for tok in tokens[start:end] for span in tok.spans]
        char_span = (min(s for s, _ in intervals), max(e for _, e in intervals))
        return char_span, tuple(sorted(intervals))

    def _gray_segment(self, tokens, start, end, base):
        char_span, intervals = self._covering_span(tokens, start, end)
        return DisplaySegment(
            kind="gray",
            token_span=(base + start, base + end),
            char_span=char_span,
            text=self.sentence[char_span[0] : char_span[1]],
            token_char_spans=intervals,
        )

    def _translated_segment(self, tokens, match, options, details, base):
        char_span, intervals = self._covering_span(tokens, match.start, match.end)
        return DisplaySegment(
            kind="translated",
            token_span=(base + match.start, base + match.end),
            char_span=char_span,
            text=self.sentence[char_span[0] : char_span[1]],
            options=options,
            segment_id=match.segment.id,
            details=details,
            token_char_spans=intervals,
        )


def translate_sentence(sentence, pack: ResourcePack) -> SentenceTranslation:
    """Run the full pipeline on one sentence."""
    tokens = tokenize(sentence)
    analyzed = [analyze_token(tok, pack) for tok in tokens]
    transformed = apply_transforms(analyzed, pack.rules)
    segments = _Translator(pack, sentence).segments_for(transformed, base=0, depth=0)
    return SentenceTranslation(source=sentence, segments=tuple(segments))


def translate_document(text, pack: ResourcePack):
    """Split into sentences and translate each, order preserved."""
    return [translate_sentence(s, pack) for s in split_sentences(text)]
