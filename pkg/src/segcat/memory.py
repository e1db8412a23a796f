"""Translation memories: recording, fuzzy lookup, TMX import/export.

A memory is an append-only list of aligned sentence pairs.  Persistence is
a journal file (``.tmj``) with one JSON-serialized unit per line: appends
are crash-safe (written, flushed, and fsynced before ``record`` returns)
and a truncated trailing line is ignored on reload.  TMX is the interchange
format for other tools.
"""

from __future__ import annotations

import json
import os
import re
import threading
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Optional

CREATION_TOOL = "segcat"
CREATION_TOOL_VERSION = "0.1.0"


class MemoryError_(Exception):
    """Validation or storage failure in the memory layer."""


class TmxError(MemoryError_):
    """Malformed TMX input; carries the byte offset when known."""

    def __init__(self, message, byte_offset=None):
        self.byte_offset = byte_offset
        if byte_offset is not None:
            message = "%s (byte offset %d)" % (message, byte_offset)
        super().__init__(message)


@dataclass(frozen=True)
class TranslationUnit:
    source_lang: str
    target_lang: str
    source_seg: str
    target_seg: str
    created: str  # UTC timestamp, ISO 8601
    origin: str = "system"

    def __post_init__(self):
        if not self.source_seg or not self.target_seg:
            raise MemoryError_("translation unit with an empty segment")
        if not self.source_lang or not self.target_lang:
            raise MemoryError_("translation unit with an empty language code")
        if self.source_lang == self.target_lang:
            raise MemoryError_("source and target language codes must differ")

    def to_json(self):
        return json.dumps(
            {
                "srclang": self.source_lang,
                "tgtlang": self.target_lang,
                "src": self.source_seg,
                "tgt": self.target_seg,
                "created": self.created,
                "origin": self.origin,
            },
            ensure_ascii=False,
        )

    @staticmethod
    def from_json(line):
        data = json.loads(line)
        return TranslationUnit(
            data["srclang"], data["tgtlang"], data["src"], data["tgt"],
            data["created"], data.get("origin", "system"),
        )


def _now():
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class TranslationMemory:
    """Ordered, append-only collection of units, optionally journal-backed."""

    def __init__(self, name="memory", units=(), source_lang="ES", target_lang="GN",
                 journal_path=None):
        self.name = name
        self.units = list(units)
        self.source_lang = source_lang
        self.target_lang = target_lang
        self.journal_path = journal_path
        self.import_skipped = 0
        self._write_lock = threading.Lock()

    def __len__(self):
        return len(self.units)

    def __eq__(self, other):
        return isinstance(other, TranslationMemory) and self.units == other.units

    def record(self, source_sentence, target_sentence, origin="system"):
        """Append a unit and persist it before returning (single writer)."""
        unit = TranslationUnit(
            self.source_lang, self.target_lang,
            source_sentence, target_sentence, _now(), origin,
        )
        with self._write_lock:
            if self.journal_path:
                line = unit.to_json() + "\n"
                with open(self.journal_path, "a", encoding="utf-8") as handle:
                    handle.write(line)
                    handle.flush()
                    os.fsync(handle.fileno())
            self.units.append(unit)
        return unit

    @staticmethod
    def load_journal(path, name=None, source_lang="ES", target_lang="GN"):
        """Rebuild a memory from its journal; a torn last line is dropped."""
        units = []
        if os.path.exists(path):
            with open(path, encoding="utf-8") as handle:
                for line in handle:
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        units.append(TranslationUnit.from_json(line))
                    except (json.JSONDecodeError, KeyError, MemoryError_):
                        break  # torn tail from a crash mid-append
        if units:
            source_lang = units[0].source_lang
            target_lang = units[0].target_lang
        return TranslationMemory(
            name=name or os.path.basename(str(path)),
            units=units,
            source_lang=source_lang,
            target_lang=target_lang,
            journal_path=path,
        )


# ---------------------------------------------------------------------------
# Fuzzy matching

_WORD_RE = re.compile(r"\w+", re.UNICODE)


def similarity_tokens(sentence):
    """Case-folded word tokens with punctuation stripped."""
    return _WORD_RE.findall(sentence.casefold())


def token_levenshtein(a, b):
    """Edit distance over token sequences (two-row dynamic programming)."""
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, tok_a in enumerate(a, 1):
        current = [i] + [0] * len(b)
        for j, tok_b in enumerate(b, 1):
            current[j] = min(
                previous[j] + 1,
                current[j - 1] + 1,
                previous[j - 1] + (tok_a != tok_b),
            )
        previous = current
    return previous[len(b)]


def similarity(a, b):
    """1 - L/max(|a|,|b|) over similarity tokens; 1.0 for two empty texts."""
    ta, tb = similarity_tokens(a), similarity_tokens(b)
    if not ta and not tb:
        return 1.0
    return 1.0 - token_levenshtein(ta, tb) / max(len(ta), len(tb))


@dataclass(frozen=True)
class FuzzyMatch:
    unit: TranslationUnit
    score: float


def fuzzy_match(tm, sentence, threshold=0.7, k=3):
    """Top-k units whose source is similar to ``sentence``.

    Descending score; equal scores prefer the most recently recorded unit.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold must be within [0, 1]")
    if k < 1:
        raise ValueError("k must be at least 1")
    scored = [
        (similarity(sentence, unit.source_seg), index, unit)
        for index, unit in enumerate(tm.units)
    ]
    scored = [item for item in scored if item[0] >= threshold]
    scored.sort(key=lambda item: (-item[0], -item[1]))
    return [FuzzyMatch(unit, score) for score, _, unit in scored[:k]]


# ---------------------------------------------------------------------------
# TMX


def export_tmx(tm, path):
    """Write the memory as a TMX 1.4 document."""
    tmx = ET.Element("tmx", version="1.4")
    ET.SubElement(
        tmx,
        "header",
        creationtool=CREATION_TOOL,
        creationtoolversion=CREATION_TOOL_VERSION,
        segtype="sentence",
        adminlang="en",
        srclang=tm.source_lang,
        datatype="plaintext",
        **{"o-tmf": "plain"},
    )
    body = ET.SubElement(tmx, "body")
    for unit in tm.units:
        tu = ET.SubElement(body, "tu")
        tu.set("creationdate", unit.created)
        tu.set("creationid", unit.origin)
        for lang, seg_text in (
            (unit.source_lang, unit.source_seg),
            (unit.target_lang, unit.target_seg),
        ):
            tuv = ET.SubElement(tu, "tuv")
            tuv.set("xml:lang", lang)
            ET.SubElement(tuv, "seg").text = seg_text
    ET.indent(tmx)
    ET.ElementTree(tmx).write(path, encoding="utf-8", xml_declaration=True)


def _byte_offset(data, line, column):
    lines = data.split(b"\n")
    return sum(len(l) + 1 for l in lines[: line - 1]) + column


def import_tmx(path, name=None):
    """Read a TMX file back into a memory; inverse of :func:`export_tmx`.

    Units missing one of the two language variants are skipped; the count of
    skipped units is available as ``memory.import_skipped``.
    """
    with open(path, "rb") as handle:
        data = handle.read()
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line, column = exc.position
        raise TmxError(
            "malformed TMX in %s: %s" % (path, exc.msg if hasattr(exc, "msg") else exc),
            byte_offset=_byte_offset(data, line, column),
        ) from exc
    header = root.find("header")
    srclang = header.get("srclang", "ES") if header is not None else "ES"
    units = []
    skipped = 0
    for tu in root.iter("tu"):
        variants = {}
        for tuv in tu.findall("tuv"):
            lang = (
                tuv.get("xml:lang")
                or tuv.get("{http://www.w3.org/XML/1998/namespace}lang")
                or tuv.get("lang")
            )
            seg = tuv.find("seg")
            if lang and seg is not None and seg.text:
                variants[lang] = seg.text
        if len(variants) < 2:
            skipped += 1
            continue
        langs = list(variants)
        source_lang = srclang if srclang in variants else langs[0]
        target_lang = next(l for l in langs if l != source_lang)
        units.append(
            TranslationUnit(
                source_lang,
                target_lang,
                variants[source_lang],
                variants[target_lang],
                tu.get("creationdate", _now()),
                tu.get("creationid", "system"),
            )
        )
    tm = TranslationMemory(
        name=name or os.path.basename(str(path)),
        units=units,
        source_lang=units[0].source_lang if units else srclang,
        target_lang=units[0].target_lang if units else "GN",
    )
    tm.import_skipped = skipped
    return tm


# ---------------------------------------------------------------------------
# Document assembly


def capitalize_sentence(sentence):
    """Uppercase the first cased character, leaving the rest untouched."""
    for i, ch in enumerate(sentence):
        if ch.isalpha():
            return sentence[:i] + ch.upper() + sentence[i + 1 :]
    return sentence


def assemble_document(target_sentences):
    """Accepted sentences joined by newlines, each capitalized."""
    return "\n".join(capitalize_sentence(s) for s in target_sentences)
