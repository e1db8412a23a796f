"""Generalized-segment lexicon: loading, matching, and span selection.

An entry pairs a source pattern with one or more target patterns plus
agreement (feature-copy) rules.  File syntax (``.sgl``), one entry per line,
``#`` comments, trailing ``\\`` continues a line::

    burlar1: burlar_v[+rflx] de $s:n => ñembohory_v $s rehe ; agree 0->0 [persona,número,tiempo,neg]
    poreso: por eso => upévare | upéicha rupi

Source items are literal words, lexical items ``root_pos[fs]`` matched
against morphological analyses, or typed variables ``$name:pos``.  Target
items are literals, lexical items to generate, or ``$name`` references.
``agree i->j [f,...]`` copies features from source item i onto target item j
in every option (``agree i->k:j`` pins option k).  Option order is by weight
(``; weight <option> <rank>`` clause, lower rank first, default 0), ties
keeping file order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Sequence

from . import features
from .features import FeatureStructure
from .transforms import AnalyzedToken


class LexiconError(Exception):
    """Malformed lexicon file; message names the entry and line."""


@dataclass(frozen=True)
class SourceItem:
    kind: str  # "lit" | "lex" | "var"
    word: Optional[str] = None
    root: Optional[str] = None
    pos: Optional[str] = None
    constraint: FeatureStructure = features.EMPTY
    name: Optional[str] = None  # variable name


@dataclass(frozen=True)
class TargetItem:
    kind: str  # "lit" | "lex" | "var"
    word: Optional[str] = None
    root: Optional[str] = None
    pos: Optional[str] = None
    template: FeatureStructure = features.EMPTY
    name: Optional[str] = None


@dataclass(frozen=True)
class Agreement:
    src_index: int
    option_index: int
    tgt_index: int
    feature_names: tuple


@dataclass(frozen=True)
class TargetOption:
    items: tuple  # of TargetItem
    weight: int = 0


@dataclass(frozen=True)
class GeneralizedSegment:
    id: str
    source: tuple  # of SourceItem
    options: tuple  # of TargetOption
    agreements: tuple  # of Agreement
    order: int = 0  # position in the lexicon file; last tie-break
    line: int = 0

    def validate(self, pos_inventory=None):
        problems = []
        if not self.source:
            problems.append("empty source pattern")
        if not self.options:
            problems.append("no target option")
        var_names = [i.name for i in self.source if i.kind == "var"]
        if len(var_names) != len(set(var_names)):
            problems.append("duplicate variable names")
        for item in self.source:
            if pos_inventory and item.kind in ("lex", "var") and item.pos not in pos_inventory:
                problems.append("unknown category %r" % item.pos)
        for k, option in enumerate(self.options):
            if not option.items:
                problems.append("option %d is empty" % k)
            for item in option.items:
                if item.kind == "var" and item.name not in var_names:
                    problems.append("option %d references unknown $%s" % (k, item.name))
                if pos_inventory and item.kind == "lex" and item.pos not in pos_inventory:
                    problems.append("unknown category %r" % item.pos)
        for agr in self.agreements:
            if not 0 <= agr.src_index < len(self.source):
                problems.append("agreement source index %d out of range" % agr.src_index)
            elif self.source[agr.src_index].kind != "lex":
                problems.append("agreement source %d is not a lexical item" % agr.src_index)
            if not 0 <= agr.option_index < len(self.options):
                problems.append("agreement option index %d out of range" % agr.option_index)
            else:
                opt = self.options[agr.option_index]
                if not 0 <= agr.tgt_index < len(opt.items):
                    problems.append(
                        "agreement target index %d out of range in option %d"
                        % (agr.tgt_index, agr.option_index)
                    )
                elif opt.items[agr.tgt_index].kind != "lex":
                    problems.append(
                        "agreement target %d in option %d is not a lexical item"
                        % (agr.tgt_index, agr.option_index)
                    )
        if all(i.kind == "lit" for i in self.source):
            for k, option in enumerate(self.options):
                ok = all(
                    i.kind == "lit" or (i.kind == "lex" and not i.template)
                    for i in option.items
                )
                if not ok:
                    problems.append(
                        "fixed phrase with a templated target in option %d" % k
                    )
        return problems


@dataclass(frozen=True)
class SegmentMatch:
    """One way a segment covers a token span of the transformed sentence."""

    segment: GeneralizedSegment
    start: int
    end: int  # half-open token span
    lex_bindings: tuple  # (source index, Analysis) per lex item
    var_bindings: tuple  # (name, token index) per variable

    def span(self):
        return (self.start, self.end)


class Lexicon:
    """Validated entries plus a first-anchor index for matching."""

    def __init__(self, segments):
        self.segments = list(segments)
        by_id = {}
        for seg in self.segments:
            if seg.id in by_id:
                raise LexiconError("duplicate entry id %s" % seg.id)
            by_id[seg.id] = seg
        self.by_id = by_id
        self._lit_index = {}
        self._lex_index = {}
        self._var_segments = []
        for seg in self.segments:
            first = seg.source[0]
            if first.kind == "lit":
                self._lit_index.setdefault(first.word, []).append(seg)
            elif first.kind == "lex":
                self._lex_index.setdefault((first.root, first.pos), []).append(seg)
            else:
                self._var_segments.append(seg)

    def __len__(self):
        return len(self.segments)

    def candidates(self, token: AnalyzedToken):
        """Segments whose first item could match this token (index lookup)."""
        out = []
        out.extend(self._lit_index.get(token.text, ()))
        seen = set()
        for analysis in token.analyses:
            for seg in self._lex_index.get((analysis.root, analysis.pos), ()):
                if seg.id not in seen:
                    seen.add(seg.id)
                    out.append(seg)
        out.extend(self._var_segments)
        return out


# ---------------------------------------------------------------------------
# Entry parsing

_LEX_RE = re.compile(r"^(?P<root>[^\s\[\]$]+)_(?P<pos>\w+)(?P<fs>\[.*\])?$")
_VAR_SRC_RE = re.compile(r"^\$(?P<name>\w+):(?P<pos>\w+)$")
_VAR_TGT_RE = re.compile(r"^\$(?P<name>\w+)$")
_AGREE_RE = re.compile(
    r"^agree\s+(?P<src>\d+)\s*->\s*(?:(?P<opt>\d+)\s*:\s*)?(?P<tgt>\d+)\s*"
    r"\[(?P<names>[^\]]*)\]$"
)
_WEIGHT_RE = re.compile(r"^weight\s+(\d+)\s+(-?\d+)$")


def _split_top(text, sep):
    chunks, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == sep and depth == 0:
            chunks.append(text[start:i])
            start = i + 1
    chunks.append(text[start:])
    return chunks


def _split_items(text, entry_id):
    """Split a pattern into whitespace-separated items, brackets opaque."""
    items, depth, current = [], 0, ""
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch.isspace() and depth == 0:
            if current:
                items.append(current)
            current = ""
        else:
            current += ch
    if depth != 0:
        raise LexiconError("entry %s: unbalanced brackets" % entry_id)
    if current:
        items.append(current)
    return items


def _parse_source_item(text, entry_id):
    m = _VAR_SRC_RE.match(text)
    if m:
        return SourceItem(kind="var", name=m.group("name"), pos=m.group("pos").lower())
    if text.startswith("$"):
        raise LexiconError("entry %s: source variable needs a category: %r" % (entry_id, text))
    m = _LEX_RE.match(text)
    if m:
        fs = features.parse(m.group("fs")) if m.group("fs") else features.EMPTY
        return SourceItem(
            kind="lex", root=m.group("root"), pos=m.group("pos").lower(), constraint=fs
        )
    return SourceItem(kind="lit", word=text.casefold())


def _parse_target_item(text, entry_id):
    m = _VAR_TGT_RE.match(text)
    if m:
        return TargetItem(kind="var", name=m.group("name"))
    if text.startswith("$"):
        raise LexiconError("entry %s: bad variable reference %r" % (entry_id, text))
    m = _LEX_RE.match(text)
    if m:
        fs = features.parse(m.group("fs")) if m.group("fs") else features.EMPTY
        return TargetItem(
            kind="lex", root=m.group("root"), pos=m.group("pos").lower(), template=fs
        )
    return TargetItem(kind="lit", word=text)


def parse_entry(line, order=0, lineno=0):
    """Parse one entry line into a validated :class:`GeneralizedSegment`."""
    if ":" not in line:
        raise LexiconError("entry missing 'id:' prefix: %r" % line)
    entry_id, rest = line.split(":", 1)
    entry_id = entry_id.strip()
    if not entry_id or any(ch.isspace() for ch in entry_id):
        raise LexiconError("bad entry id %r" % entry_id)
    if "=>" not in rest:
        raise LexiconError("entry %s: missing '=>'" % entry_id)
    src_text, tgt_text = rest.split("=>", 1)
    source = tuple(
        _parse_source_item(item, entry_id) for item in _split_items(src_text, entry_id)
    )
    clauses = [c.strip() for c in _split_top(tgt_text, ";")]
    option_texts = [o.strip() for o in _split_top(clauses[0], "|")]
    options = []
    for opt_text in option_texts:
        items = tuple(
            _parse_target_item(item, entry_id) for item in _split_items(opt_text, entry_id)
        )
        options.append(TargetOption(items=items))
    raw_agreements = []
    weights = {}
    for clause in clauses[1:]:
        if not clause:
            continue
        m = _AGREE_RE.match(clause)
        if m:
            names = tuple(n.strip() for n in m.group("names").split(",") if n.strip())
            if not names:
                raise LexiconError("entry %s: agree clause with no features" % entry_id)
            raw_agreements.append(
                (
                    int(m.group("src")),
                    int(m.group("opt")) if m.group("opt") else None,
                    int(m.group("tgt")),
                    names,
                )
            )
            continue
        m = _WEIGHT_RE.match(clause)
        if m:
            k = int(m.group(1))
            if k >= len(options):
                raise LexiconError(
                    "entry %s: weight for option %d but only %d options"
                    % (entry_id, k, len(options))
                )
            weights[k] = int(m.group(2))
            continue
        raise LexiconError("entry %s: cannot parse clause %r" % (entry_id, clause))
    if weights:
        options = [
            TargetOption(items=o.items, weight=weights.get(k, o.weight))
            for k, o in enumerate(options)
        ]
    agreements = []
    for src, opt, tgt, names in raw_agreements:
        targets = [opt] if opt is not None else list(range(len(options)))
        expanded = []
        for k in targets:
            if 0 <= k < len(options) and 0 <= tgt < len(options[k].items) \
                    and options[k].items[tgt].kind == "lex":
                expanded.append(Agreement(src, k, tgt, names))
            elif opt is not None:
                expanded.append(Agreement(src, k, tgt, names))  # validated below
        if not expanded:
            raise LexiconError(
                "entry %s: agree %d->%d matches no lexical target item"
                % (entry_id, src, tgt)
            )
        agreements.extend(expanded)
    segment = GeneralizedSegment(
        id=entry_id,
        source=source,
        options=tuple(options),
        agreements=tuple(agreements),
        order=order,
        line=lineno,
    )
    return segment


def lint_lexicon(path, pos_inventory=None, feature_inventory=None):
    """Collect every validation problem in a lexicon file.

    Returns (segments, errors, warnings); errors are strings carrying line
    numbers.  ``feature_inventory`` (a set of names) only produces warnings.
    """
    segments, errors, warnings = [], [], []
    seen_ids = {}
    for lineno, line in _logical_lines(path):
        try:
            seg = parse_entry(line, order=len(segments), lineno=lineno)
        except (LexiconError, features.FeatureError) as exc:
            errors.append("line %d: %s" % (lineno, exc))
            continue
        problems = seg.validate(pos_inventory)
        for problem in problems:
            errors.append("line %d: entry %s: %s" % (lineno, seg.id, problem))
        if seg.id in seen_ids:
            errors.append(
                "line %d: duplicate entry id %s (first at line %d)"
                % (lineno, seg.id, seen_ids[seg.id])
            )
        else:
            seen_ids[seg.id] = lineno
        if feature_inventory:
            for name in _feature_names_used(seg):
                if name not in feature_inventory:
                    warnings.append(
                        "line %d: entry %s: feature %r not in the declared inventory"
                        % (lineno, seg.id, name)
                    )
        if not problems:
            segments.append(seg)
    return segments, errors, warnings


def _feature_names_used(segment):
    names = set()

    def collect(fs):
        for key, value in fs.items():
            names.add(key)
            if isinstance(value, FeatureStructure):
                collect(value)

    for item in segment.source:
        collect(item.constraint)
    for option in segment.options:
        for item in option.items:
            if item.kind == "lex":
                collect(item.template)
    for agr in segment.agreements:
        names.update(agr.feature_names)
    return names


def _logical_lines(path):
    """Yield (lineno, line) with comments stripped and continuations joined."""
    with open(path, encoding="utf-8") as handle:
        pending = ""
        pending_line = None
        for lineno, raw in enumerate(handle, 1):
            line = raw.split("#", 1)[0].rstrip()
            if not line.strip() and not pending:
                continue
            if line.endswith("\\"):
                pending += line[:-1] + " "
                if pending_line is None:
                    pending_line = lineno
                continue
            full = pending + line
            yield (pending_line or lineno), full.strip()
            pending = ""
            pending_line = None
        if pending.strip():
            yield pending_line, pending.strip()


def load_lexicon(path, pos_inventory=None):
    """Load and index a lexicon file, raising on any validation error."""
    segments, errors, _ = lint_lexicon(path, pos_inventory)
    if errors:
        raise LexiconError("%s: %s" % (path, "; ".join(errors)))
    return Lexicon(segments)


# ---------------------------------------------------------------------------
# Matching


def _item_bindings(item, token):
    """Ways ``item`` can match ``token``: list of (lex analysis or None)."""
    if item.kind == "lit":
        return [None] if token.text == item.word else []
    if item.kind == "var":
        return [None] if any(a.pos == item.pos for a in token.analyses) else []
    out = []
    for analysis in token.analyses:
        if (
            analysis.root == item.root
            and analysis.pos == item.pos
            and features.subsumes(item.constraint, analysis.features)
        ):
            out.append(analysis)
    return out


def _matches_at(segment, tokens, start):
    """All SegmentMatch bindings of ``segment`` anchored at ``start``."""
    end = start + len(segment.source)
    if end > len(tokens):
        return []
    per_item = []
    for offset, item in enumerate(segment.source):
        bindings = _item_bindings(item, tokens[start + offset])
        if not bindings:
            return []
        per_item.append(bindings)
    combos = [()]
    for bindings in per_item:
        combos = [c + (b,) for c in combos for b in bindings]
    out = []
    for combo in combos:
        lex = tuple(
            (i, b) for i, b in enumerate(combo) if segment.source[i].kind == "lex"
        )
        var = tuple(
            (segment.source[i].name, start + i)
            for i in range(len(combo))
            if segment.source[i].kind == "var"
        )
        out.append(SegmentMatch(segment, start, end, lex, var))
    return out


def match_segments(tokens: Sequence[AnalyzedToken], lexicon, use_index=True):
    """Every binding of every segment over every contiguous token span."""
    matches = []
    for start in range(len(tokens)):
        segments = (
            lexicon.candidates(tokens[start]) if use_index else lexicon.segments
        )
        for segment in segments:
            matches.extend(_matches_at(segment, tokens, start))
    return matches


# ---------------------------------------------------------------------------
# Selection (weighted interval scheduling with lexicographic tie-breaks)


def _selection_key(selection):
    """Orderable quality key: better selections compare greater."""
    covered = sum(m.end - m.start for m in selection)
    spans = [(m.start, m.end) for m in selection]
    orders = [m.segment.order for m in selection]
    bindings = [(m.lex_bindings, m.var_bindings) for m in selection]
    return (
        covered,
        -len(selection),
        _neg_tuple(spans),
        _neg_tuple(orders),
        _neg_key(bindings),
    )


def _neg_tuple(values):
    """Wrap so that lexicographically-smaller tuples compare greater."""
    return _Reversed(tuple(values))


def _neg_key(values):
    return _Reversed(tuple(repr(v) for v in values))


class _Reversed:
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value

    def __eq__(self, other):
        return self.value == other.value

    def __lt__(self, other):
        return self.value > other.value

    def __gt__(self, other):
        return self.value < other.value

    def __le__(self, other):
        return self.value >= other.value

    def __ge__(self, other):
        return self.value <= other.value


def select_and_fuse(matches, sentence_len):
    """Pick the best non-overlapping subset of matches, sorted by start.

    The quality order maximizes covered tokens, then prefers fewer (longer,
    fused) segments, then leftmost spans, then lexicon file order, then a
    deterministic binding order.  Dynamic programming over token positions;
    the exhaustive search over disjoint subsets is kept in the test suite as
    an oracle.
    """
    by_end = {}
    for m in matches:
        if 0 <= m.start < m.end <= sentence_len:
            by_end.setdefault(m.end, []).append(m)
    best = {0: ()}
    for pos in range(1, sentence_len + 1):
        candidate = best[pos - 1]
        for m in by_end.get(pos, ()):
            extended = best[m.start] + (m,)
            if _selection_key(extended) > _selection_key(candidate):
                candidate = extended
        best[pos] = candidate
    return sorted(best[sentence_len], key=lambda m: m.start)
