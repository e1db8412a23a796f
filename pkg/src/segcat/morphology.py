"""Finite-state morphology with feature-structure constraints.

A cascade file (``.msc``) declares one or more named cascades.  Each cascade
gives a word template (``slots``) of paradigm blocks concatenated around the
root slot R, paradigm tables mapping feature patterns to affix strings,
optional context rewrite rules applied to the assembled word, a root list
with subcategory features, and irregular full-form entries.  Example::

    cascade gn-verbs
      direction generation
      pos v
      require persona número
      default [-neg, -obj, tiempo=pres]
      slots neg1 person R tiempo neg2

      paradigm person
        [persona=1, número=sg, -obj] -> a
        [persona=1, número=pl, +incl] -> <j>a
        ...

      rewrite
        <nd> a o -> <nd> o

      root guata [subcat=areal]
    end

Compilation enumerates every licensed (root x paradigm-row) combination,
applies the rewrite rules, and lays the resulting string pairs out as paths
of a character transducer whose first arc carries the unified feature
constraint of the path.  ``analyze`` walks the surface side, ``generate``
the lexical side; both are pure.

Affix strings may contain abstract triform symbols such as ``<j>`` which are
replaced by their oral or nasal realization only after generation
(:func:`realize_triforms`).
"""

from __future__ import annotations

import hashlib
import pickle
import re
import unicodedata
from dataclasses import dataclass, field
from typing import Optional

from . import features
from .features import EMPTY, FeatureStructure

EPSILON = ""

# graphemes that trigger the nasal realization of a triform symbol
_NASAL_CHARS = set("ñmnãẽĩõũỹÑMNÃẼĨÕŨỸ")
_COMBINING_TILDE = "̃"


class MorphError(Exception):
    """Base class for morphology errors."""


class CompileError(MorphError):
    """Malformed cascade file; carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)


class MissingFeatureError(MorphError):
    """Generation was called without a feature the cascade requires."""

    def __init__(self, name):
        self.name = name
        super().__init__("missing required feature: %s" % name)


class UnknownSymbolError(MorphError):
    """An abstract symbol has no entry in the triform inventory."""


# ---------------------------------------------------------------------------
# Triform symbols


@dataclass(frozen=True)
class TriformSymbol:
    """An abstract grapheme with an oral and a nasal pronounceable form."""

    name: str
    oral: str
    nasal: str

    def __post_init__(self):
        if not (self.name.startswith("<") and self.name.endswith(">")):
            raise MorphError("triform name must look like <x>: %r" % self.name)
        if not self.oral or not self.nasal:
            raise MorphError("triform %s: realizations must be non-empty" % self.name)
        if self.name in (self.oral, self.nasal):
            raise MorphError("triform %s: realization equals the abstract name" % self.name)


def load_triforms(path):
    """Read a triform inventory file: one ``<name> oral nasal`` per line."""
    inventory = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise CompileError("triform line needs 3 fields: %r" % line, lineno)
            inventory.append(TriformSymbol(*parts))
    return inventory


def _is_nasal_body(text):
    text = unicodedata.normalize("NFC", text)
    return any(ch in _NASAL_CHARS or ch == _COMBINING_TILDE for ch in text)


def split_symbols(text):
    """Split a string into transducer symbols; ``<x>`` counts as one symbol."""
    symbols = []
    i = 0
    while i < len(text):
        if text[i] == "<":
            j = text.find(">", i)
            if j < 0:
                raise MorphError("unterminated abstract symbol in %r" % text)
            symbols.append(text[i : j + 1])
            i = j + 1
        else:
            symbols.append(text[i])
            i += 1
    return symbols


def realize_triforms(text, inventory):
    """Replace abstract symbols by oral or nasal realizations.

    A symbol surfaces nasal when the remainder of the word to its right
    (with later symbols already realized) contains a nasal grapheme; oral
    otherwise.  Processing therefore runs right to left.
    """
    by_name = {t.name: t for t in inventory}
    symbols = split_symbols(text)
    out = ""
    for sym in reversed(symbols):
        if sym.startswith("<"):
            tri = by_name.get(sym)
            if tri is None:
                raise UnknownSymbolError("unknown abstract symbol %s in %r" % (sym, text))
            out = (tri.nasal if _is_nasal_body(out) else tri.oral) + out
        else:
            out = sym + out
    return out


# ---------------------------------------------------------------------------
# Cascade description (parsed form of one `cascade ... end` block)


@dataclass(frozen=True)
class Analysis:
    """Result of morphological analysis: root, part of speech, features."""

    root: str
    pos: str
    features: FeatureStructure

    def sort_key(self):
        return (self.root, self.pos, features.serialize(self.features))


@dataclass
class ParadigmRow:
    pattern: FeatureStructure
    affix: str  # may contain abstract symbols; "" for a zero affix
    line: int


@dataclass
class RewriteRule:
    lhs: list
    rhs: list
    left: list
    right: list
    line: int

    def apply(self, symbols):
        """Rewrite all leftmost non-overlapping matches, honoring context."""
        out = []
        i = 0
        n = len(self.lhs)
        while i + n <= len(symbols):
            if symbols[i : i + n] == self.lhs and self._context_ok(symbols, i, out):
                out.extend(self.rhs)
                i += n
            else:
                out.append(symbols[i])
                i += 1
        out.extend(symbols[i:])
        return out

    def _context_ok(self, symbols, i, out):
        if self.left:
            if self.left == ["#"]:
                if i != 0:
                    return False
            elif symbols[i - len(self.left) : i] != self.left:
                return False
        if self.right:
            j = i + len(self.lhs)
            if self.right == ["#"]:
                if j != len(symbols):
                    return False
            elif symbols[j : j + len(self.right)] != self.right:
                return False
        return True


@dataclass
class RootEntry:
    form: str
    fs: FeatureStructure
    stem: str
    line: int


@dataclass
class FormEntry:
    surface: str
    root: str
    fs: FeatureStructure
    line: int


@dataclass
class MorphCascade:
    """Parsed cascade: rule blocks, template, roots; input to :func:`compile_cascade`."""

    name: str
    direction: str = "analysis"  # or "generation"
    pos: str = ""
    slots: list = field(default_factory=list)
    paradigms: dict = field(default_factory=dict)
    rewrites: list = field(default_factory=list)
    roots: list = field(default_factory=list)
    forms: list = field(default_factory=list)
    hidden: list = field(default_factory=list)
    required: list = field(default_factory=list)
    defaults: FeatureStructure = EMPTY
    line: int = 0


_KEYWORDS = {
    "cascade", "direction", "pos", "hide", "require", "default",
    "slots", "paradigm", "rewrite", "root", "form", "end",
}


def parse_cascade_file(text):
    """Parse an ``.msc`` file into an ordered ``{name: MorphCascade}`` map."""
    cascades = {}
    current: Optional[MorphCascade] = None
    block = None  # ("paradigm", name) | ("rewrite",)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word = line.split()[0]
        if word not in _KEYWORDS:
            if current is None:
                raise CompileError("expected 'cascade <name>', got %r" % line, lineno)
            if block and block[0] == "paradigm":
                current.paradigms[block[1]].append(_parse_row(line, lineno))
                continue
            if block and block[0] == "rewrite":
                current.rewrites.append(_parse_rewrite(line, lineno))
                continue
            raise CompileError("unexpected line %r" % line, lineno)
        block = None
        parts = line.split()
        if word == "cascade":
            if len(parts) != 2:
                raise CompileError("usage: cascade <name>", lineno)
            if parts[1] in cascades:
                raise CompileError("duplicate cascade %s" % parts[1], lineno)
            current = MorphCascade(name=parts[1], line=lineno)
            cascades[parts[1]] = current
            continue
        if current is None:
            raise CompileError("%s outside a cascade block" % word, lineno)
        if word == "end":
            current = None
        elif word == "direction":
            if len(parts) != 2 or parts[1] not in ("analysis", "generation"):
                raise CompileError("direction must be analysis or generation", lineno)
            current.direction = parts[1]
        elif word == "pos":
            current.pos = parts[1]
        elif word == "hide":
            current.hidden.extend(parts[1:])
        elif word == "require":
            current.required.extend(parts[1:])
        elif word == "default":
            current.defaults = _parse_fs_part(line[len("default"):].strip(), lineno)
        elif word == "slots":
            if "R" not in parts[1:]:
                raise CompileError("slots must include the root slot R", lineno)
            current.slots = parts[1:]
        elif word == "paradigm":
            if len(parts) != 2:
                raise CompileError("usage: paradigm <name>", lineno)
            if parts[1] in current.paradigms:
                raise CompileError("duplicate paradigm %s" % parts[1], lineno)
            current.paradigms[parts[1]] = []
            block = ("paradigm", parts[1])
        elif word == "rewrite":
            block = ("rewrite",)
        elif word == "root":
            current.roots.append(_parse_root(line, lineno))
        elif word == "form":
            current.forms.append(_parse_form(line, lineno))
    return cascades


def _parse_fs_part(text, lineno):
    try:
        return features.parse(text)
    except features.FeatureError as exc:
        raise CompileError(str(exc), lineno) from exc


def _parse_row(line, lineno):
    if "->" not in line:
        raise CompileError("paradigm row needs '->': %r" % line, lineno)
    left, right = line.split("->", 1)
    pattern = _parse_fs_part(left.strip(), lineno)
    affix = right.strip()
    if affix == "0":
        affix = ""
    if any(ch.isspace() for ch in affix):
        raise CompileError("affix may not contain whitespace: %r" % affix, lineno)
    return ParadigmRow(pattern, affix, lineno)


def _parse_rewrite(line, lineno):
    if "->" not in line:
        raise CompileError("rewrite rule needs '->': %r" % line, lineno)
    lhs_text, rest = line.split("->", 1)
    left = right = []
    if "/" in rest:
        rhs_text, ctx = rest.split("/", 1)
        if "_" not in ctx:
            raise CompileError("rewrite context needs '_': %r" % line, lineno)
        lctx, rctx = ctx.split("_", 1)
        left = lctx.split()
        right = rctx.split()
    else:
        rhs_text = rest
    lhs = lhs_text.split()
    rhs = [] if rhs_text.split() == ["0"] else rhs_text.split()
    if not lhs:
        raise CompileError("rewrite rule needs a left-hand side", lineno)
    return RewriteRule(lhs, rhs, left, right, lineno)


def _parse_root(line, lineno):
    # root <form> [fs]? (stem <stem>)?
    m = re.fullmatch(
        r"root\s+(\S+)(?:\s+(\[.*?\]))?(?:\s+stem\s+(\S+))?", line
    )
    if not m:
        raise CompileError("bad root line: %r" % line, lineno)
    form, fs_text, stem = m.groups()
    fs = _parse_fs_part(fs_text, lineno) if fs_text else EMPTY
    return RootEntry(form, fs, stem or form, lineno)


def _parse_form(line, lineno):
    # form <surface> <root> [fs]?
    m = re.fullmatch(r"form\s+(\S+)\s+(\S+)(?:\s+(\[.*\]))?", line)
    if not m:
        raise CompileError("bad form line: %r" % line, lineno)
    surface, root, fs_text = m.groups()
    fs = _parse_fs_part(fs_text, lineno) if fs_text else EMPTY
    return FormEntry(surface, root, fs, lineno)


# ---------------------------------------------------------------------------
# Transducer


@dataclass(frozen=True)
class Arc:
    src: int
    inp: str  # surface-side symbol, EPSILON for none
    out: str  # lexical-side symbol, EPSILON for none
    fs: Optional[FeatureStructure]
    dst: int


class Transducer:
    """Character transducer between surface forms and lexical root strings.

    Arcs pair a surface symbol with a lexical symbol; either side may be
    epsilon.  An arc may carry a feature-structure constraint; the
    constraints along a path must unify for the path to count.  The surface
    side is the arc input so analysis consumes arc inputs and generation
    consumes arc outputs.
    """

    def __init__(self, pos, direction="analysis", required=(), defaults=EMPTY,
                 hidden=()):
        self.pos = pos
        self.direction = direction
        self.required = tuple(required)
        self.defaults = defaults
        self.hidden = tuple(hidden)
        self.start = 0
        self.n_states = 1
        self.finals = set()
        self.arcs = []
        self._by_input = {}
        self._by_output = {}

    def new_state(self):
        self.n_states += 1
        return self.n_states - 1

    def add_arc(self, src, inp, out, fs, dst):
        if src >= self.n_states or dst >= self.n_states:
            raise MorphError("arc references unknown state")
        if inp == EPSILON and out == EPSILON and fs is None:
            raise MorphError("epsilon:epsilon arc without constraint")
        arc = Arc(src, inp, out, fs, dst)
        self.arcs.append(arc)
        self._by_input.setdefault((src, inp), []).append(arc)
        self._by_output.setdefault((src, out), []).append(arc)

    def add_final(self, state):
        self.finals.add(state)

    def add_path(self, surface_syms, lexical_syms, fs):
        """Lay out one aligned (surface, lexical) pair as a fresh path."""
        n = max(len(surface_syms), len(lexical_syms), 1)
        state = self.start
        for i in range(n):
            inp = surface_syms[i] if i < len(surface_syms) else EPSILON
            out = lexical_syms[i] if i < len(lexical_syms) else EPSILON
            nxt = self.new_state()
            self.add_arc(state, inp, out, fs if i == 0 else None, nxt)
            state = nxt
        self.add_final(state)

    def _walk(self, syms, index_attr, emit_attr):
        """All (emitted string, unified FS) over paths consuming ``syms``."""
        index = getattr(self, index_attr)
        results = set()
        # stack entries: (state, position in syms, emitted parts, fs)
        stack = [(self.start, 0, (), EMPTY)]
        while stack:
            state, pos, emitted, fs = stack.pop()
            if pos == len(syms) and state in self.finals:
                results.add(("".join(emitted), fs))
            candidates = []
            if pos < len(syms):
                candidates.extend(index.get((state, syms[pos]), ()))
            candidates.extend(index.get((state, EPSILON), ()))
            for arc in candidates:
                consumed = getattr(arc, "inp" if index_attr == "_by_input" else "out")
                new_fs = fs
                if arc.fs is not None:
                    new_fs = features.unify(fs, arc.fs)
                    if new_fs is None:
                        continue
                emit = getattr(arc, emit_attr)
                stack.append((
                    arc.dst,
                    pos + (1 if consumed != EPSILON else 0),
                    emitted + ((emit,) if emit != EPSILON else ()),
                    new_fs,
                ))
        return results


def compile_cascade(cascade):
    """Compile one cascade into a :class:`Transducer`.

    Deterministic for identical input text: roots, forms, and paradigm rows
    are enumerated in file order.
    """
    for slot in cascade.slots:
        if slot != "R" and slot not in cascade.paradigms:
            raise CompileError(
                "cascade %s: slots reference undefined paradigm %r"
                % (cascade.name, slot),
                cascade.line,
            )
    if not cascade.pos:
        raise CompileError("cascade %s: missing pos" % cascade.name, cascade.line)
    t = Transducer(
        pos=cascade.pos,
        direction=cascade.direction,
        required=cascade.required,
        defaults=cascade.defaults,
        hidden=cascade.hidden,
    )
    slots = cascade.slots or ["R"]
    seen = set()
    for root in cascade.roots:
        for combo_affixes, combo_fs in _slot_combos(cascade, slots, root):
            surface = "".join(combo_affixes)
            surface_syms = split_symbols(surface)
            for rule in cascade.rewrites:
                surface_syms = rule.apply(surface_syms)
            key = ("".join(surface_syms), root.form, combo_fs)
            if key in seen:
                continue
            seen.add(key)
            t.add_path(surface_syms, list(root.form), combo_fs)
    for form in cascade.forms:
        key = (form.surface, form.root, form.fs)
        if key in seen:
            continue
        seen.add(key)
        t.add_path(split_symbols(form.surface), list(form.root), form.fs)
    return t


def _slot_combos(cascade, slots, root):
    """Yield (affix strings in slot order, unified FS) for one root."""
    combos = [([], root.fs)]
    for slot in slots:
        nxt = []
        if slot == "R":
            for affixes, fs in combos:
                nxt.append((affixes + [root.stem], fs))
        else:
            for row in cascade.paradigms[slot]:
                merged_rows = []
                for affixes, fs in combos:
                    unified = features.unify(fs, row.pattern)
                    if unified is not None:
                        merged_rows.append((affixes + [row.affix], unified))
                nxt.extend(merged_rows)
        combos = nxt
    return combos


# ---------------------------------------------------------------------------
# Runtime operations


def analyze(surface, transducer):
    """All analyses of one lowercase token; empty set for unknown words."""
    try:
        syms = split_symbols(surface)
    except MorphError:
        return set()
    results = set()
    for root, fs in transducer._walk(syms, "_by_input", "out"):
        if transducer.hidden:
            fs = FeatureStructure(
                (k, v) for k, v in fs.items() if k not in transducer.hidden
            )
        results.add(Analysis(root, transducer.pos, fs))
    return results


def generate(root, pos, fs, transducer):
    """All surface strings (may contain abstract symbols) for root under fs.

    Raises :class:`MissingFeatureError` when ``fs`` leaves out a feature the
    cascade declares as required.  An unknown root yields the empty set.
    """
    if pos != transducer.pos:
        return set()
    for name in transducer.required:
        if name not in fs:
            raise MissingFeatureError(name)
    fill = {k: v for k, v in transducer.defaults.items() if k not in fs}
    full = features.unify(fs, FeatureStructure(fill))
    if full is None:
        return set()
    out = set()
    for surface, path_fs in transducer._walk(list(root), "_by_output", "inp"):
        if features.unify(path_fs, full) is not None:
            out.add(surface)
    return out


# ---------------------------------------------------------------------------
# Loading with a binary sidecar cache

_CACHE_MAGIC = "segcat-msc-cache-1"


def load_cascades(path, cache=False):
    """Parse and compile every cascade in an ``.msc`` file.

    With ``cache=True`` a pickle sidecar (``<file>.bin``) keyed by the text's
    content hash is consulted and refreshed best-effort; a cold compile is
    always correct without it.
    """
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    sidecar = str(path) + ".bin"
    if cache:
        try:
            with open(sidecar, "rb") as handle:
                payload = pickle.load(handle)
            if payload.get("magic") == _CACHE_MAGIC and payload.get("hash") == digest:
                return payload["transducers"]
        except (OSError, pickle.PickleError, EOFError, AttributeError):
            pass
    transducers = {
        name: compile_cascade(cascade)
        for name, cascade in parse_cascade_file(text).items()
    }
    if cache:
        try:
            with open(sidecar, "wb") as handle:
                pickle.dump(
                    {"magic": _CACHE_MAGIC, "hash": digest, "transducers": transducers},
                    handle,
                )
        except OSError:
            pass
    return transducers
