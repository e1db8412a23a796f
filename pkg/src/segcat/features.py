"""Flat feature structures and unification.

A feature structure (FS) maps feature names to values.  Values are symbols
(strings), booleans, small integers, or -- one level deep only -- another
feature structure (used for object agreement, e.g. obj=[persona=2, número=sg]).
Feature structures are immutable and hashable; equality is structural.

The textual syntax used throughout the resource files is

    [persona=1, número=pl, +neg, obj=[persona=2, número=sg]]

where ``+name``/``-name`` abbreviate boolean true/false.  Serialization is
canonical: feature names are sorted lexicographically (by codepoint), so two
structurally equal structures always print identically.
"""

from __future__ import annotations

import re
from typing import Iterator, Mapping, Union

FeatValue = Union[str, bool, int, "FeatureStructure"]

_NAME_RE = re.compile(r"[^\s\[\]=,+\-]+")
_INT_RE = re.compile(r"\d+")


class FeatureError(ValueError):
    """A malformed feature structure (bad name, bad value, too deep)."""


def _check_name(name):
    if not isinstance(name, str) or not _NAME_RE.fullmatch(name):
        raise FeatureError("bad feature name: %r" % (name,))


def _check_value(name, value, depth):
    if isinstance(value, bool) or isinstance(value, int):
        return
    if isinstance(value, str):
        if not value or any(ch.isspace() for ch in value):
            raise FeatureError("bad symbol value for %s: %r" % (name, value))
        return
    if isinstance(value, FeatureStructure):
        if depth >= 1 or any(
            isinstance(v, FeatureStructure) for v in value.values()
        ):
            raise FeatureError("feature %s: nesting deeper than one level" % name)
        return
    raise FeatureError("feature %s: unsupported value %r" % (name, value))


def values_equal(a, b):
    """Type-strict value equality (so persona=1 and +persona never collide)."""
    if isinstance(a, bool) or isinstance(b, bool):
        return isinstance(a, bool) and isinstance(b, bool) and a == b
    if isinstance(a, FeatureStructure) or isinstance(b, FeatureStructure):
        return (
            isinstance(a, FeatureStructure)
            and isinstance(b, FeatureStructure)
            and a == b
        )
    return type(a) is type(b) and a == b


class FeatureStructure(Mapping):
    """Immutable flat map from feature names to values.

    Supports the Mapping protocol; iteration follows the canonical
    (lexicographic) name order.
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, items=(), _depth=0):
        if isinstance(items, Mapping):
            items = items.items()
        pairs = {}
        for name, value in items:
            _check_name(name)
            _check_value(name, value, _depth)
            if name in pairs and not values_equal(pairs[name], value):
                raise FeatureError("duplicate feature %s" % name)
            pairs[name] = value
        self._items = tuple(sorted(pairs.items()))
        self._hash = None

    def __getitem__(self, name):
        for k, v in self._items:
            if k == name:
                return v
        raise KeyError(name)

    def __iter__(self) -> Iterator[str]:
        return (k for k, _ in self._items)

    def __len__(self):
        return len(self._items)

    def __eq__(self, other):
        if not isinstance(other, FeatureStructure):
            return NotImplemented
        if len(self._items) != len(other._items):
            return False
        return all(
            ka == kb and values_equal(va, vb)
            for (ka, va), (kb, vb) in zip(self._items, other._items)
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(
                tuple((k, type(v).__name__, v) for k, v in self._items)
            )
        return self._hash

    def __repr__(self):
        return "FS(%s)" % serialize(self)

    def __str__(self):
        return serialize(self)


EMPTY = FeatureStructure()


def unify(a, b):
    """Merge two feature structures; ``None`` signals incompatibility.

    The result carries every feature of both arguments.  Where both define a
    feature the values must agree; nested structures unify recursively.
    """
    merged = dict(a.items())
    for name, value in b.items():
        if name not in merged:
            merged[name] = value
            continue
        mine = merged[name]
        if isinstance(mine, FeatureStructure) and isinstance(value, FeatureStructure):
            sub = unify(mine, value)
            if sub is None:
                return None
            merged[name] = sub
        elif not values_equal(mine, value):
            return None
    return FeatureStructure(merged)


def subsumes(general, specific):
    """True iff every feature of ``general`` is matched in ``specific``.

    Nested values are compared by recursive subsumption, so
    obj=[persona=2] subsumes obj=[persona=2, número=sg].
    """
    for name, value in general.items():
        if name not in specific:
            return False
        other = specific[name]
        if isinstance(value, FeatureStructure) and isinstance(other, FeatureStructure):
            if not subsumes(value, other):
                return False
        elif not values_equal(value, other):
            return False
    return True


def copy_features(source, target, paths):
    """Copy the named features of ``source`` into ``target`` by unification.

    Features missing from ``source`` are skipped silently.  A clash returns
    ``None`` (the caller reports it against the offending lexicon entry).
    """
    picked = {name: source[name] for name in paths if name in source}
    return unify(target, FeatureStructure(picked))


# ---------------------------------------------------------------------------
# Textual syntax


class FSSyntaxError(FeatureError):
    """Raised when the bracketed FS notation cannot be parsed."""


def parse(text):
    """Parse the bracketed notation, e.g. ``[persona=1, +neg]``."""
    fs, pos = _parse_fs(text, 0, depth=0)
    if text[pos:].strip():
        raise FSSyntaxError("trailing text after %r: %r" % (text[:pos], text[pos:]))
    return fs


def _skip_ws(text, pos):
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def _parse_fs(text, pos, depth):
    pos = _skip_ws(text, pos)
    if pos >= len(text) or text[pos] != "[":
        raise FSSyntaxError("expected '[' at position %d in %r" % (pos, text))
    pos += 1
    items = []
    pos = _skip_ws(text, pos)
    if pos < len(text) and text[pos] == "]":
        return FeatureStructure(), pos + 1
    while True:
        pos = _skip_ws(text, pos)
        if pos < len(text) and text[pos] in "+-":
            sign = text[pos] == "+"
            pos += 1
            m = _NAME_RE.match(text, pos)
            if not m:
                raise FSSyntaxError("expected name after +/- at %d in %r" % (pos, text))
            items.append((m.group(), sign))
            pos = m.end()
        else:
            m = _NAME_RE.match(text, pos)
            if not m:
                raise FSSyntaxError("expected feature name at %d in %r" % (pos, text))
            name = m.group()
            pos = _skip_ws(text, m.end())
            if pos >= len(text) or text[pos] != "=":
                raise FSSyntaxError("expected '=' after %s in %r" % (name, text))
            pos = _skip_ws(text, pos + 1)
            if pos < len(text) and text[pos] == "[":
                if depth >= 1:
                    raise FSSyntaxError("nesting deeper than one level in %r" % text)
                sub, pos = _parse_fs(text, pos, depth + 1)
                items.append((name, sub))
            else:
                m = _NAME_RE.match(text, pos)
                if not m:
                    raise FSSyntaxError("expected value for %s in %r" % (name, text))
                raw = m.group()
                value = int(raw) if _INT_RE.fullmatch(raw) else raw
                items.append((name, value))
                pos = m.end()
        pos = _skip_ws(text, pos)
        if pos < len(text) and text[pos] == ",":
            pos += 1
            continue
        if pos < len(text) and text[pos] == "]":
            return FeatureStructure(items, _depth=depth), pos + 1
        raise FSSyntaxError("expected ',' or ']' at %d in %r" % (pos, text))


def _serialize_value(name, value):
    if isinstance(value, bool):
        return ("+" if value else "-") + name
    if isinstance(value, FeatureStructure):
        return "%s=%s" % (name, serialize(value))
    return "%s=%s" % (name, value)


def serialize(fs):
    """Canonical text form: names sorted, booleans as +name/-name."""
    return "[%s]" % ", ".join(_serialize_value(k, v) for k, v in fs.items())
