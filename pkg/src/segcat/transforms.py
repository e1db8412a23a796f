"""Morphosyntactic transforms: fold grammatical words into features.

Rules match a contiguous window of analyzed tokens and either delete a token
or unify extra features into a neighbor's analyses.  A deleted token's
character spans are absorbed by the rule's feature target (or its first
surviving token) so the UI can still highlight the full original wording.

Rule file syntax (``.mst``), one rule per line::

    neg: "no" v -> del 0, add 1 [+neg]
    obj2sg: "te" v -> del 0, add 1 [obj=[persona=2, número=sg]]

Pattern atoms are quoted literal words or a part of speech with an optional
feature constraint (``v``, ``v[persona=1, número=sg]``).  Rules apply in
file order, leftmost first, and the whole set is repeated until a full pass
changes nothing (with a defensive pass cap).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from . import features
from .features import FeatureStructure
from .morphology import Analysis


class TransformError(Exception):
    """Malformed rule file; message carries the rule id."""


class FixpointOverflow(TransformError):
    """The rule set kept changing the sentence past the pass cap."""

    def __init__(self, rule_id, passes):
        self.rule_id = rule_id
        super().__init__(
            "no fixpoint after %d passes (last rule: %s)" % (passes, rule_id)
        )


@dataclass(frozen=True)
class AnalyzedToken:
    """One token with its original character spans and surviving analyses."""

    text: str
    spans: tuple  # ((start, end), ...) original character intervals
    analyses: tuple  # sorted tuple of Analysis

    @staticmethod
    def make(text, spans, analyses):
        return AnalyzedToken(
            text, tuple(spans), tuple(sorted(set(analyses), key=Analysis.sort_key))
        )


@dataclass(frozen=True)
class TokenPredicate:
    """Word literal or category (pos + feature constraint) pattern atom."""

    word: Optional[str] = None
    pos: Optional[str] = None
    constraint: FeatureStructure = features.EMPTY

    def matching_analyses(self, token):
        """Analyses of ``token`` this predicate keeps; None if no match."""
        if self.word is not None:
            return token.analyses if token.text == self.word.casefold() else None
        kept = tuple(
            a
            for a in token.analyses
            if a.pos == self.pos and features.subsumes(self.constraint, a.features)
        )
        return kept or None


@dataclass(frozen=True)
class Delete:
    index: int


@dataclass(frozen=True)
class AddFeatures:
    index: int
    fs: FeatureStructure


@dataclass(frozen=True)
class TransformRule:
    id: str
    pattern: tuple  # of TokenPredicate
    actions: tuple  # of Delete | AddFeatures

    def __post_init__(self):
        deleted = {a.index for a in self.actions if isinstance(a, Delete)}
        for action in self.actions:
            if not 0 <= action.index < len(self.pattern):
                raise TransformError(
                    "rule %s: action index %d out of range" % (self.id, action.index)
                )
            if isinstance(action, AddFeatures) and action.index in deleted:
                raise TransformError(
                    "rule %s: add targets deleted index %d" % (self.id, action.index)
                )
        if len(deleted) >= len(self.pattern):
            raise TransformError("rule %s: deletes the whole window" % self.id)

    def apply_at(self, tokens, start):
        """Apply at ``start`` if the window matches; None when inapplicable."""
        if start + len(self.pattern) > len(tokens):
            return None
        kept_analyses = []
        for offset, pred in enumerate(self.pattern):
            kept = pred.matching_analyses(tokens[start + offset])
            if kept is None:
                return None
            kept_analyses.append(kept)
        window = [
            replace(tok, analyses=kept)
            for tok, kept in zip(tokens[start : start + len(self.pattern)], kept_analyses)
        ]
        deleted = {a.index for a in self.actions if isinstance(a, Delete)}
        for action in self.actions:
            if isinstance(action, AddFeatures):
                tok = window[action.index]
                merged = tuple(
                    updated
                    for a in tok.analyses
                    if (updated := _with_features(a, action.fs)) is not None
                )
                if not merged:
                    return None  # all analyses clash: rule does not apply here
                window[action.index] = replace(tok, analyses=merged)
        if deleted:
            target = self._absorb_target(deleted)
            absorbed = tuple(
                span for i in sorted(deleted) for span in window[i].spans
            )
            window[target] = replace(
                window[target],
                spans=tuple(sorted(window[target].spans + absorbed)),
            )
            window = [tok for i, tok in enumerate(window) if i not in deleted]
        out = list(tokens[:start]) + window + list(tokens[start + len(self.pattern):])
        return out if out != list(tokens) else None

    def _absorb_target(self, deleted):
        for action in self.actions:
            if isinstance(action, AddFeatures):
                return action.index
        return next(i for i in range(len(self.pattern)) if i not in deleted)


def _with_features(analysis, fs):
    merged = features.unify(analysis.features, fs)
    if merged is None:
        return None
    return Analysis(analysis.root, analysis.pos, merged)


# ---------------------------------------------------------------------------
# Rule file parsing

_RULE_RE = re.compile(r"^\s*([^\s:]+)\s*:\s*(.+?)\s*->\s*(.+)$")
_ATOM_RE = re.compile(r'"([^"]+)"|([^\s\[\]]+)(\[.*?\])?')


def parse_rule(line, lineno=None, pos_inventory=None):
    m = _RULE_RE.match(line)
    if not m:
        raise TransformError("cannot parse rule line %r" % line)
    rule_id, pattern_text, action_text = m.groups()
    pattern = []
    pos = 0
    while pos < len(pattern_text):
        if pattern_text[pos].isspace():
            pos += 1
            continue
        m = _ATOM_RE.match(pattern_text, pos)
        if not m:
            raise TransformError("rule %s: bad pattern at %r" % (rule_id, pattern_text[pos:]))
        word, cat, fs_text = m.groups()
        if word is not None:
            pattern.append(TokenPredicate(word=word.casefold()))
        else:
            cat = cat.lower()
            if pos_inventory and cat not in pos_inventory:
                raise TransformError(
                    "rule %s: unknown category %r" % (rule_id, cat)
                )
            constraint = features.parse(fs_text) if fs_text else features.EMPTY
            pattern.append(TokenPredicate(pos=cat, constraint=constraint))
        pos = m.end()
    if not pattern:
        raise TransformError("rule %s: empty pattern" % rule_id)
    actions = []
    for chunk in _split_actions(action_text):
        parts = chunk.split(None, 2)
        if parts[0] == "del" and len(parts) == 2:
            actions.append(Delete(int(parts[1])))
        elif parts[0] == "add" and len(parts) == 3:
            actions.append(AddFeatures(int(parts[1]), features.parse(parts[2])))
        else:
            raise TransformError("rule %s: bad action %r" % (rule_id, chunk))
    try:
        return TransformRule(rule_id, tuple(pattern), tuple(actions))
    except TransformError:
        raise
    except (ValueError, features.FeatureError) as exc:
        raise TransformError("rule %s: %s" % (rule_id, exc)) from exc


def _split_actions(text):
    """Split on commas that are not inside brackets."""
    chunks, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == "," and depth == 0:
            chunks.append(text[start:i].strip())
            start = i + 1
    chunks.append(text[start:].strip())
    return [c for c in chunks if c]


def lint_rules(path, pos_inventory=None):
    """Collect every problem in a rule file; returns (rules, errors)."""
    rules = []
    errors = []
    seen = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                rule = parse_rule(line, lineno, pos_inventory)
            except (TransformError, features.FeatureError) as exc:
                errors.append("line %d: %s" % (lineno, exc))
                continue
            if rule.id in seen:
                errors.append(
                    "line %d: duplicate rule id %s (first at line %d)"
                    % (lineno, rule.id, seen[rule.id])
                )
            else:
                seen[rule.id] = lineno
                rules.append(rule)
    return rules, errors


def load_rules(path, pos_inventory=None):
    """Read a ``.mst`` file; rules come back in file order, validated."""
    rules, errors = lint_rules(path, pos_inventory)
    if errors:
        raise TransformError("%s: %s" % (path, "; ".join(errors)))
    return rules


# ---------------------------------------------------------------------------
# Application

MAX_PASSES = 10


def apply_transforms(tokens: Sequence[AnalyzedToken], rules, max_passes=MAX_PASSES):
    """Run the rule set to fixpoint (file order, leftmost first).

    Deletion only shrinks the sentence and feature addition is monotone, so
    a fixpoint always exists; the pass cap is a defensive guard against
    future action types.
    """
    current = list(tokens)
    last_rule = None
    for _ in range(max_passes):
        changed = False
        for rule in rules:
            i = 0
            while i < len(current):
                result = rule.apply_at(current, i)
                if result is not None:
                    current = result
                    changed = True
                    last_rule = rule.id
                i += 1
        if not changed:
            return current
    raise FixpointOverflow(last_rule, max_passes)
