"""
Feature structures and unification
==================================

Grammatical features (person, number, tense, negation...) live in flat
feature structures.  Unification merges compatible information and fails on
clashes; subsumption asks whether one structure is more general than
another.  These two operations drive everything else: morphological
constraints, transform rules, lexicon matching, and agreement.
"""

from segcat import features
from segcat.features import parse, serialize, subsumes, unify

# parse the textual notation used throughout the resource files
verb = parse("[persona=1, número=sg, tiempo=pres]")
negation = parse("[+neg]")
clitic = parse("[obj=[persona=2, número=sg]]")

print("verb:    ", serialize(verb))
print("negation:", serialize(negation))
print("clitic:  ", serialize(clitic))

# unification merges disjoint information
merged = unify(unify(verb, negation), clitic)
print("merged:  ", serialize(merged))

# a clash yields None instead of raising: failure is a value
print("pres vs fut:", unify(parse("[tiempo=pres]"), parse("[tiempo=fut]")))

# subsumption: the empty structure subsumes everything, more specific
# structures subsume less
print(subsumes(parse("[]"), verb))                      # True
print(subsumes(parse("[obj=[persona=2]]"), merged))     # True (recursive)
print(subsumes(merged, verb))                           # False

# agreement rules copy named features from a source analysis onto a target
# template, skipping what the source does not define
target = features.copy_features(merged, parse("[]"), ["persona", "número", "tiempo", "neg"])
print("copied:  ", serialize(target))
