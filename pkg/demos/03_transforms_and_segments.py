"""
Transforms and generalized segments, step by step
=================================================

The middle of the pipeline, shown on the classic example "se burla del
presidente": grammatical words fold into features, the generalized-segment
lexicon matches patterns over the result, and a covering set of matches is
selected.
"""

from segcat import features
from segcat.engine import analyze_token, tokenize
from segcat.lexicon import match_segments, select_and_fuse
from segcat.resources import default_pack_path, load_pack
from segcat.transforms import apply_transforms

pack = load_pack(default_pack_path())
sentence = "se burla del presidente"

# step 0+1: tokenize (del -> de el) and analyze each token
tokens = [analyze_token(tok, pack) for tok in tokenize(sentence)]
print("tokens:   ", [t.text for t in tokens])

# step 2: transforms guaranize the Spanish: se -> +rflx, article deleted
transformed = apply_transforms(tokens, pack.rules)
for tok in transformed:
    print("  %-12s" % tok.text, [
        "%s_%s %s" % (a.root, a.pos, features.serialize(a.features))
        for a in tok.analyses
    ])

# step 3: every segment binding over every span
matches = match_segments(transformed, pack.lexicon)
for m in sorted(matches, key=lambda m: (m.start, m.end, m.segment.order)):
    print("match %s over tokens [%d, %d)" % (m.segment.id, m.start, m.end))

# step 4: a non-overlapping selection; longer (fused) matches win
selected = select_and_fuse(matches, len(transformed))
print("selected: ", [(m.segment.id, m.start, m.end) for m in selected])
