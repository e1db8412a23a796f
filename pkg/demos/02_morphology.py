"""
Finite-state morphology with feature constraints
================================================

Cascade files compile into character transducers whose arcs carry feature
constraints.  The same machine maps surface forms to root+features
(analysis) and roots+features to surface forms (generation).  Abstract
triform symbols like <j> stay in the generated string until nasal harmony
picks their pronounceable form.
"""

from segcat import features, morphology
from segcat.resources import default_pack_path, load_pack

pack = load_pack(default_pack_path())

# --- analysis: Spanish surface form -> root + features ----------------------
es_verbs = pack.src_morph["es-verbs"]
for word in ["burla", "llamo", "burlaba", "van", "xyzzy"]:
    analyses = sorted(morphology.analyze(word, es_verbs), key=lambda a: a.sort_key())
    print("%-10s ->" % word, [
        "%s_%s %s" % (a.root, a.pos, features.serialize(a.features)) for a in analyses
    ] or "(unknown)")

# --- generation: Guaraní root + features -> surface form ---------------------
gn_verbs = pack.tgt_morph["gn-verbs"]

def show(root, fs_text):
    fs = features.parse(fs_text)
    raw = sorted(morphology.generate(root, "v", fs, gn_verbs))
    realized = [morphology.realize_triforms(s, pack.triforms) for s in raw]
    print("%s %s -> %s -> %s" % (root, fs_text, raw, realized))

# the inclusive/exclusive split of the first person plural
show("guata", "[persona=1, número=pl, +incl]")
show("guata", "[persona=1, número=pl, -incl]")
show("guata", "[persona=1, número=pl]")          # unspecified: both offered

# nasal harmony: the same <j>a- prefix surfaces as ña- before a nasal root
show("ñe'ẽ", "[persona=1, número=pl, +incl]")

# the negation circumfix nd(a)- ... -i, with its own nasal allomorph
show("guata", "[persona=3, número=sg, +neg]")
show("ñe'ẽ", "[persona=3, número=sg, +neg]")

# generation validates required features
try:
    morphology.generate("guata", "v", features.parse("[subcat=areal]"), gn_verbs)
except morphology.MissingFeatureError as exc:
    print("underspecified:", exc)
