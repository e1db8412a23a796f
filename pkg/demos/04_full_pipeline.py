"""
Translating sentences end to end
================================

One generalized entry covers thousands of inflected phrasings: the
burlarse-de pattern below handles person, number, tense, clitics, negation,
and the periphrastic future.  Spans the lexicon cannot cover come back gray
for the human translator, never blocking the rest of the sentence.
"""

from segcat.engine import translate_document
from segcat.resources import default_pack_path, load_pack

pack = load_pack(default_pack_path())

DOCUMENT = """\
Se burla del presidente. Me burlaba del profesor. No se van a burlar del
profesor. No te llamo. Nos burlamos del presidente. Por eso. El perro
camina al pueblo. Xyzzy plugh.
"""

for translation in translate_document(DOCUMENT, pack):
    print(translation.source)
    for seg in translation.segments:
        if seg.kind == "gray":
            print("   (gray)        %r" % seg.text)
        else:
            print("   %-14s %r" % (seg.segment_id, seg.text))
            for k, option in enumerate(seg.options):
                print("      option %d: %s" % (k, option))
    print()
