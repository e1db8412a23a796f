"""
Translation memories: journals, fuzzy matching, TMX
===================================================

Accepted translations accumulate in an append-only journal.  New sentences
are compared against stored sources by token-level edit distance, and the
whole memory round-trips through TMX for use in other CAT tools.
"""

import tempfile
from pathlib import Path

from segcat.memory import TranslationMemory, export_tmx, fuzzy_match, import_tmx

workdir = Path(tempfile.mkdtemp(prefix="segcat-demo-"))

tm = TranslationMemory(journal_path=str(workdir / "demo.tmj"))
tm.record("se burla del presidente", "oñembohory mburuvicha rehe", origin="demo")
tm.record("no te llamo", "norohenóiri", origin="demo")
tm.record(
    "fallecen menos del 0,5 % de las personas que contraen esta infección",
    "less than 0.5% of those who get the infection die",
    origin="ecdc",
)

# an exact repeat scores 1.0; a one-token change scores 1 - 1/n
for query in [
    "se burla del presidente",
    "se burla del profesor",
    "fallecen menos del 0,5 % de los pacientes que contraen esta infección",
]:
    print(query)
    for m in fuzzy_match(tm, query, threshold=0.5, k=2):
        print("   %.3f  %s -> %s" % (m.score, m.unit.source_seg, m.unit.target_seg))

# the journal survives anything short of disk loss; reload is one call
reloaded = TranslationMemory.load_journal(workdir / "demo.tmj")
print("reloaded units:", len(reloaded))

# TMX round trip
tmx_path = workdir / "demo.tmx"
export_tmx(tm, tmx_path)
print("tmx equals journal:", import_tmx(tmx_path) == tm)
print("files in", workdir)
