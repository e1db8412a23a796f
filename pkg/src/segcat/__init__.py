"""segcat: a segment-based computer-assisted translation workbench.

The engine translates sentences segment by segment against data-file
resources (a generalized-segment lexicon, morphosyntactic transforms, and
finite-state morphology with feature constraints), offers ranked options
per segment, and records accepted translations into TMX-compatible
translation memories.
"""

from .engine import (
    DisplaySegment,
    SentenceTranslation,
    split_sentences,
    tokenize,
    translate_document,
    translate_sentence,
)
from .features import FeatureStructure, copy_features, subsumes, unify
from .memory import (
    TranslationMemory,
    TranslationUnit,
    assemble_document,
    export_tmx,
    fuzzy_match,
    import_tmx,
)
from .morphology import Analysis, Transducer, TriformSymbol, analyze, generate, realize_triforms
from .resources import ResourcePack, default_pack_path, load_pack

__version__ = "0.1.0"

__all__ = [
    "Analysis",
    "DisplaySegment",
    "FeatureStructure",
    "ResourcePack",
    "SentenceTranslation",
    "Transducer",
    "TranslationMemory",
    "TranslationUnit",
    "TriformSymbol",
    "analyze",
    "assemble_document",
    "copy_features",
    "default_pack_path",
    "export_tmx",
    "fuzzy_match",
    "generate",
    "import_tmx",
    "load_pack",
    "realize_triforms",
    "split_sentences",
    "subsumes",
    "tokenize",
    "translate_document",
    "translate_sentence",
    "unify",
]
