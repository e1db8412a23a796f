"""Resource-pack loading.

A pack directory bundles everything one language pair needs:

    pack.toml        manifest: name, language codes, pos inventory, file names
    lexicon.sgl      generalized segments
    transforms.mst   morphosyntactic transform rules
    src-morph.msc    source-language analysis cascades
    tgt-morph.msc    target-language generation cascades
    triforms.txt     abstract-symbol inventory
    features.txt     optional feature-name inventory (lint warnings only)

All loaders are strict: a malformed file raises with the file name attached.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import lexicon as lexicon_mod
from . import morphology, transforms

DEFAULT_POS = ("v", "n", "adj")


class ResourceError(Exception):
    """A resource pack could not be loaded."""


@dataclass
class ResourcePack:
    """Immutable bundle consumed by the engine; reload builds a new value."""

    name: str
    source_lang: str
    target_lang: str
    pos_inventory: tuple
    lexicon: "lexicon_mod.Lexicon"
    rules: list
    src_morph: dict  # cascade name -> Transducer (analysis direction)
    tgt_morph: dict  # cascade name -> Transducer (generation direction)
    triforms: list
    feature_inventory: set = field(default_factory=set)
    root: Path = None

    def analyzers(self):
        return list(self.src_morph.values())

    def generators_for(self, pos):
        return [t for t in self.tgt_morph.values() if t.pos == pos]


def default_pack_path():
    """The miniature Spanish-Guarani pack shipped with the package."""
    return Path(__file__).parent / "packs" / "es-gn"


def load_pack(directory, cache=True):
    """Load a resource pack directory into a :class:`ResourcePack`."""
    root = Path(directory)
    manifest_path = root / "pack.toml"
    if not root.is_dir() or not manifest_path.is_file():
        raise ResourceError("not a resource pack (no pack.toml): %s" % root)
    try:
        manifest = tomllib.loads(manifest_path.read_text(encoding="utf-8"))
    except (tomllib.TOMLDecodeError, OSError) as exc:
        raise ResourceError("%s: %s" % (manifest_path, exc)) from exc
    files = manifest.get("files", {})

    def path_of(key, default):
        return root / files.get(key, default)

    pos_inventory = tuple(manifest.get("pos", DEFAULT_POS))
    try:
        triforms = morphology.load_triforms(path_of("triforms", "triforms.txt"))
        src_morph = morphology.load_cascades(
            path_of("source_morphology", "src-morph.msc"), cache=cache
        )
        tgt_morph = morphology.load_cascades(
            path_of("target_morphology", "tgt-morph.msc"), cache=cache
        )
        rules = transforms.load_rules(
            path_of("transforms", "transforms.mst"), pos_inventory
        )
        lex = lexicon_mod.load_lexicon(path_of("lexicon", "lexicon.sgl"), pos_inventory)
    except FileNotFoundError as exc:
        raise ResourceError("missing resource file: %s" % exc.filename) from exc
    except (
        morphology.MorphError,
        transforms.TransformError,
        lexicon_mod.LexiconError,
    ) as exc:
        raise ResourceError(str(exc)) from exc
    feature_inventory = set()
    features_path = path_of("features", "features.txt")
    if features_path.is_file():
        for line in features_path.read_text(encoding="utf-8").splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                feature_inventory.add(line)
    return ResourcePack(
        name=manifest.get("name", root.name),
        source_lang=manifest.get("source", "ES"),
        target_lang=manifest.get("target", "GN"),
        pos_inventory=pos_inventory,
        lexicon=lex,
        rules=rules,
        src_morph=src_morph,
        tgt_morph=tgt_morph,
        triforms=triforms,
        feature_inventory=feature_inventory,
        root=root,
    )
