"""Canonical fingerprinting and the file-backed document registry.

Fingerprints digest a canonicalized model+method combination so that
repeat computational attempts can be detected: generated identifiers
(flowchartIds, workflowUnitIds) are replaced by chain-position ordinals
before hashing, so two structurally identical models with differently
generated ids collide intentionally. An optional material identifier is
appended to the canonical form to scope the digest to one material.

The registry stores one document per file under ``<root>/<kind>/<id>.json``
with an ``index.json`` beside them, rebuilt from disk when missing.
Writes are atomic (write-temp-then-rename); the layout supports a single
writer with any number of readers. Concurrent writers from separate
processes must be serialized externally.
"""

from __future__ import annotations

import hashlib
import json
import os
import uuid
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Iterable

from .documents import (
    Entity,
    dumps_canonical,
    from_document,
    kind_of,
    parse_any,
    serialize_document,
    to_document,
    validate_entity,
)
from .entities import CompoundModel, EntityKind, Fingerprint, Method, UnitModel
from .errors import (
    DuplicateFingerprintError,
    NotFoundError,
    UnknownFilterError,
    ValidationError,
)
from .taxonomy import TaxonomyTree

ENV_REGISTRY_ROOT = "CATECOM_REGISTRY"

_MATERIAL_SEPARATOR = b"\x00material\x00"


def _ordinal_unit_model(u: UnitModel, ordinal: str) -> UnitModel:
    return replace(u, flowchart_id=ordinal)


def _fingerprint_entity(entity: UnitModel | CompoundModel):
    """Rewrite generated identifiers as chain-position ordinals."""
    if isinstance(entity, UnitModel):
        return _ordinal_unit_model(entity, "0")
    nodes = entity.ordered_nodes()
    fid_ordinal = {n.flowchart_id: str(i) for i, n in enumerate(nodes)}
    wu_ordinal: dict[str, str] = {}
    for n in nodes:
        wu_ordinal.setdefault(n.workflow_unit_id, str(len(wu_ordinal)))
    new_nodes = tuple(
        replace(
            n,
            flowchart_id=fid_ordinal[n.flowchart_id],
            next=fid_ordinal[n.next] if n.next is not None else None,
            workflow_unit_id=wu_ordinal[n.workflow_unit_id],
        )
        for n in nodes
    )
    new_units = {
        fid_ordinal[fid]: _ordinal_unit_model(u, fid_ordinal[fid])
        for fid, u in entity.units.items()
        if fid in fid_ordinal
    }
    return CompoundModel(new_nodes, entity.method, new_units)


def fingerprint(
    entity: UnitModel | CompoundModel, material: str | None = None
) -> Fingerprint:
    """Deterministic digest of a canonicalized model+method combination.

    Invariant under ``_id`` injection, flowchartId renaming, and extras
    reordering; sensitive to any category, tag, functional, or method
    parameter change.
    """
    if not isinstance(entity, (UnitModel, CompoundModel)):
        raise TypeError("fingerprint applies to unit and compound models")
    form = dumps_canonical(to_document(_fingerprint_entity(entity)))
    if material is not None:
        form += _MATERIAL_SEPARATOR + material.encode("utf-8")
    return Fingerprint(hashlib.sha256(form).hexdigest(), form)


@dataclass(frozen=True)
class IndexEntry:
    """Searchable facets of one stored document."""

    id: str
    kind: EntityKind
    file: str
    fingerprint: str | None
    slug: str | None
    tags: tuple[str, ...]
    category_prefixes: tuple[str, ...]
    search_texts: tuple[str, ...]


@dataclass
class RegistryIndex:
    by_id: dict[str, IndexEntry] = field(default_factory=dict)
    by_tag: dict[str, set[str]] = field(default_factory=dict)
    by_category_prefix: dict[str, set[str]] = field(default_factory=dict)
    by_fingerprint: dict[str, str] = field(default_factory=dict)

    def add(self, entry: IndexEntry) -> None:
        self.by_id[entry.id] = entry
        for tag in entry.tags:
            self.by_tag.setdefault(tag, set()).add(entry.id)
        for prefix in entry.category_prefixes:
            self.by_category_prefix.setdefault(prefix, set()).add(entry.id)
        if entry.fingerprint is not None:
            owner = self.by_fingerprint.get(entry.fingerprint)
            # Smallest id owns the digest: deterministic under rebuild.
            if owner is None or entry.id < owner:
                self.by_fingerprint[entry.fingerprint] = entry.id

    def __eq__(self, other) -> bool:
        if not isinstance(other, RegistryIndex):
            return NotImplemented
        return (
            self.by_id == other.by_id
            and self.by_tag == other.by_tag
            and self.by_category_prefix == other.by_category_prefix
            and self.by_fingerprint == other.by_fingerprint
        )


def _entity_facets(entity: Entity) -> tuple[str | None, list[str], list[str], list[str]]:
    """(slug, tags, category prefixes, search texts) of an entity."""
    if isinstance(entity, UnitModel):
        prefixes = [p.joined() for p in entity.categories.prefixes()]
        texts = []
        if entity.method is not None:
            text = entity.method.data.get("searchText")
            if isinstance(text, str):
                texts.append(text)
        return entity.slug, list(entity.tags), prefixes, texts
    if isinstance(entity, CompoundModel):
        tags: list[str] = []
        prefixes = []
        texts = []
        text = entity.method.data.get("searchText")
        if isinstance(text, str):
            texts.append(text)
        for fid in sorted(entity.units):
            unit = entity.units[fid]
            tags.extend(t for t in unit.tags if t not in tags)
            for p in unit.categories.prefixes():
                joined = p.joined()
                if joined not in prefixes:
                    prefixes.append(joined)
            if unit.method is not None:
                unit_text = unit.method.data.get("searchText")
                if isinstance(unit_text, str) and unit_text not in texts:
                    texts.append(unit_text)
        return None, tags, prefixes, texts
    if isinstance(entity, Method):
        text = entity.data.get("searchText")
        texts = [text] if isinstance(text, str) else []
        return None, [], [], texts
    raise TypeError(f"not an entity: {type(entity).__name__}")


def _derive_entry(entry_id: str, entity: Entity, file: str) -> IndexEntry:
    kind = kind_of(entity)
    digest = None
    if isinstance(entity, (UnitModel, CompoundModel)):
        digest = fingerprint(entity).digest
    slug, tags, prefixes, texts = _entity_facets(entity)
    return IndexEntry(
        id=entry_id,
        kind=kind,
        file=file,
        fingerprint=digest,
        slug=slug,
        tags=tuple(tags),
        category_prefixes=tuple(prefixes),
        search_texts=tuple(texts),
    )


@dataclass(frozen=True)
class StoreResult:
    """Outcome of one store: the assigned id and, when the fingerprint
    was already present, the id it was first stored under."""

    id: str
    duplicate_of: str | None = None


_FILTER_KEYS = ("tag", "categoryPrefix", "slug", "searchText")

_INDEX_VERSION = 1


class Registry:
    """File-backed store over entity documents with facet indices."""

    def __init__(self, root: str | Path | None = None, autoflush: bool = True):
        if root is None:
            root = os.environ.get(ENV_REGISTRY_ROOT)
        if root is None:
            raise ValueError(
                f"no registry root given and {ENV_REGISTRY_ROOT} is not set"
            )
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.autoflush = autoflush
        index_file = self.root / "index.json"
        if index_file.exists():
            self._index = self._load_index(index_file)
        else:
            self._index = self.rebuild_index()
            self.flush()

    # -- persistence ---------------------------------------------------

    def _index_path(self) -> Path:
        return self.root / "index.json"

    def _doc_path(self, kind: EntityKind, entry_id: str) -> Path:
        return self.root / kind.value / f"{entry_id}.json"

    @staticmethod
    def _atomic_write(path: Path, data: bytes) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + f".tmp-{os.getpid()}")
        tmp.write_bytes(data)
        os.replace(tmp, path)

    def flush(self) -> None:
        """Write the index file; call after deferred (autoflush=False) stores."""
        entries = {}
        for entry_id in sorted(self._index.by_id):
            e = self._index.by_id[entry_id]
            entries[entry_id] = {
                "kind": e.kind.value,
                "file": e.file,
                "fingerprint": e.fingerprint,
                "slug": e.slug,
                "tags": list(e.tags),
                "categoryPrefixes": list(e.category_prefixes),
                "searchTexts": list(e.search_texts),
            }
        doc = {"version": _INDEX_VERSION, "entries": entries}
        self._atomic_write(
            self._index_path(),
            json.dumps(doc, ensure_ascii=False, indent=1).encode("utf-8"),
        )

    def _load_index(self, path: Path) -> RegistryIndex:
        doc = json.loads(path.read_text(encoding="utf-8"))
        index = RegistryIndex()
        for entry_id, e in doc.get("entries", {}).items():
            index.add(
                IndexEntry(
                    id=entry_id,
                    kind=EntityKind(e["kind"]),
                    file=e["file"],
                    fingerprint=e["fingerprint"],
                    slug=e["slug"],
                    tags=tuple(e["tags"]),
                    category_prefixes=tuple(e["categoryPrefixes"]),
                    search_texts=tuple(e["searchTexts"]),
                )
            )
        return index

    def rebuild_index(self) -> RegistryIndex:
        """Re-derive the index from the documents on disk."""
        index = RegistryIndex()
        for kind in EntityKind:
            directory = self.root / kind.value
            if not directory.is_dir():
                continue
            for doc_file in sorted(directory.glob("*.json")):
                entry_id = doc_file.stem
                entity = from_document(
                    json.loads(doc_file.read_text(encoding="utf-8")), kind
                )
                rel = str(doc_file.relative_to(self.root))
                index.add(_derive_entry(entry_id, entity, rel))
        return index

    @property
    def index(self) -> RegistryIndex:
        return self._index

    # -- operations ----------------------------------------------------

    def store(
        self,
        entity: Entity | dict | bytes | str,
        entry_id: str | None = None,
        *,
        reject_duplicates: bool = False,
        taxonomy: TaxonomyTree | None = None,
    ) -> StoreResult:
        """Validate and persist an entity document.

        A duplicate fingerprint yields a result carrying the existing id
        while storage proceeds, unless ``reject_duplicates`` is set, in
        which case nothing is written and DuplicateFingerprintError is
        raised.
        """
        if isinstance(entity, (bytes, str)):
            entity = parse_any(entity)
        elif isinstance(entity, dict):
            from .documents import sniff_kind

            entity = from_document(entity, sniff_kind(entity))
        violations = validate_entity(entity, taxonomy=taxonomy)
        if violations:
            raise ValidationError(violations, "refusing to store invalid entity")
        kind = kind_of(entity)
        if entry_id is None:
            entry_id = str(uuid.uuid4())
        rel = f"{kind.value}/{entry_id}.json"
        entry = _derive_entry(entry_id, entity, rel)
        duplicate_of = None
        if entry.fingerprint is not None:
            owner = self._index.by_fingerprint.get(entry.fingerprint)
            if owner is not None and owner != entry_id:
                if reject_duplicates:
                    raise DuplicateFingerprintError(entry.fingerprint, owner)
                duplicate_of = owner
        self._atomic_write(self._doc_path(kind, entry_id), serialize_document(entity))
        self._index.add(entry)
        if self.autoflush:
            self.flush()
        return StoreResult(entry_id, duplicate_of)

    def load(self, entry_id: str) -> bytes:
        """The stored document, byte-identical to what was written."""
        entry = self._index.by_id.get(entry_id)
        if entry is None:
            raise NotFoundError(f"no document with id {entry_id!r}")
        return (self.root / entry.file).read_bytes()

    def load_entity(self, entry_id: str) -> Entity:
        entry = self._index.by_id.get(entry_id)
        if entry is None:
            raise NotFoundError(f"no document with id {entry_id!r}")
        return from_document(
            json.loads(self.load(entry_id).decode("utf-8")), entry.kind
        )

    def ids(self) -> list[str]:
        return sorted(self._index.by_id)

    def query(self, **filters: str) -> list[str]:
        """Ids of documents satisfying a conjunction of filters.

        Supported keys: ``tag``, ``categoryPrefix``, ``slug``,
        ``searchText`` (substring). An empty conjunction matches all.
        """
        unknown = sorted(set(filters) - set(_FILTER_KEYS))
        if unknown:
            raise UnknownFilterError(
                f"unknown filter key {unknown[0]!r}; supported: "
                + ", ".join(_FILTER_KEYS)
            )
        result: set[str] | None = None

        def narrow(ids: Iterable[str]):
            nonlocal result
            ids = set(ids)
            result = ids if result is None else result & ids

        if "tag" in filters:
            narrow(self._index.by_tag.get(filters["tag"], set()))
        if "categoryPrefix" in filters:
            prefix = filters["categoryPrefix"].strip("/")
            narrow(self._index.by_category_prefix.get(prefix, set()))
        if "slug" in filters:
            narrow(
                e.id
                for e in self._index.by_id.values()
                if e.slug == filters["slug"]
            )
        if "searchText" in filters:
            needle = filters["searchText"]
            narrow(
                e.id
                for e in self._index.by_id.values()
                if any(needle in text for text in e.search_texts)
            )
        if result is None:
            return self.ids()
        return sorted(result)
