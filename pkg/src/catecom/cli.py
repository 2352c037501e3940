"""Command-line surface.

Every subcommand is a thin adapter over one library operation. Reports
go to standard output, diagnostics to standard error. Exit codes are
uniform: 0 success, 1 domain violation, 2 input or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import builder, interop, methods, registry, taxonomy, triples
from .documents import (
    parse_any,
    serialize_document,
    validate_entity,
)
from .entities import (
    CategoryPath,
    CompoundModel,
    EntityKind,
    UnitModel,
    ValidationProfile,
)
from .errors import (
    AmbiguityError,
    CatecomError,
    DocumentSyntaxError,
    NoMatchError,
    SchemaError,
    Violation,
)
from .registry import Registry
from .taxonomy import Feature, builtin_taxonomy, load_taxonomy_extension


def _load_taxonomy(args) -> taxonomy.TaxonomyTree:
    if getattr(args, "taxonomy_extra", None):
        return load_taxonomy_extension(args.taxonomy_extra)
    return builtin_taxonomy()


def _collect_violations(
    entity, tree, profile: ValidationProfile = ValidationProfile.STRICT
) -> list[Violation]:
    violations = validate_entity(entity, taxonomy=tree, profile=profile)
    if isinstance(entity, UnitModel):
        violations.extend(taxonomy.validate_tags(entity))
    elif isinstance(entity, CompoundModel):
        for fid in sorted(entity.units):
            for v in taxonomy.validate_tags(entity.units[fid]):
                violations.append(
                    Violation(f"/units/{fid}{v.path}", v.rule_id, v.message)
                )
    return violations


def _cmd_validate(args) -> int:
    tree = _load_taxonomy(args)
    profile = ValidationProfile(args.profile)
    parse_failed = False
    any_violation = False
    for filename in sorted(args.files):
        try:
            entity = parse_any(Path(filename).read_bytes())
        except (DocumentSyntaxError, SchemaError, OSError) as exc:
            print(f"{filename}: {exc}", file=sys.stderr)
            parse_failed = True
            continue
        for v in _collect_violations(entity, tree, profile):
            print(v.render(filename))
            any_violation = True
    if parse_failed:
        return 2
    return 1 if any_violation else 0


def _cmd_classify(args) -> int:
    try:
        path = taxonomy.classify(args.feature or [])
    except AmbiguityError as exc:
        print(f"ambiguous: {', '.join(exc.candidates)}", file=sys.stderr)
        return 1
    except NoMatchError:
        print("no match", file=sys.stderr)
        return 1
    print(path.joined())
    return 0


def _parse_kv(pairs, option) -> dict[str, str]:
    mapping = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise ValueError(f"{option} expects KEY=VALUE, got {pair!r}")
        key, _, value = pair.partition("=")
        mapping[key] = value
    return mapping


def _cmd_new(args) -> int:
    tree = _load_taxonomy(args)
    method = None
    if args.method:
        raw = Path(args.method).read_bytes()
        from .documents import parse_document

        method = parse_document(raw, EntityKind.METHOD)
        if args.flavor:
            if not args.flavor_defaults:
                raise ValueError("--flavor requires --flavor-defaults")
            defaults = methods.load_flavor_defaults(args.flavor_defaults)
            if args.flavor not in defaults:
                raise ValueError(f"unknown flavor {args.flavor!r}")
            kept = methods.diff_against_defaults(
                method.parameters, defaults[args.flavor]
            )
            from dataclasses import replace

            kept_keys = {p.key for p in kept}
            method = replace(
                method,
                parameters=tuple(kept),
                precision=tuple(k for k in method.precision if k in kept_keys),
            )
    model = builder.build_unit_model(
        CategoryPath.from_string(args.category),
        args.name,
        args.slug,
        args.flowchart_id,
        functional=args.functional,
        tags=args.tag or [],
        augmentations=args.augmentation or [],
        modifiers=args.modifier or [],
        references=args.reference or [],
        method=method,
        taxonomy=tree,
    )
    sys.stdout.buffer.write(serialize_document(model))
    return 0


def _cmd_compose(args) -> int:
    from .documents import parse_document

    unit_models = [
        parse_document(Path(f).read_bytes(), EntityKind.UNIT_MODEL)
        for f in args.unit
    ]
    mapping = _parse_kv(args.map, "--map")
    method = parse_document(Path(args.method).read_bytes(), EntityKind.METHOD)
    compound = builder.compose_compound_model(unit_models, mapping, method)
    sys.stdout.buffer.write(serialize_document(compound))
    return 0


def _cmd_fingerprint(args) -> int:
    tree = _load_taxonomy(args)
    entity = parse_any(Path(args.file).read_bytes())
    violations = _collect_violations(entity, tree)
    if violations:
        for v in violations:
            print(v.render(args.file), file=sys.stderr)
        return 1
    print(registry.fingerprint(entity, material=args.material).digest)
    return 0


def _open_registry(args) -> Registry:
    return Registry(args.registry)


def _cmd_store(args) -> int:
    reg = _open_registry(args)
    tree = _load_taxonomy(args)
    entity = parse_any(Path(args.file).read_bytes())
    result = reg.store(
        entity,
        args.id,
        reject_duplicates=args.reject_duplicates,
        taxonomy=tree,
    )
    if result.duplicate_of is not None:
        print(
            f"warning: duplicate fingerprint, first stored as {result.duplicate_of}",
            file=sys.stderr,
        )
    print(result.id)
    return 0


def _cmd_query(args) -> int:
    reg = _open_registry(args)
    filters = _parse_kv(args.where, "--where")
    if args.tag:
        filters["tag"] = args.tag
    if args.category:
        filters["categoryPrefix"] = args.category
    if args.slug:
        filters["slug"] = args.slug
    if args.search:
        filters["searchText"] = args.search
    for entry_id in reg.query(**filters):
        print(entry_id)
    return 0


def _cmd_trace(args) -> int:
    doc = interop.load_binding_document(args.binding)
    records = interop.records_from_document(doc)
    trace = sorted(
        (r for r in records if r.name == args.property), key=lambda r: r.order
    )
    for r in trace:
        print(f"{r.order}\t{r.source_flowchart_id}\t{r.source_workflow_unit_id}")
    return 0


def _cmd_export(args) -> int:
    tree = _load_taxonomy(args)
    entity = parse_any(Path(args.file).read_bytes())
    violations = _collect_violations(entity, tree)
    if violations:
        for v in violations:
            print(v.render(args.file), file=sys.stderr)
        return 1
    statements = triples.export_triples(entity, base_iri=args.base_iri)
    if args.format == "json":
        sys.stdout.write(triples.to_json(statements))
    else:
        sys.stdout.write(triples.to_ntriples(statements))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catecom",
        description="Categorize, validate, fingerprint, and store "
        "computational-model metadata.",
    )
    parser.add_argument(
        "--registry",
        default=None,
        help=f"registry root (default: ${registry.ENV_REGISTRY_ROOT})",
    )
    parser.add_argument(
        "--taxonomy-extra", default=None, help="taxonomy extension file"
    )
    parser.add_argument(
        "--flavor-defaults", default=None, help="flavor defaults file"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate entity documents")
    p.add_argument("files", nargs="+")
    p.add_argument(
        "--profile",
        choices=[m.value for m in ValidationProfile],
        default=ValidationProfile.STRICT.value,
    )
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("classify", help="classify a feature set")
    p.add_argument(
        "--feature",
        action="append",
        choices=[f.value for f in Feature],
        metavar="FEATURE",
    )
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("new", help="build a unit model document")
    p.add_argument("--category", required=True, help="slash-joined category path")
    p.add_argument("--name", required=True)
    p.add_argument("--slug", required=True)
    p.add_argument("--flowchart-id", required=True)
    p.add_argument("--functional", default=None)
    p.add_argument("--tag", action="append")
    p.add_argument("--modifier", action="append")
    p.add_argument("--augmentation", action="append")
    p.add_argument("--reference", action="append")
    p.add_argument("--method", default=None, help="method document to embed")
    p.add_argument("--flavor", default=None, help="diff method parameters "
                   "against this flavor's defaults")
    p.set_defaults(func=_cmd_new)

    p = sub.add_parser("compose", help="compose a compound model document")
    p.add_argument("--unit", action="append", required=True,
                   help="unit model file, in chain order")
    p.add_argument("--map", action="append", required=True,
                   metavar="FLOWCHARTID=WORKFLOWUNITID")
    p.add_argument("--method", required=True, help="global method document")
    p.set_defaults(func=_cmd_compose)

    p = sub.add_parser("fingerprint", help="print an entity's digest")
    p.add_argument("file")
    p.add_argument("--material", default=None, help="material identifier")
    p.set_defaults(func=_cmd_fingerprint)

    p = sub.add_parser("store", help="store a document in the registry")
    p.add_argument("file")
    p.add_argument("--id", default=None)
    p.add_argument("--reject-duplicates", action="store_true")
    p.set_defaults(func=_cmd_store)

    p = sub.add_parser("query", help="query the registry")
    p.add_argument("--tag", default=None)
    p.add_argument("--category", default=None)
    p.add_argument("--slug", default=None)
    p.add_argument("--search", default=None)
    p.add_argument("--where", action="append", metavar="KEY=VALUE")
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("trace", help="trace a property across the chain")
    p.add_argument("binding", help="exported binding document")
    p.add_argument("--property", required=True)
    p.set_defaults(func=_cmd_trace)

    p = sub.add_parser("export", help="export an entity as triples")
    p.add_argument("file")
    p.add_argument("--format", choices=["ntriples", "json"], default="ntriples")
    p.add_argument("--base-iri", default=triples.DEFAULT_BASE_IRI)
    p.set_defaults(func=_cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DocumentSyntaxError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, UnicodeDecodeError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CatecomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
