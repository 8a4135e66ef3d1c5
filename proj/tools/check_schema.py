#!/usr/bin/env python3
"""Validate a JSON document against one of the schemas in schemas/.

usage: check_schema.py SCHEMA_DIR SCHEMA_NAME [FILE]   (reads stdin without FILE)
"""
import json
import pathlib
import sys

import jsonschema
from referencing import Registry, Resource


def main() -> int:
    schema_dir = pathlib.Path(sys.argv[1])
    registry = Registry()
    schemas = {}
    for path in sorted(schema_dir.glob("*.schema.json")):
        doc = json.loads(path.read_text())
        schemas[path.name] = doc
        registry = registry.with_resource(doc["$id"], Resource.from_contents(doc))
    schema = schemas[sys.argv[2]]
    jsonschema.Draft202012Validator.check_schema(schema)
    text = pathlib.Path(sys.argv[3]).read_text() if len(sys.argv) > 3 else sys.stdin.read()
    errors = list(jsonschema.Draft202012Validator(schema, registry=registry).iter_errors(json.loads(text)))
    for e in errors:
        print(f"{'/'.join(map(str, e.absolute_path))}: {e.message}", file=sys.stderr)
    return 1 if errors else 0


if __name__ == "__main__":
    sys.exit(main())
