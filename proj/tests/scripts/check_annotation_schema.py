#!/usr/bin/env python3
# Copyright 2026 The Forge Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Validates every annotation.json under the given roots against the schema."""

import json
import pathlib
import sys

import jsonschema


def main(argv):
    if len(argv) < 3:
        print("usage: check_annotation_schema.py SCHEMA ROOT...", file=sys.stderr)
        return 2
    schema = json.loads(pathlib.Path(argv[1]).read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    files = sorted(f for root in argv[2:] for f in pathlib.Path(root).rglob("annotation.json"))
    if not files:
        print("no annotation.json found", file=sys.stderr)
        return 1
    failures = 0
    for path in files:
        errors = sorted(validator.iter_errors(json.loads(path.read_text())), key=lambda e: list(e.path))
        for e in errors:
            print(f"{path}: {'/'.join(map(str, e.path))}: {e.message}")
        failures += bool(errors)

    # The schema must also reject what the exporter never writes.
    sample = json.loads(files[0].read_text())
    broken = json.loads(json.dumps(sample))
    broken["parts"][0]["label"] = 7
    if validator.is_valid(broken):
        print("schema accepted a numeric label")
        failures += 1
    broken = json.loads(json.dumps(sample))
    del broken["object"]["uuid"]
    if validator.is_valid(broken):
        print("schema accepted a missing uuid")
        failures += 1

    print(f"{len(files)} annotation(s) checked, {failures} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
