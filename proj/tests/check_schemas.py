#!/usr/bin/env python3
# Copyright 2026 The mlcompat Authors
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

"""Validates CLI JSON output and shipped data files against schemas/."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource


def main():
    cli, root = sys.argv[1], pathlib.Path(sys.argv[2])
    schemas = {p.name: json.loads(p.read_text()) for p in (root / "schemas").glob("*.schema.json")}
    registry = Registry().with_resources(
        (name, Resource.from_contents(s)) for name, s in schemas.items())
    failures = 0

    def check(schema, instance, what):
        nonlocal failures
        cls = jsonschema.validators.validator_for(schemas[schema])
        cls.check_schema(schemas[schema])
        errors = list(cls(schemas[schema], registry=registry).iter_errors(instance))
        for e in errors:
            print(f"FAIL {what}: {e.message} at {list(e.absolute_path)}")
        if not errors:
            print(f"ok   {what}")
        failures += bool(errors)

    def run(*args):
        out = subprocess.run([cli, *map(str, args)], check=True, capture_output=True, text=True)
        return out.stdout

    check("ruleset.schema.json", json.loads((root / "data/julia_legacy_rules.json").read_text()),
          "data/julia_legacy_rules.json")
    check("manifest_list.schema.json", json.loads((root / "data/registry.json").read_text()),
          "data/registry.json")
    check("manifest_list.schema.json", json.loads(run("manifest", "--list", "--json")),
          "manifest --list --json")
    for name in ("max", "graythresh", "nosuchfn"):
        check("manifest_check.schema.json", json.loads(run("manifest", "--check", name, "--json")),
              f"manifest --check {name} --json")

    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        report = tmp / "report.json"
        run("translate", root / "corpus/janus.m", "--out", tmp / "janus.jl", "--report", report)
        check("translation_report.schema.json", json.loads(report.read_text()), "translate --report")
        batch = tmp / "batch.json"
        run("translate", root / "corpus", "--out", tmp / "tree", "--report", batch)
        check("translation_batch.schema.json", json.loads(batch.read_text()),
              "translate <dir> --report")

        for group, blobs in (("a", 3), ("b", 8)):
            for k in range(2):
                img = tmp / "wells" / group / f"r{k}.pgm"
                img.parent.mkdir(parents=True, exist_ok=True)
                check("synth.schema.json",
                      json.loads(run("synth", "--out", img, "--blobs", blobs, "--seed", k + 7,
                                     "--json")),
                      f"synth {group}/r{k}")
        check("janus.schema.json", json.loads(run("janus", tmp / "wells/a/r0.pgm", "--json")),
              "janus --json")
        check("janus2.schema.json", json.loads(run("janus2", tmp / "wells", "--json")),
              "janus2 --json")

        jsonl = tmp / "bench.jsonl"
        run("bench", "--iterations", 1, "--mat-mul-n", 40, "--mat-stat-trials", 50, "--out", jsonl)
        lines = jsonl.read_text().splitlines()
        if len(lines) != 7:
            print(f"FAIL bench jsonl: expected 7 records, got {len(lines)}")
            failures += 1
        for line in lines:
            rec = json.loads(line)
            check("bench_record.schema.json", rec, f"bench record {rec.get('name')}")

    print("schemas:", "FAIL" if failures else "PASS")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
