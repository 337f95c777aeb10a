#!/usr/bin/env python3
# Copyright 2026 The qtail Authors
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

"""Validates config files against the run-config schema; a few known-bad documents must be rejected."""

import json
import sys

import jsonschema

BAD = [
    {"model": "gg1", "plan": {"eps_tot": 1e-3}},
    {"model": "gg1", "gg1": {"arrival": {"kind": "exponential", "rate": -1},
                             "service": {"kind": "deterministic", "value": 0}, "threshold_d": 1},
     "plan": {"eps_tot": 1e-3}},
    {"model": "jsq", "gg1": {"arrival": {"kind": "deterministic", "value": 1},
                             "service": {"kind": "deterministic", "value": 0}, "threshold_d": 1},
     "plan": {"eps_tot": 1e-3}},
    {"model": "gg1", "gg1": {"arrival": {"kind": "deterministic", "value": 1},
                             "service": {"kind": "deterministic", "value": 0}, "threshold_d": 1},
     "plan": {"alpha_Q": 0.05}},
]


def main(argv):
    with open(argv[1]) as f:
        schema = json.load(f)
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    for path in argv[2:]:
        with open(path) as f:
            doc = json.load(f)
        errors = list(validator.iter_errors(doc))
        for e in errors:
            print(f"{path}: /{'/'.join(str(p) for p in e.absolute_path)}: {e.message}")
        failures += bool(errors)
    for i, doc in enumerate(BAD):
        if validator.is_valid(doc):
            print(f"known-bad document {i} was accepted")
            failures += 1
    print(f"{len(argv) - 2} configs checked, {failures} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
