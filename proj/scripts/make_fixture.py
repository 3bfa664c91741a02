#!/usr/bin/env python3
# Copyright 2026 The inverscribe Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Generates the bundled 20-author test fixture (tests/data/fixture_20_authors.jsonl).

Every author has a weak stylistic signature: a handful of preferred words from
the synonym table's key column, a few discourse markers, and habits for
punctuation and casing. Texts only use key-column words (never replacements),
so the table's inverse undoes synonym noise exactly. Besides the 20 qualifying
authors the file holds one author with too few documents and a few documents
outside the 64..128 token window, so ingest filtering has work to do.

Usage: make_fixture.py [--seed N] [--out PATH]
"""

import argparse
import json
import pathlib
import random
import re

ROOT = pathlib.Path(__file__).resolve().parent.parent

FILLER = ("the a an of to in and it is that this with for on at as was have not be are "
          "from by or if just what when there all can would could one some more than "
          "then out up them their our my your his her we they you he she").split()
MARKERS = "tbh imo honestly lol ngl fwiw man dude yeah well hmm ok like seriously literally".split()
ENDINGS = [".", "!", "...", "?", ";"]

TOKEN_RE = re.compile(r"[\w]+(?:['’][\w]+)*|[^\w\s]")


def table_keys():
    keys, values = [], set()
    for line in (ROOT / "data" / "synonyms.tsv").read_text().splitlines():
        if not line or line.startswith("#"):
            continue
        k, v = line.split("\t")
        keys.append(k)
        values.add(v)
    return keys, values


def count_tokens(text):
    return len(TOKEN_RE.findall(text))


class Author:
    def __init__(self, idx, rng, keys, sig_weight):
        self.id = f"author_{idx:02d}"
        self.rng = rng
        self.keys = keys
        self.sig_keys = rng.sample(keys, 10)
        self.markers = rng.sample([m for m in MARKERS if m not in keys], 2)
        self.ending = rng.choice(ENDINGS)
        self.alt_ending = rng.choice(ENDINGS)
        self.capitalize = rng.random() < 0.6
        self.lower_i = rng.random() < 0.5
        self.shout = rng.random() < 0.3
        self.comma_rate = rng.uniform(0.02, 0.12)
        self.sig_weight = sig_weight

    def word(self):
        r = self.rng.random()
        if r < self.sig_weight:
            w = self.rng.choice(self.sig_keys)
        elif r < self.sig_weight + 0.40:
            w = self.rng.choice(self.keys)
        elif r < self.sig_weight + 0.45:
            w = self.rng.choice(self.markers)
        else:
            w = self.rng.choice(FILLER)
        if self.shout and self.rng.random() < 0.04:
            w = w.upper()
        return w

    def sentence(self):
        n = self.rng.randint(7, 15)
        words = [self.word() for _ in range(n)]
        if self.rng.random() < 0.3:
            words.insert(self.rng.randrange(len(words)), "i" if self.lower_i else "I")
        out = []
        for i, w in enumerate(words):
            out.append(w)
            if 0 < i < len(words) - 1 and self.rng.random() < self.comma_rate:
                out[-1] += ","
        if self.capitalize:
            out[0] = out[0][:1].upper() + out[0][1:]
        end = self.ending if self.rng.random() < 0.8 else self.alt_ending
        return " ".join(out) + end

    def document(self, lo=66, hi=124):
        while True:
            sents = []
            while count_tokens(" ".join(sents)) < lo:
                sents.append(self.sentence())
            text = " ".join(sents)
            if lo <= count_tokens(text) <= hi:
                return text


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=20240607)
    ap.add_argument("--sig-weight", type=float, default=0.12)
    ap.add_argument("--out", default=str(ROOT / "tests" / "data" / "fixture_20_authors.jsonl"))
    args = ap.parse_args()

    rng = random.Random(args.seed)
    keys, values = table_keys()
    assert not (set(FILLER) | set(MARKERS)) & values, "filler must avoid table replacements"

    records = []
    for a in range(20):
        author = Author(a, rng, keys, args.sig_weight)
        for d in range(rng.choice([10, 11, 12])):
            records.append({"id": f"{author.id}_d{d:02d}", "author_id": author.id, "text": author.document()})
        # One document outside the token window, removed by the length filter.
        if a % 7 == 0:
            records.append({"id": f"{author.id}_short", "author_id": author.id, "text": author.sentence()})
    sparse = Author(20, rng, keys, args.sig_weight)
    for d in range(8):
        records.append({"id": f"{sparse.id}_d{d:02d}", "author_id": sparse.id, "text": sparse.document()})
    rng.shuffle(records)

    for r in records:
        words = set(re.findall(r"[a-z']+", r["text"].lower()))
        assert not words & values, f"{r['id']} uses a replacement word"
    out = pathlib.Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w") as f:
        for r in records:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")
    print(f"wrote {len(records)} records to {out}")


if __name__ == "__main__":
    main()
