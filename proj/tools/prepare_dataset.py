#!/usr/bin/env python3
# Copyright 2026 The JRR Authors
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
"""Turns raw public datasets into the bit-lines cohort format.

Each output line is the ASCII digit 0 or 1 for one contributor, LF
terminated, in input order. Three reductions cover the usual sources:

  transactions  one record per line of whitespace-separated item ids
                (e.g. a click-stream); bit = record contains --item.
                With --sample-items K, K items are drawn with --seed and
                one file per item is written into --out-dir.
  threshold     CSV column compared against --threshold
                (e.g. review stars >= 4).
  equals        CSV column equal to --value (e.g. a census attribute).

Optional --limit N keeps a seeded random subset of N records.
"""

import argparse
import collections
import csv
import pathlib
import random
import sys


def read_transactions(path):
    with open(path, encoding="utf-8") as handle:
        return [set(line.split()) for line in handle if line.strip()]


def read_column(path, column):
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or column not in reader.fieldnames:
            sys.exit(f"{path}: no column named {column!r}")
        return [row[column] for row in reader]


def subsample(records, limit, seed):
    if limit is None or limit >= len(records):
        return records
    rng = random.Random(seed)
    keep = sorted(rng.sample(range(len(records)), limit))
    return [records[i] for i in keep]


def write_bits(path, bits):
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="ascii", newline="\n") as handle:
        handle.writelines("1\n" if bit else "0\n" for bit in bits)
    ones = sum(bits)
    print(f"{path}: n={len(bits)} n1={ones} ratio={ones / max(1, len(bits)):.4f}")


def main():
    parser = argparse.ArgumentParser(description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("mode", choices=["transactions", "threshold", "equals"])
    parser.add_argument("input")
    parser.add_argument("--out", help="output bit-lines file")
    parser.add_argument("--out-dir", help="output directory for --sample-items")
    parser.add_argument("--item", help="target item id (transactions)")
    parser.add_argument("--sample-items", type=int,
                        help="draw this many target items at random (transactions)")
    parser.add_argument("--min-support", type=int, default=1,
                        help="only sample items occurring in at least this many records")
    parser.add_argument("--column", help="CSV column (threshold / equals)")
    parser.add_argument("--threshold", type=float)
    parser.add_argument("--value")
    parser.add_argument("--limit", type=int, help="keep a random subset of this many records")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if args.mode == "transactions":
        records = subsample(read_transactions(args.input), args.limit, args.seed)
        if args.sample_items:
            if not args.out_dir:
                parser.error("--sample-items needs --out-dir")
            support = collections.Counter(item for record in records for item in record)
            candidates = sorted(item for item, count in support.items()
                                if count >= args.min_support)
            if len(candidates) < args.sample_items:
                parser.error("not enough items meet --min-support")
            rng = random.Random(args.seed)
            for item in rng.sample(candidates, args.sample_items):
                write_bits(pathlib.Path(args.out_dir) / f"item_{item}.txt",
                           [item in record for record in records])
            return
        if not args.item or not args.out:
            parser.error("transactions needs --item and --out (or --sample-items)")
        write_bits(args.out, [args.item in record for record in records])
        return

    if not args.column or not args.out:
        parser.error(f"{args.mode} needs --column and --out")
    values = subsample(read_column(args.input, args.column), args.limit, args.seed)
    if args.mode == "threshold":
        if args.threshold is None:
            parser.error("threshold needs --threshold")
        bits = []
        for line, raw in enumerate(values, start=2):
            try:
                bits.append(float(raw) >= args.threshold)
            except ValueError:
                sys.exit(f"{args.input}:{line}: not a number: {raw!r}")
        write_bits(args.out, bits)
    else:
        if args.value is None:
            parser.error("equals needs --value")
        write_bits(args.out, [raw.strip() == args.value for raw in values])


if __name__ == "__main__":
    main()
