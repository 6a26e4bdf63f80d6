#!/usr/bin/env python3
"""Builds a replay fixture file from `bqr prompts` output.

Stands in for a chat model: each prompt gets a short preamble and ten
numbered queries made only from the topic and its keywords. Responses are
seeded from the prompt hash so reruns produce identical files.

    bqr prompts ... --methods m2,m3 | python make_fixtures.py -o fixtures.json
"""

import argparse
import json
import random
import sys


def respond(prompt: str, seed: str) -> str:
    topic, keywords = "", []
    for line in prompt.splitlines():
        if line.startswith("Topic:"):
            topic = line[len("Topic:"):].strip()
        elif line.startswith("Keywords:"):
            keywords = [k.strip() for k in line[len("Keywords:"):].split(",") if k.strip()]
    rng = random.Random(int(seed, 16))
    queries = []
    for kw in keywords:
        queries.append(f"{topic} {kw}")
        if len(queries) == 10:
            break
    while len(queries) < 10 and len(keywords) >= 2:
        a, b = rng.sample(keywords, 2)
        q = f"{a} {b}"
        if q not in queries:
            queries.append(q)
        elif rng.random() < 0.2:
            queries.append(f"{topic} {a} {b}")
    lines = ["Here are 10 search queries:", ""]
    lines += [f"{i}. {q}" for i, q in enumerate(queries[:10], 1)]
    return "\n".join(lines)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-o", "--out", required=True)
    args = ap.parse_args()
    fixtures = {}
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        rec = json.loads(line)
        fixtures.setdefault(rec["hash"], respond(rec["prompt"], rec["hash"]))
    with open(args.out, "w") as f:
        json.dump(fixtures, f, indent=1, sort_keys=True)
        f.write("\n")
    print(f"{len(fixtures)} fixtures", file=sys.stderr)


if __name__ == "__main__":
    main()
