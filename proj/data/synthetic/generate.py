#!/usr/bin/env python3
"""Regenerates the bundled synthetic corpus, topics, schema and word vectors.

The corpus mimics the shape of a Wikipedia fair-ranking collection at desk
scale: three subject areas, a geography label on most articles and a gender
label on biographies only. Output is deterministic for a given seed.
"""

import argparse
import json
import random
from pathlib import Path

FILLER = ["the", "of", "and", "in", "article", "page", "known", "its", "with", "for"]

# (aspect name, content words, regions, biography?)
DOMAINS = {
    "politics": {
        "core": ["politics", "government", "policy", "state"],
        "aspects": [
            ("general", ["politics", "government", "policy", "parliament", "election", "state"],
             [None, None, None, None, "Northern America"], False),
            ("religion", ["religion", "culture", "social", "influence", "politics", "tradition"],
             ["Eastern Asia", "Southern Asia", "Middle Africa", "South-eastern Asia"], False),
            ("politicians", ["politicians", "liberal", "debate", "political", "party", "minister"],
             ["Northern America", "Oceania", "Northern Europe", None], True),
            ("history", ["history", "political", "matters", "empire", "revolution"],
             ["Western Europe", "Eastern Europe", None], False),
        ],
    },
    "music": {
        "core": ["music", "musical", "sound", "composition"],
        "aspects": [
            ("classical", ["classical", "music", "symphony", "orchestra", "composer", "baroque"],
             ["Western Europe", "Western Europe", "Northern Europe", None], False),
            ("composers", ["bach", "haydn", "violin", "cantata", "composer", "symphony"],
             ["Western Europe", "Eastern Europe"], True),
            ("jazz", ["jazz", "improvisation", "blues", "music", "swing", "saxophone"],
             ["Northern America", "Northern America", "South America", None], True),
            ("concert", ["concert", "recording", "hall", "performance", "compositions", "opera"],
             ["Eastern Asia", "Western Europe", "South America", None], False),
        ],
    },
    "space": {
        "core": ["space", "exploration", "mission", "science"],
        "aspects": [
            ("rockets", ["rocket", "launch", "orbit", "satellite", "space", "exploration"],
             ["Northern America", "Eastern Europe", "Eastern Asia", None], False),
            ("astronauts", ["astronaut", "moon", "mission", "crew", "pilot", "space"],
             ["Northern America", "Eastern Europe", "Western Europe"], True),
            ("telescopes", ["telescope", "observatory", "galaxy", "astronomy", "star", "mars"],
             ["South America", "Southern Asia", "Oceania", None], False),
        ],
    },
}

FIRST_NAMES = {
    "male": ["David", "Carl", "Kevin", "Johann", "Joseph", "Louis", "Yuri", "Neil", "Rakesh", "Miles"],
    "female": ["Alexandra", "Bronwyn", "Karina", "Clara", "Fanny", "Ella", "Valentina", "Sally", "Kalpana", "Nina"],
}
LAST_NAMES = ["Easton", "Ekman", "Clark", "Mende", "Bishop", "Okotel", "Weber", "Lind", "Moreau", "Tanaka",
              "Okafor", "Silva", "Ivanova", "Sharma", "Novak"]


def make_docs(rng: random.Random, per_aspect: int):
    docs = []
    counter = 0
    for domain, spec in DOMAINS.items():
        for aspect, words, regions, bio in spec["aspects"]:
            for i in range(per_aspect):
                counter += 1
                doc_id = f"{domain[:3]}-{aspect[:4]}-{i:02d}"
                region = rng.choice(regions)
                attrs = {}
                if region is not None:
                    # A few articles reference two regions.
                    labels = [region]
                    if rng.random() < 0.15:
                        other = rng.choice([r for r in regions if r and r != region] or [region])
                        if other != region:
                            labels.append(other)
                    attrs["geography"] = labels
                title_words = [rng.choice(words), rng.choice(words)]
                if bio:
                    gender = rng.choice(["male", "female"])
                    name = f"{rng.choice(FIRST_NAMES[gender])} {rng.choice(LAST_NAMES)}"
                    attrs["gender"] = [gender]
                    title = name
                else:
                    title = " ".join(w.capitalize() for w in title_words)
                body = []
                for _ in range(rng.randint(25, 45)):
                    r = rng.random()
                    if r < 0.45:
                        body.append(rng.choice(words))
                    elif r < 0.6:
                        body.append(rng.choice(spec["core"]))
                    else:
                        body.append(rng.choice(FILLER))
                if bio:
                    body = ["biography", "born"] + body
                text = " ".join(body).capitalize() + "."
                docs.append({
                    "doc_id": doc_id,
                    "title": title,
                    "url": f"https://example.org/wiki/{doc_id}",
                    "text": text,
                    "attributes": attrs,
                    "quality": round(rng.random(), 3),
                })
    # Two pages with no attributes field at all.
    docs.append({"doc_id": "misc-00", "title": "Miscellany", "url": "", "text": "Assorted notes and page index."})
    docs.append({"doc_id": "misc-01", "title": "Empty page", "text": ""})
    return docs


def make_vectors(rng: random.Random, dim: int):
    centers = {d: [rng.gauss(0, 1) for _ in range(dim)] for d in DOMAINS}
    vocab = {}
    for domain, spec in DOMAINS.items():
        for aspect, words, _, _ in spec["aspects"]:
            offset = [rng.gauss(0, 0.6) for _ in range(dim)]
            for w in words:
                v = [c + o + rng.gauss(0, 0.25) for c, o in zip(centers[domain], offset)]
                if w in vocab:
                    vocab[w] = [(a + b) / 2 for a, b in zip(vocab[w], v)]
                else:
                    vocab[w] = v
        for w in spec["core"]:
            if w not in vocab:
                vocab[w] = [c + rng.gauss(0, 0.3) for c in centers[domain]]
    for w in FILLER + ["biography", "born"]:
        vocab[w] = [rng.gauss(0, 0.5) for _ in range(dim)]
    return vocab


TOPICS = [
    {"id": "t1", "title": "politics", "keywords": ["Election", "parliament", "religion", "culture"]},
    {"id": "t2", "title": "classical music", "keywords": ["bach", "haydn", "violin", "cantata", "symphony"]},
    {"id": "t3", "title": "space exploration", "keywords": ["rocket", "orbit", "astronaut"]},
    {"id": "t4", "title": "telescope", "keywords": []},
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent)
    ap.add_argument("--seed", type=int, default=20221)
    ap.add_argument("--per-aspect", type=int, default=8)
    ap.add_argument("--dim", type=int, default=16)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    docs = make_docs(rng, args.per_aspect)
    vectors = make_vectors(rng, args.dim)

    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "corpus.jsonl", "w") as f:
        for d in docs:
            f.write(json.dumps(d, ensure_ascii=False) + "\n")
    with open(out / "schema.json", "w") as f:
        json.dump({"dimensions": ["geography", "gender"]}, f, indent=2)
        f.write("\n")
    by_topic = {"t1": "pol-", "t2": "mus-clas", "t3": "spa-rock", "t4": "spa-tele"}
    with open(out / "topics.jsonl", "w") as f:
        for t in TOPICS:
            rel = [d["doc_id"] for d in docs if d["doc_id"].startswith(by_topic[t["id"]])][:5]
            f.write(json.dumps({**t, "relevant_docs": rel}) + "\n")
    with open(out / "embeddings.txt", "w") as f:
        for w in sorted(vectors):
            f.write(w + " " + " ".join(f"{x:.5f}" for x in vectors[w]) + "\n")


if __name__ == "__main__":
    main()
