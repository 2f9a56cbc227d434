#!/usr/bin/env python3
"""Writes the synthetic name-count sample files in data/."""

import json
import random
from pathlib import Path

ONSETS = ["", "b", "br", "c", "ch", "d", "g", "j", "k", "l", "m", "n", "p", "r", "s", "sh", "t", "th", "v", "w", "z"]
VOWELS = ["a", "e", "i", "o", "u", "ai", "ea", "ia", "y"]
CODAS = ["", "n", "s", "l", "r", "x", "th", "den", "son", "ton", "ley", "an", "el", "iah"]


def name_pool(rng, size):
    names = set()
    while len(names) < size:
        parts = rng.randint(1, 3)
        word = "".join(rng.choice(ONSETS) + rng.choice(VOWELS) for _ in range(parts)) + rng.choice(CODAS)
        if len(word) >= 3:
            names.add(word.capitalize())
    return sorted(names)


def zipf_counts(rng, names, exponent, scale):
    order = names[:]
    rng.shuffle(order)
    return [{"types": n, "counts": max(5, int(scale / (r + 1) ** exponent))} for r, n in enumerate(order)]


def main():
    rng = random.Random(1968)
    pool = name_pool(rng, 6000)
    shared = pool[:2500]
    early = zipf_counts(rng, shared[:2000] + pool[2500:4000], 1.05, 80000)
    late = zipf_counts(rng, shared[500:] + pool[4000:6000], 0.9, 20000)
    out = Path(__file__).resolve().parent.parent / "data"
    out.mkdir(exist_ok=True)
    for name, rows in (("boys_1968.json", early), ("boys_2018.json", late)):
        rows.sort(key=lambda r: (-r["counts"], r["types"]))
        (out / name).write_text(json.dumps(rows, indent=0) + "\n")


if __name__ == "__main__":
    main()
