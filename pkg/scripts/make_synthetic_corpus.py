"""Write a small deterministic stand-in corpus for exercising ``ppmx bench``.

The files imitate the broad kinds in the usual text-compression corpora
(prose, source code, tabular numbers, binary records, a bitmap) but are
generated, so results are only comparable with each other.

    python3 scripts/make_synthetic_corpus.py /tmp/synth && ppmx bench --corpus /tmp/synth --out /tmp/run
"""

import argparse
import math
import random
import struct
from pathlib import Path

WORDS = ("the of and to a in that is was he for it with as his on be at by had not are but from "
         "or have an they which one you were her all she there would their we him been has when "
         "who will more no if out so said what up its about into than them can only other new "
         "some could time these two may then do first any my now such like our over man me even "
         "most made after also did many before must through back years where much your way well "
         "down should because each just those people how too little state good very make world "
         "still own see men work long get here between both life being under never day same "
         "another know while last might us great old year off come since against go came right "
         "used take three").split()


def prose(rng, n):
    out, sentence = [], 0
    while sum(map(len, out)) < n:
        w = rng.choice(WORDS[:40]) if rng.random() < 0.6 else rng.choice(WORDS)
        if sentence == 0:
            w = w.capitalize()
        sentence += 1
        end = sentence > rng.randint(6, 20)
        out.append(w + (".\n" if end and rng.random() < 0.2 else ". " if end else " "))
        sentence = 0 if end else sentence
    return "".join(out)[:n].encode()


def source(rng, n):
    names = ["count", "buf", "node", "next", "len", "i", "j", "ctx", "sym", "total"]
    out = []
    while sum(map(len, out)) < n:
        a, b = rng.sample(names, 2)
        out.append(rng.choice([
            f"    {a} = {b} + {rng.randint(0, 9)};\n",
            f"    if ({a} < {b}) {{\n        {a}++;\n    }}\n",
            f"    for ({a} = 0; {a} < {b}; {a}++)\n",
            f"int {a}(int {b})\n{{\n",
            "}\n\n",
            f"    return {a};\n",
        ]))
    return "".join(out)[:n].encode()


def numbers(rng, n):
    out, x = [], 0.0
    while sum(map(len, out)) < n:
        x += rng.gauss(0, 1)
        out.append(f"{rng.randint(1, 9999):5d} {x:10.4f} {math.sin(x):8.5f}\n")
    return "".join(out)[:n].encode()


def records(rng, n):
    out = bytearray()
    while len(out) < n:
        out += struct.pack("<IHhf", rng.randrange(1 << 20), rng.randrange(64), rng.randint(-300, 300),
                           rng.random())
    return bytes(out[:n])


def bitmap(rng, n):
    width, out = 216, bytearray()
    while len(out) < n:
        row = bytearray(width)
        for _ in range(rng.randint(0, 3)):
            a = rng.randrange(width)
            row[a:a + rng.randint(1, 40)] = b"\xff" * len(row[a:a + 40])
        out += row
    return bytes(out[:n])


KINDS = {"prose1": (prose, 120_000), "prose2": (prose, 40_000), "code": (source, 40_000),
         "table": (numbers, 60_000), "records": (records, 30_000), "bitmap": (bitmap, 100_000)}


def main():
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("out", type=Path)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--scale", type=float, default=1.0, help="multiply every file size")
    args = p.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for i, (name, (make, size)) in enumerate(sorted(KINDS.items())):
        data = make(random.Random(args.seed * 1000 + i), int(size * args.scale))
        (args.out / name).write_bytes(data)
        print(f"{name:8s} {len(data):8d} bytes")


if __name__ == "__main__":
    main()
