#!/usr/bin/env python3
"""Build a whitespace-tokenized, one-sentence-per-line corpus from the King James
Bible text shipped in the `pythonbible-kjv` wheel (public domain).

Usage: pip download --no-deps pythonbible-kjv==0.0.2 -d /tmp/kjv
       python3 tools/prepare_kjv.py /tmp/kjv/pythonbible_kjv-0.0.2-py3-none-any.whl data/kjv.txt

Verse numbers and italics brackets are removed, punctuation is split off into
separate tokens and lines are broken after sentence- or clause-final marks
(. ? ! ; :) so that the corpus has enough short units for large training sizes.
"""
import re
import sys
import zipfile

VERSE_NUMBER = re.compile(r"(?:(?<=\s)|^)\d+\.\s")
PUNCT = re.compile(r"([,.;:?!()])")
BREAK = re.compile(r"(?<=[.?!;:])\s+")


def main(wheel: str, out: str) -> None:
    with zipfile.ZipFile(wheel) as z:
        src = z.read("pythonbible_kjv/plain_text_bible.py").decode("utf-8")
    body = src.split('"""', 2)[1]
    lines_out = 0
    words = 0
    with open(out, "w", encoding="utf-8") as f:
        for para in body.splitlines():
            para = VERSE_NUMBER.sub(" ", para)
            para = para.replace("[", "").replace("]", "")
            for piece in BREAK.split(para):
                tokens = PUNCT.sub(r" \1 ", piece).split()
                if not tokens:
                    continue
                f.write(" ".join(tokens) + "\n")
                lines_out += 1
                words += len(tokens)
    print(f"{lines_out} sentences, {words} tokens -> {out}", file=sys.stderr)


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    main(sys.argv[1], sys.argv[2])
