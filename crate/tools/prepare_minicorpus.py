#!/usr/bin/env python3
"""Copy the bundled mini-corpus out of the @stdlib/datasets-sotu npm package.

Usage: prepare_minicorpus.py <sotu data dir> <output dir>

State of the Union addresses are works of the U.S. Government and carry no
copyright. Audience reactions such as "[Applause]" are removed and the text,
which arrives as one line per address, is wrapped at 78 columns.
"""
import pathlib
import re
import sys
import textwrap

TRAIN = [
    "1982_ronald_reagan_r", "1983_ronald_reagan_r", "1984_ronald_reagan_r",
    "1985_ronald_reagan_r", "1986_ronald_reagan_r", "1987_ronald_reagan_r",
    "1988_ronald_reagan_r", "1989_george_bush_r",
]
TEST = ["1990_george_bush_r", "1991_george_bush_r", "1992_george_bush_r"]

REACTION = re.compile(r"\s*\[(applause|laughter)\]", re.IGNORECASE)


def main(src: str, dst: str) -> None:
    src_dir, dst_dir = pathlib.Path(src), pathlib.Path(dst)
    for split, names in (("train", TRAIN), ("test", TEST)):
        out = dst_dir / split
        out.mkdir(parents=True, exist_ok=True)
        for name in names:
            text = (src_dir / f"{name}.txt").read_text(encoding="utf-8")
            text = textwrap.fill(REACTION.sub("", text).strip(), width=78, break_long_words=False, break_on_hyphens=False) + "\n"
            (out / f"{name}.txt").write_text(text, encoding="utf-8")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
