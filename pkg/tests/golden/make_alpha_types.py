"""Regenerate alpha_types.json from a string-level oracle.

The oracle works on fully bracketed type strings and shares no code with
the package: it has its own tokenizer and its own plus/minus clauses.

    python3 tests/golden/make_alpha_types.py
"""

import json
import pathlib
import re

TYPES = [
    "N", "N->N", "N*N", "(N->N)->N", "N->N->N", "N*N->N", "N->N*N", "(N->N)*N",
    "N*(N->N)", "((N->N)->N)->N", "(N->N)->N->N", "(N*N->N)->N*N",
]


def parse(text):
    tokens = re.findall(r"N|->|\*|\(|\)", text.replace(" ", ""))
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        pos += 1
        return tokens[pos - 1]

    def atom():
        if take() == "(":
            t = arrow()
            assert take() == ")"
            return t
        return "N"

    def product():
        t = atom()
        while peek() == "*":
            take()
            t = ("*", t, atom())
        return t

    def arrow():
        t = product()
        if peek() == "->":
            take()
            return ("->", t, arrow())
        return t

    out = arrow()
    assert pos == len(tokens), text
    return out


def show(t):
    return t if t == "N" else f"({show(t[1])}{t[0]}{show(t[2])})"


def plus(t):
    if t == "N":
        return "N"
    op, a, b = t
    if op == "*":
        return ("*", plus(a), plus(b))
    return ("*", ("->", plus(a), plus(b)),
            ("->", plus(a), ("->", plus(a), ("->", minus(b), minus(a)))))


def minus(t):
    if t == "N":
        return "N"
    op, a, b = t
    if op == "*":
        return ("*", ("*", minus(a), minus(b)), "N")
    return ("*", plus(a), minus(b))


if __name__ == "__main__":
    table = {src: {"plus": show(plus(parse(src))), "minus": show(minus(parse(src)))}
             for src in TYPES}
    path = pathlib.Path(__file__).with_name("alpha_types.json")
    path.write_text(json.dumps(table, indent=2) + "\n")
    print(f"wrote {len(table)} entries to {path}")
