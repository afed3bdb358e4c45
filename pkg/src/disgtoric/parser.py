"""Plain-text ``.crn`` reaction network format.

One statement per line, ``#`` starts a comment::

    species X Y
    X <-> X + 2Y
    3Y -> Y
    0 -> X

A complex is ``0`` (the empty complex) or a sum of terms ``c*S``, ``cS`` or
``S`` with a positive integer coefficient ``c``. ``->`` adds one reaction,
``<->`` adds both directions. The optional ``species`` line must come first
and fixes the coordinate order; without it species are registered in order of
first use.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from pathlib import Path

from .network import EGraph

ERROR_KINDS = (
    "unknown-token",
    "negative-coefficient",
    "duplicate-edge",
    "self-loop",
    "empty-file",
    "bad-declaration",
)

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<biarrow><->)
  | (?P<arrow>->)
  | (?P<neg>-\s*\d+)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<plus>\+)
  | (?P<star>\*)
  | (?P<empty>∅)
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    def __init__(self, line: int, column: int, kind: str, message: str):
        assert kind in ERROR_KINDS, kind
        self.line = line
        self.column = column
        self.kind = kind
        self.message = message
        super().__init__(f"line {line}, column {column}: {message} [{kind}]")


class DuplicateReactionWarning(UserWarning):
    """A reaction was listed more than once; the repeat is ignored."""


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    col: int  # 1-based


def _tokenize(line: str, lineno: int) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(line):
        m = _TOKEN.match(line, pos)
        if m is None:
            raise ParseError(lineno, pos + 1, "unknown-token",
                             f"unexpected character {line[pos]!r}")
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, m.group(), pos + 1))
        pos = m.end()
    return toks


class _Reader:
    def __init__(self, species: list[str], declared: bool):
        self.species = species
        self.declared = declared

    def species_index(self, tok: _Tok, lineno: int) -> int:
        if tok.text in self.species:
            return self.species.index(tok.text)
        if self.declared:
            raise ParseError(lineno, tok.col, "unknown-token",
                             f"species {tok.text!r} is not declared")
        if tok.text == "species":
            raise ParseError(lineno, tok.col, "bad-declaration",
                             "'species' is reserved and must start the first statement")
        self.species.append(tok.text)
        return len(self.species) - 1

    def complex(self, toks: list[_Tok], lineno: int, end_col: int) -> dict[int, int]:
        if not toks:
            raise ParseError(lineno, end_col, "unknown-token", "missing complex")
        if len(toks) == 1 and (toks[0].kind == "empty" or (toks[0].kind == "int" and toks[0].text == "0")):
            return {}
        coeffs: dict[int, int] = {}
        i = 0
        while True:
            coef = 1
            tok = toks[i] if i < len(toks) else None
            if tok is None:
                raise ParseError(lineno, end_col, "unknown-token", "expected a species term")
            if tok.kind == "neg":
                raise ParseError(lineno, tok.col, "negative-coefficient",
                                 f"coefficient {tok.text!r} is negative")
            if tok.kind == "int":
                coef = int(tok.text)
                if coef == 0:
                    raise ParseError(lineno, tok.col, "negative-coefficient",
                                     "coefficient must be a positive integer")
                i += 1
                if i < len(toks) and toks[i].kind == "star":
                    i += 1
                tok = toks[i] if i < len(toks) else None
                if tok is None:
                    raise ParseError(lineno, end_col, "unknown-token",
                                     "coefficient without a species")
            if tok.kind != "name":
                raise ParseError(lineno, tok.col, "unknown-token", f"unexpected {tok.text!r}")
            idx = self.species_index(tok, lineno)
            coeffs[idx] = coeffs.get(idx, 0) + coef
            i += 1
            if i == len(toks):
                return coeffs
            if toks[i].kind != "plus":
                raise ParseError(lineno, toks[i].col, "unknown-token",
                                 f"expected '+' but found {toks[i].text!r}")
            i += 1


def parse_network(text: str, strict: bool = False) -> EGraph:
    """Parse ``.crn`` text into an :class:`EGraph`.

    Repeated reactions emit :class:`DuplicateReactionWarning` and are kept once;
    with ``strict=True`` they raise ``ParseError`` of kind ``duplicate-edge``.
    """
    species: list[str] = []
    reader = _Reader(species, declared=False)
    raw: list[tuple[dict, dict, int, int]] = []  # (src, tgt, line, col)
    seen_statement = False

    for lineno, line in enumerate(text.splitlines(), start=1):
        code = line.split("#", 1)[0]
        toks = _tokenize(code, lineno)
        if not toks:
            continue
        if toks[0].kind == "name" and toks[0].text == "species" and not (
                len(toks) > 1 and toks[1].kind in ("arrow", "biarrow", "plus")):
            if seen_statement:
                raise ParseError(lineno, toks[0].col, "bad-declaration",
                                 "the species declaration must be the first statement")
            names = toks[1:]
            if not names:
                raise ParseError(lineno, toks[0].col, "bad-declaration",
                                 "empty species declaration")
            for tok in names:
                if tok.kind != "name" or tok.text == "species":
                    raise ParseError(lineno, tok.col, "bad-declaration",
                                     f"invalid species name {tok.text!r}")
                if tok.text in species:
                    raise ParseError(lineno, tok.col, "bad-declaration",
                                     f"species {tok.text!r} declared twice")
                species.append(tok.text)
            reader.declared = True
            seen_statement = True
            continue
        seen_statement = True

        arrows = [i for i, t in enumerate(toks) if t.kind in ("arrow", "biarrow")]
        if len(arrows) != 1:
            col = toks[arrows[1]].col if len(arrows) > 1 else len(code) + 1
            raise ParseError(lineno, col, "unknown-token",
                             "expected exactly one '->' or '<->'")
        a = arrows[0]
        lhs = reader.complex(toks[:a], lineno, toks[a].col)
        rhs = reader.complex(toks[a + 1:], lineno, len(code.rstrip()) + 1)
        if lhs == rhs:
            raise ParseError(lineno, toks[0].col, "self-loop",
                             "reaction has identical source and target")
        raw.append((lhs, rhs, lineno, toks[0].col))
        if toks[a].kind == "biarrow":
            raw.append((rhs, lhs, lineno, toks[0].col))

    if not raw:
        raise ParseError(1, 1, "empty-file", "no reactions found")

    n = len(species)

    def coords(c: dict[int, int]) -> tuple[int, ...]:
        return tuple(c.get(i, 0) for i in range(n))

    reactions = []
    seen = set()
    for lhs, rhs, lineno, col in raw:
        key = (coords(lhs), coords(rhs))
        if key in seen:
            if strict:
                raise ParseError(lineno, col, "duplicate-edge", "reaction listed more than once")
            warnings.warn(f"line {lineno}: duplicate reaction ignored",
                          DuplicateReactionWarning, stacklevel=2)
            continue
        seen.add(key)
        reactions.append(key)
    return EGraph.from_reactions(species, reactions)


def read_network(path, strict: bool = False) -> EGraph:
    return parse_network(Path(path).read_text(encoding="utf-8"), strict=strict)


def format_complex(coords, species) -> str:
    terms = []
    for c, s in zip(coords, species):
        if c == 1:
            terms.append(s)
        elif c > 1:
            terms.append(f"{c}*{s}")
    return " + ".join(terms) if terms else "0"


def serialize_network(g: EGraph) -> str:
    """Canonical text: species line, then one reaction per edge in edge order."""
    lines = ["species " + " ".join(g.species)]
    for k in range(len(g.edges)):
        src, tgt = g.edge_coords(k)
        lines.append(f"{format_complex(src, g.species)} -> {format_complex(tgt, g.species)}")
    return "\n".join(lines) + "\n"
