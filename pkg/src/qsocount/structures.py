"""Finite relational vocabularies and structures.

A structure has an ordered universe {0, ..., n-1} and a named relation per
vocabulary symbol. Structures are immutable after construction and have a
canonical text form (see ``serialize_structure``) that round-trips exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import StructureSyntaxError, StructureValidationError

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Vocabulary:
    """Ordered list of relation symbols with their arities."""

    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        seen = set()
        for name, arity in self.symbols:
            if not _NAME_RE.match(name):
                raise StructureValidationError(f"bad relation name {name!r}")
            if name in seen:
                raise StructureValidationError(f"duplicate relation symbol {name!r}")
            if arity < 1:
                raise StructureValidationError(f"relation {name}: arity must be >= 1, got {arity}")
            seen.add(name)

    def arity(self, name: str) -> int:
        for sym, ar in self.symbols:
            if sym == name:
                return ar
        raise StructureValidationError(f"unknown relation symbol {name!r}")

    def has(self, name: str) -> bool:
        return any(sym == name for sym, _ in self.symbols)


@dataclass(frozen=True)
class Structure:
    """Finite relational structure over an ordered universe of indices."""

    vocabulary: Vocabulary
    universe_size: int
    relations: Mapping[str, frozenset[tuple[int, ...]]]

    def __post_init__(self):
        if self.universe_size < 0:
            raise StructureValidationError("universe size must be >= 0")
        declared = {name for name, _ in self.vocabulary.symbols}
        for name in self.relations:
            if name not in declared:
                raise StructureValidationError(f"relation {name!r} not in vocabulary")
        for name, arity in self.vocabulary.symbols:
            tuples = self.relations.get(name, frozenset())
            for tup in tuples:
                if len(tup) != arity:
                    raise StructureValidationError(
                        f"relation {name}: tuple {tup} has length {len(tup)}, arity is {arity}"
                    )
                for e in tup:
                    if not (0 <= e < self.universe_size):
                        raise StructureValidationError(
                            f"relation {name}: element {e} outside universe 0..{self.universe_size - 1}"
                        )

    def tuples(self, name: str) -> frozenset[tuple[int, ...]]:
        self.vocabulary.arity(name)  # raises on unknown symbol
        return self.relations.get(name, frozenset())


def make_structure(
    universe_size: int,
    relations: Iterable[tuple[str, int, Iterable[tuple[int, ...]]]] = (),
) -> Structure:
    """Convenience constructor: relations as (name, arity, tuples) triples."""
    rels = list(relations)
    vocab = Vocabulary(tuple((name, arity) for name, arity, _ in rels))
    rel_map = {name: frozenset(tuple(t) for t in tups) for name, _, tups in rels}
    return Structure(vocab, universe_size, rel_map)


@dataclass(frozen=True)
class FoAssignment:
    """Binding of first-order variable names to universe elements."""

    bindings: Mapping[str, int] = field(default_factory=dict)

    def check(self, universe_size: int) -> None:
        for var, e in self.bindings.items():
            if not (0 <= e < universe_size):
                raise StructureValidationError(f"assignment {var} -> {e} outside universe")


@dataclass(frozen=True)
class SoAssignment:
    """Binding of second-order variable names to (arity, relation) pairs."""

    bindings: Mapping[str, tuple[int, frozenset[tuple[int, ...]]]] = field(default_factory=dict)

    def check(self, universe_size: int) -> None:
        for var, (arity, tuples) in self.bindings.items():
            for tup in tuples:
                if len(tup) != arity:
                    raise StructureValidationError(
                        f"assignment {var}: tuple {tup} does not match arity {arity}"
                    )
                if any(not (0 <= e < universe_size) for e in tup):
                    raise StructureValidationError(f"assignment {var}: tuple {tup} outside universe")


def parse_structure(text: str) -> Structure:
    """Parse the line-oriented structure format.

    Grammar::

        structure
        universe <n>
        rel <name> <arity>
        <e1> <e2> ... <ek>      # one tuple per line
        end
        ...more rel blocks...
        end

    Lines whose first non-blank character is ``#`` are comments. Raises
    StructureSyntaxError with a line number on malformed input.
    """
    lines: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        lines.append((lineno, stripped))

    pos = 0

    def peek() -> tuple[int, str] | None:
        return lines[pos] if pos < len(lines) else None

    def take() -> tuple[int, str]:
        nonlocal pos
        if pos >= len(lines):
            last = lines[-1][0] if lines else 1
            raise StructureSyntaxError("unexpected end of input", last)
        item = lines[pos]
        pos += 1
        return item

    lineno, header = take()
    if header != "structure":
        raise StructureSyntaxError(f"expected 'structure', got {header!r}", lineno)

    lineno, uline = take()
    parts = uline.split()
    if len(parts) != 2 or parts[0] != "universe":
        raise StructureSyntaxError(f"expected 'universe <n>', got {uline!r}", lineno)
    try:
        n = int(parts[1])
    except ValueError:
        raise StructureSyntaxError(f"universe size {parts[1]!r} is not an integer", lineno)
    if n < 0:
        raise StructureSyntaxError(f"universe size must be >= 0, got {n}", lineno)

    symbols: list[tuple[str, int]] = []
    rel_map: dict[str, frozenset[tuple[int, ...]]] = {}
    while True:
        lineno, line = take()
        if line == "end":
            break
        parts = line.split()
        if len(parts) != 3 or parts[0] != "rel":
            raise StructureSyntaxError(f"expected 'rel <name> <arity>' or 'end', got {line!r}", lineno)
        name = parts[1]
        if not _NAME_RE.match(name):
            raise StructureSyntaxError(f"bad relation name {name!r}", lineno)
        if name in rel_map:
            raise StructureSyntaxError(f"duplicate relation block for {name!r}", lineno)
        try:
            arity = int(parts[2])
        except ValueError:
            raise StructureSyntaxError(f"arity {parts[2]!r} is not an integer", lineno)
        if arity < 1:
            raise StructureSyntaxError(f"arity must be >= 1, got {arity}", lineno)

        tuples: set[tuple[int, ...]] = set()
        while True:
            item = peek()
            if item is None:
                raise StructureSyntaxError("relation block not closed by 'end'", lineno)
            tlineno, tline = take()
            if tline == "end":
                break
            try:
                tup = tuple(int(tok) for tok in tline.split())
            except ValueError:
                raise StructureSyntaxError(f"non-integer element in tuple {tline!r}", tlineno)
            if len(tup) != arity:
                raise StructureSyntaxError(
                    f"tuple length {len(tup)} != arity {arity} of relation {name}", tlineno
                )
            for e in tup:
                if not (0 <= e < n):
                    raise StructureSyntaxError(
                        f"element {e} outside universe 0..{n - 1}", tlineno
                    )
            tuples.add(tup)
        symbols.append((name, arity))
        rel_map[name] = frozenset(tuples)

    if peek() is not None:
        lineno, line = peek()  # type: ignore[misc]
        raise StructureSyntaxError(f"trailing content after final 'end': {line!r}", lineno)

    return Structure(Vocabulary(tuple(symbols)), n, rel_map)


def serialize_structure(s: Structure) -> str:
    """Canonical text form: relations in declaration order, tuples sorted
    lexicographically. Byte-identical across runs for equal structures."""
    out = ["structure", f"universe {s.universe_size}"]
    for name, arity in s.vocabulary.symbols:
        out.append(f"rel {name} {arity}")
        for tup in sorted(s.relations.get(name, frozenset())):
            out.append(" ".join(str(e) for e in tup))
        out.append("end")
    out.append("end")
    return "\n".join(out)
