"""Demand sets and the demands text format."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidInputError, ParseError

KINDS = ("pairs", "groups", "group-pairs", "terminals")


@dataclass(frozen=True)
class DemandSet:
    """One of four demand shapes.

    ``pairs``: tuple of ``(s, t)``.  ``groups``: tuple of frozensets (a root is
    passed separately).  ``group-pairs``: tuple of ``(S, T)`` frozenset pairs.
    ``terminals``: ``(frozenset, k)``.
    """

    kind: str
    payload: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInputError(f"unknown demand kind {self.kind!r}")
        if self.kind == "group-pairs":
            for S, T in self.payload:
                if not S or not T:
                    raise InvalidInputError("group pairs need non-empty sides")
        if self.kind == "groups":
            for g in self.payload:
                if not g:
                    raise InvalidInputError("empty group")
        if self.kind == "terminals":
            terms, k = self.payload
            if k < 1 or k > len(terms):
                raise InvalidInputError(f"k={k} needs 1 <= k <= |terminals|={len(terms)}")

    @classmethod
    def pairs(cls, pairs) -> "DemandSet":
        return cls("pairs", tuple((int(s), int(t)) for s, t in pairs))

    @classmethod
    def groups(cls, groups) -> "DemandSet":
        return cls("groups", tuple(frozenset(int(v) for v in g) for g in groups))

    @classmethod
    def group_pairs(cls, gp) -> "DemandSet":
        return cls("group-pairs", tuple((frozenset(map(int, S)), frozenset(map(int, T))) for S, T in gp))

    @classmethod
    def terminals(cls, terms, k) -> "DemandSet":
        return cls("terminals", (frozenset(int(v) for v in terms), int(k)))

    def vertices(self) -> set:
        if self.kind == "pairs":
            return {x for p in self.payload for x in p}
        if self.kind == "groups":
            return {x for g in self.payload for x in g}
        if self.kind == "group-pairs":
            return {x for S, T in self.payload for x in S | T}
        return set(self.payload[0])

    def check_vertices(self, n: int) -> None:
        bad = sorted(v for v in self.vertices() if not 0 <= v < n)
        if bad:
            raise InvalidInputError(f"demand vertices outside 0..{n - 1}: {bad}")

    def __len__(self) -> int:
        return 1 if self.kind == "terminals" else len(self.payload)

    def to_json(self):
        if self.kind == "pairs":
            return [list(p) for p in self.payload]
        if self.kind == "groups":
            return [sorted(g) for g in self.payload]
        if self.kind == "group-pairs":
            return [[sorted(S), sorted(T)] for S, T in self.payload]
        return {"terminals": sorted(self.payload[0]), "k": self.payload[1]}


def parse_demands(text: str) -> DemandSet:
    """Parse ``d s t``, ``g v...``, ``gp | S... | T...`` or ``t v... ; k`` lines (one kind per file)."""
    kind = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "c#":
            continue
        tag = line.split()[0]
        try:
            if tag == "d":
                tok = line.split()
                if len(tok) != 3:
                    raise ValueError("expected 'd s t'")
                row, k = (int(tok[1]), int(tok[2])), "pairs"
            elif tag == "g":
                vs = [int(t) for t in line.split()[1:]]
                if not vs:
                    raise ValueError("empty group")
                row, k = vs, "groups"
            elif tag == "gp":
                parts = line.split("|")
                if len(parts) != 3 or parts[0].strip() != "gp":
                    raise ValueError("expected 'gp | S... | T...'")
                S = [int(t) for t in parts[1].split()]
                T = [int(t) for t in parts[2].split()]
                if not S or not T:
                    raise ValueError("empty side")
                row, k = (S, T), "group-pairs"
            elif tag == "t":
                body, sep, kk = line[1:].partition(";")
                if not sep:
                    raise ValueError("expected 't v... ; k'")
                row, k = ([int(t) for t in body.split()], int(kk)), "terminals"
            else:
                raise ValueError(f"unknown record {tag!r}")
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}: {raw!r}") from None
        if kind not in (None, k):
            raise ParseError(f"line {lineno}: mixes {kind} and {k} records")
        if k == "terminals" and rows:
            raise ParseError(f"line {lineno}: only one terminal record allowed")
        kind = k
        rows.append(row)
    if kind is None:
        raise ParseError("no demands found")
    try:
        if kind == "pairs":
            return DemandSet.pairs(rows)
        if kind == "groups":
            return DemandSet.groups(rows)
        if kind == "group-pairs":
            return DemandSet.group_pairs(rows)
        return DemandSet.terminals(*rows[0])
    except InvalidInputError as exc:
        raise ParseError(str(exc)) from None


def load_demands(path) -> DemandSet:
    with open(path, encoding="utf-8") as fh:
        return parse_demands(fh.read())
