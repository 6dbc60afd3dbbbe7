"""Per-production correspondence between an original and a transformed grammar."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping


@dataclass(frozen=True)
class RuleEntry:
    """How one production's rhs changed.

    ``align[j]`` is the source position that target position ``j`` came from,
    or None for a terminal that exists only in the target (an insertion).
    Source positions missing from ``align`` were removed (only literal
    terminals are ever removed)."""

    id: int
    lhs: str
    source: tuple[str, ...]
    target: tuple[str, ...]
    align: tuple[int | None, ...]
    moved: tuple[tuple[int, int], ...] = ()  # (source position, target position)
    retired: tuple[str, ...] = ()  # inserted markers later deleted by reordering

    def __post_init__(self):
        if len(self.align) != len(self.target):
            raise ValueError(f"rule {self.id}: alignment length mismatch")
        for j, i in enumerate(self.align):
            if i is not None and self.source[i] != self.target[j]:
                raise ValueError(f"rule {self.id}: misaligned symbol at target position {j}")

    @property
    def inserted(self) -> tuple[int, ...]:
        return tuple(j for j, i in enumerate(self.align) if i is None)

    @property
    def removed(self) -> tuple[int, ...]:
        kept = {i for i in self.align if i is not None}
        return tuple(i for i in range(len(self.source)) if i not in kept)

    @property
    def delta(self) -> int:
        """Frontier-length change contributed by one application of the rule."""
        return len(self.inserted) - len(self.removed)

    def inverted(self) -> "RuleEntry":
        back: list[int | None] = [None] * len(self.source)
        for j, i in enumerate(self.align):
            if i is not None:
                back[i] = j
        return RuleEntry(
            self.id, self.lhs, self.target, self.source, tuple(back),
            tuple((j, i) for i, j in self.moved), self.retired,
        )

    def then(self, other: "RuleEntry") -> "RuleEntry":
        """Compose with a later step that starts from this entry's target."""
        if other.source != self.target:
            raise ValueError(f"rule {self.id}: composed maps do not line up")
        align = tuple(None if k is None else self.align[k] for k in other.align)
        where = {k: j for j, k in enumerate(other.align) if k is not None}
        moved = [(i, where[k]) for i, k in self.moved if k in where]
        moved += [(self.align[k], j) for k, j in other.moved if self.align[k] is not None]
        return RuleEntry(self.id, self.lhs, self.source, other.target, align, tuple(dict.fromkeys(moved)), self.retired + other.retired)


class RuleMap:
    """Bijection between the productions of two grammars of one lineage,
    keyed by the shared production id."""

    def __init__(self, entries: Iterable[RuleEntry], kind: str = "transform"):
        self.entries: dict[int, RuleEntry] = {}
        for e in entries:
            if e.id in self.entries:
                raise ValueError(f"duplicate rule id {e.id}")
            self.entries[e.id] = e
        self.kind = kind

    @classmethod
    def identity(cls, g, kind: str = "identity") -> "RuleMap":
        return cls((RuleEntry(p.id, p.lhs, p.rhs, p.rhs, tuple(range(len(p.rhs)))) for p in g.productions), kind)

    def __getitem__(self, pid: int) -> RuleEntry:
        return self.entries[pid]

    def __contains__(self, pid: int) -> bool:
        return pid in self.entries

    def __iter__(self):
        return iter(self.entries.values())

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, RuleMap) and self.entries == other.entries

    def updated(self, changes: Mapping[int, RuleEntry]) -> "RuleMap":
        merged = dict(self.entries)
        merged.update(changes)
        return RuleMap(merged.values(), self.kind)

    def inverted(self) -> "RuleMap":
        return RuleMap((e.inverted() for e in self), self.kind + "^-1" if not self.kind.endswith("^-1") else self.kind[:-3])

    def then(self, other: "RuleMap") -> "RuleMap":
        if set(self.entries) != set(other.entries):
            raise ValueError("composed maps cover different rule ids")
        return RuleMap((e.then(other[e.id]) for e in self), f"{self.kind}+{other.kind}")

    def is_identity(self) -> bool:
        return all(e.source == e.target for e in self)

    def total_inserted(self) -> int:
        return sum(len(e.inserted) for e in self)

    def introduced_terminals(self) -> set[str]:
        return {e.target[j] for e in self for j in e.inserted}

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "kind": self.kind,
            "rules": [
                {
                    "id": e.id,
                    "lhs": e.lhs,
                    "source": list(e.source),
                    "target": list(e.target),
                    "align": list(e.align),
                    "inserted": list(e.inserted),
                    "removed": list(e.removed),
                    "moved": [list(m) for m in e.moved],
                    "retired": list(e.retired),
                }
                for e in self
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "RuleMap":
        if data.get("schema") != 1:
            raise ValueError("unsupported rule-map schema")
        return cls(
            (
                RuleEntry(
                    r["id"], r["lhs"], tuple(r["source"]), tuple(r["target"]), tuple(r["align"]),
                    tuple(tuple(m) for m in r.get("moved", ())), tuple(r.get("retired", ())),
                )
                for r in data["rules"]
            ),
            data.get("kind", "transform"),
        )

    @classmethod
    def from_json(cls, text: str) -> "RuleMap":
        return cls.from_dict(json.loads(text))

    def check_lineage(self, source, target) -> None:
        """Raise ValueError unless the map matches the two grammars exactly."""
        src = {p.id: p for p in source.productions}
        dst = {p.id: p for p in target.productions}
        if set(src) != set(self.entries) or set(dst) != set(self.entries):
            raise ValueError("rule map ids do not match the grammars' production ids")
        for e in self:
            if src[e.id].rhs != e.source or dst[e.id].rhs != e.target:
                raise ValueError(f"rule map entry {e.id} does not match the grammars")
