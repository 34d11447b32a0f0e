"""Result record shared by the exhaustive cover searches."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


@dataclass
class SearchResult:
    preset: str
    q: int
    genus: int
    target: int
    families: dict
    stages: dict
    max_points: Optional[int]  # best exact count among covers that were counted
    bound_on_rest: Optional[int]  # proven ceiling for every cover not counted exactly
    witnesses: list = field(default_factory=list)
    elapsed: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def target_reached(self) -> bool:
        return bool(self.witnesses)

    @property
    def family_maximum_bound(self) -> Optional[int]:
        """An upper bound for the point count of every genus-correct cover in the family."""
        vals = [v for v in (self.max_points, self.bound_on_rest) if v is not None]
        return max(vals) if vals else None

    def summary(self) -> str:
        if self.target_reached:
            best = max(w["points"] for w in self.witnesses)
            head = f"maximum points over family: {best}; target {self.target} reached"
        else:
            head = (f"maximum points over family: < {self.target}; "
                    f"target {self.target} unreachable")
        lines = [f"{self.preset}: q = {self.q}, genus {self.genus}", head]
        if self.max_points is not None:
            lines.append(f"largest exact count among counted covers: {self.max_points}")
        for k, v in self.stages.items():
            lines.append(f"  {k}: {v}")
        for n in self.notes:
            lines.append(f"note: {n}")
        lines.append(f"elapsed: {self.elapsed:.1f} s")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "preset": self.preset, "q": self.q, "genus": self.genus, "target": self.target,
            "families": self.families, "stages": self.stages, "max_points": self.max_points,
            "bound_on_rest": self.bound_on_rest, "target_reached": self.target_reached,
            "witnesses": self.witnesses, "notes": self.notes,
        }
