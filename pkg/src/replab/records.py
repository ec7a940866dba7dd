"""Result records shared by the density and game-value pipelines."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any


def fraction_str(f: Fraction) -> str:
    """Lowest-terms num/den rendering; integers keep an explicit /1."""
    return f"{f.numerator}/{f.denominator}"


def now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class DensityRecord:
    """Outcome of one extremal-density computation.

    family/params identify the instance; value is the exact density
    witness_size / universe_size; witness is the extremal point set in the
    family's native point representation, or None when it was deliberately
    not materialised (closed-form evaluations at large n).  method records
    how the value was obtained: "exact-bb" for the internal branch and
    bound, "closed-form" for formula evaluations, "wcnf-external" for
    optima imported from an external MaxSAT solver.
    """

    family: str
    params: dict
    value: Fraction
    witness_size: int
    universe_size: int
    witness: list | None
    method: str
    timestamp: str = field(default_factory=now_iso)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "params": self.params,
            "value": fraction_str(self.value),
            "witness_size": self.witness_size,
            "universe_size": self.universe_size,
            "witness": self.witness,
            "method": self.method,
            "timestamp": self.timestamp,
        }

    @staticmethod
    def from_json(doc: dict) -> "DensityRecord":
        return DensityRecord(
            family=doc["family"],
            params=doc["params"],
            value=Fraction(doc["value"]),
            witness_size=int(doc["witness_size"]),
            universe_size=int(doc["universe_size"]),
            witness=doc["witness"],
            method=doc["method"],
            timestamp=doc.get("timestamp", ""),
        )

    def report_lines(self) -> list[str]:
        """Human-readable summary, timestamp deliberately excluded so that
        identical queries print identical reports."""
        lines = [
            f"family:        {self.family}",
            f"params:        {_stable_params(self.params)}",
            f"value:         {fraction_str(self.value)}",
            f"witness size:  {self.witness_size} of {self.universe_size}",
            f"method:        {self.method}",
        ]
        if self.witness is not None:
            lines.append(f"witness:       {self.witness}")
        return lines


def _stable_params(params: dict) -> str:
    return ", ".join(f"{k}={params[k]}" for k in sorted(params))


@dataclass
class ValueRecord:
    """Outcome of one exact game-value computation."""

    game: str
    params: dict
    value: Fraction
    strategy: dict | None
    method: str
    timestamp: str = field(default_factory=now_iso)

    def to_json(self) -> dict:
        return {
            "game": self.game,
            "params": self.params,
            "value": fraction_str(self.value),
            "strategy": self.strategy,
            "method": self.method,
            "timestamp": self.timestamp,
        }

    @staticmethod
    def from_json(doc: dict) -> "ValueRecord":
        return ValueRecord(
            game=doc["game"],
            params=doc["params"],
            value=Fraction(doc["value"]),
            strategy=doc.get("strategy"),
            method=doc["method"],
            timestamp=doc.get("timestamp", ""),
        )

    def report_lines(self) -> list[str]:
        return [
            f"game:          {self.game}",
            f"params:        {_stable_params(self.params)}",
            f"value:         {fraction_str(self.value)}",
            f"method:        {self.method}",
        ]
