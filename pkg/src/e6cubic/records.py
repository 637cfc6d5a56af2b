"""Shared result records."""

from dataclasses import dataclass


@dataclass(frozen=True)
class CountReport:
    """One counting run: how many points of height <= B, and how it was obtained.

    ``method`` is one of ``brute``, ``torsor``, ``fast``.  ``parts`` records
    how many work slices the run was split into (1 for a sequential run).
    """

    B: int
    count: int
    method: str
    elapsed_s: float
    parts: int = 1

    def as_dict(self):
        return {
            "B": self.B,
            "count": self.count,
            "method": self.method,
            "elapsed_s": self.elapsed_s,
            "parts": self.parts,
        }
