"""Structured results from axiom/property checkers, with CSV emission."""

import csv
from dataclasses import dataclass, field
from pathlib import Path

from .regionio import write_region


@dataclass
class Violation:
    axiom_id: str
    lhs: float
    rhs: float
    witnesses: tuple = ()  # regions or functions that exhibit the failure
    note: str = ""


@dataclass
class AxiomReport:
    name: str
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def record(self, axiom_id, lhs, rhs, witnesses=(), note=""):
        self.violations.append(Violation(axiom_id, float(lhs), float(rhs), tuple(witnesses), note))

    def merge(self, other):
        self.checked += other.checked
        self.violations.extend(other.violations)
        return self

    def summary(self):
        status = "ok" if self.ok else f"{len(self.violations)} violation(s)"
        return f"{self.name}: {self.checked} checks, {status}"


def report_to_csv(report, path, region_dir=None):
    """One row per violation: axiom_id, witness_region_files, lhs, rhs.
    Witness regions are dumped as PGM files when region_dir is given."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["axiom_id", "witness_region_files", "lhs", "rhs"])
        for i, v in enumerate(report.violations):
            files = []
            if region_dir is not None:
                region_dir = Path(region_dir)
                region_dir.mkdir(parents=True, exist_ok=True)
                for j, w in enumerate(v.witnesses):
                    if hasattr(w, "cells"):
                        p = region_dir / f"{report.name}_{i}_{j}.pgm"
                        write_region(w, p)
                        files.append(p.name)
            writer.writerow([v.axiom_id, ";".join(files), repr(v.lhs), repr(v.rhs)])
    return path


def write_rows_csv(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(c) if isinstance(c, float) else c for c in row])
    return path
