"""Reader for the qdlab result format: '#'-prefixed comment headers, a
column-name row, then comma-separated data with '.' decimal separators."""

import csv
import io
from dataclasses import dataclass


@dataclass(frozen=True)
class CsvTable:
    path: str
    header: tuple  # comment lines with the leading '# ' stripped
    columns: tuple
    rows: tuple  # tuples of raw strings, one per data line

    def column(self, name, convert=float):
        """One column as a list; fails loudly on a missing name."""
        if name not in self.columns:
            raise KeyError(
                f"{self.path}: column {name!r} not found (have {self.columns})")
        k = self.columns.index(name)
        return [convert(r[k]) for r in self.rows]

    def header_value(self, key):
        """Scan 'key=value' tokens in the comment header; None if absent."""
        for line in self.header:
            for token in line.split():
                if token.startswith(key + "="):
                    return token[len(key) + 1:]
        return None


def read_table(path) -> CsvTable:
    header, columns, rows = [], None, []
    with open(path, encoding="utf-8", newline="") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                header.append(line.lstrip("#").strip())
            elif columns is None:
                columns = tuple(line.split(","))
            else:
                rows.append(tuple(next(csv.reader(io.StringIO(line)))))
    if columns is None:
        raise ValueError(f"{path}: no column row found")
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return CsvTable(str(path), tuple(header), columns, tuple(rows))
