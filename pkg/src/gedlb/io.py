"""Graph ingestion (edge lists and chemical tables), dataset loading,
and structured result emission."""

import csv
import io as _io
import json
from dataclasses import dataclass, field, fields as dc_fields, is_dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import EmptyDataset, ParseError
from .graphs import Graph


def read_edgelist(text):
    """Parse "n <count>" followed by 0-indexed "i j" lines; '#' comments."""
    n = None
    edges = set()
    for lineno, raw in enumerate(str(text).splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise ParseError(f"expected header 'n <count>', got {raw!r}",
                                 lineno)
            try:
                n = int(parts[1])
            except ValueError:
                raise ParseError(f"bad vertex count {parts[1]!r}", lineno)
            if n < 0:
                raise ParseError(f"negative vertex count {n}", lineno)
            continue
        if len(parts) != 2:
            raise ParseError(f"expected edge 'i j', got {raw!r}", lineno)
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer endpoint in {raw!r}", lineno)
        if not (0 <= i < n and 0 <= j < n):
            raise ParseError(f"endpoint out of range in {raw!r}", lineno)
        if i == j:
            raise ParseError(f"self-loop {i}", lineno)
        pair = (min(i, j), max(i, j))
        if pair in edges:
            raise ParseError(f"duplicate edge {pair}", lineno)
        edges.add(pair)
    if n is None:
        raise ParseError("missing header line", 0)
    return Graph(n, frozenset(edges))


def write_edgelist(g):
    """Deterministic inverse of read_edgelist (lexicographic edge order)."""
    lines = [f"n {g.n}"]
    lines += [f"{i} {j}" for i, j in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def _leading_ints(line, k):
    parts = line.split()
    if len(parts) < k:
        return None
    try:
        return [int(p) for p in parts[:k]]
    except ValueError:
        return None


def read_ct(text):
    """Parse a chemical-table file into an unlabeled simple graph.

    The first line is the name; unrecognized lines before the counts line
    (detected by its two leading integers) are skipped; atom records are
    opaque; bonds are 1-indexed pairs with duplicates collapsed.
    """
    lines = str(text).replace("\r\n", "\n").replace("\r", "\n").split("\n")
    pos = 1  # name line
    counts = None
    while pos < len(lines):
        counts = _leading_ints(lines[pos], 2)
        pos += 1
        if counts is not None:
            break
    if counts is None:
        raise ParseError("no counts line found", len(lines))
    atoms, bonds = counts
    if atoms < 0 or bonds < 0:
        raise ParseError(f"negative counts {atoms} {bonds}", pos)
    if pos + atoms + bonds > len(lines):
        raise ParseError(
            f"{atoms} atoms + {bonds} bonds exceed remaining lines", pos)
    pos += atoms
    edges = set()
    for k in range(bonds):
        lineno = pos + k + 1
        ends = _leading_ints(lines[pos + k], 2)
        if ends is None:
            raise ParseError(f"bad bond line {lines[pos + k]!r}", lineno)
        i, j = ends
        if not (1 <= i <= atoms and 1 <= j <= atoms):
            raise ParseError(f"bond endpoint out of range: {i} {j}", lineno)
        if i == j:
            raise ParseError(f"self-bond on atom {i}", lineno)
        edges.add((min(i, j) - 1, max(i, j) - 1))
    return Graph(atoms, frozenset(edges))


@dataclass
class DatasetResult:
    """Loaded graphs in filename order, per-file errors, and summary stats."""

    graphs: list
    errors: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.graphs)

    def __len__(self):
        return len(self.graphs)

    def __getitem__(self, k):
        return self.graphs[k]

    @property
    def count(self):
        return len(self.graphs)

    @property
    def mean_vertices(self):
        return float(np.mean([g.n for _, g in self.graphs]))

    @property
    def mean_degree(self):
        return float(np.mean([2.0 * len(g.edges) / g.n
                              for _, g in self.graphs if g.n]))


def load_dataset(directory, pattern="*.ct"):
    """Read every matching file; parse failures are collected, not fatal."""
    directory = Path(directory)
    graphs, errors = [], []
    for path in sorted(directory.glob(pattern)):
        try:
            text = path.read_text()
            if path.suffix.lower() == ".ct":
                g = read_ct(text)
            else:
                g = read_edgelist(text)
            graphs.append((path.stem, g))
        except (ParseError, OSError) as exc:
            errors.append((path.name, str(exc)))
    if not graphs:
        raise EmptyDataset(f"no graphs loaded from {directory} ({pattern})")
    return DatasetResult(graphs, errors)


def bundled_molecules():
    """The small chemical-table corpus shipped with the package."""
    root = resources.files("gedlb").joinpath("data/molecules")
    with resources.as_file(root) as directory:
        return load_dataset(directory, "*.ct")


def _record_fields(record):
    if is_dataclass(record):
        pairs = []
        for f in dc_fields(record):
            v = getattr(record, f.name)
            if isinstance(v, np.ndarray) or v is None:
                continue
            pairs.append((f.name, v))
        return pairs
    return list(record.items())


def _render(value, as_text):
    if hasattr(value, "value") and not isinstance(value, (int, float)):
        value = value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (float, np.floating)):
        text = format(float(value), ".6g")
        return text if as_text else float(text)
    if isinstance(value, (int, np.integer)):
        return int(value)
    return str(value)


def emit_results(records, fmt="json", fields=None):
    """Serialize homogeneous records with stable field order and
    6-significant-digit floats."""
    rows = [_record_fields(r) for r in records]
    if fields is None:
        fields = [k for k, _ in rows[0]] if rows else []
    if fmt == "json":
        out = [{k: _render(v, as_text=False) for k, v in row} for row in rows]
        return json.dumps(out, indent=2) + "\n"
    if fmt == "csv":
        buf = _io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(fields)
        for row in rows:
            lookup = dict(row)
            writer.writerow([_render(lookup[k], as_text=True) for k in fields])
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")
