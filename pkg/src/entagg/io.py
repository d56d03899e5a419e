"""Reading and writing sample sets, point data, incidence matrices and Newick trees.

Sample-set files are newline-delimited JSON: a header record
``{"n": 7, "kind": "partitioning", "labels": [...]}`` followed by one
``{"blocks": [[1, 3, 6, 7], [2], [4, 5]]}`` record per sample. Indices are
1-based and blocks are written in canonical order.
"""

from __future__ import annotations

import csv
import json
import sys
from contextlib import contextmanager
from typing import Iterable

import numpy as np

from .agglomeration import Dendrogram, MergeStep
from .errors import InputError, ParseError
from .gibbs import Dataset
from .partitions import (
    KINDS,
    PARTITIONING,
    FeatureAllocation,
    GroundSet,
    Partitioning,
    SampleSet,
)


@contextmanager
def _open(path, mode="r"):
    """Open ``path``; ``"-"`` means stdin/stdout and a file object is used as is."""
    if hasattr(path, "read") or hasattr(path, "write"):
        yield path
    elif str(path) == "-":
        yield sys.stdin if "r" in mode else sys.stdout
    else:
        with open(path, mode, encoding="utf-8", newline="" if "w" in mode else None) as fh:
            yield fh


def dumps_sample_set(sample_set: SampleSet) -> str:
    header = {"n": sample_set.n, "kind": sample_set.kind}
    if sample_set.ground.labels is not None:
        header["labels"] = list(sample_set.ground.labels)
    lines = [json.dumps(header, separators=(",", ":"), ensure_ascii=False)]
    for z in sample_set:
        lines.append(json.dumps({"blocks": [list(b) for b in z.blocks]}, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def write_sample_set(sample_set: SampleSet, path) -> None:
    with _open(path, "w") as fh:
        fh.write(dumps_sample_set(sample_set))


def loads_sample_set(text: str) -> SampleSet:
    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            records.append((lineno, json.loads(line)))
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", lineno) from None
    if not records:
        raise ParseError("empty sample-set file")
    lineno, header = records[0]
    if not isinstance(header, dict) or "n" not in header or "kind" not in header:
        raise ParseError("header must have 'n' and 'kind'", lineno)
    n, kind = header["n"], header["kind"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"n must be a positive integer, got {n!r}", lineno)
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}", lineno)
    ground = GroundSet(n, header.get("labels"))
    samples = []
    for lineno, rec in records[1:]:
        if not isinstance(rec, dict) or not isinstance(rec.get("blocks"), list):
            raise ParseError("sample record must have a 'blocks' list", lineno)
        blocks = []
        for b in rec["blocks"]:
            if not isinstance(b, list) or not all(isinstance(e, int) and not isinstance(e, bool) for e in b):
                raise ParseError(f"block {b!r} is not a list of integers", lineno)
            bad = [e for e in b if not 1 <= e <= n]
            if bad:
                raise ParseError(f"sample record has index {bad[0]} outside 1..{n}", lineno)
            if not b:
                raise ParseError("empty block", lineno)
            blocks.append(tuple(b))
        try:
            if kind == PARTITIONING:
                samples.append(Partitioning(tuple(blocks), n))
            else:
                samples.append(FeatureAllocation(tuple(blocks), n))
        except InputError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
    if not samples:
        raise ParseError("sample-set file has no samples")
    return SampleSet(tuple(samples), ground)


def read_sample_set(path) -> SampleSet:
    with _open(path) as fh:
        return loads_sample_set(fh.read())


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def read_points_csv(path) -> Dataset:
    """Rectangular numeric CSV; a non-numeric first row is taken as a header."""
    with _open(path) as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise ParseError("empty points file")
    start = 0
    if not all(_is_number(c) for c in rows[0]):
        start = 1
    width = len(rows[0])
    data = []
    for lineno, row in enumerate(rows[start:], start=start + 1):
        if len(row) != width:
            raise ParseError(f"expected {width} columns, got {len(row)}", lineno)
        try:
            data.append([float(c) for c in row])
        except ValueError:
            raise ParseError(f"non-numeric cell in {row!r}", lineno) from None
    if not data:
        raise ParseError("points file has a header but no rows")
    return Dataset(np.array(data))


def write_points_csv(data: Dataset, path) -> None:
    with _open(path, "w") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"x{j + 1}" for j in range(data.dims)])
        for row in data.points:
            w.writerow([repr(float(v)) for v in row])


def read_feature_allocation_incidence(path, min_membership: int = 0) -> SampleSet:
    """One single-block feature allocation per row of a 0/1 incidence CSV.

    The first row labels the elements and the first column labels the
    blocks. Elements in fewer than ``min_membership`` blocks are dropped and
    the rest renumbered in column order; rows left empty by the filter are
    dropped too.
    """
    with _open(path) as fh:
        rows = [r for r in csv.reader(fh) if r]
    if len(rows) < 2:
        raise ParseError("incidence file needs a header row and at least one block")
    labels = [c.strip() for c in rows[0][1:]]
    if not labels:
        raise ParseError("incidence file has no element columns", 1)
    matrix = []
    for lineno, row in enumerate(rows[1:], start=2):
        cells = [c.strip() for c in row[1:]]
        if len(cells) != len(labels):
            raise ParseError(f"expected {len(labels)} cells, got {len(cells)}", lineno)
        if any(c not in ("0", "1") for c in cells):
            raise ParseError("cells must be 0 or 1", lineno)
        bits = [c == "1" for c in cells]
        if not any(bits):
            raise ParseError("row has no members (empty block)", lineno)
        matrix.append(bits)
    inc = np.array(matrix, dtype=bool)
    keep = np.flatnonzero(inc.sum(axis=0) >= min_membership)
    if keep.size == 0:
        raise InputError(f"no element appears in at least {min_membership} blocks")
    sub = inc[:, keep]
    n = int(keep.size)
    allocs = []
    for row in sub:
        members = tuple(int(j) + 1 for j in np.flatnonzero(row))
        if members:
            allocs.append(FeatureAllocation((members,), n))
    if not allocs:
        raise InputError("filter removed every block")
    return SampleSet(tuple(allocs), GroundSet(n, [labels[j] for j in keep]))


# Newick

_NEWICK_SPECIAL = set("()[]':;, \t\n")


def newick_label(label: str) -> str:
    if label and not (_NEWICK_SPECIAL & set(label)):
        return label
    return "'" + label.replace("'", "''") + "'"


def format_height(h: float, precision: int) -> str:
    s = f"{h:.{precision}f}"
    return "0." + "0" * precision if s.startswith("-") and float(s) == 0 else s


def write_newick(dendrogram: Dendrogram, precision: int = 6, internal_labels: bool = False) -> str:
    """Newick string; internal branch lengths are the merge heights themselves.

    Leaves carry no branch length. With ``internal_labels`` every internal
    node is named by its node id, which lets :func:`read_newick` restore the
    exact merge order.
    """
    n = dendrogram.n

    def walk(v: int) -> str:
        ch = dendrogram.children(v)
        if ch is None:
            return newick_label(dendrogram.label(v))
        inner = ",".join(walk(c) for c in ch)
        tag = str(v) if internal_labels else ""
        return f"({inner}){tag}:{format_height(dendrogram.height(v), precision)}"

    if n == 1:
        return newick_label(dendrogram.label(1)) + ";"
    return walk(dendrogram.root) + ";"


class _NewickParser:
    def __init__(self, text: str):
        self.s = text.strip()
        self.i = 0

    def peek(self):
        return self.s[self.i] if self.i < len(self.s) else ""

    def expect(self, ch):
        if self.peek() != ch:
            raise ParseError(f"expected {ch!r} at offset {self.i} in Newick string")
        self.i += 1

    def label(self) -> str:
        if self.peek() == "'":
            self.i += 1
            out = []
            while True:
                if self.i >= len(self.s):
                    raise ParseError("unterminated quoted Newick label")
                c = self.s[self.i]
                if c == "'":
                    if self.s[self.i + 1 : self.i + 2] == "'":
                        out.append("'")
                        self.i += 2
                        continue
                    self.i += 1
                    return "".join(out)
                out.append(c)
                self.i += 1
        start = self.i
        while self.i < len(self.s) and self.s[self.i] not in _NEWICK_SPECIAL:
            self.i += 1
        return self.s[start : self.i]

    def length(self):
        if self.peek() != ":":
            return None
        self.i += 1
        start = self.i
        while self.i < len(self.s) and self.s[self.i] not in "(),;":
            self.i += 1
        try:
            return float(self.s[start : self.i])
        except ValueError:
            raise ParseError(f"bad branch length {self.s[start:self.i]!r}") from None

    def node(self):
        if self.peek() == "(":
            self.i += 1
            kids = [self.node()]
            while self.peek() == ",":
                self.i += 1
                kids.append(self.node())
            self.expect(")")
            name = self.label()
            return ("inner", kids, name, self.length())
        name = self.label()
        return ("leaf", name, self.length())

    def parse(self):
        tree = self.node()
        self.expect(";")
        if self.i != len(self.s):
            raise ParseError("trailing characters after Newick tree")
        return tree


def read_newick(text: str, labels: Iterable[str] | None = None) -> Dendrogram:
    """Parse a binary Newick tree written by :func:`write_newick`.

    Leaf names are matched against ``labels`` (default ``"1".."n"``).
    Internal node names, if present, give the merge order; otherwise merges
    are ordered by a post-order traversal.
    """
    tree = _NewickParser(text).parse()
    leaf_names: list[str] = []

    def collect(t):
        if t[0] == "leaf":
            leaf_names.append(t[1])
        else:
            for k in t[1]:
                collect(k)

    collect(tree)
    n = len(leaf_names)
    ground = GroundSet(n, list(labels) if labels is not None else None)
    index = {ground.label(e): e for e in ground.elements}
    if len(index) != n or set(leaf_names) != set(index):
        raise ParseError("Newick leaves do not match the ground-set labels")
    merges = []  # (order key, left id, right id, height, placeholder)

    def build(t):
        if t[0] == "leaf":
            return ("leaf", index[t[1]])
        kids = t[1]
        if len(kids) != 2:
            raise ParseError("dendrogram Newick trees must be binary")
        left, right = build(kids[0]), build(kids[1])
        ref = ("node", len(merges))
        key = int(t[2]) if t[2] else None
        merges.append([key, left, right, t[3] if t[3] is not None else 0.0])
        return ref

    build(tree)
    if all(m[0] is not None for m in merges):
        order = sorted(range(len(merges)), key=lambda j: merges[j][0])
    else:
        order = list(range(len(merges)))
    new_id = {j: n + pos + 1 for pos, j in enumerate(order)}

    def resolve(ref):
        return ref[1] if ref[0] == "leaf" else new_id[ref[1]]

    steps = []
    for j in order:
        _, left, right, h = merges[j]
        steps.append(MergeStep(resolve(left), resolve(right), new_id[j], h))
    return Dendrogram(ground, tuple(steps))

