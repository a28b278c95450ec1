"""Graph bundle serialization.

A bundle is a directory of four files::

    objects.csv     id,kind,label,src,dst   (src/dst empty for nodes)
    existence.csv   id,start,end
    properties.csv  id,prop,value,start,end
    meta.toml       format_version=1 / omega_start=... / omega_end=...

Output is canonical: rows sorted, LF line endings, decimal integers.
Identifiers, labels, property names, and values are restricted to
``[A-Za-z0-9_.-]`` so no quoting is ever needed.  ``load_bundle`` coalesces
existence and property rows per id and validates the resulting graph.
"""

from __future__ import annotations

import csv
import re
from pathlib import Path
from typing import Dict, List, Tuple

from .errors import FormatError, ValidationError
from .graph import Itpg, validate_itpg
from .intervals import (
    Interval,
    ValuedInterval,
    coalesce,
    coalesce_valued,
)

FORMAT_VERSION = 1

_VALUE_RE = re.compile(r"[A-Za-z0-9_.\-]+\Z")

OBJECTS_HEADER = ["id", "kind", "label", "src", "dst"]
EXISTENCE_HEADER = ["id", "start", "end"]
PROPERTIES_HEADER = ["id", "prop", "value", "start", "end"]


def _check_value(kind: str, s: str, where: str) -> str:
    if not _VALUE_RE.match(s):
        raise FormatError(f"{where}: bad {kind} {s!r} (allowed: [A-Za-z0-9_.-])")
    return s


def _nat(s: str, where: str) -> int:
    if not s.isdigit():
        raise FormatError(f"{where}: expected a natural number, got {s!r}")
    return int(s)


def save_bundle(g: Itpg, path) -> None:
    """Write g to a bundle directory in canonical byte form."""
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)

    obj_rows: List[List[str]] = []
    for n in sorted(g.nodes):
        obj_rows.append([n, "node", g.labels.get(n, ""), "", ""])
    for e in sorted(g.edges):
        src, dst = g.rho[e]
        obj_rows.append([e, "edge", g.labels.get(e, ""), src, dst])
    obj_rows.sort(key=lambda r: r[0])

    ex_rows: List[List[str]] = []
    for obj in sorted(g.xi):
        for iv in g.xi[obj]:
            ex_rows.append([obj, str(iv.start), str(iv.end)])
    ex_rows.sort(key=lambda r: (r[0], int(r[1])))

    prop_rows: List[List[str]] = []
    for (obj, prop) in sorted(g.sigma):
        for iv in g.sigma[(obj, prop)]:
            prop_rows.append([obj, prop, iv.value, str(iv.start), str(iv.end)])
    prop_rows.sort(key=lambda r: (r[0], r[1], int(r[3])))

    _write_csv(p / "objects.csv", OBJECTS_HEADER, obj_rows)
    _write_csv(p / "existence.csv", EXISTENCE_HEADER, ex_rows)
    _write_csv(p / "properties.csv", PROPERTIES_HEADER, prop_rows)
    meta = (
        f"format_version={FORMAT_VERSION}\n"
        f"omega_start={g.omega.start}\n"
        f"omega_end={g.omega.end}\n"
    )
    (p / "meta.toml").write_bytes(meta.encode("utf-8"))


def _write_csv(path: Path, header: List[str], rows: List[List[str]]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    path.write_bytes(("\n".join(lines) + "\n").encode("utf-8"))


def _read_csv(path: Path, header: List[str]):
    if not path.is_file():
        raise FormatError(f"{path}: missing file")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            got = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty file, expected header") from None
        if got != header:
            raise FormatError(f"{path}:1: bad header {got!r}, expected {header!r}")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise FormatError(f"{path}:{lineno}: expected {len(header)} fields")
            yield lineno, row


def load_bundle(path) -> Itpg:
    """Read a bundle directory back into a validated graph."""
    p = Path(path)
    meta_path = p / "meta.toml"
    if not meta_path.is_file():
        raise FormatError(f"{meta_path}: missing file")
    meta: Dict[str, str] = {}
    for lineno, line in enumerate(meta_path.read_text("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise FormatError(f"{meta_path}:{lineno}: expected key=value")
        meta[key.strip()] = value.strip()
    if meta.get("format_version") != str(FORMAT_VERSION):
        raise FormatError(
            f"{meta_path}: unsupported format_version {meta.get('format_version')!r}"
        )
    try:
        omega = Interval(
            _nat(meta["omega_start"], str(meta_path)),
            _nat(meta["omega_end"], str(meta_path)),
        )
    except KeyError as exc:
        raise FormatError(f"{meta_path}: missing key {exc}") from None
    except ValueError as exc:
        raise FormatError(f"{meta_path}: {exc}") from None

    nodes = set()
    edges = set()
    rho: Dict[str, Tuple[str, str]] = {}
    labels: Dict[str, str] = {}
    for lineno, row in _read_csv(p / "objects.csv", OBJECTS_HEADER):
        where = f"{p / 'objects.csv'}:{lineno}"
        obj, kind, label, src, dst = row
        _check_value("id", obj, where)
        if obj in nodes or obj in edges:
            raise FormatError(f"{where}: duplicate id {obj!r}")
        if label:
            labels[obj] = _check_value("label", label, where)
        if kind == "node":
            if src or dst:
                raise FormatError(f"{where}: node with endpoints")
            nodes.add(obj)
        elif kind == "edge":
            if not src or not dst:
                raise FormatError(f"{where}: edge needs src and dst")
            edges.add(obj)
            rho[obj] = (
                _check_value("src", src, where),
                _check_value("dst", dst, where),
            )
        else:
            raise FormatError(f"{where}: bad kind {kind!r}")

    known = nodes | edges
    ex_raw: Dict[str, List[Interval]] = {obj: [] for obj in known}
    for lineno, row in _read_csv(p / "existence.csv", EXISTENCE_HEADER):
        where = f"{p / 'existence.csv'}:{lineno}"
        obj, start, end = row
        if obj not in known:
            raise FormatError(f"{where}: unknown id {obj!r}")
        a, b = _nat(start, where), _nat(end, where)
        if b < a:
            raise FormatError(f"{where}: interval end before start")
        ex_raw.setdefault(obj, []).append(Interval(a, b))

    prop_raw: Dict[Tuple[str, str], List[ValuedInterval]] = {}
    for lineno, row in _read_csv(p / "properties.csv", PROPERTIES_HEADER):
        where = f"{p / 'properties.csv'}:{lineno}"
        obj, prop, value, start, end = row
        if obj not in known:
            raise FormatError(f"{where}: unknown id {obj!r}")
        _check_value("property name", prop, where)
        _check_value("value", value, where)
        a, b = _nat(start, where), _nat(end, where)
        if b < a:
            raise FormatError(f"{where}: interval end before start")
        prop_raw.setdefault((obj, prop), []).append(ValuedInterval(a, b, value))

    from .errors import ConflictingValue

    xi = {obj: coalesce(ivs) for obj, ivs in ex_raw.items()}
    sigma = {}
    for key, ivs in prop_raw.items():
        try:
            sigma[key] = coalesce_valued(ivs)
        except ConflictingValue as exc:
            raise FormatError(f"{p / 'properties.csv'}: {key[0]}.{key[1]}: {exc}")

    g = Itpg(
        omega=omega,
        nodes=nodes,
        edges=edges,
        rho=rho,
        labels=labels,
        xi=xi,
        sigma=sigma,
    )
    report = validate_itpg(g)
    if not report.ok():
        raise ValidationError(report)
    return g
