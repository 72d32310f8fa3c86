"""Text formats for energies, labelings and reports.

Energy file::

    MSE 1
    n l m oriented
    <n lines of l reals: rows of D>
    <m lines "i j w": stored W entries, 0-based, i < j unless oriented>
    <l lines of l reals: rows of V>

Labeling file: ``n`` whitespace-separated integers.

Report file: a ``MSE-REPORT 1`` header followed by ``key value`` lines, with
repeated records enclosed in ``begin <name>`` / ``end <name>`` blocks.
"""
from __future__ import annotations

import io
import math
import os
from contextlib import contextmanager

import numpy as np
import scipy.sparse as sp

from .energy import Energy, check_labeling

__all__ = [
    "FormatError",
    "write_energy",
    "read_energy",
    "write_labeling",
    "read_labeling",
    "write_solve_report",
    "write_bench_report",
    "read_report",
    "fmt_real",
]

MAGIC = "MSE"
VERSION = 1
REPORT_MAGIC = "MSE-REPORT"


class FormatError(ValueError):
    pass


def fmt_real(x: float) -> str:
    # 17 significant digits round-trip every double
    return "%.17g" % x


@contextmanager
def _open(target, mode):
    if isinstance(target, (str, os.PathLike)):
        with open(target, mode, encoding="ascii", newline="\n") as fh:
            yield fh
    else:
        yield target


def write_energy(energy: Energy, dest) -> None:
    rows, cols, w = energy.edges
    buf = io.StringIO()
    buf.write(f"{MAGIC} {VERSION}\n")
    buf.write(f"{energy.n} {energy.l} {rows.size} {int(energy.oriented)}\n")
    for row in energy.D:
        buf.write(" ".join(map(fmt_real, row)) + "\n")
    for i, j, x in zip(rows, cols, w):
        buf.write(f"{i} {j} {fmt_real(x)}\n")
    for row in energy.V:
        buf.write(" ".join(map(fmt_real, row)) + "\n")
    with _open(dest, "w") as fh:
        fh.write(buf.getvalue())


def _reals(tokens, lineno, count):
    if len(tokens) != count:
        raise FormatError(f"line {lineno}: expected {count} values, got {len(tokens)}")
    try:
        vals = [float(t) for t in tokens]
    except ValueError as exc:
        raise FormatError(f"line {lineno}: {exc}") from None
    if not all(math.isfinite(v) for v in vals):
        raise FormatError(f"line {lineno}: non-finite value")
    return vals


def _ints(tokens, lineno, count):
    if len(tokens) != count:
        raise FormatError(f"line {lineno}: expected {count} values, got {len(tokens)}")
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FormatError(f"line {lineno}: expected integers") from None


def read_energy(source) -> Energy:
    with _open(source, "r") as fh:
        lines = fh.read().splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    it = iter(enumerate(lines, start=1))

    def take():
        try:
            lineno, line = next(it)
        except StopIteration:
            raise FormatError("unexpected end of file") from None
        return lineno, line.split()

    lineno, head = take()
    if head != [MAGIC, str(VERSION)]:
        raise FormatError(f"line {lineno}: bad magic/version {' '.join(head)!r}")
    lineno, dims = take()
    n, l, m, oriented = _ints(dims, lineno, 4)
    if n < 1 or l < 1 or m < 0 or oriented not in (0, 1):
        raise FormatError(f"line {lineno}: invalid header n={n} l={l} m={m} oriented={oriented}")

    def take_reals(count):
        lineno, tok = take()
        return _reals(tok, lineno, count)

    D = np.array([take_reals(l) for _ in range(n)])
    ei, ej, ew = [], [], []
    seen = set()
    for _ in range(m):
        lineno, tok = take()
        if len(tok) != 3:
            raise FormatError(f"line {lineno}: expected 'i j w'")
        i, j = _ints(tok[:2], lineno, 2)
        (w,) = _reals(tok[2:], lineno, 1)
        if not (0 <= i < n and 0 <= j < n):
            raise FormatError(f"line {lineno}: edge ({i},{j}) out of range")
        if i > j and not oriented:
            raise FormatError(f"line {lineno}: edge ({i},{j}) violates i<=j storage convention")
        if (i, j) in seen:
            raise FormatError(f"line {lineno}: duplicate edge ({i},{j})")
        seen.add((i, j))
        ei.append(i)
        ej.append(j)
        ew.append(w)
    V = np.array([take_reals(l) for _ in range(l)])
    extra = next(it, None)
    if extra is not None:
        raise FormatError(f"line {extra[0]}: unexpected trailing content")
    W = sp.coo_matrix((np.array(ew, dtype=float), (np.array(ei, dtype=np.int64), np.array(ej, dtype=np.int64))), shape=(n, n))
    return Energy(D.reshape(n, l), W, V.reshape(l, l), oriented=bool(oriented))


def write_labeling(labeling, dest) -> None:
    text = " ".join(str(int(x)) for x in np.asarray(labeling)) + "\n"
    with _open(dest, "w") as fh:
        fh.write(text)


def read_labeling(source, energy: Energy | None = None, n: int | None = None, l: int | None = None) -> np.ndarray:  # noqa: E741
    """Read a labeling, checking it against ``energy`` or explicit ``n``/``l``."""
    with _open(source, "r") as fh:
        tokens = fh.read().split()
    try:
        labels = np.array([int(t) for t in tokens], dtype=np.int64)
    except ValueError:
        raise FormatError("labeling must contain integers") from None
    if energy is not None:
        n, l = energy.n, energy.l
    if n is not None and labels.size != n:
        raise FormatError(f"labeling has {labels.size} entries, expected {n}")
    if l is not None and labels.size and (labels.min() < 0 or labels.max() >= l):
        raise FormatError(f"label out of range 0..{l - 1}")
    if energy is not None:
        check_labeling(energy, labels)
    return labels


def _kv(buf, key, value):
    if isinstance(value, float):
        value = fmt_real(value)
    elif value is None:
        value = "none"
    buf.write(f"{key} {value}\n")


def write_solve_report(report, dest, meta: dict | None = None) -> None:
    """Serialize a solve report; ``meta`` lines (method, seed, ...) come first."""
    buf = io.StringIO()
    buf.write(f"{REPORT_MAGIC} {VERSION}\n")
    _kv(buf, "kind", "solve")
    for k, v in (meta or {}).items():
        _kv(buf, k, v)
    _kv(buf, "n", int(report.final.size))
    _kv(buf, "final_energy", float(report.final_energy))
    _kv(buf, "termination_reason", report.termination_reason)
    _kv(buf, "total_sweeps", int(report.total_sweeps))
    _kv(buf, "levels", len(report.per_level))
    for rec in report.per_level:
        buf.write("begin level\n")
        _kv(buf, "level", rec.level)
        _kv(buf, "n", rec.n)
        _kv(buf, "start_energy", float(rec.start_energy))
        _kv(buf, "energy", float(rec.energy))
        _kv(buf, "sweeps", rec.sweeps)
        buf.write("end level\n")
    with _open(dest, "w") as fh:
        fh.write(buf.getvalue())


def write_bench_report(report, dest, include_timing: bool = False) -> None:
    """Serialize a benchmark report.

    Wall-clock times are omitted unless ``include_timing`` so that reruns
    with the same seed are byte-identical.
    """
    cfg = report.config
    t = cfg.template
    buf = io.StringIO()
    buf.write(f"{REPORT_MAGIC} {VERSION}\n")
    _kv(buf, "kind", "bench")
    for key, value in [
        ("instances", cfg.instances), ("rows", t.rows), ("cols", t.cols), ("labels", t.labels),
        ("lambda", float(t.lam)), ("seed", t.seed), ("methods", ",".join(cfg.methods)),
        ("oracle", int(cfg.oracle)), ("beta", float(cfg.pyramid.coarsen.beta)),
        ("delta", cfg.pyramid.coarsen.delta), ("samples", cfg.pyramid.coarsen.icm.restarts),
        ("sample_sweeps", cfg.pyramid.coarsen.icm.sweeps_per_sample),
        ("max_sweeps", cfg.pyramid.refine.max_sweeps), ("coarsest_size", cfg.pyramid.coarsest_size),
        ("sigma_scale", float(cfg.pyramid.coarsen.sigma_scale)),
    ]:
        _kv(buf, key, value)
    for key, value in report.summary().items():
        _kv(buf, key, value)
    if include_timing:
        for m in cfg.methods:
            _kv(buf, f"seconds.{m}", report.total_seconds(m))
    for rec in report.records:
        buf.write("begin instance\n")
        _kv(buf, "seed", rec.seed)
        for m in cfg.methods:
            _kv(buf, f"energy.{m}", float(rec.energies[m]))
            _kv(buf, f"sweeps.{m}", rec.sweeps[m])
            if include_timing:
                _kv(buf, f"seconds.{m}", rec.seconds[m])
        if rec.optimum is not None:
            _kv(buf, "optimum", float(rec.optimum))
            for m in cfg.methods:
                _kv(buf, f"gap.{m}", rec.gap(m))
        buf.write("end instance\n")
    with _open(dest, "w") as fh:
        fh.write(buf.getvalue())


def read_report(source) -> tuple[dict[str, str], list[tuple[str, dict[str, str]]]]:
    """Parse a report into its top-level fields and its ``(name, fields)`` blocks."""
    with _open(source, "r") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0].split() != [REPORT_MAGIC, str(VERSION)]:
        raise FormatError("bad report header")
    top, blocks, current = {}, [], None
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        key, _, value = line.partition(" ")
        if key == "begin":
            if current is not None:
                raise FormatError(f"line {lineno}: nested block")
            current = (value, {})
        elif key == "end":
            if current is None or current[0] != value:
                raise FormatError(f"line {lineno}: unmatched end")
            blocks.append(current)
            current = None
        else:
            (current[1] if current is not None else top)[key] = value
    if current is not None:
        raise FormatError("unterminated block")
    return top, blocks
