"""Corpus surveys: run swappability checks over many (graph, assignment) pairs."""

from __future__ import annotations

import csv
import io
import json
import logging
import random
import re
import time
from dataclasses import asdict, dataclass, field
from importlib import resources
from multiprocessing import Pool
from typing import Iterator, Optional, Sequence

import numpy as np

from ._engine import Instance
from .coloring import ListAssignment, is_proper_L_coloring
from .errors import CapacityError
from .graph import Graph, encode_graph6, is_k_regular, max_degree, read_graph6_file, read_graph6_lines, vertex_connectivity
from .reconfig import DEFAULT_CAP, component_labels, enumerate_canonical_assignments, random_assignment
from .structure import detect_structures

log = logging.getLogger(__name__)

DEFAULT_CAP_SECONDS = 60.0
DEFAULT_MAX_CLASSES = 10**5


@dataclass(frozen=True)
class SurveyMode:
    kind: str  # identical | canonical-degree | canonical | random
    k: Optional[int] = None  # None means the maximum degree of each graph
    palette: Optional[int] = None
    samples: int = 1000
    seed: int = 0
    max_classes: int = DEFAULT_MAX_CLASSES
    skip_identical: bool = False

    def list_size(self, g: Graph) -> int:
        return self.k if self.k is not None else max_degree(g)


_MODE_RE = re.compile(
    r"^(?P<kind>identical|canonical-degree|canonical|random)"
    r"(?:-(?P<k>k|\d+))?(?::(?P<a>\d+))?(?::(?P<b>\d+))?$"
)


def parse_mode(text: str, palette: Optional[int] = None, samples: Optional[int] = None,
               seed: Optional[int] = None, max_classes: int = DEFAULT_MAX_CLASSES,
               skip_identical: bool = False) -> SurveyMode:
    """Parse ``identical-k``, ``canonical-degree``, ``canonical-k:palette`` or ``random-k:samples:seed``.

    ``k`` may be a number or the letter ``k`` (use each graph's maximum
    degree). Trailing fields can also come from the explicit arguments, which
    win over the mode string.
    """
    m = _MODE_RE.match(text.strip())
    if not m:
        raise ValueError(f"cannot parse survey mode {text!r}")
    kind = m["kind"]
    k = None if m["k"] in (None, "k") else int(m["k"])
    a = int(m["a"]) if m["a"] else None
    b = int(m["b"]) if m["b"] else None
    if kind in ("identical", "canonical-degree") and (a is not None or b is not None):
        raise ValueError(f"mode {kind} takes no extra fields")
    if kind == "canonical-degree" and m["k"] is not None:
        raise ValueError("canonical-degree takes no list size")
    if kind == "canonical":
        if b is not None:
            raise ValueError("canonical mode takes one field (palette)")
        return SurveyMode(kind, k, palette if palette is not None else a,
                          max_classes=max_classes, skip_identical=skip_identical)
    if kind == "random":
        return SurveyMode(kind, k, palette,
                          samples if samples is not None else (a if a is not None else 1000),
                          seed if seed is not None else (b if b is not None else 0),
                          skip_identical=skip_identical)
    return SurveyMode(kind, k, palette, max_classes=max_classes, skip_identical=skip_identical)


def assignments_for(g: Graph, mode: SurveyMode) -> Iterator[tuple[str, ListAssignment]]:
    """(class id, assignment) pairs for one graph, in a fixed order."""
    n = g.n
    if mode.kind == "identical":
        k = mode.list_size(g)
        yield "identical", ListAssignment.uniform(n, range(1, k + 1))
        return
    if mode.kind == "canonical-degree":
        sizes = g.degrees()
        palette = mode.palette if mode.palette is not None else sum(sizes)
        for i, lists in enumerate(enumerate_canonical_assignments(g, sizes, palette)):
            if i >= mode.max_classes:
                log.warning("%s: stopped after %d assignment classes", encode_graph6(g), i)
                return
            yield f"canon:{i}", lists
        return
    k = mode.list_size(g)
    if mode.kind == "canonical":
        palette = mode.palette if mode.palette is not None else k + 2
        for i, lists in enumerate(enumerate_canonical_assignments(g, [k] * n, palette)):
            if i >= mode.max_classes:
                log.warning("%s: stopped after %d assignment classes", encode_graph6(g), i)
                return
            yield f"canon:{i}", lists
        return
    palette = mode.palette if mode.palette is not None else 3 * k
    # seeded per graph so results do not depend on corpus order or worker count
    rng = random.Random(f"{mode.seed}/{encode_graph6(g)}")
    for i in range(mode.samples):
        yield f"random:{i}", random_assignment([k] * n, palette, rng)


@dataclass
class SurveyRecord:
    graph6: str
    n: int
    regularity: Optional[int]
    connectivity: int
    assignment: str
    identical: bool
    swappable: bool
    colorings: int
    components: int
    structures: list[str] = field(default_factory=list)
    lists: Optional[list[list[int]]] = None
    witness: Optional[dict] = None
    elapsed: float = 0.0

    def __post_init__(self):
        if self.swappable and not (self.components == 1 and self.colorings >= 1):
            raise ValueError("inconsistent verdict: swappable needs one component and a coloring")

    def to_json(self, timing: bool = False) -> dict:
        out = asdict(self)
        if not timing:
            del out["elapsed"]
        return out


CSV_FIELDS = ["graph6", "n", "regularity", "connectivity", "assignment", "identical", "swappable",
              "colorings", "components", "structures", "lists", "witness"]


def record_to_row(rec: SurveyRecord, timing: bool = False) -> dict:
    row = rec.to_json(timing)
    row["structures"] = ";".join(rec.structures)
    row["lists"] = json.dumps(rec.lists) if rec.lists is not None else ""
    row["witness"] = json.dumps(rec.witness) if rec.witness is not None else ""
    row["regularity"] = "" if rec.regularity is None else rec.regularity
    return row


def row_to_record(row: dict) -> SurveyRecord:
    def as_bool(s):
        return s in (True, "True", "true", "1")
    return SurveyRecord(
        graph6=row["graph6"], n=int(row["n"]),
        regularity=int(row["regularity"]) if row["regularity"] not in ("", None) else None,
        connectivity=int(row["connectivity"]), assignment=row["assignment"],
        identical=as_bool(row["identical"]), swappable=as_bool(row["swappable"]),
        colorings=int(row["colorings"]), components=int(row["components"]),
        structures=[s for s in row["structures"].split(";") if s],
        lists=json.loads(row["lists"]) if row["lists"] else None,
        witness=json.loads(row["witness"]) if row["witness"] else None,
        elapsed=float(row.get("elapsed") or 0.0),
    )


class _OverTime(Exception):
    pass


def check_instance(g: Graph, lists: ListAssignment, cap_colorings: int = DEFAULT_CAP,
                   cap_seconds: float = DEFAULT_CAP_SECONDS) -> tuple[int, int, Optional[dict]]:
    """Colorings, components and (when separated) a witness pair with component ids.

    The time cap is checked between the enumeration and component phases.
    """
    start = time.perf_counter()
    inst = Instance(g, lists)
    codes = inst.enumerate(cap_colorings)
    if time.perf_counter() - start > cap_seconds:
        raise _OverTime()
    if len(codes) == 0:
        return 0, 0, None
    roots, _ = inst.components(codes)
    ncomp = len(np.unique(roots))
    witness = None
    if ncomp > 1:
        j = int(np.argmax(roots != roots[0]))
        witness = {
            "first": list(inst.decode(codes[0])),
            "second": list(inst.decode(codes[j])),
            "component_ids": [int(roots[0]), int(roots[j])],
        }
    return len(codes), ncomp, witness


def verify_separation(g: Graph, lists: ListAssignment, witness: dict) -> bool:
    """Re-check that the witness colorings are L-colorings in different components."""
    first, second = tuple(witness["first"]), tuple(witness["second"])
    if not (is_proper_L_coloring(g, lists, first) and is_proper_L_coloring(g, lists, second)):
        return False
    a, b = component_labels(g, lists, [first, second])
    return a != b


def _graph_task(args) -> tuple[list[SurveyRecord], list[dict]]:
    g, mode, cap_colorings, cap_seconds, structures, timing = args
    g6 = encode_graph6(g)
    reg = is_k_regular(g)
    conn = vertex_connectivity(g)
    found = []
    if structures:
        found = [w.kind for w in detect_structures(g).values() if w is not None]
    records, skipped = [], []
    for cls, lists in assignments_for(g, mode):
        identical = lists.is_identical()
        if mode.skip_identical and identical:
            continue
        t0 = time.perf_counter()
        try:
            colorings, comps, witness = check_instance(g, lists, cap_colorings, cap_seconds)
        except CapacityError as exc:
            log.warning("%s %s skipped: %s", g6, cls, exc)
            skipped.append({"graph6": g6, "assignment": cls, "reason": str(exc)})
            continue
        except _OverTime:
            log.warning("%s %s skipped: over %.0f s", g6, cls, cap_seconds)
            skipped.append({"graph6": g6, "assignment": cls, "reason": "time cap"})
            continue
        swappable = colorings >= 1 and comps == 1
        records.append(SurveyRecord(
            g6, g.n, reg, conn, cls, identical, swappable, colorings, comps, found,
            None if swappable else lists.sorted_lists(), witness,
            time.perf_counter() - t0 if timing else 0.0,
        ))
    return records, skipped


@dataclass
class SurveyResult:
    records: list[SurveyRecord]
    skipped: list[dict]

    @property
    def non_swappable(self) -> list[SurveyRecord]:
        return [r for r in self.records if not r.swappable]

    def summary(self) -> dict:
        graphs = {r.graph6 for r in self.records}
        return {
            "graphs": len(graphs),
            "instances": len(self.records),
            "skipped": self.skipped,
            "non_swappable": [
                {"graph6": r.graph6, "assignment": r.assignment, "identical": r.identical,
                 "colorings": r.colorings, "components": r.components}
                for r in self.non_swappable
            ],
        }

    def to_json(self, timing: bool = False) -> dict:
        return {"records": [r.to_json(timing) for r in self.records], "summary": self.summary()}

    def to_csv(self, timing: bool = False) -> str:
        buf = io.StringIO()
        fields = CSV_FIELDS + (["elapsed"] if timing else [])
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for r in self.records:
            writer.writerow(record_to_row(r, timing))
        return buf.getvalue()


def run_survey(graphs: Sequence[Graph], mode: SurveyMode, cap_colorings: int = DEFAULT_CAP,
               cap_seconds: float = DEFAULT_CAP_SECONDS, jobs: int = 1,
               structures: bool = True, timing: bool = False) -> SurveyResult:
    """Survey every graph under ``mode``; output order follows the corpus order."""
    tasks = [(g, mode, cap_colorings, cap_seconds, structures, timing) for g in graphs]
    if jobs > 1 and len(tasks) > 1:
        with Pool(jobs) as pool:
            parts = pool.map(_graph_task, tasks, chunksize=1)
    else:
        parts = [_graph_task(t) for t in tasks]
    records, skipped = [], []
    for recs, skips in parts:
        records.extend(recs)
        skipped.extend(skips)
    return SurveyResult(records, skipped)


# -- corpora ------------------------------------------------------------------

BUNDLED = {
    "cubic": "cubic_n4-10.g6",
    "quartic": "quartic_n5-9.g6",
}


def bundled_corpus(name: str) -> list[Graph]:
    """Graphs of a bundled corpus (``cubic``: n 4..10, ``quartic``: n 5..9)."""
    if name not in BUNDLED:
        raise ValueError(f"unknown bundled corpus {name!r}; choose from {sorted(BUNDLED)}")
    text = resources.files("kempe_lab").joinpath("data", BUNDLED[name]).read_text()
    return [g for _, _, g in read_graph6_lines(text.splitlines())]


def load_corpus(spec: str) -> list[Graph]:
    """A graph6 file path, or ``bundled:NAME``."""
    if spec.startswith("bundled:"):
        return bundled_corpus(spec.split(":", 1)[1])
    return read_graph6_file(spec)
