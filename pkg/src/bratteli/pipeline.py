"""Full verification pipeline and its JSON report.

``verify_all`` validates the input, obtains a completion (building one
for an unmarked diagram, reconstructing one from marks otherwise), and
then runs every combinatorial and matrix check in a fixed order.  The
report is a plain dict with stable key order, safe to serialize and
byte-reproducible for fixed input and options.

A level cap truncates the completion for the representation-based checks
only; path counts, fullness, and filtration always run on the full
completion, since truncation can legitimately strand an added vertex as a
sink on the last kept level (which is flagged, not failed).
"""

from __future__ import annotations

from dataclasses import dataclass

from .completion import Completion, complete, completion_from_marked, is_unital
from .diagram import BratteliDiagram, InvalidDiagramError, deficiencies, validate
from .filtration import filtration_dims, verify_filtration
from .paths import count_paths_from, fullness_check
from .representation import (
    DEFAULT_PAIR_BUDGET,
    build_rep,
    corner_analysis,
    verify_ck,
    verify_embedding,
    verify_matrix_units,
)

CHECK_NAMES = (
    "validate",
    "deficiency",
    "complete",
    "path-count",
    "build-rep",
    "ck-relations",
    "matrix-units",
    "embedding",
    "corners",
    "fullness",
    "filtration",
)


@dataclass(frozen=True)
class VerifyOptions:
    level_cap: int | None = None
    pair_budget: int = DEFAULT_PAIR_BUDGET
    seed: int = 0

    def to_dict(self) -> dict:
        return {
            "level_cap": self.level_cap,
            "pair_budget": self.pair_budget,
            "seed": self.seed,
        }


def verify_all(
    d: BratteliDiagram,
    options: VerifyOptions | None = None,
    source: str = "<memory>",
) -> dict:
    """Run every check on a diagram or a marked completion; JSON-able dict.

    The ``checks`` list always contains the same names in the same order;
    checks that cannot run because an earlier one failed appear with
    ``ok`` false and a ``skipped`` detail.  ``summary.ok`` is the
    conjunction of all checks.
    """
    opts = options or VerifyOptions()
    checks: list[dict] = []
    emitted: set[str] = set()

    def emit(name: str, ok: bool, details: dict) -> None:
        checks.append({"name": name, "ok": bool(ok), "details": details})
        emitted.add(name)

    def skip_rest(reason: str) -> None:
        for name in CHECK_NAMES:
            if name not in emitted:
                emit(name, False, {"skipped": reason})

    report = {
        "input": {
            "source": source,
            "levels": d.num_levels,
            "vertices": sum(len(level) for level in d.labels),
            "marked": len(d.marks),
        },
        "options": opts.to_dict(),
        "checks": checks,
    }

    def finish() -> dict:
        report["summary"] = {"ok": all(c["ok"] for c in checks)}
        return report

    base = validate(d, relax_emission=False)
    emit("validate", base.ok, base.to_dict())
    if not base.ok:
        skip_rest("input diagram is invalid")
        return finish()

    completion: Completion | None
    if d.marks:
        completion, rec_report = completion_from_marked(d)
        if completion is None:
            emit("deficiency", False, {"skipped": "marked diagram could not be reconstructed"})
            emit("complete", False, rec_report.to_dict())
            skip_rest("no completion available")
            return finish()
        original = completion.original()
        emit(
            "deficiency",
            True,
            {"levels": [list(level) for level in completion.deficiency.values]},
        )
        details = rec_report.to_dict()
        details.update(
            {
                "mode": "reconstructed from marks",
                "added": [str(v) for v in sorted(completion.added)],
                "unital": is_unital(original),
            }
        )
        emit("complete", rec_report.ok, details)
        if not rec_report.ok:
            skip_rest("marked diagram is not a genuine completion")
            return finish()
    else:
        deficit = deficiencies(d)
        emit("deficiency", True, {"levels": [list(level) for level in deficit.values]})
        completion = complete(d)
        emit(
            "complete",
            True,
            {
                "mode": "built from the input",
                "added": [str(v) for v in sorted(completion.added)],
                "unital": is_unital(d),
            },
        )

    completed = completion.diagram
    count_failures = []
    realized: dict[str, list[int]] = {}
    for v in completed.vertices():
        got = count_paths_from(completed, completion.added, v)
        realized[str(v)] = [got, completed.label(v)]
        if got != completed.label(v):
            count_failures.append(f"vertex {v}: {got} paths from the added set, label {completed.label(v)}")
    emit(
        "path-count",
        not count_failures,
        {
            "vertices": sum(len(level) for level in completed.labels),
            "realized_vs_label": realized,
            "failures": count_failures,
        },
    )

    working = completion
    truncated = False
    if opts.level_cap is not None and opts.level_cap + 1 < completion.num_stored_levels:
        working = completion.truncate(opts.level_cap)
        truncated = True
    try:
        rep = build_rep(working.diagram)
    except InvalidDiagramError as exc:
        emit("build-rep", False, {"error": str(exc)})
        skip_rest("representation could not be built")
        return finish()
    emit(
        "build-rep",
        True,
        {
            "dim": rep.dim,
            "truncated_to_level": opts.level_cap if truncated else None,
            "last_level_has_added": working.last_level_has_added(),
        },
    )

    ck = verify_ck(rep)
    emit("ck-relations", ck.ok, ck.to_dict())

    unit_findings = []
    units_ok = True
    for v in rep.diagram.vertices():
        r = verify_matrix_units(rep, v, pair_budget=opts.pair_budget, seed=opts.seed)
        units_ok = units_ok and r.ok
        unit_findings.extend(f.to_dict() for f in r.findings)
    emit(
        "matrix-units",
        units_ok,
        {"vertices": sum(len(level) for level in rep.diagram.labels), "findings": unit_findings},
    )

    embed_findings = []
    embed_ok = True
    non_sinks = [v for v in rep.diagram.vertices() if not rep.diagram.is_sink(v)]
    for v in non_sinks:
        r = verify_embedding(rep, v, pair_budget=opts.pair_budget, seed=opts.seed)
        embed_ok = embed_ok and r.ok
        embed_findings.extend(f.to_dict() for f in r.findings)
    emit(
        "embedding",
        embed_ok,
        {"vertices": len(non_sinks), "findings": embed_findings},
    )

    corners = corner_analysis(rep, pair_budget=opts.pair_budget, seed=opts.seed)
    emit("corners", corners.identities_ok, corners.to_dict())

    full = fullness_check(completion)
    emit("fullness", full.ok, full.to_dict())

    filt = verify_filtration(completion)
    dims = filtration_dims(completion)
    deltas_ok = all(
        sum(level.augmented_dims) - sum(level.stage_dims) in (0, 1) for level in dims
    )
    emit(
        "filtration",
        filt.ok and deltas_ok,
        {
            "findings": [f.to_dict() for f in filt.findings],
            "levels": [level.to_dict() for level in dims],
            "block_deltas_in_unit_range": deltas_ok,
        },
    )

    return finish()
