"""Preset benchmark schedules and the experiment config file format.

The synthetic benchmark families plant seven anomalies at time steps
{16, 31, 61, 76, 91, 106, 136} over 151 steps on 500-node graphs.  Presets
return ``(AnomalySchedule, GenConfig)`` pairs; the config file loader reads
the same information from a JSON document so runs can be declared on disk.
"""

from __future__ import annotations

import json

from .generators import AnomalySchedule, BaSegment, GenConfig, SbmSegment

__all__ = [
    "TOTAL_STEPS",
    "ANOMALY_TIMES",
    "pure_setting",
    "hybrid_setting",
    "resampled_setting",
    "multiview_sbm_change_points",
    "multiview_sbm_events_and_changes",
    "multiview_ba_change_points",
    "load_experiment_config",
    "dump_experiment_config",
]

TOTAL_STEPS = 151
ANOMALY_TIMES = (16, 31, 61, 76, 91, 106, 136)


def _sbm_rows(spec_rows):
    return [
        (t, kind, SbmSegment(nc, p_in, p_ex, length=1))
        for (t, kind, nc, p_in, p_ex) in spec_rows
    ]


def pure_setting(seed=0):
    """Change points only; graphs are frozen between them.

    The block count alternates 4 -> 10 -> 2 (with ``p_in`` 0.5 for the
    two-block segments) at the seven anomaly times.
    """
    rows = _sbm_rows(
        [
            (0, "start", 4, 0.25, 0.05),
            (16, "change_point", 10, 0.25, 0.05),
            (31, "change_point", 2, 0.5, 0.05),
            (61, "change_point", 4, 0.25, 0.05),
            (76, "change_point", 10, 0.25, 0.05),
            (91, "change_point", 2, 0.5, 0.05),
            (106, "change_point", 4, 0.25, 0.05),
            (136, "change_point", 10, 0.25, 0.05),
        ]
    )
    schedule = AnomalySchedule.from_rows(rows, TOTAL_STEPS)
    return schedule, GenConfig(n_nodes=500, n_views=1, continuity=1.0, seed=seed)


def _hybrid_schedule():
    rows = _sbm_rows(
        [
            (0, "start", 4, 0.25, 0.05),
            (16, "event", 4, 0.25, 0.15),
            (31, "change_point", 10, 0.25, 0.05),
            (61, "event", 10, 0.25, 0.15),
            (76, "change_point", 2, 0.5, 0.05),
            (91, "event", 2, 0.5, 0.15),
            (106, "change_point", 4, 0.25, 0.05),
            (136, "event", 4, 0.25, 0.15),
        ]
    )
    return AnomalySchedule.from_rows(rows, TOTAL_STEPS)


def hybrid_setting(seed=0):
    """Alternating events (tripled cross-block connectivity for one step)
    and change points, with continuity 0.9 away from change points."""
    return _hybrid_schedule(), GenConfig(n_nodes=500, n_views=1, continuity=0.9, seed=seed)


def resampled_setting(seed=0):
    """The hybrid schedule with zero continuity: every step is a fresh
    view of the active generative regime.

    Non-boundary steps emit within-block node relabelings of the segment's
    draw (distributionally a fresh block-model sample), making this the
    permutation-invariance stress test: spectrum-based detection is
    unaffected while node-aligned embeddings lose track of the graph.
    """
    cfg = GenConfig(
        n_nodes=500, n_views=1, continuity=0.0, seed=seed,
        relabel_within_segments=True,
    )
    return _hybrid_schedule(), cfg


def multiview_sbm_change_points(p_ex=0.012, n_views=3, seed=0, noise=0.0):
    """Block-count ladder 2-4-6-10-20-10-6-4 at fixed ``p_in = 0.024``.

    ``p_ex`` = c_out / 500 controls the difficulty (community structure
    vanishes as c_out approaches c_in = 12).  Snapshots are resampled each
    step.
    """
    p_in = 0.024
    rows = _sbm_rows(
        [
            (0, "start", 2, p_in, p_ex),
            (16, "change_point", 4, p_in, p_ex),
            (31, "change_point", 6, p_in, p_ex),
            (61, "change_point", 10, p_in, p_ex),
            (76, "change_point", 20, p_in, p_ex),
            (91, "change_point", 10, p_in, p_ex),
            (106, "change_point", 6, p_in, p_ex),
            (136, "change_point", 4, p_in, p_ex),
        ]
    )
    schedule = AnomalySchedule.from_rows(rows, TOTAL_STEPS)
    cfg = GenConfig(n_nodes=500, n_views=n_views, continuity=0.0, noise=noise, seed=seed)
    return schedule, cfg


def multiview_sbm_events_and_changes(n_views=3, seed=0, noise=0.0):
    """Sparse SBM (p_in 0.024, p_ex 0.004) with events tripling ``p_ex``
    for one step and change points moving the block count."""
    p_in, p_ex, p_event = 0.024, 0.004, 0.012
    rows = _sbm_rows(
        [
            (0, "start", 4, p_in, p_ex),
            (16, "event", 4, p_in, p_event),
            (31, "change_point", 10, p_in, p_ex),
            (61, "event", 10, p_in, p_event),
            (76, "change_point", 2, p_in, p_ex),
            (91, "event", 2, p_in, p_event),
            (106, "change_point", 4, p_in, p_ex),
            (136, "event", 4, p_in, p_event),
        ]
    )
    schedule = AnomalySchedule.from_rows(rows, TOTAL_STEPS)
    cfg = GenConfig(n_nodes=500, n_views=n_views, continuity=0.0, noise=noise, seed=seed)
    return schedule, cfg


def multiview_ba_change_points(n_views=12, seed=0):
    """Densification ladder: edges per new node grow 1 through 8."""
    rows = [
        (t, kind, BaSegment(m, length=1))
        for (t, kind, m) in [
            (0, "start", 1),
            (16, "change_point", 2),
            (31, "change_point", 3),
            (61, "change_point", 4),
            (76, "change_point", 5),
            (91, "change_point", 6),
            (106, "change_point", 7),
            (136, "change_point", 8),
        ]
    ]
    schedule = AnomalySchedule.from_rows(rows, TOTAL_STEPS)
    cfg = GenConfig(n_nodes=500, n_views=n_views, continuity=0.0, seed=seed)
    return schedule, cfg


def _row_to_json(t, kind, seg):
    d = {"time": int(t), "kind": kind}
    if isinstance(seg, SbmSegment):
        d.update(model="sbm", n_blocks=seg.n_blocks, p_in=seg.p_in, p_ex=seg.p_ex)
    else:
        d.update(model="ba", m_attach=seg.m_attach)
    return d


def dump_experiment_config(schedule: AnomalySchedule, cfg: GenConfig, path):
    """Write a schedule + generation config as a JSON experiment file."""
    rows = []
    t = 0
    for seg in schedule.segments:
        rows.append(_row_to_json(t, seg.kind, seg))
        t += seg.length
    doc = {
        "total_steps": schedule.total,
        "n_nodes": cfg.n_nodes,
        "n_views": cfg.n_views,
        "continuity": cfg.continuity,
        "noise": cfg.noise,
        "seed": cfg.seed,
        "relabel_within_segments": cfg.relabel_within_segments,
        "rows": rows,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def _row_from_json(row):
    kind = row["kind"]
    model = row.get("model", "sbm")
    if model == "sbm":
        seg = SbmSegment(
            int(row["n_blocks"]), float(row["p_in"]), float(row["p_ex"]), length=1
        )
    elif model == "ba":
        seg = BaSegment(int(row["m_attach"]), length=1)
    else:
        raise ValueError(f"unknown model {model!r}")
    return int(row["time"]), kind, seg


def load_experiment_config(path_or_file):
    """Read a JSON experiment file into ``(AnomalySchedule, GenConfig)``.

    Consecutive rows with identical parameters are allowed; ``start`` rows
    after events are reconstructed automatically by the schedule builder.
    """
    if hasattr(path_or_file, "read"):
        doc = json.load(path_or_file)
    else:
        with open(path_or_file, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    try:
        rows = [_row_from_json(r) for r in doc["rows"]]
        schedule = AnomalySchedule.from_rows(rows, int(doc["total_steps"]))
        cfg = GenConfig(
            n_nodes=int(doc.get("n_nodes", 500)),
            n_views=int(doc.get("n_views", 1)),
            continuity=float(doc.get("continuity", 0.0)),
            noise=float(doc.get("noise", 0.0)),
            seed=int(doc.get("seed", 0)),
            relabel_within_segments=bool(doc.get("relabel_within_segments", False)),
        )
    except KeyError as exc:
        raise ValueError(f"experiment config is missing key {exc}") from None
    return schedule, cfg
