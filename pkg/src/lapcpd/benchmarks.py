"""Benchmark families wiring schedules, methods and the trial harness.

Each family reproduces one synthetic experiment: the single-view settings
(pure / hybrid / resampled), the multi-view SBM sweeps over cross-block
connectivity, noise level and view count, the multi-view BA sweep, and the
power-order ablation.  ``run_family`` returns trial reports suitable for
the CSV/table emitters in the evaluation module.
"""

from __future__ import annotations

from .detector import DetectorConfig
from .evaluation import ExperimentSpec, run_trials
from .multiview import PowerMeanConfig
from . import schedules

__all__ = ["FAMILIES", "DEFAULT_TRIALS", "run_family"]

DEFAULT_TRIALS = 30

SINGLE_VIEW_METHODS = ["lad", "activity"]
MULTI_VIEW_METHODS = [
    "multilad", "lad", "nl_lad", "maxlad", "meanlad", "nl_maxlad", "nl_meanlad",
]

DEFAULT_COUT_SWEEP = (2.0, 4.0, 6.0, 8.0, 10.0)
DEFAULT_NOISE_SWEEP = (0.0, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30)
DEFAULT_VIEWS_SWEEP = (3, 6, 9, 12)
DEFAULT_P_SWEEP = (-10.0, -5.0, -1.0, 1.0, 5.0, 10.0)

_DETECTOR = DetectorConfig(w_short=5, w_long=10, k=None)


def _as_tuple(value, default):
    """Sweep option normalization: None -> default, scalar -> 1-tuple."""
    if value is None:
        return tuple(default)
    if isinstance(value, (int, float)):
        return (value,)
    return tuple(value)


def _as_scalar(value, default):
    if value is None:
        return default
    if isinstance(value, (tuple, list)):
        if len(value) != 1:
            raise ValueError(f"expected a single value, got {value}")
        return value[0]
    return value


def _spec(experiment_id, schedule, gen, p=-10.0):
    return ExperimentSpec(
        experiment_id=experiment_id,
        schedule=schedule,
        gen=gen,
        detector=_DETECTOR,
        power_mean=PowerMeanConfig(p),
        n_top=7,
    )


def _run_single_view(family, preset, trials, seed, jobs):
    schedule, gen = preset()
    spec = _spec(family, schedule, gen)
    return run_trials(spec, SINGLE_VIEW_METHODS, trials, seed, jobs=jobs)


def _pure(trials, seed, jobs, opts):
    return _run_single_view("pure", schedules.pure_setting, trials, seed, jobs)


def _hybrid(trials, seed, jobs, opts):
    return _run_single_view("hybrid", schedules.hybrid_setting, trials, seed, jobs)


def _resampled(trials, seed, jobs, opts):
    return _run_single_view("resampled", schedules.resampled_setting, trials, seed, jobs)


def _sbm_cout_sweep(trials, seed, jobs, opts):
    couts = _as_tuple(opts.get("cout"), DEFAULT_COUT_SWEEP)
    views = int(_as_scalar(opts.get("views"), 3))
    reports = []
    for c_out in couts:
        schedule, gen = schedules.multiview_sbm_change_points(
            p_ex=c_out / 500.0, n_views=views
        )
        spec = _spec(f"sbm-cout-sweep[c_out={c_out:g}]", schedule, gen)
        reports.extend(run_trials(spec, MULTI_VIEW_METHODS, trials, seed, jobs=jobs))
    return reports


def _sbm_noise_sweep(trials, seed, jobs, opts):
    noises = _as_tuple(opts.get("noise"), DEFAULT_NOISE_SWEEP)
    views = int(_as_scalar(opts.get("views"), 3))
    reports = []
    for p_n in noises:
        schedule, gen = schedules.multiview_sbm_events_and_changes(
            n_views=views, noise=p_n
        )
        spec = _spec(f"sbm-noise-sweep[p_n={p_n:g}]", schedule, gen)
        reports.extend(run_trials(spec, MULTI_VIEW_METHODS, trials, seed, jobs=jobs))
    return reports


def _sbm_views_sweep(trials, seed, jobs, opts):
    views_list = _as_tuple(opts.get("views"), DEFAULT_VIEWS_SWEEP)
    reports = []
    for m in views_list:
        schedule, gen = schedules.multiview_sbm_change_points(p_ex=0.012, n_views=int(m))
        spec = _spec(f"sbm-views-sweep[views={m}]", schedule, gen)
        reports.extend(run_trials(spec, MULTI_VIEW_METHODS, trials, seed, jobs=jobs))
    return reports


def _ba_views_sweep(trials, seed, jobs, opts):
    views_list = _as_tuple(opts.get("views"), DEFAULT_VIEWS_SWEEP)
    reports = []
    for m in views_list:
        schedule, gen = schedules.multiview_ba_change_points(n_views=int(m))
        spec = _spec(f"ba-views-sweep[views={m}]", schedule, gen)
        reports.extend(run_trials(spec, MULTI_VIEW_METHODS, trials, seed, jobs=jobs))
    return reports


def _p_ablation(trials, seed, jobs, opts):
    powers = _as_tuple(opts.get("p"), DEFAULT_P_SWEEP)
    views = int(_as_scalar(opts.get("views"), 3))
    # Hardest well-posed sweep point: c_out = 4 (p_ex = 0.008).
    schedule, gen = schedules.multiview_sbm_change_points(p_ex=0.008, n_views=views)
    reports = []
    for p in powers:
        spec = _spec(f"p-ablation[p={p:g}]", schedule, gen, p=p)
        reports.extend(run_trials(spec, ["multilad"], trials, seed, jobs=jobs))
    return reports


FAMILIES = {
    "pure": _pure,
    "hybrid": _hybrid,
    "resampled": _resampled,
    "sbm-cout-sweep": _sbm_cout_sweep,
    "sbm-noise-sweep": _sbm_noise_sweep,
    "sbm-views-sweep": _sbm_views_sweep,
    "ba-views-sweep": _ba_views_sweep,
    "p-ablation": _p_ablation,
}


def run_family(family, trials=DEFAULT_TRIALS, seed=0, jobs=1, **opts):
    """Run a named benchmark family end to end.

    ``opts`` narrows sweeps: ``cout`` / ``noise`` / ``p`` accept sequences
    of values, ``views`` an int (or sequence for the view sweeps).
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown experiment family {family!r}; "
                         f"known: {sorted(FAMILIES)}")
    return FAMILIES[family](trials, seed, jobs, opts)
