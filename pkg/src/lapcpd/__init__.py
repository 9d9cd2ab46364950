"""Laplacian-spectrum change point detection for dynamic graphs.

Single-view detection embeds each snapshot as the (top-k) singular values
of its Laplacian and scores deviations from short- and long-window normal
behavior; the multi-view variant aggregates per-view normalized-Laplacian
spectra with a scalar power mean before scoring.  Synthetic benchmark
generators and an evaluation harness reproduce the reference experiments.
"""

from .baselines import activity_detect, activity_vector, aggregate_scores
from .detector import (
    AnomalyScoreSeries,
    DetectorConfig,
    context_matrix,
    lad_detect,
    normal_behavior,
    ranked_steps,
    signature,
    z_score,
)
from .evaluation import (
    ExperimentSpec,
    TrialReport,
    hits_at_n,
    property_outlier_score,
    run_trials,
    spearman,
)
from .generators import (
    AnomalySchedule,
    BaSegment,
    GenConfig,
    SbmSegment,
    apply_continuity,
    ba_snapshot,
    flip_noise,
    generate_experiment,
    sbm_snapshot,
)
from .graphs import (
    DynamicGraph,
    EdgeRecord,
    GraphSnapshot,
    normalized_laplacian,
    parse_edge_stream,
    unnormalized_laplacian,
    write_edge_stream,
)
from .multiview import (
    PowerMeanConfig,
    multilad_detect,
    power_mean_spectrum,
    scalar_power_mean,
)
from .spectral import (
    ConvergenceError,
    dense_spectrum_oracle,
    dominant_left_singular_vector,
    top_k_singular_values,
)

__version__ = "0.1.0"
