"""privclust: clustering with an auxiliary privileged data view.

Core pieces: validity indices (Rand, adjusted Rand, entropy, MI, NMI),
seeded clusterers (K-Means, EM, spectral, SOM, SOM2K), consensus selection
over a privileged view, dot-product label fusion with re-clustering,
synthetic paired-data generators, a Wilcoxon signed-rank test, and a
reproducible benchmark harness with CSV/JSON reports and box-plot figures.
"""

from .clusterers import (
    CLUSTERERS,
    ClustererConfig,
    ClusteringResult,
    em_gmm,
    kmeans,
    run_clusterer,
    som,
    som2k,
    spectral,
)
from .consensus import BestPair, ConsensusConfig, ConsensusTrace, arimax, best_by_nmi
from .datagen import (
    PairedDataset,
    SyntheticConfig,
    gen_gaussian_privileged,
    gen_pointwise_privileged,
    gen_technical,
    list_presets,
    load_preset,
    make_paired,
)
from .harness import METHOD_NAMES, ExperimentPlan, run_plan
from .io import ExperimentReport, load_matrix, load_paired, read_report, save_matrix, summarize, write_report
from .numerics import (
    PcaModel,
    concat_features,
    euclidean_distance,
    jacobi_eigh,
    minmax_normalize,
    pca_fit,
    pca_transform,
    project_onto_line,
)
from .pdot import (
    AlignedPair,
    PdotConfig,
    PdotTrace,
    align_labels,
    fuse_consensus_attributes,
    pdot,
    pdot_em,
    rd_ratio,
)
from .stats import WilcoxonResult, wilcoxon_signed_rank
from .validity import (
    ContingencyTable,
    adjusted_rand,
    canonicalize,
    contingency,
    entropy,
    mutual_information,
    nmi,
    rand_index,
)

__version__ = "0.1.0"
