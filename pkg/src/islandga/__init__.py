"""Ring-topology island-model GA simulator with pluggable migrant-selection policies."""

__version__ = "0.1.0"

from .archipelago import RunResult, run
from .batch import run_batch, run_sweep
from .bitgenome import Genotype, consensus, hamming_distance, random_genotype
from .config import PRESETS, ExperimentConfig, load_config, preset
from .migration import MigrantPolicy
from .problems import MmdpProblem, PPeaksProblem

__all__ = [
    "ExperimentConfig",
    "Genotype",
    "MigrantPolicy",
    "MmdpProblem",
    "PPeaksProblem",
    "PRESETS",
    "RunResult",
    "consensus",
    "hamming_distance",
    "load_config",
    "preset",
    "random_genotype",
    "run",
    "run_batch",
    "run_sweep",
    "__version__",
]
