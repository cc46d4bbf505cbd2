""" Default search settings; the CLI overrides them per invocation. """
from dataclasses import dataclass, replace

DEFAULT_SEED = 0
DEFAULT_SAMPLES = 25
DEFAULT_RETRY_BUDGET = 200
DEFAULT_COEFFICIENT_BOUND = 3
DEFAULT_SPARSITY = 0.5


@dataclass(frozen=True)
class SearchSettings:
    seed: int = DEFAULT_SEED
    samples: int = DEFAULT_SAMPLES
    retry_budget: int = DEFAULT_RETRY_BUDGET
    coefficient_bound: int = DEFAULT_COEFFICIENT_BOUND
    sparsity: float = DEFAULT_SPARSITY

    def __post_init__(self):
        if self.samples < 0:
            raise ValueError(f"samples must be non-negative, got {self.samples}")
        if self.retry_budget < 1:
            raise ValueError(f"retry budget must be positive, got {self.retry_budget}")
        if self.coefficient_bound < 1:
            raise ValueError(f"coefficient bound must be positive, got {self.coefficient_bound}")
        if not 0.0 <= self.sparsity < 1.0:
            raise ValueError(f"sparsity must lie in [0, 1), got {self.sparsity}")

    def with_overrides(self, **changes) -> "SearchSettings":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


DEFAULT_SETTINGS = SearchSettings()
