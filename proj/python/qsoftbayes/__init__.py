"""Python bindings for the Q-Soft-Bayes C++ library.

Matrices are NumPy arrays (complex128 for Hermitian matrices, float64 for
portfolios and return vectors). Library errors surface as ``QsbError`` and
its subclasses.
"""

from ._qsoftbayes import (
    BatchMlResult,
    Dataset,
    DimensionError,
    DomainError,
    MlResult,
    NumericalError,
    QsbError,
    QsbState,
    SolverError,
    ValidationError,
    __version__,
    batch_ml_solve,
    best_fixed_portfolio,
    eta_bar,
    generate_dataset,
    golden_thompson_gap,
    learning_rate,
    ml_objective,
    ops_regret_bound,
    pauli_basis_povms,
    quantum_relative_entropy,
    regret_bound_at,
    reverse_jensen_gap,
    soft_bayes_step,
    stochastic_qsb,
)

__all__ = [
    "BatchMlResult",
    "Dataset",
    "DimensionError",
    "DomainError",
    "MlResult",
    "NumericalError",
    "QsbError",
    "QsbState",
    "SolverError",
    "ValidationError",
    "__version__",
    "batch_ml_solve",
    "best_fixed_portfolio",
    "eta_bar",
    "generate_dataset",
    "golden_thompson_gap",
    "learning_rate",
    "ml_objective",
    "ops_regret_bound",
    "pauli_basis_povms",
    "quantum_relative_entropy",
    "regret_bound_at",
    "reverse_jensen_gap",
    "soft_bayes_step",
    "stochastic_qsb",
]
