from ._cqblab import (
    Tensor,
    acceptance,
    assemble,
    cqb_value,
    dcqb_value,
    einstein_constant,
    form_check,
    form_eigenvalues,
    integrate,
    mostow_siu,
    q_eigenvalues,
    random_kahler_operator,
    random_tensor_in_c0,
    rank1_check,
    reaction_derivative,
    run,
)

__all__ = [
    "Tensor",
    "acceptance",
    "assemble",
    "cqb_value",
    "dcqb_value",
    "einstein_constant",
    "form_check",
    "form_eigenvalues",
    "integrate",
    "mostow_siu",
    "q_eigenvalues",
    "random_kahler_operator",
    "random_tensor_in_c0",
    "rank1_check",
    "reaction_derivative",
    "run",
]
