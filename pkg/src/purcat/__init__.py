"""purcat: a workbench for pure homological algebra over Z and Z/m."""

from purcat.exact_linalg import (
    IntMatrix,
    InputError,
    LinearSystem,
    Ring,
    SmithDecomposition,
    WorkbenchError,
    ZZ,
    Zmod,
    kernel_basis,
    smith_normal_form,
    solve_linear,
)

__all__ = [
    "IntMatrix",
    "InputError",
    "LinearSystem",
    "Ring",
    "SmithDecomposition",
    "WorkbenchError",
    "ZZ",
    "Zmod",
    "kernel_basis",
    "smith_normal_form",
    "solve_linear",
]
