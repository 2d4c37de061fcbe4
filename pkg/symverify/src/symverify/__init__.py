"""Computer-algebra cross-checks for the compact 9-point stencils."""

from .closedforms import verify_closed_forms
from .crosscheck import crosscheck_stencil_dump
from .reduction import sym_reduction_table, verify_printed_xi40

__all__ = [
    "crosscheck_stencil_dump",
    "sym_reduction_table",
    "verify_closed_forms",
    "verify_printed_xi40",
]
