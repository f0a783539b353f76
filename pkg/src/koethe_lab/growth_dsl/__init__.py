"""Symbolic and tabulated Köthe matrices."""

from .basis import CLASS_KEYWORDS, GrowthBasisFunction, GrowthClass, Kind
from .parser import DSLSyntaxError, format_spec, load_sample_values, parse_file, parse_spec, parse_specs
from .poly import SIGN_WINDOW, CoefficientPoly
from .spec import KoetheMatrixSpec, evaluate, evaluate_grid, log_evaluate, log_grid, square
from .tabulated import PROVENANCES, TabulatedMatrix, load_tabulated, permute, scale_rows, square_tab
from .validate import validate_koethe

__all__ = [
    "CLASS_KEYWORDS", "CoefficientPoly", "DSLSyntaxError", "GrowthBasisFunction", "GrowthClass",
    "Kind", "KoetheMatrixSpec", "PROVENANCES", "SIGN_WINDOW", "TabulatedMatrix", "evaluate",
    "evaluate_grid", "format_spec", "load_sample_values", "load_tabulated", "log_evaluate",
    "log_grid", "parse_file", "parse_spec", "parse_specs", "permute", "scale_rows", "square",
    "square_tab", "validate_koethe",
]
