"""Formula complexity, finite constructible levels, set register machines and ordinal representations."""
from __future__ import annotations

from ._version import ENGINE_VERSION, __version__
from .complexity import ComplexityClass, classify, dual, normalize, pair_collapse
from .errors import LforgeError
from .formula import alpha_equal, relativize, substitute, to_text
from .hfs import DEFAULT_ENGINE, HSet, format_set
from .levels import Level, build, l_order
from .parser import parse
from .truth import model_check, sigma0_truth, sigma_n_truth

__all__ = [
    "ENGINE_VERSION", "__version__", "ComplexityClass", "classify", "dual", "normalize",
    "pair_collapse", "LforgeError", "alpha_equal", "relativize", "substitute", "to_text",
    "DEFAULT_ENGINE", "HSet", "format_set", "Level", "build", "l_order", "parse",
    "model_check", "sigma0_truth", "sigma_n_truth",
]
