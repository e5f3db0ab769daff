"""Translations between FLIF and executable FO, and the io-disjoint rewrite."""

from ..names import FreshVarSource
from .bounded import flif_to_exfo_3n
from .exfo_to_flif import RESET_CONSTANT, ExfoTranslation, exfo_to_flif
from .improved import flifio_to_exfo
from .rewrite import RewriteInvariantError, default_renaming, rewrite_io_disjoint

__all__ = [
    "FreshVarSource",
    "RESET_CONSTANT",
    "ExfoTranslation",
    "RewriteInvariantError",
    "default_renaming",
    "exfo_to_flif",
    "flif_to_exfo_3n",
    "flifio_to_exfo",
    "rewrite_io_disjoint",
]
