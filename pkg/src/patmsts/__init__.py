"""Photon-added two-mode squeezed thermal states: closed forms and a Fock-space oracle."""
from .state_params import DerivedParams, StateParams, derive

__all__ = ["StateParams", "DerivedParams", "derive"]
__version__ = "0.1.0"
