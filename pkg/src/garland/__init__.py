"""Weighted simplicial Laplacians, flag complexes over finite fields, and
automated checks of Garland-type spectral inequalities."""

from __future__ import annotations

__version__ = "0.1.0"
