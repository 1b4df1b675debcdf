"""Kernel lane selection.

Prefers the compiled extension when it was built; otherwise falls back to
the pure-Python twin. Both lanes implement the same contract and must yield
identical results, so the choice only affects speed.
"""

from __future__ import annotations

try:
    from archdd._matchcore import lexmin_assignment

    ACTIVE_LANE = "compiled"
except ImportError:  # pragma: no cover - depends on the build environment
    from archdd._matchcore_py import lexmin_assignment

    ACTIVE_LANE = "pure-python"

__all__ = ["lexmin_assignment", "ACTIVE_LANE"]
