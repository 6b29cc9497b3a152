"""Error taxonomy for frustra.

Every error derives from a builtin the CLI already handles (ValueError or
RuntimeError), so callers that only know the builtins still catch them.
"""

from __future__ import annotations

from typing import Optional


class FrustraError(Exception):
    """Base class for all frustra errors"""


class ParseError(FrustraError, ValueError):
    """Malformed input line"""

    def __init__(self, message: str, line: Optional[int] = None, path: Optional[str] = None):
        self.line = line
        self.path = path
        where = ""
        if path:
            where = f"{path}:"
        if line is not None:
            where = f"{where}{line}: "
        elif where:
            where = f"{where} "
        super().__init__(f"{where}{message}")


class ConfigError(FrustraError, ValueError):
    """Invalid run configuration"""


class GraphError(FrustraError, ValueError):
    """Graph structure does not satisfy an operation's precondition"""


class EmptyGraph(GraphError):
    pass


class LabelCollision(GraphError):
    pass


class Disconnected(GraphError):
    pass


class TreeMismatch(GraphError):
    pass


class EdgeInTree(GraphError):
    pass


class GraphMismatch(GraphError):
    pass


class ZeroDegree(GraphError):
    pass


class MetricsError(FrustraError, ValueError):
    """Metric requested from an accumulator that cannot provide it"""


class EmptyAccumulator(MetricsError):
    pass


class MissingTieBreak(MetricsError):
    pass


class CapacityError(FrustraError, RuntimeError):
    """Exhaustive computation would exceed a configured cap"""


class TooManyTrees(CapacityError):
    pass


class TooLarge(CapacityError):
    pass


class CloudMismatch(FrustraError, RuntimeError):
    """Tree-balancing cloud disagrees with the lattice characterization"""
