"""frustra - signed-graph consensus analytics"""

__version__ = "0.1.0"
