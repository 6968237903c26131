"""Exception hierarchy shared by every glyphgraph module.

Domain errors (bad geometry, inconsistent graphs, failed merges) map to CLI
exit code 1; :class:`UsageError` maps to exit code 2.
"""


class GlyphGraphError(Exception):
    """Base class for all domain errors raised by glyphgraph."""


class GeometryError(GlyphGraphError, ValueError):
    """Non-finite or out-of-domain numeric input."""


class FormatError(GlyphGraphError, ValueError):
    """A document or value violates the data format or a type invariant."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class InconsistencyError(GlyphGraphError):
    """Two propagation paths bind one node to different points."""

    def __init__(self, node: str, first, second):
        self.node = node
        self.candidates = (first, second)
        super().__init__(
            f"node {node!r} reached at ({first[0]:.9g}, {first[1]:.9g}) "
            f"and at ({second[0]:.9g}, {second[1]:.9g})"
        )


class DisconnectedError(GlyphGraphError):
    """Coordinate propagation could not reach every node."""

    def __init__(self, node: str):
        self.node = node
        super().__init__(f"graph is disconnected: node {node!r} is unreachable from the root")


class MergeError(GlyphGraphError):
    """Two half-lines cannot be merged."""


class UsageError(GlyphGraphError, ValueError):
    """The caller violated an operation's preconditions."""
