"""Draw, analyse, recognise and generate straight-line graphs of mason's marks."""

from .analysis import CountTable, analyze, merge_counts, report, tally_lines, tally_proportions, tally_relative_angles
from .errors import (
    DisconnectedError,
    FormatError,
    GeometryError,
    GlyphGraphError,
    InconsistencyError,
    MergeError,
    UsageError,
)
from .generator import (
    NodeCorpus,
    UpdateOp,
    apply_update,
    assemble,
    enumerate_pairings,
    exhaustive_generate,
    merge_pair,
    random_generate,
    validate_graph,
)
from .geometry import DEFAULT_TOLERANCE, Point, Tolerance, approx_eq, canonical_direction, endpoint_of, normalize_angle
from .io import parse_corpus, parse_graph, parse_pattern, serialize_graph
from .matcher import MotifPattern, PatternLine, Recognition, brute_force_match, find_parallel, match_motif
from .model import (
    Graph,
    LineSeg,
    NodeSpec,
    canonicalize,
    connected_components,
    degree,
    graph_from_specs,
    node_to_lines,
    resolve_coordinates,
    transform,
)
from .render import RenderStyle, to_svg

__version__ = "0.1.0"
