"""Task-aware data-slice recommendation for visual data exploration.

The package mines logged exploration sessions into data-slice graphs,
matches a user's current data specification against them by edit distance,
and ranks the interesting downstream slices by weighted shortest path.
"""

from .dataset import Dataset, DatasetSchema, ResultTable, load_dataset
from .engine import evaluate
from .fields import FieldExpr, parse_field
from .graph import (
    DataSliceGraph,
    build_graph,
    load_graph,
    merge_sequence,
    normalize_sequence,
    save_graph,
)
from .matcher import MatchResult, field_set_distance, match_data_slices, spec_distance
from .navops import NavOp, apply_nav_op, diff_ops
from .ranker import RankedRecommendation, edge_weight, rank_data_slices, shortest_paths
from .recommend import Recommendation, choose_visual_spec, contextualize, recommend, upvote
from .sessions import SessionSequence, mark_interesting, parse_session_log
from .spec import (
    AbstractSpec,
    DataSpecification,
    FilterPredicate,
    VisualSpec,
    canonicalize,
)
from .sql import to_sql_template

__version__ = "0.1.0"
