"""Wire documents shared by the CLI and the HTTP service.

Both front ends serialize through these helpers so equivalent requests
produce byte-identical JSON.
"""

from __future__ import annotations

import json
import math

from .matcher import MatchResult
from .ranker import RankedRecommendation
from .recommend import Recommendation
from .spec import spec_to_document, visual_to_document

__all__ = [
    "to_json",
    "match_result_to_document",
    "ranked_to_document",
    "recommendation_to_document",
]


def to_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), allow_nan=False)


def match_result_to_document(result: MatchResult) -> dict:
    return {
        "minDistance": result.min_distance,
        "nodes": [{"nodeId": nid, "distance": d} for nid, d in result.nodes],
    }


def ranked_to_document(entry: RankedRecommendation) -> dict:
    return {
        "nodeId": entry.node_id,
        "pathDistance": None if math.isinf(entry.path_distance) else entry.path_distance,
        "effectiveInterestingnessMs": entry.effective_interestingness,
        "viaFill": entry.via_fill,
    }


def recommendation_to_document(rec: Recommendation) -> dict:
    node = ranked_to_document(rec.node)
    node["displayIndex"] = rec.display_index
    return {
        "node": node,
        "spec": spec_to_document(rec.concrete_spec),
        "visual": visual_to_document(rec.visual),
        "sqlTemplate": rec.sql_template,
        "placeholderFilters": [f.render() for f in rec.placeholder_filters],
        "alreadyVisited": rec.already_visited,
    }
