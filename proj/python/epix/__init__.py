"""Epidemic fact extraction and scoring: normalizers, rule-based extraction,
JSON answer parsing, voting and evaluation, backed by the C++ core."""

import json
from os import PathLike
from typing import Mapping, Optional, Sequence, Union

from ._core import (
    AlignmentError,
    ConfigError,
    EmptyInput,
    EmptyReport,
    EpixError,
    IoError,
    NoIsland,
    SchemaError,
    __version__,
    extract_json_island,
    f1,
    normalize_country,
    normalize_date,
    normalize_disease,
    precision,
    recall,
    render_report,
    values_match,
    vote,
)
from . import _core

__all__ = [
    "AlignmentError", "ConfigError", "EmptyInput", "EmptyReport", "EpixError", "IoError", "NoIsland",
    "SchemaError", "__version__", "evaluate_files", "extract_json_island", "extract_rule_based", "f1",
    "normalize_country", "normalize_date", "normalize_disease", "parse_count_expression", "parse_don_article",
    "parse_promed_post", "precision", "recall", "render_report", "values_match", "vote",
]


def _loads(text: Optional[str]):
    return None if text is None else json.loads(text)


def parse_count_expression(raw: str) -> Optional[dict]:
    """{"value", "approximate", "attribute"} for the first count in raw."""
    return _loads(_core.parse_count_expression_json(raw))


def parse_promed_post(raw: str, id: Optional[str] = None) -> dict:
    return _loads(_core.parse_promed_post_json(raw, id))


def parse_don_article(raw: str, url: str) -> dict:
    return _loads(_core.parse_don_article_json(raw, url))


def extract_rule_based(body: str, published: Optional[str] = None, id: str = "doc") -> dict:
    """Extraction record of the rule-based annotator; absent fields are None."""
    return _loads(_core.extract_rule_based_json(body, published, id))


def evaluate_files(gold: Union[str, PathLike], predictions: Mapping[str, Union[str, PathLike]],
                   mode: str = "strict_value") -> dict:
    """Scores prediction files against a gold file. The result can be passed
    to render_report after json.dumps."""
    return _loads(_core.evaluate_files_json(gold, dict(predictions), mode))
