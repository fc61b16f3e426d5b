"""
JSON model files: schemas, parsing and canonical output.
"""

from src.modelfile.parser import (
    Model,
    ModelFileError,
    ModelIssue,
    build_model,
    parse_document,
    parse_model,
    resolve_world,
)
from src.modelfile.serializer import dump_document, format_probability, serialize, to_document
