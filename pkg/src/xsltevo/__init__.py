"""Evolve restricted XSLT stylesheets from one input/target XML pair."""

from .dom import (
    Document,
    Node,
    TagCatalog,
    build_catalog,
    canonical_lines,
    parse_xml,
    read_xml,
    serialize,
    string_value,
)
from .exceptions import (
    ConfigError,
    StylesheetError,
    TransformOverflow,
    XMLParseError,
    XPathSyntaxError,
    XSLTEvoError,
)
from .xpath import PathExpr, Step, eval_path, join_paths, parse_xpath, path_depth_is_max
from .xslt import Instruction, Stylesheet, Template, parse_stylesheet, render_stylesheet, transform
from .fitness import FitnessVector, line_diff
from .evolve import EvolveConfig, RunResult, run_evolution
from .estimator import XSLTEvolver, check_document, check_target_lines

__version__ = "0.1.0"
