"""scikit-learn style wrapper around the evolutionary search."""

from __future__ import annotations

from pathlib import Path

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .dom import Document, canonical_lines, parse_xml, read_xml
from .evolve import EvolveConfig, run_evolution
from .fitness import lcs_length
from .genome import InitParams, check_structure_type
from .variation import default_operator_table
from .xslt import LINE_TAG, WRAPPER_TAG, TransformLimits, render_stylesheet, transform, transform_lines


def check_document(X, name="X") -> Document:
    """Accept a :class:`Document`, XML text/bytes, or a path to an XML file.

    A one-element list or tuple is unwrapped, so ``fit([doc], [target])`` works.
    """
    if isinstance(X, (list, tuple)):
        if len(X) != 1:
            raise ValueError(f"{name}: expected exactly one document, got {len(X)}")
        X = X[0]
    if isinstance(X, Document):
        return X
    if isinstance(X, Path):
        return read_xml(X)
    if isinstance(X, bytes):
        return parse_xml(X, name)
    if isinstance(X, str):
        if X.lstrip().startswith("<"):
            return parse_xml(X, name)
        return read_xml(X)
    raise TypeError(f"{name}: expected a Document, XML text or a file path, got {type(X).__name__}")


def check_target_lines(y, line_tag=LINE_TAG) -> list[str]:
    """Target as canonical lines; ``y`` is document-like or already a list of strings."""
    if isinstance(y, (list, tuple)) and all(isinstance(s, str) for s in y) \
            and not (len(y) == 1 and y[0].lstrip().startswith("<")):
        return list(y)
    return canonical_lines(check_document(y, "y"), line_tag)


class XSLTEvolver(BaseEstimator, TransformerMixin):
    """Evolve a stylesheet turning one input document into one target.

    After ``fit``, ``transform`` applies the evolved stylesheet and returns
    the output :class:`Document`; ``predict`` returns its canonical lines.

    Fitted attributes: ``stylesheet_``, ``fitness_``, ``success_``,
    ``n_evaluations_``, ``n_generations_``, ``result_``.
    """

    def __init__(
        self,
        structure_type=1,
        population_size=128,
        max_generations=200,
        tournament_size=5,
        elitism=1,
        random_state=0,
        operator_weights=None,
        group_balance=0.5,
        init_params=None,
        wrapper_tag=WRAPPER_TAG,
        line_tag=LINE_TAG,
    ):
        self.structure_type = structure_type
        self.population_size = population_size
        self.max_generations = max_generations
        self.tournament_size = tournament_size
        self.elitism = elitism
        self.random_state = random_state
        self.operator_weights = operator_weights
        self.group_balance = group_balance
        self.init_params = init_params
        self.wrapper_tag = wrapper_tag
        self.line_tag = line_tag

    def _config(self) -> EvolveConfig:
        stype = check_structure_type(self.structure_type)
        table = default_operator_table(stype)
        table.group_balance = float(self.group_balance)
        for kind, w in (self.operator_weights or {}).items():
            table.set_weight(kind, w)
        if self.random_state is None:
            seed = 0
        elif isinstance(self.random_state, int):
            seed = self.random_state
        else:
            raise TypeError("random_state must be an int or None")
        return EvolveConfig(
            structure_type=stype,
            population_size=self.population_size,
            max_generations=self.max_generations,
            tournament_size=self.tournament_size,
            elitism=self.elitism,
            seed=seed,
            operator_table=table,
            init_params=self.init_params or InitParams(),
            wrapper_tag=self.wrapper_tag,
            line_tag=self.line_tag,
        ).check()

    def fit(self, X, y):
        doc = check_document(X)
        lines = check_target_lines(y, self.line_tag)
        result = run_evolution(self._config(), doc, lines)
        self.result_ = result
        self.stylesheet_ = result.best.sheet
        self.fitness_ = result.fitness
        self.success_ = result.success
        self.n_evaluations_ = result.evaluations
        self.n_generations_ = result.generations
        return self

    def transform(self, X) -> Document:
        check_is_fitted(self, "stylesheet_")
        return transform(self.stylesheet_, check_document(X), TransformLimits())

    def predict(self, X) -> list[str]:
        check_is_fitted(self, "stylesheet_")
        return transform_lines(self.stylesheet_, check_document(X), TransformLimits())

    def score(self, X, y) -> float:
        """Dice similarity of obtained and target lines, ``2 * lcs / (n + m)``; 1.0 is exact."""
        lines = check_target_lines(y, self.line_tag)
        got = self.predict(X)
        if not got and not lines:
            return 1.0
        return 2 * lcs_length(got, lines) / (len(got) + len(lines))

    def to_xslt(self) -> str:
        check_is_fitted(self, "stylesheet_")
        return render_stylesheet(self.stylesheet_)

