import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from xsltevo.dom import parse_xml
from xsltevo.fitness import WORST, FitnessVector, LineTarget, compare, evaluate, lcs_length, line_diff
from xsltevo.xslt import Stylesheet, Template, TransformLimits, apply_templates, parse_stylesheet, value_of

from conftest import H2_XPATH_XSL, H2_LINES
from oracles import dp_lcs, exhaustive_diff_check, random_dp_check

lines = st.lists(st.sampled_from(["a", "b", "c", "d", ""]), max_size=40)


def test_exhaustive_small_pairs_match_brute_force():
    cases, bad = exhaustive_diff_check("abc", 6)
    assert cases == 1093 ** 2
    assert bad == 0


def test_random_long_pairs_match_dp():
    assert random_dp_check(2_000, seed=7) == (2_000, 0)


@given(lines, lines)
def test_lcs_properties(a, b):
    n = lcs_length(a, b)
    assert n == lcs_length(b, a) == dp_lcs(a, b)
    assert 0 <= n <= min(len(a), len(b))
    d, add = line_diff(a, b)
    assert (d, add) == LineTarget(b).diff(a)
    assert (d == 0 and add == 0) == (a == b)


def test_wide_target_uses_big_masks():
    a = [str(i % 97) for i in range(500)]
    b = [str(i % 89) for i in range(450)]
    assert lcs_length(a, b) == dp_lcs(a, b)


def test_vector_order_is_lexicographic():
    assert FitnessVector(0, 5, 100) < FitnessVector(1, 0, 1)
    assert FitnessVector(0, 1, 9) < FitnessVector(0, 2, 1)
    assert FitnessVector(0, 0, 3) < FitnessVector(0, 0, 4)
    assert compare(FitnessVector(1, 1, 1), FitnessVector(1, 1, 1)) == 0
    assert compare(FitnessVector(0, 0, 9), FitnessVector(0, 1, 1)) == -1
    assert compare(WORST, FitnessVector(10**9, 10**9, 10**9)) == 1
    assert WORST == (sys.maxsize,) * 3 and not WORST.is_solution


def test_str_format():
    assert str(FitnessVector(3, 0, 7)) == "deletions=3 additions=0 length=7"


def test_evaluate_h2_sheet(page):
    assert evaluate(parse_stylesheet(H2_XPATH_XSL), page, H2_LINES) == FitnessVector(0, 0, 4)


def test_evaluate_empty_output(page):
    sheet = Stylesheet((Template("/", (apply_templates("/html/head/nothing"),)),))
    assert evaluate(sheet, page, H2_LINES)[:2] == (0, 3)


def test_evaluate_extra_body_lines(page):
    # h1 text plus the two physical lines of <p> come out through the default rules
    sheet = Stylesheet((Template("/", (apply_templates("/html/body"),)), Template("h2", (value_of(),))))
    assert evaluate(sheet, page, H2_LINES) == FitnessVector(3, 0, 4)


def test_overflow_is_worst(page):
    sheet = Stylesheet((Template("/", (apply_templates("/html/body/h2"),)), Template("h2", (value_of(),) * 9)))
    assert evaluate(sheet, page, H2_LINES, TransformLimits(max_output_lines=5)) is WORST


@pytest.mark.parametrize("obtained, target, expected", [
    ([], [], (0, 0)),
    (["x"], [], (1, 0)),
    ([], ["x", "y"], (0, 2)),
    (["b", "a"], ["a", "b"], (1, 1)),
])
def test_line_diff_examples(obtained, target, expected):
    assert line_diff(obtained, target) == expected


def test_empty_doc_target():
    doc = parse_xml("<a>t</a>")
    sheet = Stylesheet((Template("/", (apply_templates("/a"),)),))
    assert evaluate(sheet, doc, []) == FitnessVector(1, 0, 2)
