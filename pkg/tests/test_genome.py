import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xsltevo.dom import build_catalog
from xsltevo.genome import (
    TYPE1,
    TYPE2,
    Genome,
    InitParams,
    check_structure_type,
    choose_tag,
    genome_size,
    make_genome,
    random_genome,
    validate,
)
from xsltevo.xpath import parse_xpath
from xsltevo.xslt import Instruction, Stylesheet, Template, apply_templates, parse_stylesheet, value_of

from conftest import H2_XPATH_XSL, random_document

seeds = st.integers(0, 10**6)


@pytest.mark.parametrize("raw, expected", [(1, TYPE1), ("2", TYPE2), ("type1", TYPE1), (" Type2 ", TYPE2)])
def test_check_structure_type(raw, expected):
    assert check_structure_type(raw) == expected


def test_check_structure_type_rejects():
    with pytest.raises(ValueError):
        check_structure_type(3)


@settings(max_examples=150, deadline=None)
@given(seeds, st.sampled_from((TYPE1, TYPE2)))
def test_random_genomes_validate(seed, stype):
    cat = build_catalog(random_document(seed))
    g = random_genome(stype, cat, rng=random.Random(seed))
    assert validate(g) == []
    params = InitParams()
    assert params.min_templates <= g.n_templates <= params.max_templates


def test_random_genome_is_deterministic(page_catalog):
    a = random_genome(TYPE2, page_catalog, rng=random.Random(5))
    b = random_genome(TYPE2, page_catalog, rng=random.Random(5))
    assert a == b and hash(a) == hash(b)


def test_type2_single_template(page_catalog):
    params = InitParams(min_templates=1, max_templates=1)
    for seed in range(20):
        g = random_genome(TYPE2, page_catalog, params, random.Random(seed))
        root = g.templates[0]
        assert len(root.body) == 1 and root.body[0].select.absolute
        assert [t.match for t in g.templates[1:]] == [str(root.body[0].select)]


def test_shallow_bias_prefers_shallow_tags(page_catalog):
    rng = random.Random(0)
    counts = {}
    for _ in range(4000):
        tag = choose_tag(page_catalog, rng, 1.0)
        counts[tag] = counts.get(tag, 0) + 1
    assert counts["html"] > counts["body"] > counts["h2"] > counts["br"]


def test_genome_size_counts_templates_and_instructions(page_catalog):
    assert genome_size(parse_stylesheet(H2_XPATH_XSL)) == 4


def test_xpath_sheet_is_not_a_type1_genome(page_catalog):
    g = Genome(TYPE1, parse_stylesheet(H2_XPATH_XSL), page_catalog)
    assert any("root template" in p for p in validate(g))


def type1(cat, *templates):
    return make_genome(TYPE1, cat, templates)


def type2(cat, *templates):
    return make_genome(TYPE2, cat, templates)


def test_type1_violations(page_catalog):
    cat = page_catalog
    assert validate(type1(cat, Template("body", (apply_templates("h2"),)), Template("h2", (value_of(),)))) == []
    assert "does not occur" in validate(type1(cat, Template("zzz", (value_of(),))))[0]
    assert "only used with select '.'" in validate(type1(cat, Template("body", (value_of("h2"),))))[0]
    assert "exceeds occurrences" in validate(type1(cat, Template("body", (apply_templates("h2[4]"),))))[0]
    assert "does not resolve" in validate(type1(cat, Template("body", (apply_templates("title"),))))[0]
    assert "must be relative" in validate(type1(cat, Template("body", (apply_templates("/html"),))))[0]
    assert "bare tag" in validate(type1(cat, Template("/html", (value_of(),))))[0]
    assert "at least one template" in validate(type1(cat))[0]
    unwrapped = Template("h2", (Instruction("value-of", parse_xpath("."), wrapped=False),))
    assert "wrapped" in validate(type1(cat, unwrapped))[0]


def test_type1_root_is_fixed(page_catalog):
    g = type1(page_catalog, Template("h2", (value_of(),)))
    bad = g.with_templates((Template("/", (apply_templates("/html/body"),)), *g.templates[1:]))
    assert "root template must hold" in validate(bad)[0]


def test_type2_violations(page_catalog):
    cat = page_catalog
    good = type2(cat, Template("/html/body", (value_of("h2"), value_of("h1"))), Template("/html/body/h2", (value_of(),)))
    assert validate(good) == []
    swapped = good.with_templates((good.templates[0], good.templates[2], good.templates[1]))
    assert "order" in validate(swapped)[0]
    assert "only value-of" in validate(type2(cat, Template("/html/body", (apply_templates("h2"),))))[0]
    assert "deepest-level" in validate(type2(cat, Template("/html/body/h2", (value_of(), value_of()))))[0]
    assert any("does not occur" in p for p in validate(type2(cat, Template("/html/nope", (value_of(),)))))
    extra = good.with_templates(good.templates + (Template("/html/head", (value_of("title"),)),))
    assert "one-to-one" in validate(extra)[0]


def test_type2_root_selects_must_be_plain(page_catalog):
    g = type2(page_catalog, Template("/html/body", (value_of("h2"),)))
    root = Template("/", (apply_templates("/html/body[1]"),))
    assert any("plain tag names" in p for p in validate(g.with_templates((root,) + g.templates[1:])))


def test_init_params_checks():
    with pytest.raises(ValueError):
        InitParams(min_templates=3, max_templates=2)
    with pytest.raises(ValueError):
        InitParams(max_relative_steps=0)


def test_genome_equality_ignores_fitness(page_catalog):
    g = random_genome(TYPE1, page_catalog, rng=random.Random(1))
    c = g.copy()
    c.fitness = (0, 0, 1)
    assert c == g and isinstance(g.sheet, Stylesheet)
