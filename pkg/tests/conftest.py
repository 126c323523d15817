import random

import pytest
from hypothesis import strategies as st

from xsltevo.dom import Document, build_catalog, element, parse_xml

PAGE_XML = """<?xml version="1.0" ?>
<html>
  <head>
    <title>Test page</title>
  </head>
  <body>
    <h1>Test page</h1>
    <h2>First test</h2>
    <p>Some stuff<br />
    Some more stuff</p>
    <h2>Second test</h2>
    <h2>That's another test</h2>
  </body>
</html>
"""

H2_XPATH_XSL = """<?xml version="1.0"?>
<xsl:stylesheet version="1.0" xmlns:xsl="http://www.w3.org/1999/XSL/Transform">
 <xsl:output method="xml" indent='yes'/>
 <xsl:template match="/" >
  <output>
   <xsl:apply-templates select='/html/body/h2'/>
  </output>
 </xsl:template>

 <xsl:template match='h2'>
   <line><xsl:value-of select='.' /></line>
 </xsl:template>
</xsl:stylesheet>
"""

H2_CHAIN_XSL = """<?xml version="1.0"?>
<xsl:stylesheet version="1.0" xmlns:xsl="http://www.w3.org/1999/XSL/Transform">
 <xsl:output method="xml" indent='yes'/>
 <xsl:template match="/" >
  <output>
   <xsl:apply-templates select='html' />
  </output>
 </xsl:template>
 <xsl:template match='html'>
  <xsl:apply-templates select='body'/>
 </xsl:template>
 <xsl:template match='body'>
  <xsl:apply-templates select='h2'/>
 </xsl:template>
 <xsl:template match='h2'>
   <line><xsl:value-of select='.' /></line>
 </xsl:template>
</xsl:stylesheet>
"""

H2_LINES = ["First test", "Second test", "That's another test"]

TAGS = ("a", "b", "c", "d")


@pytest.fixture
def page():
    return parse_xml(PAGE_XML, "page")


@pytest.fixture
def page_catalog(page):
    return build_catalog(page)


def random_tree(rng: random.Random, depth: int = 0, max_depth: int = 4, counter=None):
    """A random element over a four-letter tag alphabet; leaves carry unique text."""
    counter = counter if counter is not None else [0]
    tag = rng.choice(TAGS)
    n_kids = 0 if depth >= max_depth else rng.choice((0, 1, 2, 3, 4))
    if n_kids == 0:
        counter[0] += 1
        return element(tag, f"t{counter[0]}")
    return element(tag, *[random_tree(rng, depth + 1, max_depth, counter) for _ in range(n_kids)])


def random_document(seed: int, max_depth: int = 4) -> Document:
    return Document(random_tree(random.Random(seed), 0, max_depth), f"random-{seed}")


documents = st.integers(0, 10**6).map(random_document)


ACCEPTANCE: dict = {}


def record(criterion: int, ok: bool, detail: str):
    """Store one acceptance verdict; printed in the terminal summary."""
    ACCEPTANCE[criterion] = (ok, detail)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
