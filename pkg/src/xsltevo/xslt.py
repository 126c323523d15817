"""Interpreter for the three-instruction XSLT subset.

Stylesheets hold ``template`` rules whose bodies are ``apply-templates``
and ``value-of`` instructions. Built-in rules apply when no template
matches: elements recurse into their children, text is copied.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dom import (
    DOCUMENT,
    ELEMENT,
    LINE_TAG,
    TEXT,
    Document,
    Node,
    escape_attr,
    parse_xml,
    split_text_lines,
    string_value,
)
from .exceptions import StylesheetError, TransformOverflow, XMLParseError, XPathSyntaxError
from .xpath import SELF, PathExpr, eval_path, parse_xpath

APPLY = "apply-templates"
VALUE_OF = "value-of"
ROOT_MATCH = "/"
WRAPPER_TAG = "output"

XSL_NS = "http://www.w3.org/1999/XSL/Transform"


@dataclass(frozen=True)
class Instruction:
    kind: str
    select: PathExpr
    wrapped: bool = True

    def __post_init__(self):
        if self.kind not in (APPLY, VALUE_OF):
            raise ValueError(f"unknown instruction kind {self.kind!r}")

    def __str__(self):
        return f"{self.kind}({self.select})"


def apply_templates(select) -> Instruction:
    if isinstance(select, str):
        select = parse_xpath(select)
    return Instruction(APPLY, select, wrapped=False)


def value_of(select=SELF) -> Instruction:
    if isinstance(select, str):
        select = parse_xpath(select)
    return Instruction(VALUE_OF, select, wrapped=True)


@dataclass(frozen=True)
class Template:
    """``match`` is ``"/"``, a bare tag name, or an absolute simple path."""

    match: str
    body: tuple[Instruction, ...]

    @property
    def is_root(self) -> bool:
        return self.match == ROOT_MATCH

    @property
    def match_path(self) -> tuple[str, ...] | None:
        if self.match.startswith("/") and not self.is_root:
            return tuple(self.match[1:].split("/"))
        return None


@dataclass(frozen=True)
class Stylesheet:
    templates: tuple[Template, ...]
    wrapper_tag: str = WRAPPER_TAG
    line_tag: str = LINE_TAG

    @property
    def root_template(self) -> Template | None:
        for t in self.templates:
            if t.is_root:
                return t
        return None

    def with_templates(self, templates) -> Stylesheet:
        return Stylesheet(tuple(templates), self.wrapper_tag, self.line_tag)


@dataclass(frozen=True)
class TransformLimits:
    max_recursion_depth: int = 64
    max_output_lines: int = 10_000

    def __post_init__(self):
        if self.max_recursion_depth < 1 or self.max_output_lines < 1:
            raise ValueError("transform limits must be positive")

    @classmethod
    def for_documents(cls, doc: Document, n_target_lines: int) -> TransformLimits:
        return cls(doc.height + 8, 16 * n_target_lines + 64)


class _Dispatcher:
    """First-match template lookup by tag name or absolute path."""

    def __init__(self, sheet: Stylesheet):
        self.root = None
        self.by_tag = {}
        self.by_path = {}
        for i, t in enumerate(sheet.templates):
            if t.is_root:
                if self.root is None:
                    self.root = t
                continue
            mp = t.match_path
            table, key = (self.by_path, mp) if mp is not None else (self.by_tag, t.match)
            if key not in table:
                table[key] = (i, t)
        self._cache = {}

    def lookup(self, node: Node) -> Template | None:
        if node.kind == DOCUMENT:
            return self.root
        if node.kind != ELEMENT:
            return None
        key = (node.tag, node.path)
        try:
            return self._cache[key]
        except KeyError:
            pass
        a = self.by_tag.get(node.tag)
        b = self.by_path.get(node.path)
        if a and b:
            found = a[1] if a[0] < b[0] else b[1]
        else:
            found = (a or b or (None, None))[1]
        self._cache[key] = found
        return found


def match_template(node: Node, sheet: Stylesheet, doc: Document | None = None) -> Template | None:
    """The first template of ``sheet`` matching ``node``, or ``None``."""
    return _Dispatcher(sheet).lookup(node)


class _Run:
    def __init__(self, sheet, doc, limits):
        self.sheet = sheet
        self.doc = doc
        self.limits = limits
        self.dispatch = _Dispatcher(sheet)
        self.events = []

    def emit(self, kind, data):
        self.events.append((kind, data))
        if len(self.events) > self.limits.max_output_lines:
            raise TransformOverflow(f"output exceeded {self.limits.max_output_lines} lines")

    def apply(self, node, depth):
        if depth > self.limits.max_recursion_depth:
            raise TransformOverflow(f"recursion deeper than {self.limits.max_recursion_depth}")
        if node.kind == TEXT:
            self.emit(TEXT, node.text)
            return
        template = self.dispatch.lookup(node)
        if template is None:
            for child in node.children:
                self.apply(child, depth + 1)
            return
        for ins in template.body:
            selected = eval_path(ins.select, node, self.doc)
            if ins.kind == APPLY:
                for target in selected:
                    self.apply(target, depth + 1)
            else:
                value = string_value(selected[0]) if selected else ""
                self.emit(LINE_TAG if ins.wrapped else TEXT, value)


def _events(sheet, doc, limits):
    run = _Run(sheet, doc, limits or TransformLimits.for_documents(doc, 0))
    run.apply(doc.node, 0)
    return run.events


def transform(sheet: Stylesheet, doc: Document, limits: TransformLimits | None = None) -> Document:
    """Apply ``sheet`` to ``doc`` and return the output document.

    Raises :class:`TransformOverflow` when ``limits`` are exceeded.
    """
    children = []
    pending = []
    for kind, data in _events(sheet, doc, limits):
        if kind == TEXT:
            pending.append(data)
            continue
        if pending:
            children.append(Node(TEXT, text="".join(pending)))
            pending = []
        kids = [Node(TEXT, text=data)] if data else []
        children.append(Node(ELEMENT, tag=sheet.line_tag, children=kids))
    if pending:
        children.append(Node(TEXT, text="".join(pending)))
    return Document(Node(ELEMENT, tag=sheet.wrapper_tag, children=children), "<transform>")


def transform_lines(sheet: Stylesheet, doc: Document, limits: TransformLimits | None = None) -> list[str]:
    """Same as ``canonical_lines(transform(sheet, doc, limits))`` without building the tree."""
    lines = []
    pending = []
    for kind, data in _events(sheet, doc, limits):
        if kind == TEXT:
            pending.append(data)
            continue
        if pending:
            lines.extend(split_text_lines("".join(pending)))
            pending = []
        lines.append(data.strip())
    if pending:
        lines.extend(split_text_lines("".join(pending)))
    return lines


def prune_shadowed(sheet: Stylesheet) -> Stylesheet:
    """Drop templates whose match repeats an earlier one; they never fire here.

    Standard processors resolve such ties by taking the last template, so a
    pruned sheet behaves the same everywhere.
    """
    seen = set()
    kept = []
    for t in sheet.templates:
        if t.match not in seen:
            seen.add(t.match)
            kept.append(t)
    return sheet if len(kept) == len(sheet.templates) else sheet.with_templates(kept)


def render_stylesheet(sheet: Stylesheet) -> str:
    """Standard XSLT 1.0 text for ``sheet``."""
    out = [
        '<?xml version="1.0"?>',
        f'<xsl:stylesheet version="1.0" xmlns:xsl="{XSL_NS}">',
        "  <xsl:output method=\"xml\" indent='yes'/>",
    ]
    for t in sheet.templates:
        if t.is_root:
            out.append('  <xsl:template match="/">')
            out.append(f"    <{sheet.wrapper_tag}>")
            out.extend(_render_instruction(i, sheet.line_tag, "      ") for i in t.body)
            out.append(f"    </{sheet.wrapper_tag}>")
        else:
            out.append(f"  <xsl:template match='{escape_attr(t.match)}'>")
            out.extend(_render_instruction(i, sheet.line_tag, "    ") for i in t.body)
        out.append("  </xsl:template>")
    out.append("</xsl:stylesheet>")
    return "\n".join(out) + "\n"


def _render_instruction(ins, line_tag, pad):
    sel = escape_attr(str(ins.select))
    if ins.kind == APPLY:
        return f"{pad}<xsl:apply-templates select='{sel}'/>"
    tag = f"<xsl:value-of select='{sel}'/>"
    return f"{pad}<{line_tag}>{tag}</{line_tag}>" if ins.wrapped else pad + tag


def parse_stylesheet(text: str | bytes, source_name: str = "<stylesheet>") -> Stylesheet:
    """Read XSLT text back into a :class:`Stylesheet`.

    Anything outside the supported subset raises :class:`StylesheetError`
    naming the offending construct.
    """
    try:
        doc = parse_xml(text, source_name)
    except XMLParseError as exc:
        raise StylesheetError(str(exc)) from None
    root = doc.root
    if root.tag not in ("xsl:stylesheet", "xsl:transform"):
        raise StylesheetError(f"root element must be xsl:stylesheet, found <{root.tag}>")
    templates = []
    wrapper = None
    line_tag = None
    for child in root.children:
        if child.kind == TEXT:
            raise StylesheetError(f"unexpected text in stylesheet: {child.text.strip()!r}")
        if child.tag == "xsl:output":
            continue
        if child.tag != "xsl:template":
            raise StylesheetError(f"unsupported construct <{child.tag}>")
        if "match" not in child.attrs:
            raise StylesheetError("xsl:template without a match attribute (named templates are unsupported)")
        extra = set(child.attrs) - {"match"}
        if extra:
            raise StylesheetError(f"unsupported xsl:template attribute(s): {', '.join(sorted(extra))}")
        match = child.attrs["match"].strip()
        _check_match(match)
        body_nodes = list(child.children)
        if match == ROOT_MATCH and len(body_nodes) == 1 and body_nodes[0].kind == ELEMENT \
                and not body_nodes[0].tag.startswith("xsl:"):
            wrapper = body_nodes[0].tag
            body_nodes = list(body_nodes[0].children)
        body = []
        for node in body_nodes:
            ins, tag = _parse_instruction(node)
            if tag is not None:
                if line_tag not in (None, tag):
                    raise StylesheetError(f"inconsistent line wrappers <{line_tag}> and <{tag}>")
                line_tag = tag
            body.append(ins)
        if not body:
            raise StylesheetError(f"template match={match!r} has an empty body")
        templates.append(Template(match, tuple(body)))
    if not templates:
        raise StylesheetError("stylesheet has no templates")
    return Stylesheet(tuple(templates), wrapper or WRAPPER_TAG, line_tag or LINE_TAG)


def _check_match(match):
    if match == ROOT_MATCH:
        return
    try:
        expr = parse_xpath(match)
    except XPathSyntaxError as exc:
        raise StylesheetError(f"unsupported match pattern {match!r}: {exc}") from None
    if expr.is_self or not expr.is_simple or (not expr.absolute and len(expr.steps) != 1):
        raise StylesheetError(
            f"unsupported match pattern {match!r}: expected a tag name or an absolute simple path"
        )


def _select(node):
    if set(node.attrs) != {"select"}:
        raise StylesheetError(f"<{node.tag}> must carry exactly a select attribute")
    try:
        return parse_xpath(node.attrs["select"])
    except XPathSyntaxError as exc:
        raise StylesheetError(f"unsupported XPath in <{node.tag}>: {exc}") from None


def _parse_instruction(node):
    if node.kind == TEXT:
        raise StylesheetError(f"literal text in template body is unsupported: {node.text.strip()!r}")
    if node.tag == "xsl:apply-templates":
        if node.children:
            raise StylesheetError("xsl:apply-templates with children is unsupported")
        select = _select(node)
        if select.is_self:
            raise StylesheetError("apply-templates select='.' never terminates")
        return Instruction(APPLY, select, wrapped=False), None
    if node.tag == "xsl:value-of":
        return Instruction(VALUE_OF, _select(node), wrapped=False), None
    if node.tag.startswith("xsl:"):
        raise StylesheetError(f"unsupported construct <{node.tag}>")
    kids = [c for c in node.children]
    if node.attrs or len(kids) != 1 or kids[0].kind != ELEMENT or kids[0].tag != "xsl:value-of":
        raise StylesheetError(f"unsupported literal element <{node.tag}>; only a line wrapper around xsl:value-of is allowed")
    return Instruction(VALUE_OF, _select(kids[0]), wrapped=True), node.tag
