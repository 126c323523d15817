"""The XPath subset used by evolved stylesheets.

Grammar::

    path  := "." | ["/"] step (("/" | "//") step)*
    step  := name ["[" int "]"]

``//`` makes the following step a strict-descendant step. Filters are
positional and bind per context node. A filtered descendant step prints as
``/descendant::name[k]``, which is what it means in standard XPath; the
parser accepts that spelling too.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .exceptions import XPathSyntaxError

CHILD = "child"
DESCENDANT = "descendant"
SELF_NAME = "."

_TOKEN = re.compile(r"//|/|\.|\[\s*(-?\d+)\s*\]|([A-Za-z_][\w.\-]*(?::[A-Za-z_][\w.\-]*)?)")


@dataclass(frozen=True)
class Step:
    axis: str
    name: str
    filter: int | None = None

    @property
    def is_self(self) -> bool:
        return self.name == SELF_NAME

    def __str__(self):
        return self.name if self.filter is None else f"{self.name}[{self.filter}]"


@dataclass(frozen=True)
class PathExpr:
    absolute: bool
    steps: tuple[Step, ...]

    @property
    def is_self(self) -> bool:
        return len(self.steps) == 1 and self.steps[0].is_self

    @property
    def is_simple(self) -> bool:
        """Only unfiltered child steps."""
        return not self.is_self and all(s.axis == CHILD and s.filter is None for s in self.steps)

    @property
    def tags(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.steps if not s.is_self)

    def with_steps(self, steps) -> PathExpr:
        steps = tuple(steps)
        if not steps:
            return SELF
        return replace(self, steps=steps)

    def __str__(self):
        if self.is_self:
            return "."
        out = []
        for i, step in enumerate(self.steps):
            if step.axis == DESCENDANT:
                out.append("//" if step.filter is None else "/descendant::")
            elif i or self.absolute:
                out.append("/")
            out.append(str(step))
        return "".join(out)

    def __repr__(self):
        return f"PathExpr({str(self)!r})"


SELF = PathExpr(False, (Step(CHILD, SELF_NAME),))


def simple_path(tags, absolute=True) -> PathExpr:
    return PathExpr(absolute, tuple(Step(CHILD, t) for t in tags))


def parse_xpath(text: str) -> PathExpr:
    src = text.strip()
    if not src:
        raise XPathSyntaxError("empty XPath expression")
    if src == ".":
        return SELF
    pos = 0
    absolute = False
    steps = []
    axis = CHILD
    expect_step = True
    src = src.replace("/descendant::", "//")
    if src.startswith("//"):
        raise XPathSyntaxError(f"leading '//' is not supported: {text!r}")
    if src.startswith("/"):
        absolute = True
        pos = 1
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise XPathSyntaxError(f"unexpected character at {pos} in {text!r}")
        tok = m.group(0)
        pos = m.end()
        if m.group(2):
            if not expect_step:
                raise XPathSyntaxError(f"missing separator before {tok!r} in {text!r}")
            steps.append(Step(axis, tok))
            expect_step = False
        elif m.group(1) is not None:
            if expect_step or not steps or steps[-1].filter is not None:
                raise XPathSyntaxError(f"misplaced filter in {text!r}")
            k = int(m.group(1))
            if k <= 0:
                raise XPathSyntaxError(f"filter must be a positive integer in {text!r}")
            steps[-1] = replace(steps[-1], filter=k)
        elif tok == ".":
            raise XPathSyntaxError(f"'.' cannot be combined with other steps: {text!r}")
        else:
            if expect_step:
                raise XPathSyntaxError(f"empty step in {text!r}")
            axis = DESCENDANT if tok == "//" else CHILD
            expect_step = True
    if expect_step:
        raise XPathSyntaxError(f"trailing slash in {text!r}")
    return PathExpr(absolute, tuple(steps))


def eval_path(expr: PathExpr, context, doc=None) -> list:
    """Evaluate ``expr`` from ``context``; result in document order, no duplicates.

    Absolute expressions start at the document node, so their first step
    must name the root element.
    """
    if expr.is_self:
        return [context]
    if expr.absolute:
        if doc is None:
            node = context
            while node.parent is not None:
                node = node.parent
            current = [node]
        else:
            current = [doc.node]
    else:
        current = [context]
    for step in expr.steps:
        found = []
        for ctx in current:
            if step.axis == CHILD:
                matches = ctx.children_by_tag(step.name)
            else:
                matches = ctx.descendants_by_tag(step.name)
            if step.filter is not None:
                k = step.filter
                if k <= len(matches):
                    found.append(matches[k - 1])
            else:
                found.extend(matches)
        if len(current) > 1 or step.axis == DESCENDANT:
            seen = set()
            uniq = []
            for n in found:
                if n.index not in seen:
                    seen.add(n.index)
                    uniq.append(n)
            uniq.sort(key=lambda n: n.index)
            found = uniq
        current = found
        if not current:
            break
    return current


def join_paths(base: PathExpr, rel: PathExpr) -> PathExpr:
    if not base.absolute:
        raise ValueError(f"base path must be absolute: {base}")
    if rel.absolute:
        raise ValueError(f"cannot join an absolute path: {rel}")
    if rel.is_self:
        return base
    if base.is_self:
        return PathExpr(True, rel.steps)
    return PathExpr(True, base.steps + rel.steps)


def resolve_paths(expr: PathExpr, catalog, bases=((),)) -> list[tuple]:
    """Catalog paths reached by ``expr`` from each of ``bases``, ignoring filters.

    Absolute expressions ignore ``bases`` and start at the document node.
    """
    if expr.is_self:
        return list(dict.fromkeys(bases))
    current = [()] if expr.absolute else list(dict.fromkeys(bases))
    for step in expr.steps:
        nxt = {}
        for p in current:
            if step.axis == CHILD:
                if step.name in catalog.children.get(p, ()):
                    nxt[p + (step.name,)] = None
            else:
                for q in catalog.descendant_paths(p, step.name):
                    nxt[q] = None
        current = list(nxt)
        if not current:
            break
    return current


def path_depth_is_max(expr: PathExpr, catalog) -> bool:
    """True iff no node selected by the absolute ``expr`` has element children."""
    if not expr.absolute:
        raise ValueError(f"expected an absolute path: {expr}")
    paths = resolve_paths(expr, catalog)
    if not paths:
        raise ValueError(f"path does not resolve in the input document: {expr}")
    return all(catalog.is_leaf(p) for p in paths)
