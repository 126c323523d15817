"""Minimal immutable XML tree used for inputs, targets and transform output.

Parsing goes through :mod:`xml.parsers.expat` without namespace processing,
so ``xsl:template`` is just a tag name. Whitespace-only text is dropped.
"""

from __future__ import annotations

from pathlib import Path
from xml.parsers import expat

from .exceptions import XMLParseError

DOCUMENT = "document"
ELEMENT = "element"
TEXT = "text"

LINE_TAG = "line"


class Node:
    """A node of the tree: the document node, an element or a text node.

    ``index`` is the pre-order position (the document node is 0).
    ``path`` is the tuple of element tags from the root element down to
    this element; it is ``()`` for the document node and the parent's path
    for text nodes.
    """

    __slots__ = (
        "kind",
        "tag",
        "text",
        "attrs",
        "children",
        "parent",
        "index",
        "path",
        "_child_index",
        "_desc_index",
    )

    def __init__(self, kind, tag="", text="", attrs=None, children=()):
        self.kind = kind
        self.tag = tag
        self.text = text
        self.attrs = dict(attrs or {})
        self.children = tuple(children)
        self.parent = None
        self.index = -1
        self.path = ()
        self._child_index = None
        self._desc_index = None

    @property
    def is_element(self) -> bool:
        return self.kind == ELEMENT

    @property
    def depth(self) -> int:
        return len(self.path)

    def element_children(self):
        return [c for c in self.children if c.kind == ELEMENT]

    def children_by_tag(self, tag):
        """Element children named ``tag``, in document order."""
        if self._child_index is None:
            idx = {}
            for c in self.children:
                if c.kind == ELEMENT:
                    idx.setdefault(c.tag, []).append(c)
            self._child_index = idx
        return self._child_index.get(tag, ())

    def descendants_by_tag(self, tag):
        """Strict element descendants named ``tag``, in document order."""
        if self._desc_index is None:
            idx = {}
            for d in self.iter():
                if d is not self and d.kind == ELEMENT:
                    idx.setdefault(d.tag, []).append(d)
            self._desc_index = idx
        return self._desc_index.get(tag, ())

    def iter(self):
        """Pre-order traversal including self."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def __repr__(self):
        if self.kind == TEXT:
            return f"Text({self.text!r})"
        if self.kind == DOCUMENT:
            return "DocumentNode()"
        return f"Element({self.tag!r}, children={len(self.children)})"


class Document:
    """A parsed XML document with a single root element."""

    def __init__(self, root: Node, source_name: str = "<string>"):
        if root.kind != ELEMENT:
            raise ValueError("document root must be an element")
        self.root = root
        self.source_name = source_name
        self.node = Node(DOCUMENT, children=(root,))
        self._link()

    def _link(self):
        index = 0
        self.node.index = 0
        stack = [(self.node, None)]
        height = 0
        n_elements = 0
        while stack:
            node, parent = stack.pop()
            node.parent = parent
            node.index = index
            index += 1
            if node.kind == ELEMENT:
                node.path = parent.path + (node.tag,)
                height = max(height, len(node.path))
                n_elements += 1
            elif node.kind == TEXT:
                node.path = parent.path
            for child in reversed(node.children):
                stack.append((child, node))
        self.height = height
        self.size = index - 1
        self.n_elements = n_elements

    def iter(self):
        """Pre-order traversal starting at the root element."""
        return self.root.iter()

    def elements(self):
        return [n for n in self.root.iter() if n.kind == ELEMENT]

    def __repr__(self):
        return f"Document(root={self.root.tag!r}, source={self.source_name!r})"


def element(tag, *children, attrs=None) -> Node:
    """Build an element node; string children become text nodes."""
    kids = [Node(TEXT, text=c) if isinstance(c, str) else c for c in children]
    return Node(ELEMENT, tag=tag, attrs=attrs, children=kids)


def text(data) -> Node:
    return Node(TEXT, text=data)


def parse_xml(source: str | bytes, source_name: str = "<string>") -> Document:
    """Parse well-formed XML text into a :class:`Document`.

    Comments, processing instructions and the XML declaration are skipped.
    Raises :class:`XMLParseError` with line and column on malformed input.
    """
    parser = expat.ParserCreate()
    parser.ordered_attributes = True
    stack = [[]]
    texts = [[]]
    tags = []
    attrs_stack = []

    def flush_text():
        buf = texts[-1]
        if buf:
            data = "".join(buf)
            buf.clear()
            if data.strip():
                stack[-1].append(Node(TEXT, text=data))

    def start(tag, attrs):
        flush_text()
        pairs = dict(zip(attrs[::2], attrs[1::2]))
        tags.append(tag)
        attrs_stack.append(pairs)
        stack.append([])
        texts.append([])

    def end(tag):
        flush_text()
        children = stack.pop()
        texts.pop()
        stack[-1].append(Node(ELEMENT, tag=tags.pop(), attrs=attrs_stack.pop(), children=children))

    def chars(data):
        texts[-1].append(data)

    parser.StartElementHandler = start
    parser.EndElementHandler = end
    parser.CharacterDataHandler = chars
    try:
        parser.Parse(source, True)
    except expat.ExpatError as exc:
        raise XMLParseError(
            expat.ErrorString(exc.code), exc.lineno, exc.offset, source_name
        ) from None
    roots = [n for n in stack[0] if n.kind == ELEMENT]
    if len(roots) != 1:
        raise XMLParseError("document must have exactly one root element", 1, 0, source_name)
    return Document(roots[0], source_name)


def read_xml(path) -> Document:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise XMLParseError(f"cannot read file: {exc.strerror}", 0, 0, str(path)) from None
    return parse_xml(data, str(path))


def string_value(node: Node) -> str:
    """Concatenated text of all descendant text nodes, in document order."""
    if node.kind == TEXT:
        return node.text
    return "".join(n.text for n in node.iter() if n.kind == TEXT)


def canonical_lines(doc: Document, line_tag: str = LINE_TAG) -> list[str]:
    """Comparable line sequence of an output document.

    A ``line`` element yields its trimmed string value; text outside any
    ``line`` element yields one entry per non-blank physical line.
    """
    out = []
    stack = [doc.root]
    while stack:
        node = stack.pop()
        if node.kind == TEXT:
            out.extend(split_text_lines(node.text))
        elif node.tag == line_tag:
            out.append(string_value(node).strip())
        else:
            stack.extend(reversed(node.children))
    return out


def split_text_lines(data: str) -> list[str]:
    return [s for s in (part.strip() for part in data.splitlines()) if s]


_TEXT_ESCAPES = str.maketrans({"&": "&amp;", "<": "&lt;", ">": "&gt;"})
_ATTR_ESCAPES = str.maketrans({"&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;"})


def escape_text(data: str) -> str:
    return data.translate(_TEXT_ESCAPES)


def escape_attr(data: str) -> str:
    return data.translate(_ATTR_ESCAPES)


def serialize(doc: Document | Node, indent: bool = False) -> str:
    """Serialize to XML text. Attributes keep insertion order."""
    root = doc.root if isinstance(doc, Document) else doc
    parts: list[str] = []
    _write(root, parts, 0 if indent else None)
    return "".join(parts)


def _write(node, parts, level):
    pad = "" if level is None else "  " * level
    if node.kind == TEXT:
        if level is None:
            parts.append(escape_text(node.text))
        else:
            parts.append(pad + escape_text(node.text.strip()) + "\n")
        return
    attrs = "".join(f' {k}="{escape_attr(v)}"' for k, v in node.attrs.items())
    if not node.children:
        parts.append(f"{pad}<{node.tag}{attrs}/>" + ("" if level is None else "\n"))
        return
    if level is None:
        parts.append(f"<{node.tag}{attrs}>")
        for child in node.children:
            _write(child, parts, None)
        parts.append(f"</{node.tag}>")
        return
    if all(c.kind == TEXT for c in node.children):
        inner = "".join(escape_text(c.text) for c in node.children)
        parts.append(f"{pad}<{node.tag}{attrs}>{inner}</{node.tag}>\n")
        return
    parts.append(f"{pad}<{node.tag}{attrs}>\n")
    for child in node.children:
        _write(child, parts, level + 1)
    parts.append(f"{pad}</{node.tag}>\n")


class TagCatalog:
    """Structural summary of a document, used to keep generated paths valid.

    Paths are tuples of tags from the root element down. The empty tuple
    stands for the document node, whose only child tag is the root's.
    """

    def __init__(self, doc: Document):
        self.root_tag = doc.root.tag
        self.height = doc.height
        self.paths: dict[str, list[tuple]] = {}
        self.children: dict[tuple, list[str]] = {(): [doc.root.tag]}
        self.max_siblings: dict[str, int] = {doc.root.tag: 1}
        self.counts: dict[tuple, int] = {}
        for node in doc.root.iter():
            if node.kind != ELEMENT:
                continue
            p = node.path
            if p not in self.children:
                self.children[p] = []
                self.paths.setdefault(node.tag, []).append(p)
            self.counts[p] = self.counts.get(p, 0) + 1
            sibling_counts: dict[str, int] = {}
            for c in node.children:
                if c.kind == ELEMENT:
                    sibling_counts[c.tag] = sibling_counts.get(c.tag, 0) + 1
            kids = self.children[p]
            for tag, n in sibling_counts.items():
                if tag not in kids:
                    kids.append(tag)
                if n > self.max_siblings.get(tag, 0):
                    self.max_siblings[tag] = n
        self.all_paths = [p for p in self.children if p]
        self.min_depth = {tag: min(len(p) for p in ps) for tag, ps in self.paths.items()}
        self._desc: dict[tuple, dict[str, list[tuple]]] = {}

    @property
    def tags(self) -> list[str]:
        return list(self.paths)

    def is_leaf(self, path: tuple) -> bool:
        return not self.children.get(path)

    def descendant_paths(self, path: tuple, tag: str) -> list[tuple]:
        """Catalog paths strictly below ``path`` ending in ``tag``."""
        table = self._desc.get(path)
        if table is None:
            table = {}
            n = len(path)
            for p in self.all_paths:
                if len(p) > n and p[:n] == path:
                    table.setdefault(p[-1], []).append(p)
            self._desc[path] = table
        return table.get(tag, [])

    def __len__(self):
        return len(self.paths)

    def __repr__(self):
        return f"TagCatalog(tags={len(self.paths)}, paths={len(self.all_paths)}, height={self.height})"


def build_catalog(doc: Document) -> TagCatalog:
    return TagCatalog(doc)
