"""Graded synthetic corpus of input/target pairs with known oracle stylesheets.

Pairs are numbered 1 to 7 in increasing difficulty. Every pair carries at
least one hand-written stylesheet that produces the target exactly; the
target document is generated by running that oracle.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from .dom import Document, canonical_lines, element, serialize
from .xslt import Stylesheet, Template, apply_templates, render_stylesheet, transform, value_of

PROFILES = {
    "default": (1, 2, 3, 4, 5, 6, 7),
    "easy": (1, 2, 3, 4),
    "hard": (5, 6, 7),
}

_WORDS = (
    "amber basalt cedar delta ember fjord garnet harbor indigo juniper kelp lagoon "
    "meadow nickel onyx prairie quartz raven sierra tundra umber violet willow xenon "
    "yarrow zephyr"
).split()


@dataclass
class CorpusPair:
    number: int
    name: str
    description: str
    input: Document
    oracles: dict = field(default_factory=dict)

    @property
    def target_lines(self) -> list[str]:
        sheet = self.oracles.get("type2") or self.oracles["type1"]
        return canonical_lines(transform(sheet, self.input))

    @property
    def target(self) -> Document:
        return target_document(self.target_lines)


def target_document(lines, wrapper_tag="output", line_tag="line") -> Document:
    return Document(element(wrapper_tag, *[element(line_tag, s) if s else element(line_tag) for s in lines]))


def _sheet(*templates) -> Stylesheet:
    return Stylesheet(tuple(Template(m, tuple(body)) for m, body in templates))


def _phrase(rng, n=2):
    return " ".join(rng.choice(_WORDS).capitalize() if i == 0 else rng.choice(_WORDS) for i in range(n))


def _pair1(rng):
    items = [element("item", f"Item {i}: {_phrase(rng)}") for i in range(1, 9)]
    doc = Document(element("list", *items), "pair1")
    oracles = {
        "type1": _sheet(("/", [apply_templates("/list")]), ("item", [value_of()])),
        "type2": _sheet(("/", [apply_templates("/list/item")]), ("/list/item", [value_of()])),
    }
    return CorpusPair(1, "list", "flat list; every item is wanted", doc, oracles)


def _pair2(rng):
    body = [element("h1", "Test page")]
    for i in range(1, 5):
        body.append(element("h2", f"Heading {i}: {_phrase(rng)}"))
        body.append(element("p", f"{_phrase(rng, 5)}."))
    doc = Document(
        element("html", element("head", element("title", "Test page")), element("body", *body)),
        "pair2",
    )
    oracles = {
        "type1": _sheet(
            ("/", [apply_templates("/html")]),
            ("html", [apply_templates("body/h2")]),
            ("h2", [value_of()]),
        ),
        "type2": _sheet(("/", [apply_templates("/html/body/h2")]), ("/html/body/h2", [value_of()])),
    }
    return CorpusPair(2, "page", "XHTML page; the h2 headings are wanted", doc, oracles)


def _pair3(rng):
    books = []
    for i in range(1, 7):
        books.append(element(
            "book",
            element("title", f"{_phrase(rng, 3)} ({i})"),
            element("author", f"Author {i} {_phrase(rng)}"),
            element("year", str(1950 + 7 * i)),
        ))
    doc = Document(element("library", *books), "pair3")
    oracles = {
        "type1": _sheet(
            ("/", [apply_templates("/library")]),
            ("book", [apply_templates("author")]),
            ("author", [value_of()]),
        ),
        "type2": _sheet(("/", [apply_templates("/library/book/author")]), ("/library/book/author", [value_of()])),
    }
    return CorpusPair(3, "library", "book catalogue; the authors are wanted", doc, oracles)


def _rss_item(rng, i, description=True):
    kids = [
        element("title", f"Post {i}: {_phrase(rng, 3)}"),
        element("link", f"http://blog.example.org/{2008 + i // 12}/{i:02d}"),
    ]
    if description:
        kids.append(element("description", f"{_phrase(rng, 6)}."))
    kids.append(element("pubDate", f"2008-{1 + i % 12:02d}-{1 + (7 * i) % 28:02d}"))
    return element("item", *kids)


def _pair4(rng):
    items = [
        element(
            "item",
            element("title", f"Post {i}: {_phrase(rng, 3)}"),
            element("link", f"http://x/{i}"),
            element("pubDate", f"2008-0{i}-01"),
        )
        for i in range(1, 4)
    ]
    doc = Document(element("rss", element("channel", element("title", "Blog"), *items)), "pair4")
    oracles = {
        "type1": _sheet(
            ("/", [apply_templates("/rss")]),
            ("channel", [apply_templates("item/title")]),
            ("title", [value_of()]),
        ),
        "type2": _sheet(
            ("/", [apply_templates("/rss/channel/item/title")]),
            ("/rss/channel/item/title", [value_of()]),
        ),
    }
    return CorpusPair(4, "feed", "small RSS feed; item titles but not the channel title", doc, oracles)


def _pair5(rng):
    departments = []
    for d in range(1, 4):
        teams = []
        for t in range(1, 3):
            members = [
                element(
                    "member",
                    element("name", f"{_phrase(rng)} {d}{t}{m}"),
                    element("email", f"m{d}{t}{m}@corp.example.org"),
                )
                for m in range(1, 3)
            ]
            teams.append(element("team", element("name", f"Team {d}.{t}"), *members))
        departments.append(element("department", element("name", f"Department {d}"), *teams))
    doc = Document(element("company", *departments), "pair5")
    oracles = {
        "type1": _sheet(
            ("/", [apply_templates("/company")]),
            ("company", [apply_templates("department/team/member/name")]),
            ("name", [value_of()]),
        ),
        "type2": _sheet(
            ("/", [apply_templates("/company/department/team/member/name")]),
            ("/company/department/team/member/name", [value_of()]),
        ),
    }
    return CorpusPair(5, "company", "five-level organisation chart; member names only", doc, oracles)


def _pair6(rng):
    items = [_rss_item(rng, i) for i in range(1, 7)]
    channel = element(
        "channel",
        element("title", "Research group blog"),
        element("link", "http://blog.example.org"),
        element("description", "Evolutionary computation news"),
        *items,
    )
    doc = Document(element("rss", channel), "pair6")
    oracles = {
        "type1": _sheet(
            ("/", [apply_templates("/rss")]),
            ("channel", [
                apply_templates("item[1]/title"),
                apply_templates("item[1]/link"),
                apply_templates("title"),
            ]),
            ("title", [value_of()]),
            ("link", [value_of()]),
        ),
        "type2": _sheet(
            ("/", [apply_templates("/rss/channel")]),
            ("/rss/channel", [value_of("item/title"), value_of("item/link"), value_of("title")]),
        ),
    }
    return CorpusPair(6, "digest", "RSS feed; title and link of the first post, then the channel title", doc, oracles)


def _pair7(rng):
    chapters = []
    for c in range(1, 4):
        parts = [element("title", f"Chapter {c}: {_phrase(rng)}")]
        for s in range(1, 3):
            sec = [element("title", f"Section {c}.{s} {_phrase(rng)}"), element("para", f"{_phrase(rng, 7)}.")]
            if (c + s) % 2:
                sec.append(element("note", element("title", f"Note {c}.{s}"), element("para", f"{_phrase(rng, 4)}.")))
            sec.append(element("para", f"{_phrase(rng, 6)}."))
            parts.append(element("section", *sec))
        chapters.append(element("chapter", *parts))
    doc = Document(element("book", element("title", "A generated book"), *chapters), "pair7")
    oracles = {
        "type1": _sheet(
            ("/", [apply_templates("/book")]),
            ("book", [apply_templates("chapter//note/title")]),
            ("title", [value_of()]),
        ),
        "type2": _sheet(
            ("/", [apply_templates("/book/chapter/section/note/title")]),
            ("/book/chapter/section/note/title", [value_of()]),
        ),
    }
    return CorpusPair(7, "book", "nested book; the titles of the notes inside sections", doc, oracles)


_BUILDERS = {1: _pair1, 2: _pair2, 3: _pair3, 4: _pair4, 5: _pair5, 6: _pair6, 7: _pair7}


def corpus_pair(number: int) -> CorpusPair:
    """Build pair ``number``; deterministic."""
    if number not in _BUILDERS:
        raise KeyError(f"no corpus pair {number}")
    return _BUILDERS[number](random.Random(1000 + number))


def build_corpus(profile: str = "default") -> list[CorpusPair]:
    if profile not in PROFILES:
        raise KeyError(f"unknown corpus profile {profile!r}; choose from {', '.join(PROFILES)}")
    return [corpus_pair(n) for n in PROFILES[profile]]


def count_nodes(doc: Document) -> int:
    return sum(1 for _ in doc.iter())


def write_corpus(out_dir, profile: str = "default") -> list[Path]:
    """Write every pair of ``profile`` under ``out_dir``; returns the pair directories."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = []
    dirs = []
    for pair in build_corpus(profile):
        d = out / f"pair{pair.number}"
        d.mkdir(exist_ok=True)
        (d / "input.xml").write_text(_xml_file(pair.input), encoding="utf-8")
        (d / "target.xml").write_text(_xml_file(pair.target), encoding="utf-8")
        for stype, sheet in sorted(pair.oracles.items()):
            (d / f"oracle-{stype}.xsl").write_text(render_stylesheet(sheet), encoding="utf-8")
        manifest.append({
            "pair": pair.number,
            "name": pair.name,
            "description": pair.description,
            "depth": pair.input.height,
            "nodes": count_nodes(pair.input),
            "target_lines": len(pair.target_lines),
            "oracles": sorted(pair.oracles),
        })
        dirs.append(d)
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return dirs


def _xml_file(doc: Document) -> str:
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + serialize(doc, indent=True)
