"""Constrained stylesheet genomes.

Type 1 genomes have tag-name templates reached from a frozen root template
and lean on the built-in rules. Type 2 genomes mirror every template with an
absolute ``apply-templates`` in the root template, in the same order, and
their bodies only hold ``value-of`` instructions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dom import LINE_TAG, TagCatalog
from .xpath import SELF, PathExpr, resolve_paths, simple_path
from .xslt import APPLY, ROOT_MATCH, VALUE_OF, WRAPPER_TAG, Instruction, Stylesheet, Template

TYPE1 = "type1"
TYPE2 = "type2"
STRUCTURE_TYPES = (TYPE1, TYPE2)


def check_structure_type(stype) -> str:
    """Accept ``1``, ``"1"``, ``"type1"`` and the like."""
    s = str(stype).lower().strip()
    if s in ("1", "type1"):
        return TYPE1
    if s in ("2", "type2"):
        return TYPE2
    raise ValueError(f"unknown structure type {stype!r}; expected 1 or 2")


@dataclass(frozen=True)
class InitParams:
    min_templates: int = 1
    max_templates: int = 4
    min_instructions: int = 1
    max_instructions: int = 3
    shallow_bias: float = 1.0
    self_probability: float = 0.25
    max_relative_steps: int = 3

    def __post_init__(self):
        if not 1 <= self.min_templates <= self.max_templates:
            raise ValueError("need 1 <= min_templates <= max_templates")
        if not 1 <= self.min_instructions <= self.max_instructions:
            raise ValueError("need 1 <= min_instructions <= max_instructions")
        if self.max_relative_steps < 1:
            raise ValueError("max_relative_steps must be >= 1")


class Genome:
    """A stylesheet tied to the catalog of the input it was built for."""

    __slots__ = ("stype", "sheet", "catalog", "fitness")

    def __init__(self, stype, sheet: Stylesheet, catalog: TagCatalog, fitness=None):
        self.stype = check_structure_type(stype)
        self.sheet = sheet
        self.catalog = catalog
        self.fitness = fitness

    @property
    def templates(self):
        return self.sheet.templates

    @property
    def n_templates(self) -> int:
        """Templates other than the root one."""
        return len(self.sheet.templates) - 1

    def with_templates(self, templates) -> Genome:
        return Genome(self.stype, self.sheet.with_templates(templates), self.catalog)

    def copy(self) -> Genome:
        return Genome(self.stype, self.sheet, self.catalog, self.fitness)

    def __eq__(self, other):
        return isinstance(other, Genome) and self.stype == other.stype and self.sheet == other.sheet

    def __hash__(self):
        return hash((self.stype, self.sheet))

    def __repr__(self):
        return f"Genome({self.stype}, templates={len(self.templates)}, size={genome_size(self)}, fitness={self.fitness})"


def genome_size(g) -> int:
    """Template nodes plus instruction nodes, root template included."""
    sheet = g.sheet if isinstance(g, Genome) else g
    return sum(1 + len(t.body) for t in sheet.templates)


# -- path helpers shared with the variation operators ----------------------

def match_path_expr(match: str) -> PathExpr:
    return simple_path(match[1:].split("/"))


def template_contexts(g: Genome, template: Template) -> list[tuple]:
    """Catalog paths where ``template`` can fire."""
    if template.is_root:
        return [()]
    if g.stype == TYPE1:
        return list(g.catalog.paths.get(template.match, ()))
    return [tuple(template.match[1:].split("/"))]


def is_max_depth(catalog: TagCatalog, path: tuple) -> bool:
    return catalog.is_leaf(path)


def choose_tag(catalog: TagCatalog, rng, bias: float = 1.0) -> str:
    """Tag drawn with weight (height - depth + 1) ** bias; shallow tags favoured."""
    tags = catalog.tags
    weights = [(catalog.height - catalog.min_depth[t] + 1) ** bias for t in tags]
    return rng.choices(tags, weights)[0]


def choose_absolute_path(catalog: TagCatalog, rng, bias: float = 1.0) -> tuple:
    tag = choose_tag(catalog, rng, bias)
    return rng.choice(catalog.paths[tag])


def random_walk(catalog: TagCatalog, start: tuple, n_steps: int, rng) -> list[str]:
    """Up to ``n_steps`` child tags walking down from ``start``."""
    tags = []
    p = start
    for _ in range(n_steps):
        kids = catalog.children.get(p)
        if not kids:
            break
        t = rng.choice(kids)
        tags.append(t)
        p = p + (t,)
    return tags


def random_relative_path(catalog, contexts, rng, max_steps=3) -> PathExpr | None:
    """A fresh downward path from one of ``contexts``; ``None`` if all are leaves."""
    starts = [p for p in contexts if catalog.children.get(p)]
    if not starts:
        return None
    start = rng.choice(starts)
    tags = random_walk(catalog, start, rng.randint(1, max_steps), rng)
    return simple_path(tags, absolute=False)


_relative_cache: dict = {}


def enumerate_relative_paths(catalog, contexts, max_steps) -> list[PathExpr]:
    """Every simple downward path of 1..max_steps steps from ``contexts``."""
    key = (id(catalog), tuple(contexts), max_steps)
    hit = _relative_cache.get(key)
    if hit is not None and hit[0] is catalog:
        return hit[1]
    found = {}
    for start in contexts:
        frontier = [()]
        for _ in range(max_steps):
            nxt = []
            for rel in frontier:
                for t in catalog.children.get(start + rel, ()):
                    r = rel + (t,)
                    found[r] = None
                    nxt.append(r)
            frontier = nxt
    result = [simple_path(r, absolute=False) for r in found]
    if len(_relative_cache) > 4096:
        _relative_cache.clear()
    _relative_cache[key] = (catalog, result)
    return result


def instruction_for(stype: str, select: PathExpr) -> Instruction:
    """The instruction a structure type uses for ``select``.

    Type 1 picks the kind from the path: value-of for the self path,
    apply-templates otherwise. Type 2 bodies only hold value-of.
    """
    if stype == TYPE1 and not select.is_self:
        return Instruction(APPLY, select, wrapped=False)
    return Instruction(VALUE_OF, select, wrapped=True)


def random_instruction(stype, catalog, contexts, rng, params: InitParams) -> Instruction:
    path = None
    if rng.random() >= params.self_probability:
        path = random_relative_path(catalog, contexts, rng, params.max_relative_steps)
    return instruction_for(stype, path or SELF)


def random_body(stype, catalog, contexts, rng, params: InitParams) -> tuple[Instruction, ...]:
    if stype == TYPE2 and all(catalog.is_leaf(p) for p in contexts):
        return (instruction_for(TYPE2, SELF),)
    n = rng.randint(params.min_instructions, params.max_instructions)
    return tuple(random_instruction(stype, catalog, contexts, rng, params) for _ in range(n))


def random_template(stype, catalog, rng, params: InitParams) -> Template:
    if stype == TYPE1:
        tag = choose_tag(catalog, rng, params.shallow_bias)
        return Template(tag, random_body(stype, catalog, catalog.paths[tag], rng, params))
    path = choose_absolute_path(catalog, rng, params.shallow_bias)
    return Template("/" + "/".join(path), random_body(stype, catalog, [path], rng, params))


def type1_root(catalog) -> Template:
    return Template(ROOT_MATCH, (Instruction(APPLY, simple_path([catalog.root_tag]), wrapped=False),))


def type2_root(templates) -> Template:
    return Template(
        ROOT_MATCH,
        tuple(Instruction(APPLY, match_path_expr(t.match), wrapped=False) for t in templates),
    )


def make_genome(stype, catalog, templates, wrapper_tag=WRAPPER_TAG, line_tag=LINE_TAG) -> Genome:
    """Assemble a genome from its non-root templates, adding the root template."""
    stype = check_structure_type(stype)
    templates = tuple(templates)
    root = type1_root(catalog) if stype == TYPE1 else type2_root(templates)
    return Genome(stype, Stylesheet((root,) + templates, wrapper_tag, line_tag), catalog)


def random_genome(stype, catalog: TagCatalog, params: InitParams | None = None, rng=None,
                  wrapper_tag=WRAPPER_TAG, line_tag=LINE_TAG) -> Genome:
    import random as _random

    params = params or InitParams()
    rng = rng or _random.Random()
    stype = check_structure_type(stype)
    if not len(catalog):
        raise ValueError("empty catalog")
    k = rng.randint(params.min_templates, params.max_templates)
    templates = [random_template(stype, catalog, rng, params) for _ in range(k)]
    return make_genome(stype, catalog, templates, wrapper_tag, line_tag)


def repair_type2_body(catalog, path: tuple, body) -> tuple[Instruction, ...]:
    """Keep a Type 2 body valid after its template moved to ``path``."""
    if catalog.is_leaf(path):
        return (instruction_for(TYPE2, SELF),)
    kept = tuple(i for i in body if resolve_paths(i.select, catalog, [path]))
    return kept or (instruction_for(TYPE2, SELF),)


# -- validation --------------------------------------------------------------

def _check_select(catalog, select, contexts, where, problems):
    if select.absolute:
        problems.append(f"{where}: select {select} must be relative")
        return
    for step in select.steps:
        if step.filter is not None and step.filter > catalog.max_siblings.get(step.name, 0):
            problems.append(f"{where}: filter [{step.filter}] exceeds occurrences of {step.name!r}")
    if not resolve_paths(select, catalog, contexts):
        problems.append(f"{where}: select {select} does not resolve in the input")


def validate(g: Genome) -> list[str]:
    """Violations of the structure-type invariants; empty when valid."""
    problems: list[str] = []
    catalog = g.catalog
    templates = g.sheet.templates
    if not templates or not templates[0].is_root:
        return ["first template must match '/'"]
    root = templates[0]
    rest = templates[1:]
    if not rest:
        problems.append("genome needs at least one template besides the root one")
    for i, t in enumerate(rest, 1):
        if t.is_root:
            problems.append(f"template {i}: only the first template may match '/'")
        if not t.body:
            problems.append(f"template {i}: empty body")
    for i, t in enumerate(templates):
        for ins in t.body:
            if ins.kind == APPLY and ins.select.is_self:
                problems.append(f"template {i}: apply-templates with select '.'")
            if ins.kind == VALUE_OF and not ins.wrapped:
                problems.append(f"template {i}: value-of must be wrapped in a line element")
    if problems:
        return problems
    if g.stype == TYPE1:
        _validate_type1(catalog, root, rest, problems)
    else:
        _validate_type2(catalog, root, rest, problems)
    return problems


def _validate_type1(catalog, root, rest, problems):
    if root != type1_root(catalog):
        problems.append(f"root template must hold exactly apply-templates select='/{catalog.root_tag}'")
    for i, t in enumerate(rest, 1):
        where = f"template {i} ({t.match})"
        if "/" in t.match:
            problems.append(f"{where}: match must be a bare tag name")
            continue
        contexts = catalog.paths.get(t.match)
        if not contexts:
            problems.append(f"{where}: tag does not occur in the input")
            continue
        for ins in t.body:
            if ins.kind == VALUE_OF and not ins.select.is_self:
                problems.append(f"{where}: value-of is only used with select '.'")
            _check_select(catalog, ins.select, contexts, where, problems)


def _validate_type2(catalog, root, rest, problems):
    selects = []
    for ins in root.body:
        s = ins.select
        if ins.kind != APPLY:
            problems.append("root template may only hold apply-templates")
        elif not (s.absolute and s.is_simple):
            problems.append(f"root select {s} must be an absolute path of plain tag names")
        elif not resolve_paths(s, catalog):
            problems.append(f"root select {s} does not resolve in the input")
        selects.append(str(s))
    matches = [t.match for t in rest]
    if selects != matches:
        if sorted(selects) == sorted(matches):
            problems.append("template order does not follow the root apply-templates order")
        else:
            problems.append("templates do not correspond one-to-one with the root apply-templates")
    for i, t in enumerate(rest, 1):
        where = f"template {i} ({t.match})"
        if not t.match.startswith("/"):
            problems.append(f"{where}: match must be an absolute path")
            continue
        path = tuple(t.match[1:].split("/"))
        if path not in catalog.children:
            problems.append(f"{where}: path does not occur in the input")
            continue
        for ins in t.body:
            if ins.kind != VALUE_OF:
                problems.append(f"{where}: only value-of instructions are allowed")
            _check_select(catalog, ins.select, [path], where, problems)
        if catalog.is_leaf(path) and t.body != (instruction_for(TYPE2, SELF),):
            problems.append(f"{where}: a deepest-level template holds exactly value-of select='.'")
