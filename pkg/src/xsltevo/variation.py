"""Variation operators over Type 1 / Type 2 genomes.

Every operator returns new genomes that satisfy the structure invariants,
or ``None`` when it has nothing to act on (a no-op).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

from .genome import (
    TYPE1,
    TYPE2,
    Genome,
    InitParams,
    check_structure_type,
    enumerate_relative_paths,
    instruction_for,
    match_path_expr,
    random_body,
    random_relative_path,
    random_template,
    random_walk,
    repair_type2_body,
    template_contexts,
)
from .xpath import CHILD, DESCENDANT, SELF, PathExpr, Step, resolve_paths, simple_path
from .xslt import APPLY, Instruction, Template


class Op(str, Enum):
    XP_ADD_FILTER = "xp-add-filter"
    XP_MUTATE_FILTER = "xp-mutate-filter"
    XP_REMOVE_FILTER = "xp-remove-filter"
    XP_ADD_BRANCH = "xp-add-branch"
    XP_SET_SELF = "xp-set-self"
    XP_SET_DESCENDANT = "xp-set-descendant"
    XP_REMOVE_BRANCH = "xp-remove-branch"
    CROSSOVER_TEMPLATE = "crossover-template"
    ADD_TEMPLATE = "add-template"
    MUTATE_TEMPLATE = "mutate-template"
    REMOVE_TEMPLATE = "remove-template"
    ADD_APPLY = "add-apply"
    REMOVE_APPLY = "remove-apply"
    MUTATE_APPLY_1 = "mutate-apply-1"
    MUTATE_APPLY_2 = "mutate-apply-2"
    SET_TEMPLATE_NULL = "set-template-null"

    def __str__(self):
        return self.value

    @property
    def is_xpath(self) -> bool:
        return self.value.startswith("xp-")


XPATH_OPS = tuple(op for op in Op if op.is_xpath)
STRUCTURAL_OPS = tuple(op for op in Op if not op.is_xpath)


def legal_ops(stype) -> tuple[Op, ...]:
    stype = check_structure_type(stype)
    return tuple(op for op in Op if stype == TYPE1 or op is not Op.XP_SET_DESCENDANT)


# Roulette thresholds of the XPath block are cumulative; structural ones are direct.
_CUMULATIVE_XPATH = {
    TYPE1: [
        (Op.XP_SET_SELF, 0.10),
        (Op.XP_SET_DESCENDANT, 0.24),
        (Op.XP_REMOVE_BRANCH, 0.39),
        (Op.XP_ADD_FILTER, 0.53),
        (Op.XP_MUTATE_FILTER, 0.69),
        (Op.XP_REMOVE_FILTER, 0.83),
        (Op.XP_ADD_BRANCH, 0.99),
    ],
    TYPE2: [
        (Op.XP_SET_SELF, 0.10),
        (Op.XP_REMOVE_BRANCH, 0.27),
        (Op.XP_ADD_FILTER, 0.45),
        (Op.XP_MUTATE_FILTER, 0.64),
        (Op.XP_REMOVE_FILTER, 0.83),
        (Op.XP_ADD_BRANCH, 0.99),
    ],
}

_STRUCTURAL_WEIGHTS = {
    Op.CROSSOVER_TEMPLATE: 0.11,
    Op.ADD_TEMPLATE: 0.20,
    Op.MUTATE_TEMPLATE: 0.10,
    Op.REMOVE_TEMPLATE: 0.12,
    Op.ADD_APPLY: 0.10,
    Op.MUTATE_APPLY_1: 0.10,
    Op.MUTATE_APPLY_2: 0.14,
    Op.REMOVE_APPLY: 0.10,
    Op.SET_TEMPLATE_NULL: 0.03,
}


@dataclass
class OperatorTable:
    """Roulette weights for one structure type, split in two groups."""

    stype: str
    xpath: dict = field(default_factory=dict)
    structural: dict = field(default_factory=dict)
    group_balance: float = 0.5

    def __post_init__(self):
        self.stype = check_structure_type(self.stype)
        self.xpath = {Op(k): float(v) for k, v in self.xpath.items()}
        self.structural = {Op(k): float(v) for k, v in self.structural.items()}

    def weight(self, op) -> float:
        op = Op(op)
        return (self.xpath if op.is_xpath else self.structural).get(op, 0.0)

    def set_weight(self, op, w: float):
        op = Op(op)
        if w < 0:
            raise ValueError(f"negative weight for {op}")
        if op not in legal_ops(self.stype) and w > 0:
            raise ValueError(f"{op} is not available for {self.stype}")
        (self.xpath if op.is_xpath else self.structural)[op] = float(w)

    def probabilities(self) -> dict:
        """Overall probability of each operator after both roulette stages."""
        out = {}
        for group, share in ((self.xpath, self.group_balance), (self.structural, 1 - self.group_balance)):
            total = sum(group.values())
            for op, w in group.items():
                out[op] = share * w / total if total else 0.0
        return out

    def check(self):
        if not 0.0 <= self.group_balance <= 1.0:
            raise ValueError("group_balance must lie in [0, 1]")
        for op in list(self.xpath) + list(self.structural):
            if op not in legal_ops(self.stype) and self.weight(op) > 0:
                raise ValueError(f"{op} is not available for {self.stype}")
        if self.group_balance > 0 and sum(self.xpath.values()) <= 0:
            raise ValueError("XPath operator group has zero total weight")
        if self.group_balance < 1 and sum(self.structural.values()) <= 0:
            raise ValueError("structural operator group has zero total weight")
        return self


def default_operator_table(stype) -> OperatorTable:
    stype = check_structure_type(stype)
    xpath = {}
    prev = 0.0
    for op, cum in _CUMULATIVE_XPATH[stype]:
        xpath[op] = round(cum - prev, 10)
        prev = cum
    return OperatorTable(stype, xpath, dict(_STRUCTURAL_WEIGHTS), 0.5)


def select_operator(table: OperatorTable, stype, rng) -> Op:
    """Two-stage roulette: the group first, then an operator inside it."""
    if check_structure_type(stype) != table.stype:
        raise ValueError(f"operator table is for {table.stype}, not {stype}")
    group = table.xpath if rng.random() < table.group_balance else table.structural
    ops = [op for op, w in group.items() if w > 0]
    return rng.choices(ops, [group[op] for op in ops])[0]


# -- XPath operators -----------------------------------------------------------

def _sites(g: Genome, kind: Op):
    """(template index, instruction index, contexts) of every eligible select."""
    catalog = g.catalog
    out = []
    for ti, t in enumerate(g.templates):
        if ti == 0:
            # Type 1's root template is frozen; Type 2's root selects only
            # take branch additions and removals.
            if g.stype == TYPE1 or kind not in (Op.XP_ADD_BRANCH, Op.XP_REMOVE_BRANCH):
                continue
        contexts = None
        for ii, ins in enumerate(t.body):
            sel = ins.select
            if kind is Op.XP_ADD_FILTER:
                ok = any(s.filter is None for s in sel.steps if not s.is_self)
            elif kind in (Op.XP_MUTATE_FILTER, Op.XP_REMOVE_FILTER):
                ok = any(s.filter is not None for s in sel.steps)
            elif kind is Op.XP_SET_SELF:
                ok = not sel.is_self
            elif kind is Op.XP_SET_DESCENDANT:
                ok = len(sel.steps) >= 3
            elif kind is Op.XP_REMOVE_BRANCH:
                ok = not sel.is_self and (ti != 0 or len(sel.steps) >= 2)
            else:
                if contexts is None:
                    contexts = template_contexts(g, t)
                ok = bool(_child_tags(catalog, sel, contexts))
            if ok:
                out.append((ti, ii))
    return out


def _child_tags(catalog, sel, contexts):
    tags = {}
    for p in resolve_paths(sel, catalog, contexts):
        for t in catalog.children.get(p, ()):
            tags[t] = None
    return list(tags)


def _replace_select(g: Genome, ti: int, ii: int, new_sel: PathExpr) -> Genome:
    templates = list(g.templates)
    t = templates[ti]
    body = list(t.body)
    if ti == 0:
        body[ii] = replace(body[ii], select=new_sel)
        templates[0] = Template(t.match, tuple(body))
        # keep the mirrored template in step with its root select
        old = templates[ii + 1]
        path = new_sel.tags
        templates[ii + 1] = Template(str(new_sel), repair_type2_body(g.catalog, path, old.body))
    else:
        body[ii] = instruction_for(g.stype, new_sel)
        templates[ti] = Template(t.match, tuple(body))
    return g.with_templates(templates)


def mutate_xpath(g: Genome, kind, catalog=None, rng=None) -> Genome | None:
    """Rewrite one random eligible select expression of ``g``."""
    kind = Op(kind)
    if not kind.is_xpath:
        raise ValueError(f"{kind} is not an XPath operator")
    if kind not in legal_ops(g.stype):
        raise ValueError(f"{kind} is not available for {g.stype} genomes")
    catalog = catalog or g.catalog
    sites = _sites(g, kind)
    if not sites:
        return None
    ti, ii = rng.choice(sites)
    sel = g.templates[ti].body[ii].select
    steps = list(sel.steps)

    if kind is Op.XP_ADD_FILTER:
        idx = rng.choice([i for i, s in enumerate(steps) if s.filter is None and not s.is_self])
        k = rng.randint(1, catalog.max_siblings.get(steps[idx].name, 1))
        steps[idx] = replace(steps[idx], filter=k)
        new = sel.with_steps(steps)
    elif kind is Op.XP_MUTATE_FILTER:
        idx = rng.choice([i for i, s in enumerate(steps) if s.filter is not None])
        k = rng.randint(1, catalog.max_siblings.get(steps[idx].name, 1))
        steps[idx] = replace(steps[idx], filter=k)
        new = sel.with_steps(steps)
    elif kind is Op.XP_REMOVE_FILTER:
        idx = rng.choice([i for i, s in enumerate(steps) if s.filter is not None])
        steps[idx] = replace(steps[idx], filter=None)
        new = sel.with_steps(steps)
    elif kind is Op.XP_ADD_BRANCH:
        contexts = template_contexts(g, g.templates[ti])
        tag = rng.choice(_child_tags(catalog, sel, contexts))
        base = [] if sel.is_self else steps
        new = PathExpr(sel.absolute, tuple(base) + (Step(CHILD, tag),))
    elif kind is Op.XP_SET_SELF:
        new = SELF
    elif kind is Op.XP_SET_DESCENDANT:
        idx = rng.randrange(1, len(steps) - 1)
        del steps[idx]
        steps[idx] = replace(steps[idx], axis=DESCENDANT)
        new = sel.with_steps(steps)
    else:  # XP_REMOVE_BRANCH
        new = sel.with_steps(steps[:-1])
    return _replace_select(g, ti, ii, new)


# -- structural operators ------------------------------------------------------

def crossover_template(a: Genome, b: Genome, rng) -> tuple[Genome, Genome] | None:
    """Swap one random non-root template between ``a`` and ``b``."""
    if a.stype != b.stype:
        raise ValueError("crossover needs parents of the same structure type")
    if a.n_templates < 1 or b.n_templates < 1:
        return None
    ia = rng.randint(1, a.n_templates)
    ib = rng.randint(1, b.n_templates)
    ta, tb = a.templates[ia], b.templates[ib]
    return _put_template(a, ia, tb), _put_template(b, ib, ta)


def _put_template(g: Genome, i: int, t: Template) -> Genome:
    templates = list(g.templates)
    templates[i] = t
    if g.stype == TYPE2:
        root = templates[0]
        body = list(root.body)
        body[i - 1] = Instruction(APPLY, match_path_expr(t.match), wrapped=False)
        templates[0] = Template(root.match, tuple(body))
    return g.with_templates(templates)


def _insert_template(g: Genome, pos: int, t: Template) -> Genome:
    templates = list(g.templates)
    templates.insert(pos, t)
    if g.stype == TYPE2:
        root = templates[0]
        body = list(root.body)
        body.insert(pos - 1, Instruction(APPLY, match_path_expr(t.match), wrapped=False))
        templates[0] = Template(root.match, tuple(body))
    return g.with_templates(templates)


def _delete_template(g: Genome, pos: int) -> Genome:
    templates = list(g.templates)
    del templates[pos]
    if g.stype == TYPE2:
        root = templates[0]
        body = list(root.body)
        del body[pos - 1]
        templates[0] = Template(root.match, tuple(body))
    return g.with_templates(templates)


def _set_body(g: Genome, i: int, body) -> Genome:
    templates = list(g.templates)
    templates[i] = Template(templates[i].match, tuple(body))
    return g.with_templates(templates)


def mutate_structure(g: Genome, kind, catalog=None, rng=None, params: InitParams | None = None) -> Genome | None:
    """Apply a non-crossover structural operator."""
    kind = Op(kind)
    if kind.is_xpath or kind is Op.CROSSOVER_TEMPLATE:
        raise ValueError(f"{kind} is not a single-parent structural operator")
    if kind not in legal_ops(g.stype):
        raise ValueError(f"{kind} is not available for {g.stype} genomes")
    catalog = catalog or g.catalog
    params = params or InitParams()
    n = g.n_templates

    if kind is Op.ADD_TEMPLATE:
        t = random_template(g.stype, catalog, rng, params)
        return _insert_template(g, rng.randint(1, n + 1), t)

    if kind is Op.MUTATE_TEMPLATE:
        if n < 1:
            return None
        i = rng.randint(1, n)
        contexts = template_contexts(g, g.templates[i])
        return _set_body(g, i, random_body(g.stype, catalog, contexts, rng, params))

    if kind is Op.REMOVE_TEMPLATE:
        if n < 2:
            return None
        return _delete_template(g, rng.randint(1, n))

    if kind is Op.SET_TEMPLATE_NULL:
        if n < 1:
            return None
        return _set_body(g, rng.randint(1, n), (instruction_for(g.stype, SELF),))

    if kind is Op.ADD_APPLY:
        eligible = [
            i for i in range(1, n + 1)
            if g.stype == TYPE1 or not all(catalog.is_leaf(p) for p in template_contexts(g, g.templates[i]))
        ]
        if not eligible:
            return None
        i = rng.choice(eligible)
        t = g.templates[i]
        path = random_relative_path(catalog, template_contexts(g, t), rng, params.max_relative_steps)
        ins = instruction_for(g.stype, path or SELF)
        body = list(t.body)
        body.insert(rng.randint(0, len(body)), ins)
        return _set_body(g, i, body)

    if kind is Op.REMOVE_APPLY:
        if n < 2:
            return None
        i = rng.randint(1, n)
        body = list(g.templates[i].body)
        del body[rng.randrange(len(body))]
        if not body:
            return _delete_template(g, i)
        return _set_body(g, i, body)

    # MUTATE_APPLY_1 / MUTATE_APPLY_2
    if n < 1:
        return None
    i = rng.randint(1, n)
    t = g.templates[i]
    contexts = template_contexts(g, t)
    j = rng.randrange(len(t.body))
    old = t.body[j].select
    if kind is Op.MUTATE_APPLY_1:
        choices = [SELF] + enumerate_relative_paths(catalog, contexts, params.max_relative_steps)
        new = rng.choice(choices)
    else:
        new = _rebuild_select(catalog, contexts, old, rng, params)
    if g.stype == TYPE2 and all(catalog.is_leaf(p) for p in contexts):
        new = SELF
    body = list(t.body)
    body[j] = instruction_for(g.stype, new)
    return _set_body(g, i, body)


def _rebuild_select(catalog, contexts, old: PathExpr, rng, params) -> PathExpr:
    """Keep the parent part of ``old`` and grow a fresh tail below it."""
    prefix = () if old.is_self else old.steps[:-1]
    base = PathExpr(False, prefix) if prefix else SELF
    starts = resolve_paths(base, catalog, contexts)
    starts = [p for p in starts if catalog.children.get(p)]
    if not starts:
        return base
    tail = random_walk(catalog, rng.choice(starts), rng.randint(1, min(2, params.max_relative_steps)), rng)
    return PathExpr(False, tuple(prefix) + simple_path(tail, absolute=False).steps)


def vary(kind, parent: Genome, rng, mate: Genome | None = None, params: InitParams | None = None):
    """Apply ``kind`` and return the list of offspring, or ``None`` on a no-op."""
    kind = Op(kind)
    if kind.is_xpath:
        child = mutate_xpath(parent, kind, parent.catalog, rng)
        return None if child is None else [child]
    if kind is Op.CROSSOVER_TEMPLATE:
        pair = crossover_template(parent, mate if mate is not None else parent, rng)
        return None if pair is None else list(pair)
    child = mutate_structure(parent, kind, parent.catalog, rng, params)
    return None if child is None else [child]
