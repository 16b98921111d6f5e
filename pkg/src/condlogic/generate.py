"""Synthetic example generation from symbolic templates and an NLI bank.

Templates are sampled symbolically (see :mod:`condlogic.templates`) and
instantiated with premise/hypothesis pairs drawn from a bank of NLI
records: a condition takes a record's premise, its fact takes the
hypothesis, and the record's label must agree with the relation the slot
asks for. A fact slot ``a`` samples an entailment-labeled record, ``not
a`` a contradiction-labeled one; conditions without facts and distractor
premises use any record's premise. The asked premise/question pair is
drawn from the bucket matching the template's target relation.

Everything is deterministic in the master seed: template choice and all
sampling derive per-item seeds by stable hashing, so dev and test splits
never share randomness.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import logging
import random
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Iterator

from .errors import BankError, GenerationError, InvariantError
from .logic import Condition, ConditionGroup, LogicalType, Verdict
from .templates import (
    TARGET_RELATIONS,
    Template,
    TemplateGroup,
    VarRef,
    condition_ids,
    render_template_dsl,
    solve_template,
    validate_template,
)

logger = logging.getLogger(__name__)

NLI_LABELS = ("entailment", "contradiction", "neutral")

#: NLI bucket that realizes each target relation for the question pair.
_NLI_FOR_RELATION = {
    "entailed": "entailment",
    "contradicted": "contradiction",
    "neutral": "neutral",
}

# Condition and premise variables come from disjoint alphabets so that a
# lowercase fact or question token is never ambiguous.
_CONDITION_ALPHABET = "ABCDEFGHIJKLMNOPQRST"
_CONSEQUENT_ALPHABET = "UVWXYZ"


def _bijective_name(index: int, alphabet: str) -> str:
    """Spreadsheet-style names over an alphabet: A..T, AA, AB, ..."""
    chars = []
    n = index + 1
    base = len(alphabet)
    while n > 0:
        n, rem = divmod(n - 1, base)
        chars.append(alphabet[rem])
    return "".join(reversed(chars))


def _derive_seed(*parts) -> int:
    """Stable 64-bit seed from arbitrary parts (unlike ``hash``, it is
    identical across interpreter runs)."""
    payload = "\x1f".join(str(p) for p in parts).encode("utf-8")
    return int.from_bytes(hashlib.sha256(payload).digest()[:8], "big")


@dataclass(frozen=True)
class NliRecord:
    premise: str
    hypothesis: str
    label: str


@dataclass(frozen=True)
class NliBank:
    """NLI records bucketed by label, with sampling helpers."""

    path: str
    by_label: dict[str, tuple[NliRecord, ...]]
    skipped: int = 0

    @property
    def counts(self) -> dict[str, int]:
        return {label: len(self.by_label.get(label, ())) for label in NLI_LABELS}

    def __len__(self) -> int:
        return sum(len(v) for v in self.by_label.values())

    def sample(self, label: str, rng: random.Random) -> NliRecord:
        bucket = self.by_label.get(label, ())
        if not bucket:
            raise BankError(f"bank {self.path!r} has no {label!r} records")
        return bucket[rng.randrange(len(bucket))]

    def sample_any(self, rng: random.Random) -> NliRecord:
        total = len(self)
        if not total:
            raise BankError(f"bank {self.path!r} is empty")
        index = rng.randrange(total)
        for label in NLI_LABELS:
            bucket = self.by_label.get(label, ())
            if index < len(bucket):
                return bucket[index]
            index -= len(bucket)
        raise AssertionError("unreachable")


# MultiNLI-style field names are accepted as aliases.
_FIELD_ALIASES = {
    "premise": ("premise", "sentence1"),
    "hypothesis": ("hypothesis", "sentence2"),
    "label": ("label", "gold_label"),
}


def load_nli_bank(path) -> NliBank:
    """Load a JSONL bank of ``{premise, hypothesis, label}`` records.

    Malformed lines (bad JSON, missing fields, labels outside
    entailment/contradiction/neutral) are skipped and counted. A bank
    with no valid records raises :class:`BankError`.
    """
    buckets: dict[str, list[NliRecord]] = {label: [] for label in NLI_LABELS}
    skipped = 0
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError:
                logger.warning("%s:%d: invalid JSON, skipping", path, line_no)
                skipped += 1
                continue
            fields = {}
            for name, aliases in _FIELD_ALIASES.items():
                value = next((raw[a] for a in aliases if a in raw), None)
                fields[name] = value
            if not all(isinstance(v, str) and v for v in fields.values()):
                logger.warning("%s:%d: missing or empty fields, skipping", path, line_no)
                skipped += 1
                continue
            if fields["label"] not in NLI_LABELS:
                logger.warning("%s:%d: unknown label %r, skipping", path, line_no, fields["label"])
                skipped += 1
                continue
            buckets[fields["label"]].append(NliRecord(**fields))
    bank = NliBank(
        path=str(path),
        by_label={label: tuple(records) for label, records in buckets.items()},
        skipped=skipped,
    )
    if not len(bank):
        raise BankError(f"bank {path!r} contains no valid records")
    return bank


@dataclass(frozen=True)
class GenConfig:
    """Generation parameters. ``seed`` is the master seed and mandatory."""

    seed: int
    max_conditions: int = 6
    n_templates: int = 65
    n_dev: int = 5000
    n_test: int = 5000
    #: Relative weights for drawing the all / any operator.
    operator_weights: tuple[float, float] = (1.0, 1.0)
    #: Bounds (inclusive) on the number of distractor premises per template.
    distractor_range: tuple[int, int] = (0, 2)
    #: Probability that a condition contributes a fact.
    fact_probability: float = 0.5
    #: Probability of negating a condition slot or a fact.
    negation_probability: float = 0.25
    #: Consecutive duplicate candidates tolerated before giving up.
    max_retries: int = 1000

    def __post_init__(self):
        if self.max_conditions < 1:
            raise InvariantError("max_conditions must be at least 1")
        if self.n_templates < 1:
            raise InvariantError("n_templates must be at least 1")
        if min(self.n_dev, self.n_test) < 0:
            raise InvariantError("split sizes cannot be negative")
        if min(self.operator_weights) < 0 or sum(self.operator_weights) <= 0:
            raise InvariantError("operator weights must be non-negative and not all zero")
        lo, hi = self.distractor_range
        if not 0 <= lo <= hi:
            raise InvariantError("invalid distractor range")
        for p in (self.fact_probability, self.negation_probability):
            if not 0.0 <= p <= 1.0:
                raise InvariantError("probabilities must lie in [0, 1]")


def config_hash(config: GenConfig) -> str:
    """Stable hex digest of a config, for manifests."""
    payload = json.dumps(config.__dict__, sort_keys=True, default=str)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def _random_template(config: GenConfig, rng: random.Random) -> Template:
    target = TARGET_RELATIONS[rng.randrange(len(TARGET_RELATIONS))]
    lo, hi = config.distractor_range
    n_groups = 1 + rng.randint(lo, hi)
    n_groups = min(n_groups, config.max_conditions)  # every group needs a condition

    ops = rng.choices((LogicalType.ALL, LogicalType.ANY), weights=config.operator_weights, k=n_groups)
    budget = config.max_conditions
    groups: list[TemplateGroup] = []
    var_index = 0
    for gi in range(n_groups):
        groups_left = n_groups - gi - 1
        size = rng.randint(1, budget - groups_left)
        budget -= size
        refs = []
        for _ in range(size):
            negated = rng.random() < config.negation_probability
            refs.append(VarRef(_bijective_name(var_index, _CONDITION_ALPHABET), negated))
            var_index += 1
        groups.append(TemplateGroup(ops[gi], tuple(refs), _bijective_name(gi, _CONSEQUENT_ALPHABET)))

    if target == "irrelevant":
        question_var = _bijective_name(n_groups, _CONSEQUENT_ALPHABET).lower()
    else:
        question_var = groups[rng.randrange(n_groups)].consequent.lower()

    all_vars = [ref.var for g in groups for ref in g.conditions]
    chosen = [v for v in all_vars if rng.random() < config.fact_probability]
    if not chosen:
        # The textual grammar requires at least one fact.
        chosen = [all_vars[rng.randrange(len(all_vars))]]
    facts = tuple(VarRef(v, rng.random() < config.negation_probability) for v in chosen)

    return Template(tuple(groups), facts, question_var, target)


@lru_cache(maxsize=16)
def generate_templates(config: GenConfig) -> tuple[Template, ...]:
    """Generate ``config.n_templates`` pairwise-distinct templates.

    Distinctness is structural: two templates collide when their
    canonical textual forms match. Deterministic in the master seed.
    Raises :class:`GenerationError` when ``max_retries`` consecutive
    candidates all collide (the template space is too small).
    """
    rng = random.Random(_derive_seed(config.seed, "templates"))
    seen: set[str] = set()
    out: list[Template] = []
    rejected = 0
    while len(out) < config.n_templates:
        candidate = _random_template(config, rng)
        key = render_template_dsl(candidate)
        if key in seen:
            rejected += 1
            if rejected > config.max_retries:
                raise GenerationError(
                    f"no new template after {config.max_retries} consecutive duplicates; "
                    f"got {len(out)} of {config.n_templates}"
                )
            continue
        rejected = 0
        seen.add(key)
        out.append(replace(candidate, template_id=f"T{len(out):03d}"))
    return tuple(out)


def generate_template(config: GenConfig, index: int) -> Template:
    """The ``index``-th template of the deterministic distinct sequence."""
    if not 0 <= index < config.n_templates:
        raise InvariantError(f"template index {index} out of range")
    return generate_templates(config)[index]


@dataclass(frozen=True)
class Example:
    """An instantiated template with its oracle verdict."""

    context: tuple[ConditionGroup, ...]
    facts: tuple[str, ...]
    question: str
    gold: Verdict
    template_id: str
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "context", tuple(self.context))
        object.__setattr__(self, "facts", tuple(self.facts))


def instantiate(template: Template, bank: NliBank, example_index: int, *, seed: int) -> Example:
    """Fill a template's slots with bank records.

    Deterministic in ``(seed, template.template_id, example_index)``.
    Condition texts carry their document-order id as a ``Ck:`` prefix;
    negated condition slots prefix the premise with ``not``. Negated
    facts are realized by sampling a contradiction-labeled record, so the
    hypothesis text itself is used verbatim.
    """
    validate_template(template)
    example_seed = _derive_seed(seed, template.template_id, example_index)
    rng = random.Random(example_seed)

    fact_bucket = {
        f.var: "contradiction" if f.negated else "entailment" for f in template.facts
    }
    ids = condition_ids(template)
    fact_text: dict[str, str] = {}
    question: str | None = None

    groups: list[ConditionGroup] = []
    for gi, g in enumerate(template.groups):
        is_relevant = g.consequent.lower() == template.question_var
        if is_relevant:
            record = bank.sample(_NLI_FOR_RELATION[template.target_relation], rng)
            question = record.hypothesis
        else:
            record = bank.sample_any(rng)
        conditions = []
        for ref in g.conditions:
            if ref.var in fact_bucket:
                cond_record = bank.sample(fact_bucket[ref.var], rng)
                fact_text[ref.var] = cond_record.hypothesis
            else:
                cond_record = bank.sample_any(rng)
            text = f"not {cond_record.premise}" if ref.negated else cond_record.premise
            conditions.append(Condition(id=ids[ref.var], text=f"{ids[ref.var]}: {text}"))
        logical_type = LogicalType.REQUIRED if len(conditions) == 1 else g.logical_type
        groups.append(
            ConditionGroup(
                result_id=f"R{gi}",
                result_text=record.premise,
                logical_type=logical_type,
                conditions=tuple(conditions),
            )
        )
    if question is None:
        # Irrelevant target: the question hypothesis has no premise in context.
        question = bank.sample_any(rng).hypothesis

    symbolic = solve_template(template)
    gold = Verdict(symbolic.label, frozenset(ids[v] for v in symbolic.unsatisfied))
    return Example(
        context=tuple(groups),
        facts=tuple(fact_text[f.var] for f in template.facts),
        question=question,
        gold=gold,
        template_id=template.template_id,
        seed=example_seed,
    )


SPLITS = ("dev", "test", "train-stream")


def generate_dataset(config: GenConfig, bank: NliBank, split: str) -> Iterator[Example]:
    """Yield examples for a split, choosing templates uniformly.

    ``dev`` and ``test`` emit exactly ``n_dev`` / ``n_test`` examples;
    ``train-stream`` is unbounded. Split tags enter the seed derivation,
    so splits draw from disjoint random streams.
    """
    if split not in SPLITS:
        raise InvariantError(f"unknown split {split!r}, expected one of {SPLITS}")
    templates = generate_templates(config)
    length = {"dev": config.n_dev, "test": config.n_test}.get(split)
    indices = range(length) if length is not None else itertools.count()
    split_seed = _derive_seed(config.seed, split)
    for index in indices:
        pick = random.Random(_derive_seed(config.seed, split, index, "pick"))
        template = templates[pick.randrange(len(templates))]
        yield instantiate(template, bank, index, seed=split_seed)
