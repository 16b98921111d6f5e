import itertools
import json

import pytest

from condlogic import (
    BankError,
    GenConfig,
    GenerationError,
    InvariantError,
    LogicalType,
    NliBank,
    NliRecord,
    Verdict,
    config_hash,
    generate_dataset,
    generate_template,
    generate_templates,
    instantiate,
    load_nli_bank,
    parse_template_dsl,
    render_template_dsl,
    validate_template,
)
from conftest import REFERENCE_TEMPLATE, write_bank


# --- bank loading -----------------------------------------------------------

def test_load_bank_counts(bank):
    assert bank.counts == {"entailment": 20, "contradiction": 20, "neutral": 20}
    assert len(bank) == 60
    assert bank.skipped == 0


def test_load_bank_aliases(tmp_path):
    path = tmp_path / "mnli.jsonl"
    path.write_text(
        json.dumps({"sentence1": "p", "sentence2": "h", "gold_label": "neutral"}) + "\n",
        encoding="utf-8",
    )
    bank = load_nli_bank(path)
    assert bank.by_label["neutral"] == (NliRecord("p", "h", "neutral"),)


def test_load_bank_skips_malformed(tmp_path, caplog):
    path = tmp_path / "dirty.jsonl"
    lines = [
        "not json",
        json.dumps({"premise": "p", "label": "neutral"}),
        json.dumps({"premise": "p", "hypothesis": "h", "label": "maybe"}),
        json.dumps({"premise": "", "hypothesis": "h", "label": "neutral"}),
        "",
        json.dumps({"premise": "p", "hypothesis": "h", "label": "entailment"}),
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with caplog.at_level("WARNING"):
        bank = load_nli_bank(path)
    assert len(bank) == 1
    assert bank.skipped == 4
    assert sum("skipping" in r.message for r in caplog.records) == 4


def test_load_bank_empty_raises(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("not json\n", encoding="utf-8")
    with pytest.raises(BankError):
        load_nli_bank(path)


def test_sample_missing_bucket_raises(tmp_path):
    path = tmp_path / "onesided.jsonl"
    path.write_text(
        json.dumps({"premise": "p", "hypothesis": "h", "label": "neutral"}) + "\n",
        encoding="utf-8",
    )
    bank = load_nli_bank(path)
    import random

    with pytest.raises(BankError):
        bank.sample("entailment", random.Random(0))
    assert bank.sample_any(random.Random(0)).label == "neutral"


# --- configuration ----------------------------------------------------------

@pytest.mark.parametrize(
    "kwargs",
    [
        {"max_conditions": 0},
        {"n_templates": 0},
        {"n_dev": -1},
        {"operator_weights": (0.0, 0.0)},
        {"operator_weights": (-1.0, 2.0)},
        {"distractor_range": (2, 1)},
        {"distractor_range": (-1, 1)},
        {"fact_probability": 1.5},
        {"negation_probability": -0.1},
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(InvariantError):
        GenConfig(seed=0, **kwargs)


def test_config_hash_stable_and_sensitive():
    a = config_hash(GenConfig(seed=1))
    assert a == config_hash(GenConfig(seed=1))
    assert a != config_hash(GenConfig(seed=2))
    assert a != config_hash(GenConfig(seed=1, n_dev=10))
    assert len(a) == 16


# --- template generation ----------------------------------------------------

def test_templates_distinct_valid_and_capped():
    config = GenConfig(seed=7, n_templates=40)
    templates = generate_templates(config)
    assert len(templates) == 40
    rendered = {render_template_dsl(t) for t in templates}
    assert len(rendered) == 40
    for i, t in enumerate(templates):
        assert t.template_id == f"T{i:03d}"
        validate_template(t, max_conditions=config.max_conditions)
        assert 1 <= len(t.groups) <= 1 + config.distractor_range[1]


def test_templates_deterministic_without_cache():
    config = GenConfig(seed=7, n_templates=10)
    assert generate_templates.__wrapped__(config) == generate_templates(config)


def test_templates_exhausted_space():
    config = GenConfig(
        seed=0,
        max_conditions=1,
        n_templates=50,
        distractor_range=(0, 0),
        fact_probability=1.0,
        negation_probability=0.0,
        max_retries=200,
    )
    with pytest.raises(GenerationError):
        generate_templates(config)


def test_generate_template_index_bounds():
    config = GenConfig(seed=7, n_templates=5)
    assert generate_template(config, 4) == generate_templates(config)[4]
    with pytest.raises(InvariantError):
        generate_template(config, 5)
    with pytest.raises(InvariantError):
        generate_template(config, -1)


def test_templates_cover_operators_and_targets():
    templates = generate_templates(GenConfig(seed=3, n_templates=60))
    targets = {t.target_relation for t in templates}
    assert targets == {"entailed", "contradicted", "neutral", "irrelevant"}
    ops = {g.logical_type for t in templates for g in t.groups}
    assert ops == {LogicalType.ALL, LogicalType.ANY}


# --- instantiation ----------------------------------------------------------

def test_instantiate_reference_template(bank):
    template = parse_template_dsl(REFERENCE_TEMPLATE)
    template = type(template)(**{**template.__dict__, "template_id": "T000"})
    ex = instantiate(template, bank, 0, seed=11)

    # question comes from the bucket matching the target relation
    assert ex.question.startswith("entailment hypothesis")
    # facts a, c use the entailment bucket; not d the contradiction bucket
    assert ex.facts[0].startswith("entailment hypothesis")
    assert ex.facts[1].startswith("entailment hypothesis")
    assert ex.facts[2].startswith("contradiction hypothesis")

    assert [g.result_id for g in ex.context] == ["R0", "R1"]
    # the asked premise is sampled from the target bucket too
    assert ex.context[0].result_text.startswith("entailment premise")
    ids = [c.id for g in ex.context for c in g.conditions]
    assert ids == ["C0", "C1", "C2", "C3"]
    for group in ex.context:
        for cond in group.conditions:
            assert cond.text.startswith(f"{cond.id}: ")
    # the negated slot (not C) carries a textual marker
    assert ex.context[1].conditions[0].text.startswith("C2: not ")

    assert ex.gold == Verdict("entailed", frozenset({"C1"}))
    assert ex.template_id == "T000"


def test_instantiate_deterministic(bank):
    template = parse_template_dsl(REFERENCE_TEMPLATE)
    a = instantiate(template, bank, 3, seed=5)
    b = instantiate(template, bank, 3, seed=5)
    assert a == b
    c = instantiate(template, bank, 4, seed=5)
    assert c != a
    assert c.seed != a.seed


def test_instantiate_single_condition_group_is_required(bank):
    template = parse_template_dsl(
        "If all (A), then U.\nFacts: a.\nQuestion: Is u correct?"
    )
    ex = instantiate(template, bank, 0, seed=1)
    assert ex.context[0].logical_type is LogicalType.REQUIRED


def test_instantiate_irrelevant_target(bank):
    template = parse_template_dsl(
        "If all (A), then U.\nFacts: a.\nQuestion: Is w correct?\nLabel: irrelevant"
    )
    ex = instantiate(template, bank, 0, seed=1)
    assert ex.gold == Verdict("irrelevant", frozenset())
    assert "hypothesis" in ex.question


def test_instantiate_needs_target_bucket(tmp_path):
    path = tmp_path / "neutral_only.jsonl"
    path.write_text(
        json.dumps({"premise": "p", "hypothesis": "h", "label": "neutral"}) + "\n",
        encoding="utf-8",
    )
    bank = load_nli_bank(path)
    template = parse_template_dsl(REFERENCE_TEMPLATE)
    with pytest.raises(BankError):
        instantiate(template, bank, 0, seed=1)


# --- dataset generation -----------------------------------------------------

def test_dataset_counts_and_determinism(bank):
    config = GenConfig(seed=13, n_templates=8, n_dev=25, n_test=10)
    dev = list(generate_dataset(config, bank, "dev"))
    assert len(dev) == 25
    assert dev == list(generate_dataset(config, bank, "dev"))
    test = list(generate_dataset(config, bank, "test"))
    assert len(test) == 10

    known_ids = {t.template_id for t in generate_templates(config)}
    assert {e.template_id for e in dev} <= known_ids
    # splits draw from disjoint random streams
    assert {e.seed for e in dev}.isdisjoint({e.seed for e in test})


def test_dataset_train_stream_unbounded(bank):
    config = GenConfig(seed=13, n_templates=8, n_dev=2, n_test=2)
    stream = generate_dataset(config, bank, "train-stream")
    chunk = list(itertools.islice(stream, 7))
    assert len(chunk) == 7


def test_dataset_unknown_split(bank):
    with pytest.raises(InvariantError):
        next(generate_dataset(GenConfig(seed=1), bank, "validation"))


def test_dataset_gold_matches_resolve(bank):
    from condlogic import condition_ids, solve_template

    config = GenConfig(seed=21, n_templates=10, n_dev=40, n_test=0)
    by_id = {t.template_id: t for t in generate_templates(config)}
    for ex in generate_dataset(config, bank, "dev"):
        template = by_id[ex.template_id]
        symbolic = solve_template(template)
        ids = condition_ids(template)
        expected = Verdict(
            symbolic.label, frozenset(ids[v] for v in symbolic.unsatisfied)
        )
        assert ex.gold == expected
