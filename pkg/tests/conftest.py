import json

import pytest

from condlogic import load_nli_bank

# Two-group reference template: an all-group about the asked premise U
# with one fact missing, and a fully contradicted any-group distractor.
REFERENCE_TEMPLATE = """If all (A, B), then U.
If any (not C, D), then V.
Facts: a, c, not d.
Question: Is u correct?
Label: entailed, if B
"""


def write_bank(path, n, start=0):
    """Fabricate a balanced NLI bank with label-revealing texts."""
    labels = ("entailment", "contradiction", "neutral")
    with open(path, "w", encoding="utf-8") as handle:
        for i in range(start, start + n):
            label = labels[i % 3]
            handle.write(
                json.dumps(
                    {
                        "premise": f"{label} premise {i} about rule {i % 11}.",
                        "hypothesis": f"{label} hypothesis {i} about case {i % 7}.",
                        "label": label,
                    }
                )
                + "\n"
            )


@pytest.fixture
def bank_path(tmp_path):
    path = tmp_path / "bank.jsonl"
    write_bank(path, 60)
    return path


@pytest.fixture
def bank(bank_path):
    return load_nli_bank(bank_path)


@pytest.fixture(scope="session")
def big_bank_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("bank") / "bank10k.jsonl"
    write_bank(path, 10_000)
    return path


@pytest.fixture(scope="session")
def big_bank(big_bank_path):
    return load_nli_bank(big_bank_path)
