"""Reading and writing dataset splits.

Splits are JSON Lines files of serialized examples; each split carries a
``<name>.manifest`` sidecar recording the split name, record count,
master seed, config hash, and toolkit version. Reading is tolerant:
invalid records and a partially written final line are reported and
skipped, and a manifest/record-count mismatch is a warning, not an
error.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, replace
from typing import Iterable, Iterator

from . import __version__
from .generate import Example
from .logic import Condition, ConditionGroup, LogicalType, Verdict

logger = logging.getLogger(__name__)

MANIFEST_SUFFIX = ".manifest"

_CONDITION_ID_RE = re.compile(r"^C\d+$")
_EXAMPLE_GROUP_TYPES = {"all", "any", "required"}


@dataclass(frozen=True)
class SplitManifest:
    split: str
    count: int
    seed: int
    config_hash: str
    version: str = __version__

    def to_dict(self) -> dict:
        return {
            "split": self.split,
            "count": self.count,
            "seed": self.seed,
            "config_hash": self.config_hash,
            "version": self.version,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "SplitManifest":
        return cls(
            split=str(raw["split"]),
            count=int(raw["count"]),
            seed=int(raw["seed"]),
            config_hash=str(raw["config_hash"]),
            version=str(raw.get("version", "")),
        )


def _sorted_ids(ids) -> list[str]:
    return sorted(ids, key=lambda i: (len(i), i))


def example_to_dict(example: Example) -> dict:
    return {
        "template_id": example.template_id,
        "seed": example.seed,
        "context": [
            {
                "result_id": group.result_id,
                "result": group.result_text,
                "type": group.logical_type.value,
                "conditions": [{"id": c.id, "text": c.text} for c in group.conditions],
            }
            for group in example.context
        ],
        "facts": list(example.facts),
        "question": example.question,
        "answer_label": example.gold.label,
        "unsatisfied": _sorted_ids(example.gold.unsatisfied),
    }


def example_from_dict(raw: dict) -> Example:
    """Deserialize one example record, validating its shape.

    Raises ``ValueError`` on missing fields, malformed condition ids,
    unknown group types, or unsatisfied ids that name no condition.
    """
    if not isinstance(raw, dict):
        raise ValueError("record is not an object")
    missing = [
        key
        for key in ("template_id", "seed", "context", "facts", "question", "answer_label", "unsatisfied")
        if key not in raw
    ]
    if missing:
        raise ValueError(f"missing fields: {', '.join(missing)}")

    groups = []
    condition_ids: set[str] = set()
    if not isinstance(raw["context"], list):
        raise ValueError("context is not a list")
    for entry in raw["context"]:
        type_token = entry.get("type")
        if type_token not in _EXAMPLE_GROUP_TYPES:
            raise ValueError(f"unknown group type {type_token!r}")
        conditions = []
        for cond in entry.get("conditions", []):
            cid = cond.get("id", "")
            if not _CONDITION_ID_RE.match(cid):
                raise ValueError(f"malformed condition id {cid!r}")
            condition_ids.add(cid)
            conditions.append(Condition(id=cid, text=str(cond.get("text", ""))))
        groups.append(
            ConditionGroup(
                result_id=str(entry.get("result_id", "")),
                result_text=str(entry.get("result", "")),
                logical_type=LogicalType(type_token),
                conditions=tuple(conditions),
            )
        )

    unsatisfied = [str(i) for i in raw["unsatisfied"]]
    stray = [i for i in unsatisfied if i not in condition_ids]
    if stray:
        raise ValueError(f"unsatisfied ids name no condition: {stray}")

    return Example(
        context=tuple(groups),
        facts=tuple(str(f) for f in raw["facts"]),
        question=str(raw["question"]),
        gold=Verdict(str(raw["answer_label"]), frozenset(unsatisfied)),
        template_id=str(raw["template_id"]),
        seed=int(raw["seed"]),
    )


def manifest_path(split_path) -> str:
    return f"{split_path}{MANIFEST_SUFFIX}"


def write_split(examples: Iterable[Example], path, manifest: SplitManifest) -> SplitManifest:
    """Write examples to ``path`` and a manifest sidecar next to it.

    Records are written line by line, so an interrupted run leaves at
    worst one partial trailing line. The returned manifest carries the
    actual record count.

    Args:
        examples: examples to serialize, streamed.
        path: destination JSONL file.
        manifest: manifest fields; ``count`` is replaced by the number
            of records actually written.
    """
    count = 0
    with open(path, "w", encoding="utf-8") as handle:
        for example in examples:
            handle.write(json.dumps(example_to_dict(example), ensure_ascii=False) + "\n")
            count += 1
    final = replace(manifest, count=count)
    with open(manifest_path(path), "w", encoding="utf-8") as handle:
        json.dump(final.to_dict(), handle)
        handle.write("\n")
    return final


def read_manifest(split_path) -> SplitManifest | None:
    """Load the manifest sidecar for a split, ``None`` when absent."""
    try:
        with open(manifest_path(split_path), encoding="utf-8") as handle:
            return SplitManifest.from_dict(json.load(handle))
    except FileNotFoundError:
        return None


def read_split(path) -> Iterator[Example]:
    """Stream valid examples from a split file.

    Invalid records are skipped with a line-numbered warning; a final
    line without a newline is treated as a partial write and skipped.
    When a manifest sidecar exists, a count mismatch is logged as a
    warning after the file is exhausted.
    """
    valid = 0
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.endswith("\n"):
                logger.warning("%s:%d: partial trailing line, skipping", path, line_no)
                break
            if not line.strip():
                continue
            try:
                example = example_from_dict(json.loads(line))
            except (json.JSONDecodeError, ValueError) as exc:
                logger.warning("%s:%d: invalid record (%s), skipping", path, line_no, exc)
                continue
            valid += 1
            yield example
    manifest = read_manifest(path)
    if manifest is not None and manifest.count != valid:
        logger.warning(
            "%s: manifest declares %d records, read %d valid", path, manifest.count, valid
        )
