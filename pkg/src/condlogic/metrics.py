"""Answer metrics that couple text quality with condition correctness.

Extractive answers are scored SQuAD-style (normalized exact match and
token F1, max over references). Predicted condition-id sets are scored
with set precision/recall/F1 using the empty-set convention: both sets
empty is a perfect 1.0, exactly one empty is 0.0. The conditional
variants multiply the answer score by the condition F1, so an answer
only counts fully when its conditions are right too. Classification
labels get micro accuracy and macro (mean per-class recall); generated
follow-up questions get sentence BLEU without smoothing.
"""

from __future__ import annotations

import json
import logging
import math
import re
import string
from collections import Counter, defaultdict
from dataclasses import dataclass

from .errors import InvariantError
from .logic import TaskProfile

logger = logging.getLogger(__name__)


def normalize_text(text: str) -> list[str]:
    """Lowercase, strip punctuation, drop articles, split on whitespace."""

    def remove_articles(s):
        return re.sub(r"\b(a|an|the)\b", " ", s)

    def remove_punc(s):
        return "".join(ch for ch in s if ch not in string.punctuation)

    return remove_articles(remove_punc(text.lower())).split()


def _token_f1(pred_tokens: list[str], ref_tokens: list[str]) -> float:
    if not pred_tokens and not ref_tokens:
        return 1.0
    if not pred_tokens or not ref_tokens:
        return 0.0
    common = Counter(pred_tokens) & Counter(ref_tokens)
    overlap = sum(common.values())
    if overlap == 0:
        return 0.0
    precision = overlap / len(pred_tokens)
    recall = overlap / len(ref_tokens)
    return 2 * precision * recall / (precision + recall)


def answer_em_f1(pred: str, refs: list[str]) -> tuple[int, float]:
    """Exact match and token F1 against references, best reference wins."""
    if not refs:
        raise InvariantError("answer scoring needs at least one reference")
    pred_tokens = normalize_text(pred)
    em = 0
    f1 = 0.0
    for ref in refs:
        ref_tokens = normalize_text(ref)
        em = max(em, int(pred_tokens == ref_tokens))
        f1 = max(f1, _token_f1(pred_tokens, ref_tokens))
    return em, f1


def condition_prf(pred_ids, gold_ids) -> tuple[float, float, float]:
    """Set precision/recall/F1 over condition ids.

    Empty/empty is (1, 1, 1); exactly one side empty is (0, 0, 0).
    """
    pred_set, gold_set = set(pred_ids), set(gold_ids)
    if not pred_set and not gold_set:
        return 1.0, 1.0, 1.0
    if not pred_set or not gold_set:
        return 0.0, 0.0, 0.0
    overlap = len(pred_set & gold_set)
    precision = overlap / len(pred_set)
    recall = overlap / len(gold_set)
    if precision + recall == 0:
        return precision, recall, 0.0
    return precision, recall, 2 * precision * recall / (precision + recall)


@dataclass(frozen=True)
class Prediction:
    example_id: str
    answer_text: str = ""
    unsatisfied: frozenset[str] = frozenset()
    label: str | None = None
    question: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "unsatisfied", frozenset(self.unsatisfied))


@dataclass(frozen=True)
class GoldRecord:
    """Reference record; needs answer references or a gold label."""

    example_id: str
    answers: tuple[str, ...] = ()
    unsatisfied: frozenset[str] = frozenset()
    label: str | None = None
    question: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "answers", tuple(self.answers))
        object.__setattr__(self, "unsatisfied", frozenset(self.unsatisfied))
        if not self.answers and self.label is None:
            raise InvariantError(
                f"gold record {self.example_id!r} has neither answers nor a label"
            )

    @property
    def references(self) -> tuple[str, ...]:
        return self.answers if self.answers else (self.label,)


def conditional_em_f1(pred: Prediction, gold: GoldRecord) -> tuple[float, float]:
    """EM and F1 scaled by the condition F1 of the same example."""
    em, f1 = answer_em_f1(pred.answer_text, list(gold.references))
    _, _, cond_f1 = condition_prf(pred.unsatisfied, gold.unsatisfied)
    return em * cond_f1, f1 * cond_f1


def label_accuracy(pred_labels: list[str], gold_labels: list[str]) -> tuple[float, float]:
    """Micro accuracy and macro accuracy (mean per-class recall).

    Macro averages over the classes that occur in the gold labels.
    """
    if len(pred_labels) != len(gold_labels):
        raise InvariantError("prediction and gold label lists differ in length")
    if not gold_labels:
        raise InvariantError("cannot score an empty label list")
    micro = sum(p == g for p, g in zip(pred_labels, gold_labels)) / len(gold_labels)
    per_class: dict[str, list[int]] = defaultdict(list)
    for pred, gold in zip(pred_labels, gold_labels):
        per_class[gold].append(int(pred == gold))
    macro = sum(sum(v) / len(v) for v in per_class.values()) / len(per_class)
    return micro, macro


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu(pred: str, ref: str, max_n: int = 4) -> float:
    """Sentence BLEU with uniform weights and no smoothing.

    Whitespace tokenization; empty candidates score 0, as does any
    n-gram order with no matches (including candidates shorter than
    ``max_n`` tokens). Brevity penalty ``exp(1 - r/c)`` applies when the
    candidate is shorter than the reference.
    """
    if max_n < 1:
        raise InvariantError("max_n must be at least 1")
    candidate = pred.split()
    reference = ref.split()
    if not candidate:
        return 0.0
    log_precisions = []
    for n in range(1, max_n + 1):
        cand_counts = _ngrams(candidate, n)
        total = sum(cand_counts.values())
        if total == 0:
            return 0.0
        ref_counts = _ngrams(reference, n)
        clipped = sum(min(count, ref_counts[gram]) for gram, count in cand_counts.items())
        if clipped == 0:
            return 0.0
        log_precisions.append(math.log(clipped / total))
    if len(candidate) >= len(reference):
        brevity = 1.0
    else:
        brevity = math.exp(1.0 - len(reference) / len(candidate))
    return brevity * math.exp(math.fsum(log_precisions) / max_n)


# --- file-level evaluation -------------------------------------------------


@dataclass(frozen=True)
class EvalReport:
    """Aggregated scores; fields that the inputs cannot support are None."""

    em: float
    f1: float
    conditional_em: float
    conditional_f1: float
    condition_p: float
    condition_r: float
    condition_f1: float
    micro_acc: float | None
    macro_acc: float | None
    bleu1: float | None
    bleu4: float | None
    n_examples: int
    n_missing_predictions: int = 0
    n_unmatched_predictions: int = 0


def _read_jsonl(path):
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                yield line_no, json.loads(line)
            except json.JSONDecodeError as exc:
                raise InvariantError(f"{path}:{line_no}: invalid JSON ({exc})") from exc


def _str_list(value) -> list[str]:
    if value is None:
        return []
    if not isinstance(value, list):
        raise InvariantError(f"expected a list, got {type(value).__name__}")
    return [str(v) for v in value]


def read_gold_file(path) -> list[GoldRecord]:
    """Read gold records, accepting generated-example files as-is.

    ``answer_label`` doubles as the single reference when no ``answers``
    list is present. Records without an ``id`` get their position.
    """
    records = []
    seen = set()
    for line_no, raw in _read_jsonl(path):
        example_id = str(raw.get("id", len(records)))
        if example_id in seen:
            raise InvariantError(f"{path}:{line_no}: duplicate example id {example_id!r}")
        seen.add(example_id)
        records.append(
            GoldRecord(
                example_id=example_id,
                answers=tuple(_str_list(raw.get("answers"))),
                unsatisfied=frozenset(_str_list(raw.get("unsatisfied", raw.get("conditions")))),
                label=raw.get("label", raw.get("answer_label")),
                question=raw.get("question"),
            )
        )
    return records


def read_prediction_file(path) -> dict[str, Prediction]:
    """Read predictions keyed by example id.

    Tolerates gold-schema files, so a dataset can be evaluated against
    itself: ``answer``/``answer_label``/first of ``answers`` give the
    answer text, ``conditions``/``unsatisfied`` the id set.
    """
    predictions: dict[str, Prediction] = {}
    for line_no, raw in _read_jsonl(path):
        example_id = str(raw.get("id", len(predictions)))
        if example_id in predictions:
            raise InvariantError(f"{path}:{line_no}: duplicate example id {example_id!r}")
        answer = raw.get("answer", raw.get("answer_label"))
        if answer is None:
            answers = _str_list(raw.get("answers"))
            answer = answers[0] if answers else ""
        predictions[example_id] = Prediction(
            example_id=example_id,
            answer_text=str(answer),
            unsatisfied=frozenset(_str_list(raw.get("conditions", raw.get("unsatisfied")))),
            label=raw.get("label", raw.get("answer_label")),
            question=raw.get("question"),
        )
    return predictions


def score_example(pred: Prediction | None, gold: GoldRecord) -> dict:
    """Per-example scores; a missing prediction scores as empty."""
    if pred is None:
        pred = Prediction(example_id=gold.example_id)
    em, f1 = answer_em_f1(pred.answer_text, list(gold.references))
    cond_p, cond_r, cond_f1 = condition_prf(pred.unsatisfied, gold.unsatisfied)
    row = {
        "id": gold.example_id,
        "em": float(em),
        "f1": f1,
        "conditional_em": em * cond_f1,
        "conditional_f1": f1 * cond_f1,
        "condition_p": cond_p,
        "condition_r": cond_r,
        "condition_f1": cond_f1,
        "label_correct": None,
        "bleu1": None,
        "bleu4": None,
    }
    if gold.label is not None:
        pred_label = pred.label if pred.label is not None else pred.answer_text
        row["label_correct"] = int(pred_label == gold.label)
        row["gold_label"] = gold.label
    if gold.question is not None:
        pred_question = pred.question or ""
        row["bleu1"] = bleu(pred_question, gold.question, 1)
        row["bleu4"] = bleu(pred_question, gold.question, 4)
    return row


def _mean(values) -> float | None:
    values = list(values)
    if not values:
        return None
    return sum(values) / len(values)


def evaluate_files(pred_path, gold_path, profile: TaskProfile, per_example_path=None) -> EvalReport:
    """Score a prediction file against a gold file.

    Gold records without a prediction score zero (empty prediction);
    predictions without a gold record are counted and ignored. Writes
    per-example rows to ``per_example_path`` when given.
    """
    golds = read_gold_file(gold_path)
    if not golds:
        raise InvariantError(f"gold file {gold_path!r} holds no records")
    predictions = read_prediction_file(pred_path)

    gold_ids = {g.example_id for g in golds}
    unmatched = [pid for pid in predictions if pid not in gold_ids]
    if unmatched:
        logger.warning("%d prediction(s) match no gold example", len(unmatched))
    missing = sum(1 for g in golds if g.example_id not in predictions)

    rows = [score_example(predictions.get(g.example_id), g) for g in golds]

    labelled = [r for r in rows if r["label_correct"] is not None]
    micro = macro = None
    if labelled:
        micro = sum(r["label_correct"] for r in labelled) / len(labelled)
        per_class: dict[str, list[int]] = defaultdict(list)
        for r in labelled:
            per_class[r["gold_label"]].append(r["label_correct"])
        macro = sum(sum(v) / len(v) for v in per_class.values()) / len(per_class)

    report = EvalReport(
        em=_mean(r["em"] for r in rows),
        f1=_mean(r["f1"] for r in rows),
        conditional_em=_mean(r["conditional_em"] for r in rows),
        conditional_f1=_mean(r["conditional_f1"] for r in rows),
        condition_p=_mean(r["condition_p"] for r in rows),
        condition_r=_mean(r["condition_r"] for r in rows),
        condition_f1=_mean(r["condition_f1"] for r in rows),
        micro_acc=micro,
        macro_acc=macro,
        bleu1=_mean(r["bleu1"] for r in rows if r["bleu1"] is not None),
        bleu4=_mean(r["bleu4"] for r in rows if r["bleu4"] is not None),
        n_examples=len(golds),
        n_missing_predictions=missing,
        n_unmatched_predictions=len(unmatched),
    )
    if per_example_path is not None:
        with open(per_example_path, "w", encoding="utf-8") as handle:
            for row in rows:
                row = {k: v for k, v in row.items() if k != "gold_label"}
                handle.write(json.dumps(row) + "\n")
    return report


_PROFILE_ROWS = {
    TaskProfile.CONDNLI: ("answer", "conditional", "conditions", "labels"),
    TaskProfile.YESNO: ("answer", "conditional", "conditions"),
    TaskProfile.SHARC: ("labels", "bleu", "conditions"),
}


def format_report(report: EvalReport, profile: TaskProfile) -> str:
    """Render the rows that make sense for a task profile."""

    def fmt(*values):
        return " / ".join("-" if v is None else f"{v:.4f}" for v in values)

    lines = [f"{'n examples':<22}{report.n_examples}"]
    if report.n_missing_predictions:
        lines.append(f"{'missing predictions':<22}{report.n_missing_predictions}")
    if report.n_unmatched_predictions:
        lines.append(f"{'unmatched predictions':<22}{report.n_unmatched_predictions}")
    body = {
        "answer": f"{'answer EM / F1':<22}{fmt(report.em, report.f1)}",
        "conditional": f"{'w/ conds EM / F1':<22}{fmt(report.conditional_em, report.conditional_f1)}",
        "conditions": (
            f"{'conditions P / R / F1':<22}"
            f"{fmt(report.condition_p, report.condition_r, report.condition_f1)}"
        ),
        "labels": f"{'accuracy micro/macro':<22}{fmt(report.micro_acc, report.macro_acc)}",
        "bleu": f"{'question BLEU1/BLEU4':<22}{fmt(report.bleu1, report.bleu4)}",
    }
    lines.extend(body[key] for key in _PROFILE_ROWS[profile])
    return "\n".join(lines)
