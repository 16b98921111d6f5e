"""Walk through three-valued evaluation of condition groups.

A condition group ties a result statement to conditions under a logical
type (all/any/required/optional). Each condition carries an evidence
state: entailed, contradicted, or not mentioned. Running this script
prints how group status and per-condition labels react as evidence
changes.
"""

import dataclasses

from condlogic import (
    Condition,
    ConditionGroup,
    EvidenceState,
    LogicalType,
    TaskProfile,
    derive_answer,
    enumerate_assignments,
    evaluate_group,
)

E = EvidenceState.ENTAILED
C = EvidenceState.CONTRADICTED
N = EvidenceState.NOT_MENTIONED


def show(title, group):
    status, labels = evaluate_group(group)
    print(f"{title}")
    print(f"  status: {status.value}")
    for condition, label in zip(group.conditions, labels):
        print(f"  {condition.id} [{condition.evidence.value:>13}] -> {label.value}")
    print()


def group_of(logical_type, *states):
    return ConditionGroup(
        result_id="R0",
        result_text="you can apply for the grant",
        logical_type=logical_type,
        conditions=tuple(
            Condition(id=f"C{i}", text=f"C{i}: condition text", evidence=s)
            for i, s in enumerate(states)
        ),
    )


print("=== all: every condition must hold ===\n")
show("all with E, E", group_of(LogicalType.ALL, E, E))
show("all with E, N  (the missing one becomes 'to check')", group_of(LogicalType.ALL, E, N))
show("all with E, C  (one contradiction sinks the group)", group_of(LogicalType.ALL, E, C))

print("=== any: one entailed condition suffices ===\n")
show("any with N, E  (others become 'implied')", group_of(LogicalType.ANY, N, E))
show("any with N, C  (the open one becomes 'to check')", group_of(LogicalType.ANY, N, C))
show("any with C, C", group_of(LogicalType.ANY, C, C))

print("=== the full table for a 2-condition any group ===\n")
table = enumerate_assignments(LogicalType.ANY, 2)
for assignment, (status, labels) in table.items():
    states = ", ".join(s.value for s in assignment)
    print(f"  ({states:>40}) -> {status.value:<13} {[l.value for l in labels]}")
print()

print("=== from group status to an answer ===\n")
group = dataclasses.replace(group_of(LogicalType.ALL, E, N), intrinsic_relation="entailed")
verdict = derive_answer((group,), 0, TaskProfile.CONDNLI)
print("relevant group undetermined, intrinsic relation entailed")
print(f"  -> answer {verdict.label!r}, unsatisfied {sorted(verdict.unsatisfied)}")
verdict = derive_answer((group,), 0, TaskProfile.SHARC)
print("same group under the decision profile")
print(f"  -> answer {verdict.label!r}, unsatisfied {sorted(verdict.unsatisfied)}")
verdict = derive_answer((group,), None, TaskProfile.CONDNLI)
print("no relevant group at all")
print(f"  -> answer {verdict.label!r}, unsatisfied {sorted(verdict.unsatisfied)}")
