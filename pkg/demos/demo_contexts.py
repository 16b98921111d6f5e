"""Parse a document context into condition groups.

Support documents arrive as a flat stream of tagged elements. The
parser reconstructs the heading/list nesting, treats the leaves as
conditions, and joins each leaf's ancestor texts into the result its
group guards. Pre-segmented discourse units skip the tree entirely.
"""

from condlogic import (
    EduSequence,
    HtmlElement,
    accept_edu_input,
    build_dom_tree,
    parse_html_context,
)

rows = [
    ("h1", "Overview"),
    ("p", "This guide explains the support grant."),
    ("h2", "Eligibility"),
    ("p", "You must meet all of the following:"),
    ("li", "you live in the council area"),
    ("li", "you receive a qualifying benefit"),
    ("h2", "How much you get"),
    ("p", "Up to 1200 per household."),
]
elements = [HtmlElement(tag, text, i) for i, (tag, text) in enumerate(rows)]

print("=== reconstructed tree ===\n")


def show(node, depth=0):
    if node.element is not None:
        print(f"{'  ' * depth}[{node.element.tag}] {node.element.text}")
    for child in node.children:
        show(child, depth + (node.element is not None))


show(build_dom_tree(elements))
print()

print("=== condition groups ===\n")
for group in parse_html_context(elements):
    print(f"{group.result_id} ({group.logical_type.value})")
    print(f"  result: {group.result_text or '(document root)'}")
    for condition in group.conditions:
        print(f"  {condition.id}: {condition.text}")
    print()

print("=== pre-segmented discourse units ===\n")
sequences = [
    EduSequence(
        ("You may qualify for a reduction ", "if you live alone ", "or with students."),
        sentence_id="s0",
        sentence="You may qualify for a reduction if you live alone or with students.",
    ),
]
for group in accept_edu_input(sequences):
    for condition in group.conditions:
        print(f"  {condition.id}: {condition.text}")
