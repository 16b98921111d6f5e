import json

import pytest
from hypothesis import given, strategies as st

from condlogic import (
    EduSequence,
    HtmlElement,
    InvariantError,
    KNOWN_TAGS,
    LogicalType,
    accept_edu_input,
    build_dom_tree,
    load_html_elements,
    parse_html_context,
)


def elems(*pairs):
    return [HtmlElement(tag, text, i) for i, (tag, text) in enumerate(pairs)]


def shape(node):
    """Tree as nested (text, children) tuples, for compact assertions."""
    label = node.element.text if node.element else "<root>"
    return (label, tuple(shape(c) for c in node.children))


def test_load_elements(tmp_path, caplog):
    path = tmp_path / "doc.jsonl"
    lines = [
        json.dumps({"tag": "h1", "text": "Benefits"}),
        json.dumps({"tag": "blockquote", "text": "Quoted."}),
        json.dumps({"tag": "p", "text": "   "}),
        "nonsense",
        json.dumps({"text": "No tag."}),
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with caplog.at_level("WARNING"):
        elements = load_html_elements(path)
    assert [e.tag for e in elements] == ["h1", "other", "other"]
    assert [e.index for e in elements] == [0, 1, 2]
    assert sum("skipping" in r.message for r in caplog.records) == 2


def test_headings_nest_by_level():
    root = build_dom_tree(
        elems(("h1", "A"), ("h2", "B"), ("h3", "C"), ("h2", "D"), ("h1", "E"))
    )
    assert shape(root) == (
        "<root>",
        (
            ("A", (("B", (("C", ()),)), ("D", ()))),
            ("E", ()),
        ),
    )


def test_paragraph_closes_on_next_paragraph():
    root = build_dom_tree(elems(("h1", "A"), ("p", "x"), ("p", "y")))
    assert shape(root) == ("<root>", (("A", (("x", ()), ("y", ()))),))


def test_list_items_attach_to_lead_in():
    root = build_dom_tree(
        elems(("p", "You qualify if:"), ("li", "one"), ("li", "two"), ("p", "after"))
    )
    assert shape(root) == (
        "<root>",
        (("You qualify if:", (("one", ()), ("two", ()))), ("after", ())),
    )


def test_heading_closes_open_list():
    root = build_dom_tree(elems(("p", "intro"), ("li", "a"), ("h2", "B"), ("p", "x")))
    assert shape(root) == ("<root>", (("intro", (("a", ()),)), ("B", (("x", ()),))))


def test_parse_empty_raises():
    with pytest.raises(InvariantError):
        parse_html_context([])


def test_flat_document_singleton_groups():
    groups = parse_html_context(elems(("p", "First."), ("p", "Second.")))
    assert len(groups) == 2
    for gi, group in enumerate(groups):
        assert group.result_id == f"R{gi}"
        assert group.result_text == ""
        assert group.logical_type is LogicalType.UNKNOWN
        assert len(group.conditions) == 1
    assert [g.conditions[0].id for g in groups] == ["C0", "C1"]


def test_nested_document_groups():
    groups = parse_html_context(
        elems(
            ("h1", "Eligibility"),
            ("h2", "Students"),
            ("p", "Enrolled full time."),
            ("li", "a"),
            ("li", "b"),
            ("h2", "Veterans"),
            ("p", "Served 2 years."),
        )
    )
    # only nodes with direct leaf children yield groups
    by_result = {g.result_text: g for g in groups}
    assert set(by_result) == {
        "Enrolled full time. | Students | Eligibility",
        "Veterans | Eligibility",
    }
    li_group = by_result["Enrolled full time. | Students | Eligibility"]
    assert [c.text for c in li_group.conditions] == ["a", "b"]
    # ids count leaves in document order across the whole document
    ids = [c.id for g in groups for c in g.conditions]
    assert sorted(ids, key=lambda s: int(s[1:])) == [f"C{i}" for i in range(len(ids))]


def test_sibling_leaves_around_subtree_split():
    groups = parse_html_context(
        elems(("h1", "T"), ("p", "before"), ("h2", "S"), ("p", "inner"), ("h2", "S2"))
    )
    texts = [[c.text for c in g.conditions] for g in groups]
    assert ["before"] in texts
    assert ["inner"] in texts
    assert ["S2"] in texts or any("S2" in t for t in texts)


def test_groups_in_document_order():
    groups = parse_html_context(
        elems(("p", "alpha"), ("h1", "H"), ("p", "beta"), ("p", "gamma"))
    )
    first_texts = [g.conditions[0].text for g in groups]
    assert first_texts == ["alpha", "beta"]


_tags = st.sampled_from(KNOWN_TAGS)


@given(st.lists(_tags, min_size=1, max_size=30))
def test_every_element_lands_exactly_once(tags):
    elements = [HtmlElement(tag, f"t{i}", i) for i, tag in enumerate(tags)]
    root = build_dom_tree(elements)

    seen = []

    def walk(node):
        if node.element is not None:
            seen.append(node.element.index)
        for child in node.children:
            walk(child)

    walk(root)
    assert sorted(seen) == list(range(len(elements)))


@given(st.lists(_tags, min_size=1, max_size=30))
def test_groups_partition_leaves(tags):
    elements = [HtmlElement(tag, f"t{i}", i) for i, tag in enumerate(tags)]
    groups = parse_html_context(elements)
    ids = [c.id for g in groups for c in g.conditions]
    assert len(ids) == len(set(ids))
    assert all(g.logical_type is LogicalType.UNKNOWN for g in groups)
    assert [g.result_id for g in groups] == [f"R{i}" for i in range(len(groups))]


# --- discourse-unit input ---------------------------------------------------

def test_edu_sequences_become_one_group():
    groups = accept_edu_input(
        [
            EduSequence(("You may apply", "if you are enrolled"), "s0"),
            EduSequence(("unless suspended",), "s1"),
        ]
    )
    assert len(groups) == 1
    group = groups[0]
    assert group.logical_type is LogicalType.UNKNOWN
    assert group.result_text == ""
    assert [c.id for c in group.conditions] == ["C0", "C1", "C2"]
    assert [c.text for c in group.conditions] == [
        "You may apply",
        "if you are enrolled",
        "unless suspended",
    ]


def test_edu_reconstruction_check():
    EduSequence(("You may apply ", "if enrolled."), "s0", "You may apply if enrolled.")
    with pytest.raises(InvariantError):
        EduSequence(("You may apply",), "s0", "You may apply if enrolled.")


def test_edu_empty_spans_rejected():
    with pytest.raises(InvariantError):
        EduSequence((), "s0")
    with pytest.raises(InvariantError):
        EduSequence(("ok", "  "), "s0")


def test_edu_no_sequences_rejected():
    with pytest.raises(InvariantError):
        accept_edu_input([])
