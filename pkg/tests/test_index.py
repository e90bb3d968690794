import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load_from_records, resources_from
from helpers import competency, level, process, resource, topic
from topictrap.errors import DanglingAnnotation, EmptyQuery, ParseError, UnknownTerm
from topictrap.index import (
    MatchKind,
    Resource,
    build_index,
    count_for_term,
    expand_term,
    load_resources,
    save_resources,
    search,
    word_search,
)
from topictrap.lsa import tokenize
from topictrap.ontology import descendants, nodes_of_kind


GEO_RECORDS = [
    topic("geometry"),
    topic("conic", parents=["geometry"]),
    topic("ellipse", parents=["conic"]),
    topic("circle", parents=["conic"]),
    process("construct"),
    competency("construct_ellipse", "construct", ["ellipse"]),
    level("l1", region="de", age_min=10, age_max=12),
    level("l2", region="de", age_min=13, age_max=15),
]

GEO_RESOURCES = [
    resource("r1", ["geometry"], titles={"en": "Geometry overview"}),
    resource("r2", ["conic"], titles={"en": "Conic sections intro"}),
    resource("r3", ["ellipse"], titles={"en": "Ellipse drawing"}),
    resource("r4", ["circle", "l1"], titles={"en": "Circle with compass"}),
    resource("r5", ["construct"], titles={"en": "Constructions workbook"}),
    resource("r6", ["construct_ellipse"], titles={"en": "Guided ellipse construction"}),
    resource("r7", ["l2"], titles={"en": "Advanced course"}),
]


@pytest.fixture(scope="module")
def geo():
    return load_from_records(GEO_RECORDS)


@pytest.fixture(scope="module")
def geo_ix(geo):
    return build_index(resources_from(GEO_RESOURCES), geo)


# --- oracles ---------------------------------------------------------------

def oracle_term_hits(resources, o, term):
    """Brute force: apply the expansion table to every resource."""
    entries = expand_term(o, term)
    hits = []
    for r in resources:
        weights = [w for (u, w, _k) in entries if u in r.annotations]
        if weights:
            hits.append((r.id, max(weights)))
    hits.sort(key=lambda h: (-h[1], h[0]))
    return hits


def oracle_word_scores(resources, words, lang):
    texts = {r.id: tokenize(r.text(lang), lang) for r in resources}
    texts = {rid: t for rid, t in texts.items() if t}
    n = len(texts)
    scores = {}
    for token in set(tokenize(words, lang)):
        df = sum(1 for t in texts.values() if token in t)
        if df == 0:
            continue
        for rid, t in texts.items():
            if token in t:
                scores[rid] = scores.get(rid, 0.0) + t.count(token) * math.log(n / df)
    return {rid: s for rid, s in scores.items() if s > 0}


# --- loading ---------------------------------------------------------------

def test_load_resources_round_trip(tmp_path):
    rs = resources_from(GEO_RESOURCES)
    path = str(tmp_path / "resources.jsonl")
    save_resources(rs, path)
    assert load_resources(path) == sorted(rs, key=lambda r: r.id)


def test_load_resources_strict(jsonl):
    with pytest.raises(ParseError):
        load_resources(jsonl([{"id": "r1", "titles": {}, "body": {}}], "r.jsonl"))
    with pytest.raises(ParseError):
        load_resources(jsonl([resource("r1", []), resource("r1", [])], "dup.jsonl"))
    with pytest.raises(ParseError):
        load_resources(jsonl([{**resource("r1", []), "extra": 1}], "x.jsonl"))


def test_load_resources_bad_json_line(tmp_path):
    path = tmp_path / "r.jsonl"
    path.write_text('{"id": "r1", "titles": {"en": "t"}, "body": {}, "annotations": []}\nnope\n')
    with pytest.raises(ParseError) as exc:
        load_resources(str(path))
    assert exc.value.line == 2


def test_load_resources_bad_maps(jsonl):
    with pytest.raises(ParseError):
        load_resources(jsonl([{**resource("r1", []), "titles": {"en": 3}}], "t.jsonl"))
    with pytest.raises(ParseError):
        load_resources(jsonl([{**resource("r1", []), "annotations": [""]}], "a.jsonl"))


# --- building --------------------------------------------------------------

def test_empty_index_counts_zero(geo):
    ix = build_index([], geo)
    assert set(ix.counts) == set(geo.nodes)
    assert all(c == 0 for c in ix.counts.values())


def test_counts_parent_child_fixture():
    o = load_from_records([topic("A"), topic("B", parents=["A"])])
    ix = build_index(resources_from([resource("r1", ["A"]), resource("r2", ["B"])]), o)
    assert ix.counts["A"] == 2
    assert ix.counts["B"] == 1


def test_dangling_annotation(geo):
    with pytest.raises(DanglingAnnotation) as exc:
        build_index(resources_from([resource("r1", ["phantom"])]), geo)
    assert exc.value.uri == "phantom"
    assert exc.value.resource_id == "r1"


def test_build_duplicate_id_rejected(geo):
    r = resources_from([resource("r1", ["geometry"])])[0]
    with pytest.raises(ParseError):
        build_index([r, r], geo)


def test_geo_counts_by_hand(geo_ix):
    assert geo_ix.counts == {
        "geometry": 4, "conic": 3, "ellipse": 1, "circle": 1,
        "construct": 1, "construct_ellipse": 3, "l1": 1, "l2": 1,
    }


# --- expansion -------------------------------------------------------------

def test_expand_leaf_topic(geo):
    assert expand_term(geo, "ellipse") == [("ellipse", 1.0, MatchKind.DIRECT_TERM)]


def test_expand_topic_with_descendants(geo):
    assert expand_term(geo, "conic") == [
        ("conic", 1.0, MatchKind.DIRECT_TERM),
        ("circle", 0.5, MatchKind.DESCENDANT_TOPIC),
        ("ellipse", 0.5, MatchKind.DESCENDANT_TOPIC),
    ]


def test_expand_intercept_competency():
    ingredients = ["intercept_theorem", "rational_number", "measure", "proportional"]
    o = load_from_records([
        *[topic(t) for t in ingredients],
        process("use_in_calculating_magnitudes"),
        competency("use_intercepttheorem_to_obtain_magnitudes",
                   "use_in_calculating_magnitudes", ingredients),
    ])
    entries = expand_term(o, "use_intercepttheorem_to_obtain_magnitudes")
    assert len(entries) == 6
    assert entries[0] == ("use_intercepttheorem_to_obtain_magnitudes", 1.0, MatchKind.DIRECT_TERM)
    rest = entries[1:]
    assert all(w == 0.6 and k == MatchKind.INGREDIENT_MATCH for _u, w, k in rest)
    assert [u for u, _w, _k in rest] == ["use_in_calculating_magnitudes", *ingredients]


def test_expand_level_is_exact(geo):
    assert expand_term(geo, "l1") == [("l1", 1.0, MatchKind.LEVEL_EXACT)]


def test_expand_process_is_self(geo):
    assert expand_term(geo, "construct") == [("construct", 1.0, MatchKind.DIRECT_TERM)]


def test_expand_unknown_term(geo):
    with pytest.raises(UnknownTerm):
        expand_term(geo, "phantom")


def test_expand_custom_weights(geo):
    entries = expand_term(geo, "conic", descendant_weight=0.4)
    assert {w for _u, w, _k in entries} == {1.0, 0.4}


# --- term search -----------------------------------------------------------

def test_search_direct_before_descendant():
    o = load_from_records([topic("A"), topic("B", parents=["A"])])
    ix = build_index(resources_from([resource("r1", ["A"]), resource("r2", ["B"])]), o)
    results = search(ix, o, term="A")
    assert [h.resource_id for h in results] == ["r1", "r2"]
    assert results.hits[0].score == 1.0 and results.hits[1].score == 0.5
    assert results.hits[0].match_kinds == frozenset({MatchKind.DIRECT_TERM})
    assert results.hits[1].match_kinds == frozenset({MatchKind.DESCENDANT_TOPIC})


def test_search_child_term_stays_narrow():
    o = load_from_records([topic("A"), topic("B", parents=["A"])])
    ix = build_index(resources_from([resource("r1", ["A"]), resource("r2", ["B"])]), o)
    assert [h.resource_id for h in search(ix, o, term="B")] == ["r2"]


def test_search_level_exact(geo, geo_ix):
    hits = [h.resource_id for h in search(geo_ix, geo, term="l1")]
    assert hits == ["r4"]
    assert search(geo_ix, geo, term="l1").hits[0].match_kinds == frozenset({MatchKind.LEVEL_EXACT})


def test_search_competency_pulls_ingredients(geo, geo_ix):
    results = search(geo_ix, geo, term="construct_ellipse")
    assert [h.resource_id for h in results] == ["r6", "r3", "r5"]
    assert results.hits[0].score == 1.0
    assert {h.score for h in results.hits[1:]} == {0.6}


def test_search_matches_oracle_on_every_term(geo, geo_ix):
    rs = resources_from(GEO_RESOURCES)
    for uri in geo.nodes:
        expected = oracle_term_hits(rs, geo, uri)
        got = search(geo_ix, geo, term=uri)
        assert [(h.resource_id, h.score) for h in got] == expected, uri
        assert got.total == len(expected)
        assert count_for_term(geo_ix, geo, uri) == len(expected)


def test_topic_monotonicity(geo, geo_ix):
    for parent in ("geometry", "conic"):
        parent_ids = {h.resource_id for h in search(geo_ix, geo, term=parent)}
        for child in descendants(geo, parent):
            child_ids = {h.resource_id for h in search(geo_ix, geo, term=child)}
            assert child_ids <= parent_ids
            assert geo_ix.counts[parent] >= geo_ix.counts[child]


def test_search_pagination(geo, geo_ix):
    full = search(geo_ix, geo, term="geometry")
    page1 = search(geo_ix, geo, term="geometry", offset=0, limit=2)
    page2 = search(geo_ix, geo, term="geometry", offset=2, limit=2)
    assert page1.total == page2.total == full.total == 4
    assert [h.resource_id for h in page1] + [h.resource_id for h in page2] == \
        [h.resource_id for h in full]
    assert search(geo_ix, geo, term="geometry", offset=99, limit=5).hits == ()


def test_search_requires_some_query(geo, geo_ix):
    with pytest.raises(EmptyQuery):
        search(geo_ix, geo)
    with pytest.raises(EmptyQuery):
        search(geo_ix, geo, words="   ")


def test_search_unknown_term(geo, geo_ix):
    with pytest.raises(UnknownTerm):
        search(geo_ix, geo, term="phantom")


def test_count_unknown_term(geo, geo_ix):
    with pytest.raises(UnknownTerm):
        count_for_term(geo_ix, geo, "phantom")


def test_count_increments_with_descendant_resource(geo):
    before = build_index(resources_from(GEO_RESOURCES), geo)
    extra = resources_from([*GEO_RESOURCES, resource("r8", ["ellipse"])])
    after = build_index(extra, geo)
    assert after.counts["geometry"] == before.counts["geometry"] + 1
    assert after.counts["conic"] == before.counts["conic"] + 1
    assert after.counts["circle"] == before.counts["circle"]


# --- word search -----------------------------------------------------------

ANGLE_DOCS = [
    resource("d1", [], titles={"en": "right angle"}),
    resource("d2", [], titles={"en": "angle"}),
    resource("d3", [], titles={"en": "circle"}),
]


@pytest.fixture(scope="module")
def angle_ix():
    o = load_from_records([topic("anything")])
    return build_index(resources_from(ANGLE_DOCS), o)


def test_word_search_disjunction_order(angle_ix):
    hits = word_search(angle_ix, "right angle", "en")
    assert [h.resource_id for h in hits] == ["d1", "d2"]
    oracle = oracle_word_scores(resources_from(ANGLE_DOCS), "right angle", "en")
    for h in hits:
        assert h.score == pytest.approx(oracle[h.resource_id], abs=1e-12)
        assert h.match_kinds == frozenset({MatchKind.WORD_MATCH})
        assert h.matched_terms == ()


def test_word_search_token_absent_everywhere(angle_ix):
    assert word_search(angle_ix, "pyramid", "en") == []


def test_word_search_duplicate_tokens_collapse(angle_ix):
    assert word_search(angle_ix, "angle angle", "en") == word_search(angle_ix, "angle", "en")


def test_word_search_empty_query(angle_ix):
    with pytest.raises(EmptyQuery):
        word_search(angle_ix, "", "en")
    with pytest.raises(EmptyQuery):
        word_search(angle_ix, "the a", "en")


def test_word_search_language_scoped():
    o = load_from_records([topic("anything")])
    ix = build_index(resources_from([
        resource("d1", [], titles={"fr": "cercle circonscrit"}),
        resource("d2", [], titles={"en": "circumscribed circle"}),
        resource("d3", [], titles={"fr": "triangle rectangle"}),
    ]), o)
    assert [h.resource_id for h in word_search(ix, "cercle", "fr")] == ["d1"]
    assert word_search(ix, "cercle", "en") == []


def test_word_search_single_doc_language_scores_zero():
    # a token in every document of a language carries no idf weight, so a
    # one-document language is only reachable by term search
    o = load_from_records([topic("anything")])
    ix = build_index(resources_from([resource("d1", [], titles={"fr": "cercle"})]), o)
    assert word_search(ix, "cercle", "fr") == []


def test_word_search_limit(angle_ix):
    assert len(word_search(angle_ix, "angle right", "en", limit=1)) == 1


# --- combined search -------------------------------------------------------

def test_combined_word_blend_breaks_ties_in_class(geo, geo_ix):
    plain = [h.resource_id for h in search(geo_ix, geo, term="conic")]
    assert plain == ["r2", "r3", "r4"]
    boosted = search(geo_ix, geo, term="conic", words="compass", lang="en")
    assert [h.resource_id for h in boosted] == ["r2", "r4", "r3"]
    hit4 = next(h for h in boosted if h.resource_id == "r4")
    assert hit4.score == pytest.approx(0.5 + 0.25, abs=1e-12)
    assert hit4.match_kinds == frozenset({MatchKind.DESCENDANT_TOPIC, MatchKind.WORD_MATCH})


def test_combined_word_only_hits_trail(geo, geo_ix):
    results = search(geo_ix, geo, term="ellipse", words="course", lang="en")
    assert [h.resource_id for h in results] == ["r3", "r7"]
    trailing = results.hits[1]
    assert trailing.score == pytest.approx(0.25, abs=1e-12)
    assert trailing.match_kinds == frozenset({MatchKind.WORD_MATCH})
    assert trailing.matched_terms == ()


def test_combined_scores_follow_formula(geo, geo_ix):
    rs = resources_from(GEO_RESOURCES)
    words = "ellipse compass"
    wscores = oracle_word_scores(rs, words, "en")
    wmax = max(wscores.values())
    term_part = dict(oracle_term_hits(rs, geo, "conic"))
    results = search(geo_ix, geo, term="conic", words=words, lang="en")
    for h in results:
        expected = term_part.get(h.resource_id, 0.0) + 0.25 * wscores.get(h.resource_id, 0.0) / wmax
        assert h.score == pytest.approx(expected, abs=1e-12)


def test_words_only_search_orders_like_word_search(geo, geo_ix):
    via_search = [h.resource_id for h in search(geo_ix, geo, words="ellipse compass", lang="en")]
    via_word = [h.resource_id for h in word_search(geo_ix, "ellipse compass", "en")]
    assert via_search == via_word


def test_words_only_stopwords_raise(geo, geo_ix):
    with pytest.raises(EmptyQuery):
        search(geo_ix, geo, words="the of", lang="en")


def test_term_with_stopword_words_degrades_to_term_only(geo, geo_ix):
    a = search(geo_ix, geo, term="conic", words="the of", lang="en")
    b = search(geo_ix, geo, term="conic")
    assert a == b


# --- property: engine equals oracle ----------------------------------------

@st.composite
def indexed_fixtures(draw):
    n_topics = draw(st.integers(min_value=2, max_value=6))
    names = [f"t{i}" for i in range(n_topics)]
    records = []
    for i, name in enumerate(names):
        parents = draw(st.lists(st.sampled_from(names[:i]), max_size=2, unique=True)) if i else []
        records.append(topic(name, parents=parents))
    n_res = draw(st.integers(min_value=0, max_value=8))
    resources_ = [
        resource(f"r{j}", draw(st.lists(st.sampled_from(names), min_size=1, max_size=3, unique=True)))
        for j in range(n_res)
    ]
    return records, resources_


@settings(max_examples=60, deadline=None)
@given(indexed_fixtures())
def test_search_equals_oracle_property(fixture):
    records, res_records = fixture
    o = load_from_records(records)
    rs = resources_from(res_records)
    ix = build_index(rs, o)
    for uri in o.nodes:
        expected = oracle_term_hits(rs, o, uri)
        got = search(ix, o, term=uri)
        assert [(h.resource_id, h.score) for h in got] == expected
        assert ix.counts[uri] == len(expected)
    for parent in nodes_of_kind(o, list(o.nodes.values())[0].kind):
        for child in descendants(o, parent):
            assert ix.counts[parent] >= ix.counts[child]
