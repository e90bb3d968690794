import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from topictrap import lsa
from topictrap.errors import CorpusTooSmall, LengthMismatch


# --- tokenize ------------------------------------------------------------

def test_tokenize_stopwords_and_short_tokens():
    assert lsa.tokenize("The angle in A is right.", "en") == ["angle", "right"]


def test_tokenize_empty():
    assert lsa.tokenize("", "en") == []


def test_tokenize_splits_on_symbols():
    assert lsa.tokenize("90° angle", "en") == ["90", "angle"]


def test_tokenize_unknown_lang_keeps_everything():
    assert lsa.tokenize("the la der", "xx") == ["the", "la", "der"]


def test_tokenize_german_umlaut_stopwords():
    assert lsa.tokenize("für den Umkreis", "de") == ["umkreis"]


@given(st.text(max_size=200))
def test_tokenize_properties(text):
    toks = lsa.tokenize(text, "en")
    for t in toks:
        assert t == t.lower()
        assert len(t) >= 2
        assert t not in lsa.stopwords_for("en")


# --- build_matrix --------------------------------------------------------

CORPUS3 = {
    "a": "circle circle radius",
    "b": "circle line",
    "c": "circle point plane",
}


def test_idf_of_unique_term_is_ln3():
    m = lsa.build_matrix(CORPUS3, "en")
    i = m.terms.index("radius")
    assert m.idf[i] == pytest.approx(math.log(3), abs=1e-12)
    assert m.idf[i] == pytest.approx(1.0986, abs=1e-4)


def test_term_in_all_docs_has_zero_row():
    m = lsa.build_matrix(CORPUS3, "en")
    i = m.terms.index("circle")
    assert not m.weights[i, :].any()


def test_raw_tf_scales_weight():
    # "circle" appears twice in one doc and nowhere else: w = 2 * ln 3
    m = lsa.build_matrix({"a": "circle circle radius", "b": "line point", "c": "plane area"}, "en")
    i, j = m.terms.index("circle"), m.docs.index("a")
    assert m.weights[i, j] == pytest.approx(2 * math.log(3), abs=1e-12)


def test_vocabulary_sorted_dedup():
    m = lsa.build_matrix(CORPUS3, "en")
    assert list(m.terms) == sorted(set(m.terms))


def test_corpus_too_small():
    with pytest.raises(CorpusTooSmall):
        lsa.build_matrix({"a": "circle"}, "en")


def test_empty_docs_dropped_with_report():
    m = lsa.build_matrix(dict(CORPUS3, empty="", stopsonly="the of"), "en")
    assert m.dropped == ("empty", "stopsonly")
    assert set(m.docs) == {"a", "b", "c"}


def test_all_shared_vocabulary_collapses():
    # every token in every doc -> all columns zero -> nothing survives
    with pytest.raises(CorpusTooSmall):
        lsa.build_matrix({"a": "circle", "b": "circle", "c": "circle"}, "en")


def test_no_zero_columns_invariant():
    m = lsa.build_matrix(dict(CORPUS3, d="circle circle"), "en")
    assert "d" in m.dropped
    for j in range(len(m.docs)):
        assert m.weights[:, j].any()


# --- reduce --------------------------------------------------------------

def matrix_from_weights(w):
    w = np.asarray(w, dtype=float)
    return lsa.TermDocMatrix(
        terms=tuple(f"t{i}" for i in range(w.shape[0])),
        docs=tuple(f"d{j}" for j in range(w.shape[1])),
        weights=w,
        idf=np.ones(w.shape[0]),
        lang="en",
    )


def test_reduce_diagonal_sigma():
    space = lsa.reduce(matrix_from_weights(np.diag([3.0, 1.0])), k_max=2)
    assert np.allclose(space.sigma, [3.0, 1.0])


def test_reduce_full_rank_reconstructs():
    rng = np.random.default_rng(7)
    w = np.abs(rng.normal(size=(6, 4)))
    m = matrix_from_weights(w)
    space = lsa.reduce(m, k_max=10)
    doc_mat = np.column_stack([space.doc_vectors[d] for d in m.docs])
    assert np.allclose(space.u @ doc_mat, w, atol=1e-8)


def test_reduce_rank_one_clamps():
    w = np.array([[1.0, 2.0], [2.0, 4.0]])
    raw_sigma = np.linalg.svd(w, compute_uv=False)
    assert raw_sigma[0] == pytest.approx(5.0, abs=1e-12)
    assert raw_sigma[1] <= 1e-10
    space = lsa.reduce(matrix_from_weights(w), k_max=2)
    assert space.k == 1
    assert space.sigma[0] == pytest.approx(5.0, abs=1e-12)


def test_reduce_orthonormal_and_ordered():
    m = lsa.build_matrix(CORPUS3, "en")
    space = lsa.reduce(m)
    assert np.allclose(space.u.T @ space.u, np.eye(space.k), atol=1e-8)
    assert all(space.sigma[i] >= space.sigma[i + 1] for i in range(space.k - 1))
    assert (space.sigma > 0).all()


def test_reduce_sign_convention_deterministic():
    m = lsa.build_matrix(CORPUS3, "en")
    s1, s2 = lsa.reduce(m), lsa.reduce(m)
    assert np.array_equal(s1.u, s2.u)
    for j in range(s1.k):
        i = int(np.argmax(np.abs(s1.u[:, j])))
        assert s1.u[i, j] > 0


# --- fold_in -------------------------------------------------------------

def test_fold_in_reproduces_corpus_doc():
    space = lsa.reduce(lsa.build_matrix(CORPUS3, "en"))
    v = lsa.fold_in(space, CORPUS3["a"], "en")
    assert np.allclose(v, space.doc_vectors["a"], atol=1e-8)


def test_fold_in_empty_text_is_zero():
    space = lsa.reduce(lsa.build_matrix(CORPUS3, "en"))
    assert not lsa.fold_in(space, "", "en").any()


def test_fold_in_duplication_is_exact_scaling():
    space = lsa.reduce(lsa.build_matrix(CORPUS3, "en"))
    text = CORPUS3["a"]
    v1 = lsa.fold_in(space, text, "en")
    v2 = lsa.fold_in(space, text + " " + text, "en")
    assert np.array_equal(v2, 2 * v1)
    assert lsa.cosine(v1, v2) == pytest.approx(1.0, abs=1e-9)


def test_fold_in_ignores_unknown_tokens():
    space = lsa.reduce(lsa.build_matrix(CORPUS3, "en"))
    assert not lsa.fold_in(space, "zebra unknownword", "en").any()


# --- cosine --------------------------------------------------------------

def test_cosine_orthogonal():
    assert lsa.cosine(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0


def test_cosine_self():
    v = np.array([0.3, -1.2, 4.0])
    assert lsa.cosine(v, v) == pytest.approx(1.0, abs=1e-9)


def test_cosine_45_degrees():
    got = lsa.cosine(np.array([1.0, 1.0]), np.array([1.0, 0.0]))
    assert got == pytest.approx(0.70711, abs=1e-5)


def test_cosine_near_zero_norm_guard():
    assert lsa.cosine(np.array([1e-13, 0.0]), np.array([1.0, 0.0])) == 0.0


def test_cosine_length_mismatch():
    with pytest.raises(LengthMismatch):
        lsa.cosine(np.array([1.0]), np.array([1.0, 2.0]))


@given(
    st.lists(st.floats(min_value=-1e6, max_value=1e6), min_size=1, max_size=8),
    st.data(),
)
def test_cosine_symmetry_exact(a, data):
    b = data.draw(st.lists(st.floats(min_value=-1e6, max_value=1e6), min_size=len(a), max_size=len(a)))
    va, vb = np.array(a), np.array(b)
    assert lsa.cosine(va, vb) == lsa.cosine(vb, va)


# --- all_pairs -----------------------------------------------------------

def brute_force_pairs(m, threshold):
    """Oracle: clamped cosine over raw weighted columns, full term space."""
    out = []
    uris = sorted(m.docs)
    col = {u: m.weights[:, m.docs.index(u)] for u in uris}
    for i, a in enumerate(uris):
        for b in uris[i + 1:]:
            sim = max(0.0, lsa.cosine(col[a], col[b]))
            if sim >= threshold:
                out.append((a, b, sim))
    out.sort(key=lambda e: (-e[2], e[0], e[1]))
    return out


DISJOINT = {
    "a": "ellipse curve focus focus distance",
    "b": "ellipse curve focus distance sum",
    "c": "prime integer divisor factorization",
}


def test_disjoint_vocabulary_fixture():
    m = lsa.build_matrix(DISJOINT, "en")
    space = lsa.reduce(m)
    sims = {(a, b): s for a, b, s in lsa.all_pairs(space, 0.0)}
    oracle = {(a, b): s for a, b, s in brute_force_pairs(m, 0.0)}
    assert oracle[("a", "c")] == 0.0
    assert sims[("a", "c")] <= 1e-9
    assert sims[("a", "b")] > sims[("a", "c")]
    assert sims[("a", "b")] == pytest.approx(oracle[("a", "b")], abs=1e-6)


def test_all_pairs_threshold_one_no_duplicates():
    space = lsa.reduce(lsa.build_matrix(DISJOINT, "en"))
    for a, b, s in lsa.all_pairs(space, 1.0):
        assert s >= 1.0 - 1e-12


def test_all_pairs_threshold_zero_counts():
    space = lsa.reduce(lsa.build_matrix(DISJOINT, "en"))
    n = len(space.doc_vectors)
    assert len(lsa.all_pairs(space, 0.0)) == n * (n - 1) // 2


WORDS = ["circle", "radius", "angle", "line", "point", "plane", "curve", "area"]


@st.composite
def small_corpora(draw):
    n = draw(st.integers(min_value=2, max_value=6))
    docs = {}
    for i in range(n):
        words = draw(st.lists(st.sampled_from(WORDS), min_size=1, max_size=8))
        docs[f"d{i}"] = " ".join(words)
    return docs


@given(small_corpora())
@settings(max_examples=50, deadline=None)
def test_all_pairs_matches_brute_force_full_rank(docs):
    try:
        m = lsa.build_matrix(docs, "en")
    except CorpusTooSmall:
        assume(False)
    space = lsa.reduce(m, k_max=100)
    got = lsa.all_pairs(space, 0.0)
    expected = brute_force_pairs(m, 0.0)
    got_map = {(a, b): s for a, b, s in got}
    exp_map = {(a, b): s for a, b, s in expected}
    assert set(got_map) == set(exp_map)
    for pair, s in exp_map.items():
        assert got_map[pair] == pytest.approx(s, abs=1e-6)


# --- persistence ---------------------------------------------------------

def test_space_round_trip(tmp_path):
    space = lsa.reduce(lsa.build_matrix(CORPUS3, "en"))
    path = str(tmp_path / "space.json")
    lsa.save_space(space, path)
    loaded = lsa.load_space(path)
    assert loaded.k == space.k
    assert loaded.terms == space.terms
    assert np.array_equal(loaded.u, space.u)
    assert np.array_equal(loaded.sigma, space.sigma)
    assert np.array_equal(loaded.idf, space.idf)
    assert set(loaded.doc_vectors) == set(space.doc_vectors)
    for uri, v in space.doc_vectors.items():
        assert np.array_equal(loaded.doc_vectors[uri], v)


def test_space_dump_deterministic(tmp_path):
    m = lsa.build_matrix(CORPUS3, "en")
    p1, p2 = str(tmp_path / "s1.json"), str(tmp_path / "s2.json")
    lsa.save_space(lsa.reduce(m), p1)
    lsa.save_space(lsa.reduce(m), p2)
    assert open(p1, "rb").read() == open(p2, "rb").read()
