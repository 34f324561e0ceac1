"""Evaluation harness tests: corpus construction guarantees and sweep shape."""

import pytest

from pirsearch.bilist import build_bilist, ImageObject
from pirsearch.engine import AnnotationObject
from pirsearch.errors import ConfigurationError
from pirsearch.evaluation import (
    DEFAULT_THRESHOLDS,
    CategorySpec,
    CorpusSpec,
    default_spec,
    generate_corpus,
    render_csv,
    render_text,
    spec_from_dict,
    sweep,
)
from pirsearch.geometry import rectangle
from pirsearch.relations import ALLEN_DIAMETER, TOPO_DIAMETER, allen_distance, topo_distance
from pirsearch.similarity import image_similarity


def template_bilist(cat):
    return build_bilist([ImageObject(name=o.name, boundary=o.polygon) for o in cat.template])


@pytest.fixture(scope="module")
def default_corpus():
    spec = default_spec()
    items = generate_corpus(spec)
    return spec, items, sweep(items, spec)


def small_spec(seed=5):
    return CorpusSpec(
        seed=seed,
        categories=(
            CategorySpec(
                name="pair",
                template=(
                    AnnotationObject(name="a", polygon=rectangle(0, 0, 3, 3)),
                    AnnotationObject(name="b", polygon=rectangle(5, 0, 8, 3)),
                ),
                positives=4,
                jitter=1,
            ),
            CategorySpec(
                name="stack",
                template=(
                    AnnotationObject(name="top", polygon=rectangle(0, 5, 4, 8)),
                    AnnotationObject(name="base", polygon=rectangle(0, 0, 4, 4)),
                ),
                positives=4,
                jitter=2,
            ),
        ),
        distractors_per_category=3,
        unrelated=4,
    )


class TestGenerateCorpus:
    def test_deterministic(self):
        spec = small_spec(seed=5)
        a = generate_corpus(spec)
        b = generate_corpus(spec)
        assert [(i.id, i.label, i.bilist) for i in a] == [(i.id, i.label, i.bilist) for i in b]

    def test_expected_counts(self, default_corpus):
        spec, items, _ = default_corpus
        positives = sum(c.positives for c in spec.categories)
        distractors = spec.distractors_per_category * len(spec.categories)
        assert len(items) == positives + distractors + spec.unrelated

    def test_jitter_zero_positives_are_relation_identical(self, default_corpus):
        spec, items, _ = default_corpus
        ridge = next(c for c in spec.categories if c.jitter == 0)
        tmpl = template_bilist(ridge)
        for item in items:
            if item.category == ridge.name and item.relevant:
                assert item.bilist.relations == tmpl.relations

    def test_jitter_one_positives_within_one_hop(self, default_corpus):
        spec, items, _ = default_corpus
        for cat in spec.categories:
            tmpl = template_bilist(cat)
            for item in items:
                if item.category != cat.name or not item.relevant:
                    continue
                for p, q in zip(item.bilist.relations, tmpl.relations):
                    assert round(topo_distance(p.delta, q.delta) * TOPO_DIAMETER) <= cat.jitter
                    assert round(allen_distance(p.chi, q.chi) * ALLEN_DIAMETER) <= cat.jitter
                    assert round(allen_distance(p.psi, q.psi) * ALLEN_DIAMETER) <= cat.jitter

    def test_distractors_capped_below_80(self, default_corpus):
        spec, items, _ = default_corpus
        for cat in spec.categories:
            tmpl = template_bilist(cat)
            for item in items:
                if item.label == f"distractor:{cat.name}":
                    assert image_similarity(tmpl, item.bilist) < 80.0

    def test_unrelated_share_no_names(self, default_corpus):
        spec, items, _ = default_corpus
        category_names = {
            o.name.casefold() for c in spec.categories for o in c.template
        }
        for item in items:
            if item.label == "unrelated":
                assert not ({o.name.casefold() for o in item.bilist.objects} & category_names)

    def test_single_object_category_with_distractors_rejected(self):
        with pytest.raises(ConfigurationError, match=">= 2 objects"):
            CorpusSpec(
                seed=1,
                categories=(
                    CategorySpec(
                        name="solo",
                        template=(AnnotationObject(name="dot", polygon=rectangle(0, 0, 1, 1)),),
                        positives=3,
                    ),
                ),
                distractors_per_category=2,
            )

    def test_name_heavy_overlap_rejected(self):
        shared = (
            AnnotationObject(name="x", polygon=rectangle(0, 0, 2, 2)),
            AnnotationObject(name="y", polygon=rectangle(4, 0, 6, 2)),
        )
        with pytest.raises(ConfigurationError, match="share too many"):
            CorpusSpec(
                seed=1,
                categories=(
                    CategorySpec(name="one", template=shared, positives=2),
                    CategorySpec(name="two", template=shared, positives=2),
                ),
            )


class TestSweep:
    def test_columns_match_thresholds(self, default_corpus):
        _, _, table = default_corpus
        assert table.thresholds == DEFAULT_THRESHOLDS
        for row in table.rows:
            assert len(row.cells) == len(DEFAULT_THRESHOLDS)

    def test_recall_100_at_zero(self, default_corpus):
        _, _, table = default_corpus
        for row in table.rows:
            assert row.cells[0][0] == 100.0

    def test_precision_100_at_80(self, default_corpus):
        _, _, table = default_corpus
        for row in table.rows:
            assert row.cells[-1][1] == 100.0

    def test_recall_monotone_non_increasing(self, default_corpus):
        _, _, table = default_corpus
        for row in table.rows:
            recalls = [c[0] for c in row.cells]
            assert recalls == sorted(recalls, reverse=True)

    def test_geometric_mean_row(self, default_corpus):
        import math

        _, _, table = default_corpus
        for col in range(len(table.thresholds)):
            recalls = [row.cells[col][0] for row in table.rows]
            expected = math.exp(sum(math.log(r) for r in recalls) / len(recalls))
            assert table.geometric_mean.cells[col][0] == pytest.approx(expected)

    def test_deterministic_tables(self):
        spec = small_spec(seed=33)
        t1 = sweep(generate_corpus(spec), spec)
        t2 = sweep(generate_corpus(spec), spec)
        assert render_text(t1) == render_text(t2)
        assert render_csv(t1) == render_csv(t2)

    def test_keyword_column_is_keyword_matching(self, default_corpus):
        spec, items, table = default_corpus
        # at threshold 0 recall is the keyword recall: every positive shares
        # names, so 100; precision is |positives| / |name-sharing images|
        for cat, row in zip(spec.categories, table.rows):
            names = {o.name.casefold() for o in cat.template}
            sharing = [
                i for i in items if {o.name.casefold() for o in i.bilist.objects} & names
            ]
            relevant = [i for i in items if i.category == cat.name and i.relevant]
            expected_precision = 100.0 * len(relevant) / len(sharing)
            assert row.cells[0][1] == pytest.approx(expected_precision)


class TestRendering:
    def test_text_layout(self, default_corpus):
        _, _, table = default_corpus
        text = render_text(table)
        lines = text.splitlines()
        assert lines[1].startswith("Collection")
        assert lines[-1].startswith("Geometric Mean")
        assert text.count("R") >= len(DEFAULT_THRESHOLDS)

    def test_csv_columns(self, default_corpus):
        _, _, table = default_corpus
        csv = render_csv(table)
        header = csv.splitlines()[0].split(",")
        assert header[0] == "collection"
        assert header[1:3] == ["R@0", "P@0"]
        assert len(header) == 1 + 2 * len(DEFAULT_THRESHOLDS)


class TestSpecDocuments:
    def test_round_trip_from_dict(self):
        doc = {
            "seed": 7,
            "distractors_per_category": 2,
            "unrelated": 3,
            "categories": [
                {
                    "name": "pair",
                    "positives": 4,
                    "jitter": 0,
                    "objects": [
                        {"name": "a", "polygon": [[0, 0], [2, 0], [2, 2], [0, 2]]},
                        {"name": "b", "polygon": [[4, 0], [6, 0], [6, 2], [4, 2]]},
                    ],
                }
            ],
        }
        spec = spec_from_dict(doc)
        items = generate_corpus(spec)
        assert len(items) == 4 + 2 + 3
        table = sweep(items, spec)
        assert table.rows[0].cells[0][0] == 100.0
