"""Query-to-image scoring and threshold retrieval.

A query states requirements rather than acting as a peer image:
similarity is the coverage fraction of query objects found in the
image, times a blend of how well the matched pairs' spatial relations
agree and how close the matched objects' visual attributes are. Scores
live on the 0..100 scale the threshold slider uses.

Scoring is stateless over immutable snapshots; corpus scans may run in
any order or in parallel and must produce the same ranking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bilist import BiList, SketchQuery, pir_between, transform_bilist
from .descriptors import color_distance, shape_distance, texture_distance
from .errors import ConfigurationError
from .relations import D4, DEFAULT_PIR_WEIGHTS, pir_distance


@dataclass(frozen=True)
class MatchParams:
    """Scoring knobs.

    relation_blend is the weight of spatial-relation agreement versus
    visual-attribute agreement (1.0 ignores visuals, matching a
    relations-only deployment). Visual weights apply to colour, shape and
    texture and are renormalized per object pair over the attributes both
    sides actually carry.
    """

    relation_blend: float = 1.0
    pir_weights: tuple[float, float, float] = DEFAULT_PIR_WEIGHTS
    visual_weights: tuple[float, float, float] = (1 / 3, 1 / 3, 1 / 3)
    invariant_mode: bool = False

    def __post_init__(self):
        if not (0.0 <= self.relation_blend <= 1.0):
            raise ConfigurationError(f"relation_blend must lie in [0,1], got {self.relation_blend}")
        if min(self.visual_weights) < 0:
            raise ConfigurationError(f"visual weights must be >= 0, got {self.visual_weights}")
        if min(self.pir_weights) < 0 or not math.isclose(sum(self.pir_weights), 1.0, abs_tol=1e-9):
            raise ConfigurationError(f"pir weights must be >= 0 and sum to 1, got {self.pir_weights}")


DEFAULT_PARAMS = MatchParams()


@dataclass(frozen=True)
class ScoredResult:
    image_id: str
    similarity: float
    matched: tuple[str, ...] = ()

    def __post_init__(self):
        if not (0.0 <= self.similarity <= 100.0):
            raise ConfigurationError(f"similarity out of range: {self.similarity}")


def match_objects(q: BiList, v: BiList) -> list[tuple[int, int]]:
    """Pair query objects with image objects by case-insensitive name.

    Each object is used at most once; ties resolve to the first unused
    occurrence, scanning in stored order, so the matching is
    deterministic.
    """
    used: set[int] = set()
    pairs: list[tuple[int, int]] = []
    folded = [o.name.casefold() for o in v.objects]
    for qi, qobj in enumerate(q.objects):
        want = qobj.name.casefold()
        for vi, have in enumerate(folded):
            if vi not in used and have == want:
                pairs.append((qi, vi))
                used.add(vi)
                break
    return pairs


def relation_similarity(
    q: BiList,
    v: BiList,
    matching: list[tuple[int, int]],
    weights: tuple[float, float, float] = DEFAULT_PIR_WEIGHTS,
) -> float:
    """Mean spatial agreement over matched pairs, in [0, 1].

    With fewer than two common objects there is no pair to compare, and
    the score is neutral 1.0; that convention is what makes a zero
    threshold behave as pure keyword matching.
    """
    if len(matching) < 2:
        return 1.0
    total = 0.0
    count = 0
    for a in range(len(matching)):
        for b in range(a + 1, len(matching)):
            qi, vi = matching[a]
            qj, vj = matching[b]
            q_pir = pir_between(q, q.objects[qi].name, q.objects[qj].name)
            v_pir = pir_between(v, v.objects[vi].name, v.objects[vj].name)
            total += pir_distance(q_pir, v_pir, weights)
            count += 1
    return 1.0 - total / count


def visual_similarity(
    q: BiList,
    v: BiList,
    matching: list[tuple[int, int]],
    params: MatchParams = DEFAULT_PARAMS,
) -> float:
    """Mean visual agreement over matched objects, in [0, 1].

    For each pair only the attributes present on both sides count, with
    the configured weights renormalized over that subset. Pairs with no
    comparable attribute score neutral 1.0, as does an empty matching.
    """
    if not matching:
        return 1.0
    w_color, w_shape, w_texture = params.visual_weights
    scores = []
    for qi, vi in matching:
        qo, vo = q.objects[qi], v.objects[vi]
        terms: list[tuple[float, float]] = []
        if qo.color is not None and vo.color is not None:
            terms.append((w_color, 1.0 - color_distance(qo.color, vo.color)))
        if qo.shape is not None and vo.shape is not None:
            terms.append((w_shape, 1.0 - shape_distance(qo.shape, vo.shape)))
        if qo.texture is not None and vo.texture is not None:
            terms.append((w_texture, 1.0 - texture_distance(qo.texture, vo.texture)))
        weight_sum = sum(w for w, _ in terms)
        if not terms or weight_sum <= 0:
            scores.append(1.0)
        else:
            scores.append(sum(w * s for w, s in terms) / weight_sum)
    return sum(scores) / len(scores)


def image_similarity(q: BiList, v: BiList, params: MatchParams = DEFAULT_PARAMS) -> float:
    """Composite score in [0, 100].

    coverage * (blend * relation agreement + (1 - blend) * visual
    agreement), scaled to percent; zero when no query object matches.
    Coverage divides by the query's object count, which deliberately makes
    the measure asymmetric.
    """
    matching = match_objects(q, v)
    if not matching:
        return 0.0
    coverage = len(matching) / len(q.objects)
    s_rel = relation_similarity(q, v, matching, params.pir_weights)
    lam = params.relation_blend
    s_vis = visual_similarity(q, v, matching, params) if lam < 1.0 else 0.0
    return 100.0 * coverage * (lam * s_rel + (1.0 - lam) * s_vis)


def invariant_similarity(q: BiList, v: BiList, params: MatchParams = DEFAULT_PARAMS) -> float:
    """Best score over all 8 plane symmetries of the query."""
    return max(image_similarity(transform_bilist(q, g), v, params) for g in D4)


def retrieve(
    query: SketchQuery,
    corpus,
    params: MatchParams = DEFAULT_PARAMS,
) -> list[ScoredResult]:
    """Score and rank a corpus of (id, bilist) pairs against a query.

    An image is returned iff it shares at least one object name with the
    query and its similarity clears the query threshold. Ranking is by
    similarity descending with ascending-id tie-breaks, truncated to the
    query limit.
    """
    invariant = query.invariant_mode or params.invariant_mode
    scored: list[ScoredResult] = []
    for image_id, bl in corpus:
        matching = match_objects(query.bilist, bl)
        if not matching:
            continue
        if invariant:
            sim = invariant_similarity(query.bilist, bl, params)
        else:
            sim = image_similarity(query.bilist, bl, params)
        if sim >= query.threshold:
            matched_names = tuple(query.bilist.objects[qi].name for qi, _ in matching)
            scored.append(ScoredResult(image_id=image_id, similarity=sim, matched=matched_names))
    scored.sort(key=lambda r: (-r.similarity, r.image_id))
    return scored[: query.limit]
