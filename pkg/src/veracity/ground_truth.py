"""Item-feature ground truth, rating ingestion and preference derivation.

Input formats (UTF-8, tab separated, no header):

* ``items.tsv``: ``item_id<TAB>feature_id``; lines starting with ``#`` are comments.
* ``ratings.tsv``: ``user_id<TAB>item_id<TAB>rating[<TAB>ignored]`` with integer
  ratings 1..5.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from veracity.errors import ParseError
from veracity.outcomes import GroundTruthVerdict, Preference

DEFAULT_LIKE_THRESHOLD = 3
RATING_MIN, RATING_MAX = 1, 5


@dataclass(frozen=True)
class ItemFeatureStore:
    features: Mapping[str, frozenset[str]]

    @property
    def vocabulary(self) -> frozenset[str]:
        out: set[str] = set()
        for feats in self.features.values():
            out.update(feats)
        return frozenset(out)

    def knows(self, item_id: str) -> bool:
        return item_id in self.features

    def has_feature(self, item_id: str, feature_id: str) -> bool:
        return feature_id in self.features.get(item_id, frozenset())

    def features_of(self, item_id: str) -> frozenset[str]:
        return self.features.get(item_id, frozenset())


@dataclass(frozen=True)
class RatingEvent:
    user_id: str
    item_id: str
    rating: int

    def __post_init__(self):
        if not (RATING_MIN <= self.rating <= RATING_MAX):
            raise ValueError(f"rating {self.rating} outside [{RATING_MIN}, {RATING_MAX}]")


@dataclass(frozen=True)
class PreferenceTable:
    """Per (user, feature) liked/disliked tallies and the majority label."""

    tallies: Mapping[tuple[str, str], tuple[int, int]]
    like_threshold: int = DEFAULT_LIKE_THRESHOLD
    orphaned_ratings: int = 0

    def counts(self, user_id: str, feature_id: str) -> tuple[int, int]:
        return self.tallies.get((user_id, feature_id), (0, 0))

    def label(self, user_id: str, feature_id: str) -> Preference:
        liked, disliked = self.counts(user_id, feature_id)
        if liked > disliked:
            return Preference.LIKED
        if disliked > liked:
            return Preference.DISLIKED
        return Preference.UNKNOWN

    def labels(self) -> dict[tuple[str, str], Preference]:
        return {key: self.label(*key) for key in self.tallies}


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        yield lineno, raw


def _decode(source: bytes | str, name: str) -> str:
    if isinstance(source, str):
        return source
    try:
        return source.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(name, None, f"not valid UTF-8 ({exc.reason})") from None


def load_item_features(source: bytes | str, name: str = "items.tsv") -> ItemFeatureStore:
    text = _decode(source, name)
    features: dict[str, set[str]] = defaultdict(set)
    for lineno, line in _lines(text):
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise ParseError(name, lineno, f"expected 2 tab-separated columns, got {len(cols)}")
        item, feat = cols[0].strip(), cols[1].strip()
        if not item or not feat:
            raise ParseError(name, lineno, "empty item or feature id")
        features[item].add(feat)
    return ItemFeatureStore({item: frozenset(f) for item, f in features.items()})


def load_ratings(source: bytes | str, name: str = "ratings.tsv") -> list[RatingEvent]:
    text = _decode(source, name)
    events = []
    for lineno, line in _lines(text):
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) not in (3, 4):
            raise ParseError(name, lineno, f"expected 3 or 4 tab-separated columns, got {len(cols)}")
        user, item, raw = cols[0].strip(), cols[1].strip(), cols[2].strip()
        if not user or not item:
            raise ParseError(name, lineno, "empty user or item id")
        try:
            rating = int(raw)
        except ValueError:
            raise ParseError(name, lineno, f"rating is not an integer: {raw!r}") from None
        if not (RATING_MIN <= rating <= RATING_MAX):
            raise ParseError(name, lineno, f"rating {rating} outside [{RATING_MIN}, {RATING_MAX}]")
        events.append(RatingEvent(user, item, rating))
    return events


def derive_preferences(
    ratings: Iterable[RatingEvent],
    store: ItemFeatureStore,
    like_threshold: int = DEFAULT_LIKE_THRESHOLD,
) -> PreferenceTable:
    """Tally liked/disliked evidence for each (user, feature).

    Every feature of a rated item gets a liked tally when the rating reaches
    ``like_threshold`` and a disliked tally otherwise. Ratings of items absent
    from ``store`` are counted as orphaned and otherwise ignored.
    """
    if not (RATING_MIN <= like_threshold <= RATING_MAX):
        raise ValueError(f"like_threshold must lie in [{RATING_MIN}, {RATING_MAX}]")
    liked: dict[tuple[str, str], int] = defaultdict(int)
    disliked: dict[tuple[str, str], int] = defaultdict(int)
    orphaned = 0
    for ev in ratings:
        if not store.knows(ev.item_id):
            orphaned += 1
            continue
        bucket = liked if ev.rating >= like_threshold else disliked
        for feat in store.features_of(ev.item_id):
            bucket[(ev.user_id, feat)] += 1
    keys = set(liked) | set(disliked)
    tallies = {k: (liked.get(k, 0), disliked.get(k, 0)) for k in sorted(keys)}
    return PreferenceTable(tallies=tallies, like_threshold=like_threshold, orphaned_ratings=orphaned)


def verdict(
    store: ItemFeatureStore,
    prefs: PreferenceTable,
    item_id: str,
    feature_id: str,
    user_id: str,
) -> GroundTruthVerdict:
    """Ground truth for one statement under a closed-world reading of ``store``.

    Unknown items are treated as having no features; callers that want to
    tally them should check ``store.knows(item_id)``.
    """
    return GroundTruthVerdict(
        item_has_feature=store.has_feature(item_id, feature_id),
        user_preference=prefs.label(user_id, feature_id),
    )


@dataclass
class GroundTruth:
    """Store plus preference table, with a running tally of unknown-item lookups."""

    store: ItemFeatureStore
    prefs: PreferenceTable
    unknown_items: int = field(default=0)

    def lookup(self, user_id: str, item_id: str, feature_id: str) -> GroundTruthVerdict:
        if not self.store.knows(item_id):
            self.unknown_items += 1
        return verdict(self.store, self.prefs, item_id, feature_id, user_id)
