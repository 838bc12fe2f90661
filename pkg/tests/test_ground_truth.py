import pytest
from hypothesis import given
from hypothesis import strategies as st

from veracity.errors import ParseError
from veracity.ground_truth import (
    GroundTruth,
    ItemFeatureStore,
    RatingEvent,
    derive_preferences,
    load_item_features,
    load_ratings,
    verdict,
)
from veracity.outcomes import GroundTruthVerdict, Preference


class TestLoadItemFeatures:
    def test_basic(self):
        store = load_item_features(b"i1\tgenre:action\ni1\tactor:a7\n")
        assert store.features_of("i1") == {"genre:action", "actor:a7"}
        assert store.vocabulary == {"genre:action", "actor:a7"}

    def test_duplicates_idempotent(self):
        once = load_item_features("i1\tf1\n")
        twice = load_item_features("i1\tf1\ni1\tf1\n")
        assert once == twice

    def test_comments_and_blank_lines(self):
        store = load_item_features("# header\n\ni1\tf1\n")
        assert store.features_of("i1") == {"f1"}

    def test_one_column_names_line(self):
        with pytest.raises(ParseError) as err:
            load_item_features("i1\tf1\ni2\n")
        assert err.value.line == 2

    def test_empty_stream(self):
        assert load_item_features(b"").features == {}

    def test_bad_utf8(self):
        with pytest.raises(ParseError):
            load_item_features(b"i1\t\xff\n")


class TestLoadRatings:
    def test_basic(self):
        assert load_ratings("u1\ti1\t4\n") == [RatingEvent("u1", "i1", 4)]

    def test_fourth_column_ignored(self):
        assert load_ratings("u1\ti1\t4\t978300760\n") == [RatingEvent("u1", "i1", 4)]

    @pytest.mark.parametrize("text", ["u1\ti1\t6\n", "u1\ti1\t0\n", "u1\ti1\tfour\n", "u1\ti1\t4.5\n", "u1\ti1\n"])
    def test_errors(self, text):
        with pytest.raises(ParseError) as err:
            load_ratings("u0\ti0\t3\n" + text)
        assert err.value.line == 2

    def test_event_validates(self):
        with pytest.raises(ValueError):
            RatingEvent("u", "i", 9)


STORE = ItemFeatureStore({"i1": frozenset({"f1", "f2"}), "i2": frozenset({"f1"}), "i3": frozenset({"f3"})})


class TestDerivePreferences:
    def test_liked_features(self):
        prefs = derive_preferences([RatingEvent("u1", "i1", 4)], STORE)
        assert prefs.label("u1", "f1") is Preference.LIKED
        assert prefs.label("u1", "f2") is Preference.LIKED

    def test_tie_is_unknown(self):
        prefs = derive_preferences([RatingEvent("u1", "i1", 4), RatingEvent("u1", "i2", 1)], STORE)
        assert prefs.counts("u1", "f1") == (1, 1)
        assert prefs.label("u1", "f1") is Preference.UNKNOWN
        assert prefs.label("u1", "f2") is Preference.LIKED

    def test_no_evidence(self):
        prefs = derive_preferences([RatingEvent("u1", "i1", 4)], STORE)
        assert prefs.label("u1", "f9") is Preference.UNKNOWN

    def test_threshold_boundary(self):
        prefs = derive_preferences([RatingEvent("u1", "i3", 3), RatingEvent("u2", "i3", 2)], STORE)
        assert prefs.label("u1", "f3") is Preference.LIKED
        assert prefs.label("u2", "f3") is Preference.DISLIKED
        strict = derive_preferences([RatingEvent("u1", "i3", 3)], STORE, like_threshold=4)
        assert strict.label("u1", "f3") is Preference.DISLIKED

    def test_orphans_counted(self):
        prefs = derive_preferences([RatingEvent("u1", "nope", 5), RatingEvent("u1", "i3", 5)], STORE)
        assert prefs.orphaned_ratings == 1
        assert prefs.label("u1", "f3") is Preference.LIKED

    def test_threshold_validated(self):
        with pytest.raises(ValueError):
            derive_preferences([], STORE, like_threshold=0)


events = st.lists(
    st.builds(RatingEvent, st.sampled_from(["u1", "u2"]), st.sampled_from(["i1", "i2", "i3", "ix"]),
              st.integers(1, 5)),
    max_size=30,
)


@given(events, st.integers(2, 5))
def test_duplication_leaves_labels_unchanged(evts, k):
    base = derive_preferences(evts, STORE).labels()
    assert derive_preferences(evts * k, STORE).labels() == base


@given(events, st.randoms())
def test_order_independent(evts, rnd):
    shuffled = evts[:]
    rnd.shuffle(shuffled)
    assert derive_preferences(shuffled, STORE) == derive_preferences(evts, STORE)


@given(events, st.integers(1, 4))
def test_raising_threshold_never_turns_disliked_into_liked(evts, t):
    low = derive_preferences(evts, STORE, t)
    high = derive_preferences(evts, STORE, t + 1)
    for key, label in low.labels().items():
        if label is Preference.DISLIKED:
            assert high.label(*key) is Preference.DISLIKED


class TestVerdict:
    prefs = derive_preferences([RatingEvent("u1", "i2", 5)], STORE)

    def test_lookup(self):
        assert verdict(STORE, self.prefs, "i1", "f1", "u1") == GroundTruthVerdict(True, Preference.LIKED)

    def test_absent_feature(self):
        assert verdict(STORE, self.prefs, "i1", "f9", "u1") == GroundTruthVerdict(False, Preference.UNKNOWN)

    def test_unknown_item_tallied(self):
        truth = GroundTruth(STORE, self.prefs)
        assert truth.lookup("u1", "i99", "f9") == GroundTruthVerdict(False, Preference.UNKNOWN)
        assert truth.lookup("u1", "i1", "f1") == truth.lookup("u1", "i1", "f1")
        assert truth.unknown_items == 1
