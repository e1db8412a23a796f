import pytest
from hypothesis import given, strategies as st

from segcat import features
from segcat.features import (
    EMPTY,
    FeatureStructure,
    FSSyntaxError,
    FeatureError,
    copy_features,
    parse,
    serialize,
    subsumes,
    unify,
)


def fs(**kwargs):
    return FeatureStructure(kwargs)


class TestUnify:
    def test_disjoint_merge(self):
        assert unify(fs(persona=1), fs(número="pl")) == FeatureStructure(
            {"número": "pl", "persona": 1}
        )

    def test_clash(self):
        assert unify(fs(neg=True), fs(neg=False)) is None

    def test_subsumption_merge(self):
        assert unify(fs(persona=3, tiempo="pres"), fs(persona=3)) == fs(
            persona=3, tiempo="pres"
        )

    def test_nested_merge(self):
        a = fs(obj=fs(persona=2))
        b = fs(obj=fs(número="sg"))
        assert unify(a, b) == fs(obj=fs(persona=2, número="sg"))

    def test_nested_clash(self):
        assert unify(fs(obj=fs(persona=2)), fs(obj=fs(persona=1))) is None

    def test_bool_int_never_equal(self):
        assert unify(fs(persona=1), fs(persona=True)) is None


class TestSubsumes:
    def test_empty_subsumes_all(self):
        assert subsumes(EMPTY, fs(persona=1))

    def test_nonempty_does_not_subsume_empty(self):
        assert not subsumes(fs(persona=1), EMPTY)

    def test_nested_recursive(self):
        general = parse("[obj=[persona=2]]")
        specific = parse("[obj=[persona=2, número=sg], +neg]")
        assert subsumes(general, specific)

    def test_nested_not_subsumed(self):
        assert not subsumes(parse("[obj=[persona=2, número=sg]]"), parse("[obj=[persona=2]]"))


class TestCopyFeatures:
    def test_copies_named_paths(self):
        src = fs(persona=1, tiempo="impf", género="f")
        assert copy_features(src, EMPTY, ["persona", "tiempo"]) == fs(
            persona=1, tiempo="impf"
        )

    def test_idempotent_copy(self):
        assert copy_features(fs(neg=True), fs(neg=True), ["neg"]) == fs(neg=True)

    def test_clash(self):
        assert copy_features(fs(tiempo="pres"), fs(tiempo="fut"), ["tiempo"]) is None

    def test_missing_skipped(self):
        assert copy_features(fs(persona=1), EMPTY, ["neg", "persona"]) == fs(persona=1)


class TestSyntax:
    def test_parse_full(self):
        text = "[persona=1, número=pl, +neg, obj=[persona=2, número=sg]]"
        result = parse(text)
        assert result["persona"] == 1
        assert result["número"] == "pl"
        assert result["neg"] is True
        assert result["obj"] == fs(persona=2, número="sg")

    def test_whitespace_insensitive(self):
        assert parse("[ a=1 ,+b ]") == parse("[a=1,+b]")

    def test_canonical_sorted(self):
        assert serialize(parse("[persona=1, +neg]")) == "[+neg, persona=1]"

    def test_minus_bool(self):
        assert parse("[-incl]") == fs(incl=False)

    def test_empty(self):
        assert parse("[]") == EMPTY
        assert serialize(EMPTY) == "[]"

    def test_reject_trailing(self):
        with pytest.raises(FSSyntaxError):
            parse("[a=1] junk")

    def test_reject_deep_nesting(self):
        with pytest.raises(FeatureError):
            parse("[a=[b=[c=1]]]")

    def test_deep_nesting_rejected_in_constructor(self):
        inner = fs(persona=2)
        mid = fs(obj=inner)
        with pytest.raises(FeatureError):
            FeatureStructure({"x": mid})


# ---------------------------------------------------------------------------
# Property tests

_NAMES = ["persona", "número", "tiempo", "neg", "rflx", "caso", "género", "def"]
_SYMBOLS = ["sg", "pl", "pres", "impf", "fut", "m", "f", "areal"]

_flat_values = st.one_of(
    st.booleans(),
    st.integers(min_value=1, max_value=3),
    st.sampled_from(_SYMBOLS),
)

_flat_fs = st.dictionaries(st.sampled_from(_NAMES), _flat_values, max_size=5).map(
    FeatureStructure
)


@st.composite
def _nested_fs(draw):
    base = dict(draw(_flat_fs).items())
    if draw(st.booleans()):
        base["obj"] = draw(_flat_fs)
    return FeatureStructure(base)


class TestProperties:
    @given(_nested_fs(), _nested_fs())
    def test_commutative(self, a, b):
        assert unify(a, b) == unify(b, a)

    @given(_nested_fs())
    def test_idempotent(self, a):
        assert unify(a, a) == a

    @given(_nested_fs())
    def test_identity(self, a):
        assert unify(a, EMPTY) == a

    @given(_nested_fs(), _nested_fs())
    def test_subsumes_unifier(self, a, b):
        result = unify(a, b)
        if result is not None:
            assert subsumes(a, result)
            assert subsumes(b, result)

    @given(_nested_fs())
    def test_roundtrip(self, a):
        assert parse(serialize(a)) == a

    @given(_nested_fs(), _nested_fs())
    def test_hash_consistent(self, a, b):
        if a == b:
            assert hash(a) == hash(b)
