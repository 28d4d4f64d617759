import pytest

from core.models import IndexSchema
from tools.index_codec import decode, encode, iter_assignments, schema_for


def test_smallest_id_is_most_significant(teleportation):
    schema = schema_for(teleportation, [6, 3])
    assert schema == IndexSchema((3, 6), (2, 8))
    assert encode(schema, {3: 1, 6: 2}) == 10
    assert decode(schema, 10) == {3: 1, 6: 2}


def test_iteration_follows_flat_index():
    schema = IndexSchema((2, 5), (2, 3))
    for index, assignment in enumerate(iter_assignments(schema)):
        assert encode(schema, assignment) == index


def test_empty_schema_has_one_index():
    schema = IndexSchema()
    assert schema.dimension == 1
    assert encode(schema, {}) == 0
    assert list(iter_assignments(schema)) == [{}]


def test_out_of_range_and_missing_values():
    schema = IndexSchema((1, 2), (2, 2))
    with pytest.raises(ValueError):
        encode(schema, {1: 2, 2: 0})
    with pytest.raises(ValueError):
        encode(schema, {1: 0})
    with pytest.raises(ValueError):
        decode(schema, 4)


def test_schema_requires_ascending_ids():
    with pytest.raises(ValueError):
        IndexSchema((2, 1), (2, 2))
