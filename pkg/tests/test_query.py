from unittest import TestCase
from unittest.mock import MagicMock, patch

from ayat.base import Base
from ayat.column import Column, String
from ayat.query import Query, SQLQueryBuilder


class Meta(Base):
    __tablename__ = "artifact_meta"

    key = Column("key", String, primary_key=True)
    value = Column("value", String)


class TestSQLQueryBuilder(TestCase):
    def test_select_all_columns(self):
        self.assertEqual(SQLQueryBuilder.select("verse"), "SELECT * FROM verse")

    def test_select_specific_columns(self):
        self.assertEqual(SQLQueryBuilder.select("verse", ["sura", "ayah"]), "SELECT sura, ayah FROM verse")

    def test_filter_with_no_filters(self):
        self.assertEqual(SQLQueryBuilder.filter(), ("", ()))

    def test_order_by_multiple_columns_descending(self):
        self.assertEqual(SQLQueryBuilder.order_by("sura", "ayah", direction="DESC"), " ORDER BY sura, ayah DESC")

    def test_order_by_rejects_unknown_direction(self):
        with self.assertRaises(ValueError):
            SQLQueryBuilder.order_by("sura", direction="SIDEWAYS")


class TestQuery(TestCase):
    def test_initializes_query_builder_attribute(self):
        query = Query(Meta, MagicMock())
        assert isinstance(query.query_builder, SQLQueryBuilder)

    def test_select_specific_columns(self):
        expected_result = [("content_hash", "abc")]
        with patch("ayat.query.Query.execute") as mock_execute:
            mock_execute.return_value = expected_result
            result = Query(Meta, MagicMock()).select("key", "value").execute()
            assert result == expected_result
            mock_execute.assert_called_once()

    def test_filter_called_before_select(self):
        with self.assertRaises(ValueError):
            Query(Meta, MagicMock()).filter(key="content_hash")

    def test_execute_without_select(self):
        with self.assertRaises(ValueError):
            Query(Meta, MagicMock()).execute()

    def test_filter_and_order(self):
        conn = MagicMock()
        query = Meta.query(conn).select("key", "value").filter(key="schema_version").order_by("key")
        assert str(query) == "SELECT key, value FROM artifact_meta WHERE key = ? ORDER BY key ASC, ['schema_version']"
        query.execute()
        conn.execute.assert_called_once_with(
            "SELECT key, value FROM artifact_meta WHERE key = ? ORDER BY key ASC", ["schema_version"]
        )

    def test_empty_filter(self):
        query = Meta.query(MagicMock()).select("key").filter()
        assert str(query) == "SELECT key FROM artifact_meta"

    def test_all_builds_instances(self):
        conn = MagicMock()
        conn.execute.return_value = [("verse_count", "6236")]
        rows = Meta.query(conn).select().all()
        self.assertEqual(rows, [Meta(key="verse_count", value="6236")])
