"""Tests for the packaged modeling scenario and its reference tables."""

import pytest

from gradcons import cra
from gradcons.classify import NO_COUNTEREXAMPLE, PROVEN_NO, WITNESS_FOUND
from gradcons.errors import DocumentError


class TestFixtureFiles:
    def test_loaded_fixtures_match_programmatic_build(self, fixtures):
        built = cra.build_fixtures()
        assert fixtures.type_graph == built.type_graph
        assert fixtures.host == built.host
        assert set(fixtures.rules) == set(cra.RULE_NAMES)
        assert set(fixtures.constraints) == set(cra.CONSTRAINT_NAMES)
        for name in cra.RULE_NAMES:
            assert fixtures.rules[name] == built.rules[name]
        for name in cra.CONSTRAINT_NAMES:
            assert fixtures.constraints[name] == built.constraints[name]

    def test_rule_and_constraint_lists_follow_canonical_order(self, fixtures):
        assert [r.name for r in fixtures.rule_list()] == list(cra.RULE_NAMES)
        assert [c.name for c in fixtures.constraint_list()] == list(cra.CONSTRAINT_NAMES)

    def test_shipped_files_are_a_regeneration_fixed_point(self, tmp_path):
        written = cra.write_fixture_files(tmp_path)
        packaged = cra.default_fixtures_dir()
        assert {p.name for p in written} == {p.name for p in packaged.iterdir()}
        for path in written:
            assert path.read_bytes() == (packaged / path.name).read_bytes()

    def test_env_override_redirects_loading(self, tmp_path, monkeypatch):
        cra.write_fixture_files(tmp_path)
        monkeypatch.setenv(cra.FIXTURES_ENV, str(tmp_path))
        assert cra.default_fixtures_dir() == tmp_path
        loaded = cra.load_fixtures()
        assert loaded == cra.build_fixtures()

    def test_loading_rejects_a_library_missing_a_constraint(self, tmp_path):
        from gradcons.formats import emit_constraints_library

        cra.write_fixture_files(tmp_path)
        fixtures = cra.build_fixtures()
        partial = [fixtures.constraints["c1"], fixtures.constraints["c2"]]
        (tmp_path / "constraints.json").write_text(
            emit_constraints_library(fixtures.type_graph, partial)
        )
        with pytest.raises(DocumentError) as err:
            cra.load_fixtures(tmp_path)
        assert any("missing" in p for p in err.value.problems)

    def test_loading_rejects_a_rule_over_a_different_type_graph(self, tmp_path):
        from gradcons.formats import emit_rule_document
        from gradcons.graphs import TypeGraph, TypedGraph
        from gradcons.rewriting import Rule

        cra.write_fixture_files(tmp_path)
        other_tg = TypeGraph(["Class", "Feature", "Stray"],
                             [("isAssigned", "Feature", "Class"),
                              ("dependsOn", "Feature", "Feature")])
        lhs = TypedGraph(other_tg, [("x", "Stray")])
        stray = Rule("assignFeature", lhs, lhs, lhs)
        (tmp_path / "rule_assignFeature.json").write_text(emit_rule_document(stray))
        with pytest.raises(DocumentError) as err:
            cra.load_fixtures(tmp_path)
        assert any("different type graph" in p for p in err.value.problems)

    def test_loading_surfaces_corrupted_json(self, tmp_path):
        cra.write_fixture_files(tmp_path)
        (tmp_path / "host_graph.json").write_text("{not json")
        with pytest.raises(DocumentError):
            cra.load_fixtures(tmp_path)


class TestGoldenTables:
    def test_golden_shapes(self):
        assert len(cra.INDEPENDENCE_GOLDEN) == 40
        assert len(cra.CLASSIFICATION_GOLDEN) == 12
        assert len(cra.STATIC_PROOF_GOLDEN) == 5
        assert set(cra.INDEPENDENCE_GOLDEN.values()) <= {"+", "-"}
        for sus, imp in cra.CLASSIFICATION_GOLDEN.values():
            assert sus in {"+", "-", "(+)"}
            assert imp in {"+", "-", "+*"}

    def test_static_proofs_imply_positive_sustaining_cells(self):
        for key in cra.STATIC_PROOF_GOLDEN:
            assert cra.CLASSIFICATION_GOLDEN[key][0] == "+"

    def test_continuation_groups_skip_the_single_level_constraint(self):
        # c1 has no inner level, so the groups measured against the
        # continuation pattern carry no c1 column.
        assert ("assignFeature", "seq_independent", "c1") in cra.INDEPENDENCE_GOLDEN
        assert ("assignFeature", "par_dependent", "c1") in cra.INDEPENDENCE_GOLDEN
        assert ("assignFeature", "par_independent", "c1") not in cra.INDEPENDENCE_GOLDEN
        assert ("assignFeature", "seq_dependent", "c1") not in cra.INDEPENDENCE_GOLDEN


class TestIndependenceReproduction:
    def test_reproduction_matches_golden(self, fixtures):
        rep = cra.reproduce_independence_table(fixtures)
        assert rep.ok
        assert rep.diffs == ()
        assert "All 40 cells match" in rep.render_text()

    def test_spot_checked_signs(self, fixtures):
        table = cra.reproduce_independence_table(fixtures).table
        assert table.sign("deleteEmptyClass", "seq_independent", "c1") == "+"
        assert table.sign("moveFeature", "par_dependent", "c1") == "+"
        assert table.sign("moveFeature", "par_dependent", "c3") == "+"
        assert table.sign("assignFeature", "seq_dependent", "c2") == "+"
        assert table.sign("createClass", "seq_independent", "c2") == "-"


@pytest.fixture(scope="module")
def rep(fixtures):
    return cra.reproduce_classification_table(fixtures)


class TestClassificationReproduction:
    def test_reproduction_matches_golden(self, rep):
        assert rep.ok, rep.diffs
        assert rep.statically_proven == cra.STATIC_PROOF_GOLDEN
        assert "All 24 cells match" in rep.render_text()

    def test_cell_provenance(self, rep):
        af_c2 = rep.cells[("assignFeature", "c2")]
        assert af_c2.sustaining_provenance == "static proof"
        assert "some application" in af_c2.improving_provenance

        mf_c1 = rep.cells[("moveFeature", "c1")]
        assert mf_c1.sustaining == "(+)"
        assert "direct" in mf_c1.sustaining_provenance

        dec_c2 = rep.cells[("deleteEmptyClass", "c2")]
        assert dec_c2.improving == "+*"
        assert "every application" in dec_c2.improving_provenance

    def test_empirical_claims_behind_the_cells(self, rep):
        mf_c3 = rep.empirical[("moveFeature", "c3")]
        assert mf_c3.claim("sustaining").status == PROVEN_NO
        assert mf_c3.claim("sustaining").transformation is not None

        af_c2 = rep.empirical[("assignFeature", "c2")]
        assert af_c2.claim("sustaining").status == NO_COUNTEREXAMPLE
        assert af_c2.claim("improving").status == WITNESS_FOUND
        assert af_c2.claim("strongly_improving").status == PROVEN_NO
