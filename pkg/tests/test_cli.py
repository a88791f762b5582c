"""End-to-end tests of the command line through run()."""

import json

import pytest

from main import run
from models.command import CommandConfig, Subcommand

S6_ENTRIES = [["1", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "0", "1"], ["0", "0", "1", "1"]]
E13_TO_E4 = [["e", "0", "1/2", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]]


def invoke(capsys, *argv):
    """Run the CLI and return (exit code, parsed JSON stdout)."""
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


@pytest.fixture
def witness_file(tmp_path):
    """Family document for E13 -> E4."""
    path = tmp_path / "witness.json"
    path.write_text(json.dumps({"hat": E13_TO_E4}), encoding="utf-8")
    return str(path)


class TestClassify:
    """classify, ranks and equiv."""

    def test_system_id(self, capsys):
        """A catalog id classifies to its strict label."""
        code, report = invoke(capsys, "classify", "--form", "S6")
        assert code == 0
        assert report["label"] == "B22(1,1)"
        assert report["ranks"] == [4, 2]
        assert report["system"] == "S6"

    def test_form_file(self, capsys, tmp_path):
        """Form documents are read from disk."""
        path = tmp_path / "form.json"
        path.write_text(json.dumps({"basis": ["L1", "L2", "H", "X2"], "entries": S6_ENTRIES}), encoding="utf-8")
        code, report = invoke(capsys, "classify", "--form", str(path))
        assert code == 0
        assert report["label"] == "B22(1,1)"

    def test_casimir_text(self, capsys):
        """Polynomial text is accepted and matched against the catalog."""
        code, report = invoke(capsys, "classify", "--form", "2*L1*H+2*L2*X^2")
        assert code == 0
        assert report["label"] == "B08"
        assert report["system"] == "E13"
        assert report["witness"] is not None

    def test_ranks(self, capsys):
        """Ranks are re-checked on seeded group elements."""
        code, report = invoke(capsys, "ranks", "--form", "E4", "--seed", "3")
        assert code == 0
        assert (report["rank_B"], report["rank_b"]) == (3, 0)
        assert report["samples_checked"] == 10

    def test_equiv(self, capsys):
        """S5 and E14 share a canonical form; S6 and E18 do not."""
        code, report = invoke(capsys, "equiv", "--source", "S5", "--target", "E14")
        assert code == 0
        assert report["equivalent"]
        code, report = invoke(capsys, "equiv", "--source", "S6", "--target", "E18")
        assert code == 1
        assert not report["equivalent"]


class TestContractions:
    """contract-verify and contract-search."""

    def test_verify_witness_file(self, capsys, witness_file):
        """A valid witness exits 0."""
        code, report = invoke(capsys, "contract-verify", "--source", "E13", "--target", "E4", "--witness", witness_file)
        assert code == 0
        assert report["status"] == "verified_strict"

    def test_reversed_witness(self, capsys, witness_file):
        """The reversed direction is refuted with exit 1."""
        code, report = invoke(capsys, "contract-verify", "--source", "E4", "--target", "E13", "--witness", witness_file)
        assert code == 1
        assert report["status"] == "wrong_target"

    def test_bundled_witness(self, capsys):
        """Without --witness the bundled family is used."""
        code, report = invoke(capsys, "contract-verify", "--source", "S6", "--target", "E18")
        assert code == 0
        assert report["status"] == "verified_strict"

    def test_search_found(self, capsys):
        """E14 -> E4 is found at bound 1."""
        code, report = invoke(capsys, "contract-search", "--source", "E14", "--target", "E4", "--bound", "1")
        assert code == 0
        assert report["found"]
        assert report["verdict"]["status"].startswith("verified")

    def test_search_rank_refuted(self, capsys):
        """A rank increase refutes without searching."""
        code, report = invoke(capsys, "contract-search", "--source", "E4", "--target", "S6")
        assert code == 1
        assert report["certificate"]["kind"] == "rank_B_increase"


class TestCatalogCommands:
    """catalog, structure, realize and stackel."""

    def test_catalog(self, capsys):
        """All systems are listed and the E5 conflict is reported."""
        code, rows = invoke(capsys, "catalog")
        assert code == 0
        assert len(rows) == 15
        e5 = next(row for row in rows if row["id"] == "E5")
        assert e5["label"] == "B11(0,1,1)"
        assert any("not_phase_space_realizable" in note for note in e5["discrepancies"])

    def test_catalog_csv(self, capsys):
        """CSV output has a header and one line per system."""
        assert run(["catalog", "--format", "csv"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("id,casimir,label")
        assert len(lines) == 16

    def test_structure(self, capsys):
        """The Casimir is central in its own algebra."""
        code, report = invoke(capsys, "structure", "--form", "E5", "--k", "2")
        assert code == 0
        assert report["central"]
        assert report["brackets"]["{X,L2}"] == "-4*L1"

    @pytest.mark.parametrize("system", ["S3", "E3", "E5", "E14"])
    def test_realize(self, capsys, system):
        """Bundled realizations verify."""
        code, report = invoke(capsys, "realize", "--source", system)
        assert code == 0
        assert report["K"] == report["expected_K"]

    def test_stackel(self, capsys):
        """The E4 class Casimir matches its record."""
        code, report = invoke(capsys, "stackel", "--source", "E4")
        assert code == 0
        assert report["stackel_class"] == "F"
        assert report["matches_printed"]


class TestErrors:
    """Exit code 2 and the error object."""

    def test_parse_error(self, capsys):
        """Unknown symbols in a Casimir are input errors."""
        code, error = invoke(capsys, "classify", "--form", "L1^2+W")
        assert code == 2
        assert error["error"] == "polynomial_parse_error"

    def test_unknown_subcommand(self, capsys):
        """argparse failures become usage errors."""
        code, error = invoke(capsys, "frobnicate")
        assert code == 2
        assert error["error"] == "usage_error"

    def test_missing_flag(self, capsys):
        """Subcommands name the flag they need."""
        code, error = invoke(capsys, "classify")
        assert code == 2
        assert "--form" in error["message"]

    def test_bound_overflow(self, capsys):
        """Bounds beyond the Laurent exponent limit are refused."""
        code, error = invoke(capsys, "contract-search", "--source", "E14", "--target", "E4", "--bound", "17")
        assert code == 2
        assert error["error"] == "exponent_overflow"

    def test_missing_realization(self, capsys):
        """Systems without a bundled realization are reported."""
        code, error = invoke(capsys, "realize", "--source", "S6")
        assert code == 2
        assert error["error"] == "missing_witness"

    def test_data_directory_override(self, capsys, monkeypatch, tmp_path):
        """QUADALG_DATA points the run at another data directory."""
        monkeypatch.setenv("QUADALG_DATA", str(tmp_path))
        code, error = invoke(capsys, "catalog")
        assert code == 2
        assert error["error"] == "data_file_error"

    def test_command_config(self, capsys):
        """run() also accepts a validated CommandConfig."""
        code = run(CommandConfig(subcommand=Subcommand.CLASSIFY, form="E4"))
        report = json.loads(capsys.readouterr().out)
        assert code == 0
        assert report["label"] == "B07(1)"


@pytest.mark.slow
@pytest.mark.integration
class TestTable6:
    """The full grid through the command line."""

    def test_markdown(self, capsys):
        """Markdown output starts with the symbol grid."""
        assert run(["table6", "--format", "markdown", "--certificates"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("| source \\ target | S6 | E18 |")
        assert "| failures | 0 |" in out
