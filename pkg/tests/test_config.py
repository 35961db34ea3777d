import pytest

from equilib.cli.config import load_config, parse_config
from equilib.core.exceptions import ConfigError
from equilib.core.run_manager import RunManager

VALID = """schema_version: 1
system:
  species:
    - {name: A, nu: -1}
    - {name: B, nu: 1}
regime: idealized
model:
  lam: -1000.0
  eps: 2000.0
"""


class TestParseConfig:
    def test_valid(self):
        document = parse_config(VALID)
        assert document.data["regime"] == "idealized"
        assert document.section("model")["eps"] == 2000.0
        assert document.section("trace") == {}

    def test_unknown_key_reports_line(self):
        with pytest.raises(ConfigError) as info:
            parse_config(VALID + "  colour: red\n")
        assert info.value.field == "model.colour"
        assert info.value.line == 10
        assert "第 10 行" in str(info.value)

    def test_unknown_top_level_section(self):
        with pytest.raises(ConfigError) as info:
            parse_config(VALID + "plots: {}\n")
        assert info.value.field == "plots"

    def test_wildcard_section(self):
        document = parse_config(VALID + "errors:\n  A: {p_star: 9.0e4}\n")
        assert document.section("errors")["A"]["p_star"] == 9.0e4

    def test_wildcard_children_still_checked(self):
        with pytest.raises(ConfigError) as info:
            parse_config(VALID + "errors:\n  A: {pstar: 9.0e4}\n")
        assert info.value.field == "errors.A.pstar"

    def test_schema_version(self):
        with pytest.raises(ConfigError) as info:
            parse_config(VALID.replace("schema_version: 1", "schema_version: 2"))
        assert info.value.field == "schema_version"
        assert info.value.line == 1

    def test_yaml_syntax_error(self):
        with pytest.raises(ConfigError) as info:
            parse_config("schema_version: 1\nsystem: [unclosed\n")
        assert info.value.line is not None

    def test_missing_regime(self):
        with pytest.raises(ConfigError) as info:
            parse_config(VALID.replace("regime: idealized\n", ""))
        assert info.value.field == "regime"

    def test_top_level_must_be_mapping(self):
        with pytest.raises(ConfigError):
            parse_config("- 1\n- 2\n")


class TestLineLookup:
    def test_species_field(self):
        document = parse_config(VALID)
        assert document.line_of("species.B.nu") == 5
        assert document.line_of("species.Z.nu") == 4

    def test_falls_back_to_parent(self):
        document = parse_config(VALID)
        # 块映射的起始行是第一个键所在的行
        assert document.line_of("model.sigma") == 8
        assert document.line_of(None) is None

    def test_locate_adds_line(self):
        document = parse_config(VALID)
        located = document.locate(ConfigError("必须 > 0", field="model.eps"))
        assert located.line == 9
        assert str(located) == "model.eps: 必须 > 0 (第 9 行)"

    def test_locate_keeps_existing_line(self):
        document = parse_config(VALID)
        error = ConfigError("x", field="model.eps", line=3)
        assert document.locate(error) is error


class TestLoadConfig:
    def test_resolve_relative_to_file(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text(VALID, encoding="utf-8")
        document = load_config(str(path))
        assert document.resolve("out.csv") == tmp_path / "out.csv"

    def test_builds_run_manager(self):
        manager = RunManager(parse_config(VALID).data)
        assert manager.system.names == ("A", "B")
        assert manager.model.eps == 2000.0
        assert manager.summary()["regime"] == "idealized"

    def test_lam_and_raw_lambda_conflict(self):
        data = parse_config(VALID + "  lambda_raw: 5.0\n").data
        with pytest.raises(ConfigError, match="lambda_raw"):
            RunManager(data)
