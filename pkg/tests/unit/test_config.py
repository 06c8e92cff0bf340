"""
配置管理模組單元測試
"""

import json

import pytest

from src.core.config import (
    DEFAULT_SETTINGS, INTEGER_MINIMUMS, ConfigManager, default_config_file, merge_settings
)
from src.core.constants import DEFAULT_LISP_FUEL, HARNESS_DEFAULTS


def write_config(path, content):
    path.write_text(json.dumps(content), encoding='utf-8')
    return str(path)


class TestConfigManager:
    """ConfigManager 測試類"""

    def test_singleton_pattern(self):
        assert ConfigManager() is ConfigManager()

    def test_load_config_file(self, test_config_file):
        config = ConfigManager(test_config_file)

        assert config.get('harness.trials') == 25
        assert config.get('lisp.fuel') == 5000
        assert config.get('goedel.quantifier_bound') == 4

    def test_missing_file_uses_defaults(self):
        config = ConfigManager('non_existent_file.json')

        assert config.get('harness.trials') == HARNESS_DEFAULTS['trials']
        assert config.get('lisp.fuel') == DEFAULT_LISP_FUEL
        assert config.get('lambda.self_interp_trials') == 50

    def test_env_selects_config_file(self, monkeypatch, test_config_file):
        monkeypatch.setenv('QUOSYN_CONFIG', test_config_file)
        assert default_config_file() == test_config_file
        assert ConfigManager().get('harness.seed') == 3

    def test_set_and_get_nested(self):
        config = ConfigManager('missing.json')

        config.set('nested.key.value', {'data': 123})
        assert config.get('nested.key.value.data') == 123
        assert config.get('non.existent.key', 'default') == 'default'
        # 路徑中途碰到非物件
        assert config.get('lisp.fuel.extra') is None

    def test_save_config(self, tmp_path):
        config_file = tmp_path / "save_test.json"
        config = ConfigManager(str(config_file))

        config.set('lisp.fuel', 42)
        assert config.save() is True

        saved = json.loads(config_file.read_text(encoding='utf-8'))
        assert saved['lisp']['fuel'] == 42
        assert saved['harness'] == HARNESS_DEFAULTS

    def test_save_to_unwritable_path(self, tmp_path):
        config = ConfigManager(str(tmp_path / "no_such_dir" / "config.json"))
        assert config.save() is False

    def test_reload_config(self, tmp_path):
        config_file = tmp_path / "reload_test.json"
        write_config(config_file, {'harness': {'seed': 1}})

        config = ConfigManager(str(config_file))
        assert config.get('harness.seed') == 1

        write_config(config_file, {'harness': {'seed': 2}})
        config.reload()
        assert config.get('harness.seed') == 2

    def test_sections(self, test_config_file):
        config = ConfigManager(test_config_file)

        assert config.harness_config['workers'] == 2
        assert config.section('lambda')['generator_fuel'] == 200
        # 文件中沒有 logging 區段
        assert config.logging_config == DEFAULT_SETTINGS['logging']
        assert config.section('unknown') == {}

    def test_section_is_a_copy(self):
        config = ConfigManager('missing.json')
        config.harness_config['trials'] = -5
        assert config.get('harness.trials') == HARNESS_DEFAULTS['trials']


class TestMergeSettings:

    def test_nested_override(self):
        merged = merge_settings({'a': {'x': 1, 'y': 2}, 'b': 3}, {'a': {'y': 20}})
        assert merged == {'a': {'x': 1, 'y': 20}, 'b': 3}

    def test_scalar_replaces_mapping(self):
        assert merge_settings({'a': {'x': 1}}, {'a': 5}) == {'a': 5}

    def test_base_untouched(self):
        base = {'a': {'x': 1}}
        merge_settings(base, {'a': {'x': 2}})
        assert base == {'a': {'x': 1}}


class TestConfigValidation:
    """配置驗證測試"""

    def test_invalid_json_handling(self, tmp_path):
        config_file = tmp_path / "invalid.json"
        config_file.write_text("invalid json content")

        config = ConfigManager(str(config_file))
        assert config.get('lambda.fuel') == 100_000

    def test_top_level_must_be_object(self, tmp_path):
        config = ConfigManager(write_config(tmp_path / "list.json", [1, 2]))
        assert config.get('harness.trials') == HARNESS_DEFAULTS['trials']

    def test_partial_config_keeps_defaults(self, tmp_path):
        config = ConfigManager(write_config(tmp_path / "partial.json", {"lisp": {"fuel": 7}}))

        assert config.get('lisp.fuel') == 7
        assert config.get('harness.trials') == HARNESS_DEFAULTS['trials']
        assert config.get('goedel.scan_limit') == DEFAULT_SETTINGS['goedel']['scan_limit']

    @pytest.mark.parametrize("key,value", [
        ("harness.max_size", 0),
        ("harness.workers", 0),
        ("harness.trials", -1),
        ("lisp.fuel", "lots"),
        ("lambda.fuel", 2.5),
        ("goedel.scan_limit", True),
    ])
    def test_invalid_integer_falls_back(self, tmp_path, key, value):
        section, name = key.split('.')
        config = ConfigManager(write_config(tmp_path / "bad.json", {section: {name: value}}))

        assert config.get(key) == DEFAULT_SETTINGS[section][name]
        assert config.get_int(key) == DEFAULT_SETTINGS[section][name]

    def test_invalid_value_is_logged(self, tmp_path, caplog):
        path = write_config(tmp_path / "bad.json", {"lisp": {"fuel": -3}})
        with caplog.at_level('WARNING', logger='src.core.config'):
            ConfigManager(path)
        assert "lisp.fuel" in caplog.text

    def test_section_not_object(self, tmp_path):
        config = ConfigManager(write_config(tmp_path / "bad.json", {"harness": "fast"}))
        assert config.harness_config == HARNESS_DEFAULTS

    def test_boundary_values_accepted(self, tmp_path):
        content = {"harness": {"trials": 0, "max_size": 1}, "lisp": {"fuel": 0}}
        config = ConfigManager(write_config(tmp_path / "edge.json", content))

        assert config.get_int('harness.trials') == 0
        assert config.get_int('harness.max_size') == 1
        assert config.get_int('lisp.fuel') == 0

    def test_get_int_ignores_invalid_set(self):
        config = ConfigManager('missing.json')
        config.set('lambda.fuel', 'many')
        assert config.get_int('lambda.fuel') == DEFAULT_SETTINGS['lambda']['fuel']

    def test_get_int_rejects_unknown_key(self):
        with pytest.raises(KeyError):
            ConfigManager('missing.json').get_int('logging.level')

    def test_every_minimum_has_default(self):
        for key in INTEGER_MINIMUMS:
            section, name = key.split('.')
            assert DEFAULT_SETTINGS[section][name] >= INTEGER_MINIMUMS[key]

    @pytest.mark.parametrize("key", ["harness", "lisp", "lambda", "goedel", "logging"])
    def test_default_sections(self, key):
        assert isinstance(ConfigManager('missing.json').get(key), dict)
