import pytest

from app.config import Settings, get_settings, settings_override


def test_defaults():
    settings = Settings()
    assert settings.refinement_cap == 64
    assert settings.default_cutoff == 64
    assert settings.json_indent == 2


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("HAHN_REFINEMENT_CAP", "7")
    monkeypatch.setenv("HAHN_LOG_LEVEL", "DEBUG")
    settings = Settings()
    assert settings.refinement_cap == 7
    assert settings.log_level == "DEBUG"


def test_override_is_scoped():
    before = get_settings()
    with settings_override(refinement_cap=5, json_indent=0) as scoped:
        assert get_settings() is scoped
        assert scoped.refinement_cap == 5 and scoped.json_indent == 0
        with settings_override(refinement_cap=9):
            assert get_settings().refinement_cap == 9
            assert get_settings().json_indent == 0
        assert get_settings().refinement_cap == 5
    assert get_settings() is before
    assert before.refinement_cap == 64


def test_override_is_restored_after_an_error():
    with pytest.raises(RuntimeError):
        with settings_override(refinement_cap=2):
            raise RuntimeError("boom")
    assert get_settings().refinement_cap == 64
