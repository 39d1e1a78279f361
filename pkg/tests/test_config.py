# ABOUTME: Tests for application configuration
# ABOUTME: Validates numerical defaults and the environment-driven settings

import os
from importlib import reload
from unittest.mock import patch

from app.config import Config


def test_default_method_is_rk4():
    """Integration defaults to the classical fourth-order method"""
    assert Config.DEFAULT_METHOD == "rk4"
    assert Config.DEFAULT_T0 == 0.0


def test_classification_thresholds():
    """Default thresholds used by the growth classifier"""
    assert Config.CONSTANCY_THRESHOLD == 0.05
    assert Config.R_SQUARED_CUTOFF == 0.99
    assert Config.MIN_EXP_RATE == 0.1


def test_study_defaults():
    """Studies need at least three levels and a positive epsilon"""
    assert Config.MIN_LEVELS == 3
    assert Config.DEFAULT_LEVELS >= Config.MIN_LEVELS
    assert Config.DEFAULT_EPSILON > 0
    assert Config.K_STABILITY_LIMIT == 2.0


def test_reference_tolerances():
    """Reference certificate must sit well below measured errors"""
    assert Config.REFERENCE_RTOL == 1e-10
    assert 0 < Config.CERTIFICATE_FRACTION < 1
    assert Config.REFERENCE_MAX_HALVINGS >= 1


class TestEnvironmentConfig:
    """Tests for settings read from the environment"""

    def test_study_workers_from_environment(self):
        """STUDY_WORKERS is read from environment"""
        import app.config

        with patch.dict(os.environ, {"STUDY_WORKERS": "4"}):
            reload(app.config)
            assert app.config.Config.STUDY_WORKERS == 4
        reload(app.config)

    def test_study_workers_default_sequential(self):
        """Levels run sequentially unless configured"""
        import app.config

        with patch("dotenv.load_dotenv", lambda *args, **kwargs: None):
            with patch.dict(os.environ, {}, clear=True):
                reload(app.config)
                assert app.config.Config.STUDY_WORKERS == 1
        reload(app.config)

    def test_log_level_uppercased(self):
        """LOG_LEVEL accepts any case"""
        import app.config

        with patch.dict(os.environ, {"LOG_LEVEL": "debug"}):
            reload(app.config)
            assert app.config.Config.LOG_LEVEL == "DEBUG"
        reload(app.config)
