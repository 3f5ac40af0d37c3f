import pytest

from modules.core.config import DEFAULT_CONFIG


@pytest.fixture
def config():
    """Configuração padrão sem barra de progresso, isolada por teste."""
    settings = DEFAULT_CONFIG.copy()
    settings['progress'] = False
    return settings


@pytest.fixture
def small_mc_config(config):
    """Grade angular fixa e lotes pequenos para execuções Monte Carlo rápidas."""
    config.update({'n_theta': 32, 'adaptive_theta': False, 'chunk_size': 16, 'dt': 0.02})
    return config
