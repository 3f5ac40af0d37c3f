import os
import json
import logging

logger = logging.getLogger('loewner.config')

# Arquivo padrão ao lado de app.py
DEFAULT_CONFIG_FILE = os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..', 'config.json'))

# Configurações padrão
DEFAULT_CONFIG = {
    # Integração da EDO de Loewner
    'dt': 0.01,
    'horizon_base': 10.0,
    'horizon_log_factor': 5.0,
    'min_substeps': 4,
    'max_substeps': 4096,
    'substep_fraction': 0.02,
    'singularity_floor': 1e-9,
    # Quadratura angular e regressão
    'n_theta': 256,
    'theta_per_gap': 8.0,
    'adaptive_theta': True,
    'max_theta': 4096,
    'regression_window': 0.1,
    # Controle de qualidade Monte Carlo
    'max_discard_rate': 0.01,
    'max_rel_stderr': 0.25,
    'chunk_size': 1024,
    'max_chunk_elements': 65536,
    'threads': None,
    'progress': False,
    # Verificações numéricas
    'evaluation_margin': 1e-3,
    'series_tolerance': 1e-17,
    'series_max_terms': 100000,
    'one_minus_x_switch': 0.75,
    'quad_limit': 2000,
    'bisection_xtol': 1e-13,
    # Saída
    'output_dir': 'output',
    'log_dir': None,
}


class ConfigManager:
    def __init__(self, config_file=None):
        """
        Inicializa o gerenciador de configurações.

        Args:
            config_file: Caminho para o arquivo de configuração. Se None, usa backend/config.json.
        """
        self.config_file = config_file
        if self.config_file is None:
            self.config_file = DEFAULT_CONFIG_FILE
        self.config = self.load_config()

    def load_config(self):
        """
        Carrega as configurações do arquivo, completando com as padrões.

        Returns:
            dict: Configurações carregadas
        """
        config = DEFAULT_CONFIG.copy()

        try:
            if os.path.exists(self.config_file):
                with open(self.config_file, 'r', encoding='utf-8') as f:
                    file_config = json.load(f)
                # Ignora chaves desconhecidas para não mascarar erros de digitação
                for key, value in file_config.items():
                    if key in DEFAULT_CONFIG:
                        config[key] = value
                    else:
                        logger.warning("Chave de configuração desconhecida ignorada: %s", key)
        except (OSError, ValueError) as e:
            logger.error("Erro ao carregar configurações: %s", e)

        # Variável de ambiente tem precedência sobre o arquivo
        env_threads = os.environ.get('LOEWNER_THREADS')
        if env_threads:
            try:
                config['threads'] = int(env_threads)
            except ValueError:
                logger.warning("LOEWNER_THREADS inválido: %s", env_threads)

        return config

    def save_config(self, config=None):
        """
        Salva as configurações no arquivo.

        Args:
            config: Configurações a serem salvas. Se None, usa as configurações atuais.

        Returns:
            bool: True se as configurações foram salvas com sucesso, False caso contrário.
        """
        if config is not None:
            self.config = config

        try:
            with open(self.config_file, 'w', encoding='utf-8') as f:
                json.dump(self.config, f, indent=4)
            return True
        except OSError as e:
            logger.error("Erro ao salvar configurações: %s", e)
            return False

    def get_config(self):
        """
        Retorna as configurações atuais.

        Returns:
            dict: Configurações atuais
        """
        return self.config

    def update_config(self, new_config):
        """
        Atualiza as configurações com novos valores (sem gravar em disco).

        Args:
            new_config: Novas configurações a serem mescladas com as atuais

        Returns:
            dict: Configurações resultantes
        """
        self.config.update({k: v for k, v in new_config.items() if v is not None})
        return self.config

    def reset_to_default(self):
        """
        Redefine as configurações para os valores padrão.

        Returns:
            bool: True se as configurações foram redefinidas com sucesso, False caso contrário.
        """
        self.config = DEFAULT_CONFIG.copy()
        return self.save_config()


def get_setting(config, key):
    """Lê uma chave de um dicionário de configuração com fallback para o padrão."""
    if config is None:
        return DEFAULT_CONFIG[key]
    value = config.get(key, DEFAULT_CONFIG[key])
    return DEFAULT_CONFIG[key] if value is None and DEFAULT_CONFIG[key] is not None else value
