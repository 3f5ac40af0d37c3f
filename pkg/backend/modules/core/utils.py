import os
import csv
import json
import logging
from datetime import datetime
from fractions import Fraction

import psutil

from .. import __version__

BASIC_FORMAT = "%(asctime)-15s | %(name)-12s %(levelname)-5s: %(message)s"

_MASK64 = (1 << 64) - 1


def ensure_directory_exists(directory):
    """
    Garante que um diretório exista, criando-o se necessário.

    Args:
        directory (str): Caminho do diretório a ser verificado/criado
    """
    if directory and not os.path.exists(directory):
        os.makedirs(directory)


def get_timestamp():
    """
    Retorna um timestamp formatado para uso em nomes de arquivos ou logs.

    Returns:
        str: Timestamp formatado
    """
    return datetime.now().strftime("%Y-%m-%d_%H-%M-%S")


def setup_logging(level=logging.INFO, log_dir=None):
    """
    Configura o logger raiz uma única vez.

    Args:
        level (int): Nível de log
        log_dir (str, optional): Se fornecido, grava também em arquivo com timestamp

    Returns:
        logging.Logger: Logger raiz do laboratório
    """
    logging.basicConfig(format=BASIC_FORMAT, level=level)
    root = logging.getLogger('loewner')
    root.setLevel(level)
    if log_dir:
        ensure_directory_exists(log_dir)
        handler = logging.FileHandler(os.path.join(log_dir, f"loewner_{get_timestamp()}.log"), encoding='utf-8')
        handler.setFormatter(logging.Formatter(BASIC_FORMAT))
        root.addHandler(handler)
    return root


def get_logger(name):
    """Retorna o logger nomeado de um componente (ex.: 'sim' -> 'loewner.sim')."""
    return logging.getLogger(f'loewner.{name}')


def mix64(master_seed, index):
    """
    Deriva a semente de 64 bits da amostra `index` a partir da semente mestre.

    Usa o finalizador splitmix64, de modo que o resultado depende apenas de
    (master_seed, index) e não da ordem de execução das threads.

    Args:
        master_seed (int): Semente mestre
        index (int): Índice da amostra

    Returns:
        int: Semente derivada em [0, 2^64)
    """
    z = (int(master_seed) + (int(index) + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def parse_rational(text):
    """
    Converte 'a/b', inteiros ou decimais em Fraction exata.

    Args:
        text (str | int | Fraction): Valor a converter

    Returns:
        Fraction: Valor racional exato

    Raises:
        ValueError: Se o texto não representa um racional
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    return Fraction(str(text).strip())


def fraction_to_string(value):
    """Formata um racional exato como 'num/den' (ou 'num' se inteiro)."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def resolve_threads(config=None, override=None):
    """
    Determina o número de workers: flag > LOEWNER_THREADS/config > CPUs lógicas.

    Args:
        config (dict, optional): Configurações
        override (int, optional): Valor vindo da linha de comando

    Returns:
        int: Número de workers (>= 1)
    """
    if override:
        return max(1, int(override))
    env_threads = os.environ.get('LOEWNER_THREADS')
    if env_threads and env_threads.strip().isdigit():
        return max(1, int(env_threads))
    if config is not None and config.get('threads'):
        return max(1, int(config['threads']))
    return max(1, psutil.cpu_count(logical=True) or 1)


def _format_cell(value):
    # repr garante ida e volta exata de floats
    if isinstance(value, float):
        return repr(float(value))
    if isinstance(value, Fraction):
        return fraction_to_string(value)
    return str(value)


def write_csv(path, columns, rows, metadata=None):
    """
    Grava um CSV com bloco de metadados em linhas de comentário.

    Args:
        path (str): Caminho do arquivo
        columns (list): Nomes das colunas
        rows (iterable): Linhas (sequências) de valores
        metadata (dict, optional): Parâmetros da execução

    Returns:
        tuple: (sucesso, caminho do arquivo ou mensagem de erro)
    """
    try:
        ensure_directory_exists(os.path.dirname(os.path.abspath(path)))
        header = {'tool_version': __version__}
        header.update(metadata or {})
        with open(path, 'w', newline='', encoding='utf-8') as f:
            for key in sorted(header):
                f.write(f"# {key}={_format_cell(header[key])}\n")
            writer = csv.writer(f, delimiter=',', lineterminator='\n')
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_format_cell(v) for v in row])
        return True, path
    except OSError as e:
        return False, f"Erro ao gravar CSV: {str(e)}"


def write_json(path, payload, metadata=None):
    """
    Grava um relatório JSON com bloco 'metadata' (parâmetros e versão).

    Args:
        path (str): Caminho do arquivo
        payload (dict): Conteúdo do relatório
        metadata (dict, optional): Parâmetros da execução

    Returns:
        tuple: (sucesso, caminho do arquivo ou mensagem de erro)
    """
    try:
        ensure_directory_exists(os.path.dirname(os.path.abspath(path)))
        document = dict(payload)
        header = {'tool_version': __version__}
        header.update(metadata or {})
        document['metadata'] = header
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(document, f, indent=2, sort_keys=True, default=_json_default)
            f.write('\n')
        return True, path
    except (OSError, TypeError) as e:
        return False, f"Erro ao gravar JSON: {str(e)}"


def _json_default(value):
    if isinstance(value, Fraction):
        return fraction_to_string(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    if hasattr(value, 'tolist'):
        return value.tolist()
    if hasattr(value, 'to_dict'):
        return value.to_dict()
    return str(value)
