# Módulos do laboratório de evoluções de Loewner

# Versão
__version__ = '2.0.0'
