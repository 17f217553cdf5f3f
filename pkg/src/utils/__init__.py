"""
Utilidades: fábricas de conjuntos muestreados, codecs JSON y configuración de experimentos
"""

from .data_loader import DataLoader
from .experiment_config import ExperimentConfig

__all__ = ['DataLoader', 'ExperimentConfig']
