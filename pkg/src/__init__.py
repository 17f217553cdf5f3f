"""
Laboratorio de series de Osgood-Hartogs: series formales truncadas,
teoría del potencial numérica y diagnósticos de crecimiento
"""

__version__ = "0.1.0"
