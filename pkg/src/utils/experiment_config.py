"""
Configuración de una ejecución: valores por defecto, archivo JSON y flags de CLI

Orden de precedencia: defaults de src.config < --config < flags explícitos.
"""
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Dict, Optional, Union

from src.config import DEFAULT_ORDER, DEFAULT_SEED, VERDICT_THRESHOLDS
from src.utils.data_loader import load_json

OUTPUT_FORMATS = ('json', 'csv')


@dataclass
class ExperimentConfig:
    """Parámetros compartidos por todos los subcomandos"""
    seed: int = DEFAULT_SEED
    order: int = DEFAULT_ORDER
    format: str = 'json'
    out: Optional[str] = None
    workers: int = 1
    thresholds: Dict[str, float] = field(default_factory=lambda: dict(VERDICT_THRESHOLDS))

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        # los ledgers logarítmicos admiten órdenes mayores que MAX_ORDER
        if self.order < 0:
            raise ValueError(f"Orden negativo: {self.order}")
        if self.format not in OUTPUT_FORMATS:
            raise ValueError(f"Formato desconocido: {self.format} (opciones: {', '.join(OUTPUT_FORMATS)})")
        if self.workers < 1:
            raise ValueError(f"Número de workers no positivo: {self.workers}")
        unknown = set(self.thresholds) - set(VERDICT_THRESHOLDS)
        if unknown:
            raise ValueError(f"Umbrales desconocidos: {sorted(unknown)}")

    @classmethod
    def from_sources(cls, config_path: Optional[Union[str, Path]] = None,
                     overrides: Optional[Dict] = None) -> 'ExperimentConfig':
        """
        Combina defaults, archivo JSON y overrides (los None se ignoran)

        Args:
            config_path: Archivo JSON con cualquier subconjunto de campos
            overrides: Valores de la línea de comandos

        Returns:
            ExperimentConfig validada
        """
        known = {f.name for f in fields(cls)}
        values: Dict = {}
        if config_path is not None:
            payload = load_json(config_path)
            if not isinstance(payload, dict):
                raise ValueError(f"El archivo de configuración debe ser un objeto JSON: {config_path}")
            unknown = set(payload) - known
            if unknown:
                raise ValueError(f"Claves de configuración desconocidas: {sorted(unknown)}")
            values.update(payload)
        for key, value in (overrides or {}).items():
            if key in known and value is not None:
                values[key] = value
        thresholds = dict(VERDICT_THRESHOLDS)
        thresholds.update(values.pop('thresholds', {}) or {})
        return cls(thresholds=thresholds, **values)

    def to_dict(self) -> Dict:
        """
        Cabecera reproducible incluida en cada reporte

        Excluye workers y out, que no alteran el cuerpo del reporte.
        """
        return {k: v for k, v in asdict(self).items() if k not in ('workers', 'out')}
