"""Utilidades para leer y escribir series, conjuntos muestreados y ledgers en JSON"""
import json
import math
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np

from src.config import FIXTURES_DIR
from src.models.diagnostics import MagnitudeLedger
from src.models.potential import SampleSet
from src.models.series import Series1, Series2

Series = Union[Series1, Series2]


def series_to_json(series: Series) -> Dict:
    """
    Formato {"vars": 1|2, "order": N, "terms": [[i, j?, re, im], ...]}

    Los términos nulos se omiten.
    """
    if isinstance(series, Series1):
        terms = [[i, float(c.real), float(c.imag)]
                 for i, c in enumerate(series.coeffs) if c != 0]
        return {'vars': 1, 'order': series.order, 'terms': terms}
    terms = [[i, j, float(c.real), float(c.imag)] for i, j, c in series.terms()]
    return {'vars': 2, 'order': series.order, 'terms': terms}


def series_from_json(payload: Dict) -> Series:
    """Inverso de series_to_json; valida índices y orden"""
    try:
        nvars = int(payload['vars'])
        order = int(payload['order'])
        terms = payload.get('terms', [])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"Serie JSON mal formada: {exc}") from exc
    if order < 0:
        raise ValueError(f"Orden negativo: {order}")
    if nvars == 1:
        coeffs = np.zeros(order + 1, dtype=complex)
        for term in terms:
            if len(term) != 3:
                raise ValueError(f"Término mal formado para una variable: {term}")
            i = int(term[0])
            if i < 0 or i > order:
                raise ValueError(f"Término x^{i} fuera del orden {order}")
            coeffs[i] = complex(term[1], term[2])
        return Series1(coeffs)
    if nvars == 2:
        parsed = {}
        for term in terms:
            if len(term) != 4:
                raise ValueError(f"Término mal formado para dos variables: {term}")
            i, j = int(term[0]), int(term[1])
            if i < 0 or j < 0 or i + j > order:
                raise ValueError(f"Término x^{i} y^{j} fuera del orden {order}")
            parsed[(i, j)] = complex(term[2], term[3])
        return Series2.from_terms(parsed, order)
    raise ValueError(f"Número de variables no soportado: {nvars}")


def _encode_value(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def sample_set_to_json(E: SampleSet) -> Dict:
    payload = {
        'label': E.label,
        'window': [float(E.window[0]), float(E.window[1])],
        'points': [[float(z.real), float(z.imag)] for z in E.points],
    }
    if E.geometry:
        payload['geometry'] = {k: _encode_value(v) for k, v in E.geometry.items()}
    return payload


def sample_set_from_json(payload: Dict) -> SampleSet:
    """Inverso de sample_set_to_json; sin 'geometry' el conjunto se toma como finito"""
    try:
        points = [complex(re, im) for re, im in payload['points']]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"Conjunto JSON mal formado: {exc}") from exc
    geometry = payload.get('geometry')
    if geometry:
        geometry = {k: complex(*v) if isinstance(v, list) else v for k, v in geometry.items()}
    else:
        geometry = {'kind': 'finite'}
    window = payload.get('window')
    return SampleSet(points, label=payload.get('label', 'E'),
                     window=tuple(window) if window else None, geometry=geometry)


def ledger_to_json(ledger: MagnitudeLedger) -> Dict:
    """Extensión {"ledger": [L_0, ..., L_N]} con null para -inf"""
    return {'ledger': ledger.to_list()}


def ledger_from_json(payload: Dict) -> MagnitudeLedger:
    values = payload.get('ledger')
    if values is None:
        raise ValueError("Falta la clave 'ledger'")
    return MagnitudeLedger.from_logs([-np.inf if v is None else float(v) for v in values])


def instance_to_json(instance) -> Dict:
    """
    Serializa una ExampleInstance: resumen, series con su ledger y extras serie

    Args:
        instance: ExampleInstance de src.models.paperlab

    Returns:
        Diccionario listo para dump_json
    """
    payload = dict(instance.summary())
    payload['g'] = {**series_to_json(instance.g), **ledger_to_json(instance.g_ledger),
                    'verdict': payload['g']}
    payload['h'] = {**series_to_json(instance.h), **ledger_to_json(instance.h_ledger),
                    'verdict': payload['h']}
    for key, value in sorted(instance.extras.items()):
        if isinstance(value, (Series1, Series2)):
            payload[key] = series_to_json(value)
        elif isinstance(value, MagnitudeLedger):
            payload[key] = ledger_to_json(value)
    return payload


def _null_non_finite(value):
    if isinstance(value, dict):
        return {k: _null_non_finite(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_null_non_finite(v) for v in value]
    if isinstance(value, (float, np.floating)) and not math.isfinite(value):
        return None
    return value


def dump_json(payload: Dict, indent: Optional[int] = 2) -> str:
    """
    Serialización determinista (claves ordenadas)

    JSON estricto: -inf, inf y NaN se escriben como null, igual que en el ledger.
    """
    return json.dumps(_null_non_finite(payload), indent=indent, sort_keys=True,
                      default=str, allow_nan=False)


def save_json(payload: Dict, filepath: Union[str, Path]) -> Path:
    path = Path(filepath)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_json(payload) + "\n")
    return path


def load_json(filepath: Union[str, Path]) -> Dict:
    with open(filepath) as f:
        return json.load(f)


def load_series(filepath: Union[str, Path]) -> Series:
    return series_from_json(load_json(filepath))


def load_sample_set(filepath: Union[str, Path]) -> SampleSet:
    return sample_set_from_json(load_json(filepath))


class DataLoader:
    """Clase para cargar los fixtures incluidos en data/fixtures"""

    def __init__(self, data_path: Optional[Path] = None, verbose: bool = False):
        """
        Inicializa el cargador de datos

        Args:
            data_path: Directorio de fixtures (opcional)
            verbose: Imprimir qué se carga
        """
        self.data_path = Path(data_path or FIXTURES_DIR)
        self.verbose = verbose
        self._cache: Dict[str, Dict] = {}

    def _payload(self, name: str) -> Dict:
        if name not in self._cache:
            path = self.data_path / f"{name}.json"
            if self.verbose:
                print(f"Cargando fixture desde: {path}")
            self._cache[name] = load_json(path)
        return self._cache[name]

    def list_fixtures(self) -> List[str]:
        return sorted(p.stem for p in self.data_path.glob("*.json"))

    def get_series(self, name: str) -> Series:
        return series_from_json(self._payload(name))

    def get_sample_set(self, name: str) -> SampleSet:
        return sample_set_from_json(self._payload(name))
