"""Fábricas de conjuntos muestreados con densidad declarada"""
import math
from typing import List, Optional, Sequence

import numpy as np

from src.config import SAMPLING_DENSITY
from src.models.potential import SampleSet


def _count(length: float, density: float, count: Optional[int], minimum: int = 2) -> int:
    if count is not None:
        if count < 1:
            raise ValueError(f"Número de puntos no positivo: {count}")
        return int(count)
    return max(minimum, int(math.ceil(density * length)))


def circle(radius: float = 1.0, center: complex = 0j, density: float = SAMPLING_DENSITY,
           count: Optional[int] = None, label: Optional[str] = None) -> SampleSet:
    """Círculo |z - center| = radius con puntos equiespaciados desde el ángulo 0"""
    if radius <= 0:
        raise ValueError(f"Radio no positivo: {radius}")
    m = _count(2 * math.pi * radius, density, count, minimum=3)
    pts = center + radius * np.exp(2j * np.pi * np.arange(m) / m)
    return SampleSet(pts, label=label or f"circle(r={radius:g})",
                     geometry={'kind': 'circle', 'center': complex(center), 'radius': float(radius)})


def disk(radius: float = 1.0, center: complex = 0j, density: float = SAMPLING_DENSITY,
         rings: int = 4, label: Optional[str] = None) -> SampleSet:
    """
    Disco cerrado: la frontera con la densidad pedida más anillos interiores y el centro

    Args:
        radius: Radio
        center: Centro
        density: Puntos por unidad de longitud de frontera
        rings: Número de anillos (incluida la frontera)
        label: Etiqueta

    Returns:
        SampleSet con geometría 'disk'
    """
    if radius <= 0:
        raise ValueError(f"Radio no positivo: {radius}")
    parts = [np.array([complex(center)])]
    for level in range(1, rings + 1):
        r = radius * level / rings
        m = _count(2 * math.pi * r, density, None, minimum=3)
        parts.append(center + r * np.exp(2j * np.pi * np.arange(m) / m))
    return SampleSet(np.concatenate(parts), label=label or f"disk(r={radius:g})",
                     geometry={'kind': 'disk', 'center': complex(center), 'radius': float(radius)})


def segment(a: complex = -1.0, b: complex = 1.0, density: float = SAMPLING_DENSITY,
            count: Optional[int] = None, label: Optional[str] = None) -> SampleSet:
    """Segmento [a, b] con extremos incluidos"""
    a, b = complex(a), complex(b)
    if a == b:
        raise ValueError("Segmento degenerado")
    m = _count(abs(b - a), density, count) + (0 if count is not None else 1)
    t = np.linspace(0.0, 1.0, m)
    pts = a + t * (b - a)
    return SampleSet(pts, label=label or f"segment({a:g},{b:g})",
                     geometry={'kind': 'interval', 'a': a, 'b': b})


def arc(theta0: float, theta1: float, radius: float = 1.0, density: float = SAMPLING_DENSITY,
        count: Optional[int] = None, label: Optional[str] = None) -> SampleSet:
    """Arco {radius e^{i t}: theta0 <= t <= theta1} con extremos incluidos"""
    if theta1 <= theta0:
        raise ValueError(f"Arco vacío: [{theta0}, {theta1}]")
    m = _count(radius * (theta1 - theta0), density, count) + (0 if count is not None else 1)
    t = np.linspace(theta0, theta1, m)
    return SampleSet(radius * np.exp(1j * t), label=label or f"arc({theta0:.3g},{theta1:.3g})",
                     geometry={'kind': 'arc', 'center': 0j, 'radius': float(radius),
                               'theta0': float(theta0), 'theta1': float(theta1)})


def nested_arcs(angles: Sequence[float], radius: float = 1.0, step: Optional[float] = None) -> List[SampleSet]:
    """
    Arcos [0, angle] anidados sobre una misma malla angular

    Todos los arcos comparten la malla de paso step, así que cada uno
    contiene literalmente al anterior.
    """
    step = step or 1.0 / (SAMPLING_DENSITY * radius)
    out = []
    for angle in sorted(angles):
        m = int(math.floor(angle / step)) + 1
        t = step * np.arange(m)
        out.append(SampleSet(radius * np.exp(1j * t), label=f"arc(0,{angle:.3g})",
                             geometry={'kind': 'arc', 'center': 0j, 'radius': float(radius),
                                       'theta0': 0.0, 'theta1': float(t[-1])}))
    return out


def annulus(r0: float, r1: float, density: float = SAMPLING_DENSITY, rings: Optional[int] = None,
            label: Optional[str] = None) -> SampleSet:
    """Anillo r0 <= |z| <= r1 muestreado por círculos concéntricos"""
    if not 0 < r0 < r1:
        raise ValueError(f"Anillo inválido: {r0}, {r1}")
    rings = rings or max(2, int(math.ceil(4 * (r1 - r0))) + 1)
    parts = []
    for r in np.linspace(r0, r1, rings):
        m = _count(2 * math.pi * r, density, None, minimum=3)
        parts.append(r * np.exp(2j * np.pi * np.arange(m) / m))
    return SampleSet(np.concatenate(parts), label=label or f"annulus({r0:g},{r1:g})",
                     window=(float(r0), float(r1)),
                     geometry={'kind': 'annulus', 'center': 0j, 'r0': float(r0), 'r1': float(r1)})


def finite(points: Sequence[complex], label: Optional[str] = None) -> SampleSet:
    """Conjunto finito (capacidad 0)"""
    pts = np.asarray(points, dtype=complex)
    return SampleSet(pts, label=label or f"finite({len(pts)})", geometry={'kind': 'finite'})


def angles(count: int, start: float = 0.0, stop: float = 2 * math.pi) -> SampleSet:
    """Ángulos equiespaciados en [start, stop) como conjunto real"""
    if count < 1:
        raise ValueError(f"Número de ángulos no positivo: {count}")
    theta = start + (stop - start) * np.arange(count) / count
    return SampleSet(theta.astype(complex), label=f"angles({count})",
                     geometry={'kind': 'angles', 'start': float(start), 'stop': float(stop)})


def window_family(E: SampleSet, levels: Sequence[int]) -> List[SampleSet]:
    """E_n = E ∩ {1/n <= |s| <= n} para cada nivel, omitiendo los vacíos"""
    out = []
    for n in levels:
        mask = (np.abs(E.points) >= 1.0 / n) & (np.abs(E.points) <= n)
        if mask.any():
            out.append(E.restrict_window(1.0 / n, float(n)))
    return out
