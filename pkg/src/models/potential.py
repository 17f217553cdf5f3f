"""
Teoría del potencial numérica: conjuntos muestreados, puntos de Leja y Fekete,
diámetro transfinito, funciones de Green y la desigualdad de Bernstein
"""
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from sklearn.linear_model import LinearRegression

from src.config import (
    BERNSTEIN_CIRCLE_POINTS,
    DEFAULT_LEJA_POINTS,
    EXTRAPOLATION_MIN_K,
    FEKETE_MAX_CANDIDATES,
    FEKETE_MAX_POINTS,
    GREEN_ASYMPTOTIC_FACTOR,
    GREEN_EMPIRICAL_POINTS,
    MONOTONE_NOISE,
    RANDOM_STATE,
)


class SampleSet:
    """
    Muestra finita de un conjunto cerrado E del plano complejo

    Args:
        points: Puntos distintos (complejos)
        label: Etiqueta del conjunto
        window: (módulo mínimo, módulo máximo); por defecto el rango de la muestra
        geometry: Descripción exacta opcional, p.ej. {'kind': 'interval', 'a': -2, 'b': 2}
    """

    __slots__ = ('_points', 'label', 'window', 'geometry')

    def __init__(
        self,
        points: Sequence[complex],
        label: str = "E",
        window: Optional[Tuple[float, float]] = None,
        geometry: Optional[Dict] = None,
    ):
        pts = np.asarray(points, dtype=complex).ravel().copy()
        if len(pts) == 0:
            raise ValueError(f"Conjunto vacío: {label}")
        if not np.all(np.isfinite(pts)):
            raise ValueError(f"Puntos no finitos en {label}")
        if len(np.unique(pts)) != len(pts):
            raise ValueError(f"Puntos repetidos en {label}")
        moduli = np.abs(pts)
        if window is None:
            window = (float(moduli.min()), float(moduli.max()))
        else:
            lo, hi = float(window[0]), float(window[1])
            tol = 1e-12 * max(1.0, hi)
            if np.any(moduli < lo - tol) or np.any(moduli > hi + tol):
                raise ValueError(f"Puntos fuera de la ventana {window} en {label}")
            window = (lo, hi)
        pts.setflags(write=False)
        self._points = pts
        self.label = label
        self.window = window
        self.geometry = dict(geometry) if geometry else None

    @property
    def points(self) -> np.ndarray:
        return self._points

    def __len__(self) -> int:
        return len(self._points)

    def __repr__(self) -> str:
        return f"SampleSet({self.label!r}, n={len(self)}, window={self.window})"

    @property
    def kind(self) -> Optional[str]:
        return self.geometry['kind'] if self.geometry else None

    @property
    def is_finite(self) -> bool:
        """Conjunto finito como tal (capacidad 0), no muestra de un continuo"""
        return self.kind == 'finite'

    @property
    def max_modulus(self) -> float:
        return float(np.abs(self._points).max())

    @property
    def diameter(self) -> float:
        pts = self._points
        best = 0.0
        for start in range(0, len(pts), 1024):
            block = pts[start:start + 1024]
            best = max(best, float(np.abs(block[:, None] - pts[None, :]).max()))
        return best

    def mapped(self, fn: Callable[[np.ndarray], np.ndarray], label: Optional[str] = None,
               geometry: Optional[Dict] = None) -> 'SampleSet':
        """Aplica fn a los puntos (sin geometría salvo que se indique)"""
        return SampleSet(fn(self._points), label=label or self.label, geometry=geometry)

    def scaled(self, factor: complex) -> 'SampleSet':
        return SampleSet(self._points * factor, label=f"{self.label}*{factor}",
                         geometry=_scale_geometry(self.geometry, factor))

    def rotated(self, theta: float) -> 'SampleSet':
        return self.scaled(complex(math.cos(theta), math.sin(theta)))

    def restrict_window(self, r0: float, r1: float) -> 'SampleSet':
        """E ∩ {r0 <= |s| <= r1}"""
        moduli = np.abs(self._points)
        keep = self._points[(moduli >= r0) & (moduli <= r1)]
        kind = 'finite' if self.is_finite else None
        return SampleSet(keep, label=f"{self.label}[{r0:g},{r1:g}]", window=(r0, r1),
                         geometry={'kind': kind} if kind else None)

    def contains_all(self, other: 'SampleSet', decimals: int = 12) -> bool:
        """¿Todos los puntos de other están en esta muestra?"""
        mine = set(zip(np.round(self._points.real, decimals), np.round(self._points.imag, decimals)))
        theirs = zip(np.round(other.points.real, decimals), np.round(other.points.imag, decimals))
        return all(p in mine for p in theirs)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({'re': self._points.real, 'im': self._points.imag})


def _scale_geometry(geometry: Optional[Dict], factor: complex) -> Optional[Dict]:
    if not geometry:
        return None
    g = dict(geometry)
    kind = g['kind']
    factor = complex(factor)
    if kind in ('disk', 'circle', 'annulus', 'arc'):
        g['center'] = complex(g.get('center', 0)) * factor
        for key in ('radius', 'r0', 'r1'):
            if key in g:
                g[key] = g[key] * abs(factor)
        if kind == 'arc':
            shift = math.atan2(factor.imag, factor.real)
            g['theta0'] = g['theta0'] + shift
            g['theta1'] = g['theta1'] + shift
    elif kind == 'interval':
        g['a'] = complex(g['a']) * factor
        g['b'] = complex(g['b']) * factor
    return g


# ---------------------------------------------------------------
# Leja y Fekete
# ---------------------------------------------------------------

@dataclass(frozen=True)
class LejaSequence:
    """
    Secuencia greedy z_0..z_{n-1} con logprods[k] = sum_{j<k} log|z_k - z_j|
    """
    points: np.ndarray
    indices: Tuple[int, ...]
    logprods: np.ndarray

    def __len__(self) -> int:
        return len(self.points)

    def recompute_logprods(self) -> np.ndarray:
        out = np.zeros(len(self.points))
        for k in range(1, len(self.points)):
            out[k] = np.sum(np.log(np.abs(self.points[k] - self.points[:k])))
        return out

    def is_greedy_over(self, E: SampleSet, atol: float = 1e-9) -> bool:
        """Re-verifica que cada z_k maximiza el producto de distancias sobre E"""
        cand = E.points
        acc = np.zeros(len(cand))
        for k in range(1, len(self.points)):
            with np.errstate(divide='ignore'):
                acc = acc + np.log(np.abs(cand - self.points[k - 1]))
            if self.logprods[k] < np.max(acc) - atol:
                return False
        return True

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'k': np.arange(len(self.points)),
            're': self.points.real,
            'im': self.points.imag,
            'logprod': self.logprods,
        })


def leja_points(E: SampleSet, n: int, start: Optional[complex] = None) -> LejaSequence:
    """
    Puntos de Leja greedy sobre los candidatos de E

    Args:
        E: Conjunto muestreado
        n: Número de puntos
        start: Punto inicial (se usa el candidato más cercano); por defecto el de mayor módulo

    Returns:
        LejaSequence determinista (empates: menor índice)
    """
    cand = E.points
    if n < 1 or n > len(cand):
        raise ValueError(f"n = {n} fuera de 1..{len(cand)} (número de candidatos)")
    if start is None:
        idx = int(np.argmax(np.abs(cand)))
    else:
        idx = int(np.argmin(np.abs(cand - complex(start))))

    chosen = [idx]
    logprods = [0.0]
    acc = np.zeros(len(cand))
    for _ in range(1, n):
        with np.errstate(divide='ignore'):
            acc += np.log(np.abs(cand - cand[chosen[-1]]))
        acc[chosen] = -np.inf
        idx = int(np.argmax(acc))
        chosen.append(idx)
        logprods.append(float(acc[idx]))

    return LejaSequence(points=cand[chosen].copy(), indices=tuple(chosen),
                        logprods=np.array(logprods))


@dataclass(frozen=True)
class DiameterEstimate:
    """
    Estimación del diámetro transfinito

    sequence contiene d_2..d_n de los prefijos de Leja; capacity es el límite
    extrapolado (0 para conjuntos finitos).
    """
    n: int
    d_n: float
    capacity: float
    sequence: pd.DataFrame
    leja: LejaSequence
    finite: bool = False

    def __float__(self) -> float:
        return self.capacity

    def is_decreasing(self, noise: float = MONOTONE_NOISE) -> bool:
        d = self.sequence['d_k'].to_numpy()
        return bool(np.all(d[1:] <= d[:-1] * (1 + noise)))


def _prefix_diameters(leja: LejaSequence) -> np.ndarray:
    cumulative = np.cumsum(leja.logprods)
    k = np.arange(1, len(leja) + 1)
    with np.errstate(divide='ignore', invalid='ignore'):
        return 2.0 * cumulative[1:] / (k[1:] * (k[1:] - 1))


def extrapolate_capacity(ks: np.ndarray, log_d: np.ndarray) -> float:
    """
    Ajuste log d_k ≈ c + a (log k)/(k-1) + b/(k-1); devuelve e^c

    Con menos de tres puntos válidos se devuelve el último d_k.
    """
    mask = (ks >= EXTRAPOLATION_MIN_K) & np.isfinite(log_d)
    if mask.sum() < 3:
        return float(np.exp(log_d[-1]))
    k = ks[mask].astype(float)
    X = np.column_stack([np.log(k) / (k - 1), 1.0 / (k - 1)])
    model = LinearRegression().fit(X, log_d[mask])
    return float(np.exp(model.intercept_))


def transfinite_diameter(E: SampleSet, n: int = DEFAULT_LEJA_POINTS) -> DiameterEstimate:
    """
    Estima d_n(E) con puntos de Leja y extrapola cap(E)

    Args:
        E: Conjunto muestreado
        n: Número de puntos (2 <= n <= |E|)

    Returns:
        DiameterEstimate con la secuencia d_2..d_n
    """
    if n < 2:
        raise ValueError(f"n = {n}: se necesitan al menos 2 puntos")
    leja = leja_points(E, n)
    log_d = _prefix_diameters(leja)
    ks = np.arange(2, n + 1)
    sequence = pd.DataFrame({'k': ks, 'd_k': np.exp(log_d), 'log_d_k': log_d})
    capacity = 0.0 if E.is_finite else extrapolate_capacity(ks, log_d)
    return DiameterEstimate(n=n, d_n=float(np.exp(log_d[-1])), capacity=capacity,
                            sequence=sequence, leja=leja, finite=E.is_finite)


@dataclass(frozen=True)
class FeketeResult:
    points: np.ndarray
    d_n: float
    candidates: int


def fekete_exact(E: SampleSet, n: int, max_candidates: int = FEKETE_MAX_CANDIDATES) -> FeketeResult:
    """
    Maximización exhaustiva del producto de distancias sobre un subconjunto

    Si E tiene más de max_candidates puntos se usan sus primeros puntos de Leja
    como candidatos.

    Args:
        E: Conjunto muestreado
        n: Tamaño de la configuración (2 <= n <= 8)
        max_candidates: Tamaño del subconjunto de búsqueda

    Returns:
        FeketeResult con d_n exacto sobre los candidatos
    """
    if n < 2 or n > FEKETE_MAX_POINTS:
        raise ValueError(f"n = {n} fuera de 2..{FEKETE_MAX_POINTS} para Fekete exacto")
    if len(E) > max_candidates:
        cand = leja_points(E, max_candidates).points
    else:
        cand = E.points
    if n > len(cand):
        raise ValueError(f"n = {n} mayor que el número de candidatos {len(cand)}")
    with np.errstate(divide='ignore'):
        logdist = np.log(np.abs(cand[:, None] - cand[None, :]))
    best_val, best_combo = -np.inf, None
    for combo in itertools.combinations(range(len(cand)), n):
        idx = np.array(combo)
        total = np.sum(np.triu(logdist[np.ix_(idx, idx)], k=1))
        if total > best_val:
            best_val, best_combo = total, combo
    d_n = float(np.exp(2.0 * best_val / (n * (n - 1))))
    return FeketeResult(points=cand[list(best_combo)], d_n=d_n, candidates=len(cand))


@dataclass(frozen=True)
class WindowSweep:
    table: pd.DataFrame
    capacity: float
    monotone: bool


def capacity_window_sweep(family: Sequence[SampleSet], n: int = DEFAULT_LEJA_POINTS,
                          noise: float = MONOTONE_NOISE) -> WindowSweep:
    """
    Estima cap(E_k) sobre una familia creciente; el último valor se reporta como cap(E)

    Args:
        family: Conjuntos anidados E_1 ⊂ E_2 ⊂ ...
        n: Puntos de Leja por conjunto (se recorta a |E_k|)
        noise: Ruido tolerado al comprobar la monotonía

    Returns:
        WindowSweep con una fila por conjunto
    """
    if not family:
        raise ValueError("Familia vacía")
    for k in range(1, len(family)):
        if not family[k].contains_all(family[k - 1]):
            raise ValueError(f"Familia no anidada: {family[k - 1].label} ⊄ {family[k].label}")

    rows = []
    for E in family:
        m = min(n, len(E))
        if m < 2:
            rows.append({'label': E.label, 'n_points': len(E), 'd_n': 0.0, 'capacity': 0.0})
            continue
        est = transfinite_diameter(E, m)
        rows.append({'label': E.label, 'n_points': len(E), 'd_n': est.d_n, 'capacity': est.capacity})
    table = pd.DataFrame(rows)
    caps = table['capacity'].to_numpy()
    monotone = bool(np.all(caps[1:] >= caps[:-1] * (1 - noise)))
    return WindowSweep(table=table, capacity=float(caps[-1]), monotone=monotone)


# ---------------------------------------------------------------
# Funciones de Green
# ---------------------------------------------------------------

@dataclass(frozen=True)
class GreenModel:
    """
    Función de Green con polo en infinito: u(z) = log|z| - log(alpha) + o(1)

    kind es 'disk', 'interval' o 'leja'.
    """
    kind: str
    alpha: float
    params: Dict = field(default_factory=dict)
    leja: Optional[LejaSequence] = None

    @classmethod
    def disk(cls, radius: float, center: complex = 0j) -> 'GreenModel':
        if radius <= 0:
            raise ValueError(f"Radio no positivo: {radius}")
        return cls(kind='disk', alpha=float(radius), params={'center': complex(center), 'radius': float(radius)})

    @classmethod
    def interval(cls, a: complex, b: complex) -> 'GreenModel':
        if a == b:
            raise ValueError("Intervalo degenerado")
        return cls(kind='interval', alpha=abs(complex(b) - complex(a)) / 4,
                   params={'a': complex(a), 'b': complex(b)})

    @classmethod
    def empirical(cls, E: SampleSet, n: int = GREEN_EMPIRICAL_POINTS) -> 'GreenModel':
        m = min(n, len(E))
        if m < 2:
            raise ValueError("Se necesitan al menos 2 puntos para el modelo empírico")
        est = transfinite_diameter(E, m)
        return cls(kind='leja', alpha=est.d_n, params={'n': m}, leja=est.leja)

    @classmethod
    def for_set(cls, E: SampleSet) -> 'GreenModel':
        """Modelo cerrado si la geometría lo permite, si no el empírico de Leja"""
        kind = E.kind
        if kind in ('disk', 'circle'):
            return cls.disk(E.geometry['radius'], E.geometry.get('center', 0j))
        if kind == 'annulus':
            return cls.disk(E.geometry['r1'], E.geometry.get('center', 0j))
        if kind == 'interval':
            return cls.interval(E.geometry['a'], E.geometry['b'])
        return cls.empirical(E)

    @property
    def is_closed_form(self) -> bool:
        return self.kind in ('disk', 'interval')

    @property
    def size(self) -> float:
        if self.kind == 'disk':
            return 2 * self.params['radius']
        if self.kind == 'interval':
            return abs(self.params['b'] - self.params['a'])
        pts = self.leja.points
        return float(np.abs(pts[:, None] - pts[None, :]).max())

    def evaluate(self, z):
        z_arr = np.asarray(z, dtype=complex)
        if self.kind == 'disk':
            dist = np.abs(z_arr - self.params['center'])
            if np.any(dist < self.params['radius']):
                raise ValueError("z dentro del disco: la fórmula cerrada no aplica")
            out = np.log(dist / self.params['radius'])
        elif self.kind == 'interval':
            a, b = self.params['a'], self.params['b']
            w = (2 * z_arr - (a + b)) / (b - a)
            if np.any((np.abs(w.imag) < 1e-14) & (np.abs(w.real) <= 1)):
                raise ValueError("z sobre el intervalo: la fórmula cerrada no aplica")
            root = np.sqrt(w * w - 1)
            out = np.log(np.maximum(np.abs(w + root), np.abs(w - root)))
        else:
            with np.errstate(divide='ignore'):
                logs = np.log(np.abs(z_arr[..., None] - self.leja.points))
            out = logs.mean(axis=-1) - math.log(self.alpha)
        return float(out) if np.ndim(out) == 0 else out

    def asymptotic_error(self, factor: float = GREEN_ASYMPTOTIC_FACTOR, directions: int = 8) -> float:
        """max |u(z) - log|z| + log(alpha)| en |z| = factor * diámetro"""
        radius = factor * self.size
        z = radius * np.exp(2j * np.pi * (np.arange(directions) + 0.5) / directions)
        u = self.evaluate(z)
        return float(np.max(np.abs(u - np.log(np.abs(z)) + math.log(self.alpha))))


def green_eval(m: GreenModel, z: complex) -> float:
    """u(z) para el modelo m"""
    return m.evaluate(z)


# ---------------------------------------------------------------
# Bernstein
# ---------------------------------------------------------------

def bernstein_constant(E: SampleSet, R: float, model: Optional[GreenModel] = None,
                       circle_points: int = BERNSTEIN_CIRCLE_POINTS) -> float:
    """
    C = max_{|z| = R} e^{u(z)}

    Args:
        E: Conjunto muestreado
        R: Radio del círculo (R > 1, E dentro de |z| < R)
        model: Modelo de Green; por defecto GreenModel.for_set(E)
        circle_points: Puntos sobre el círculo

    Returns:
        Constante C
    """
    if R <= 1:
        raise ValueError(f"R = {R} debe ser mayor que 1")
    if E.max_modulus >= R:
        raise ValueError(f"E no está dentro de |z| < {R} (max |s| = {E.max_modulus:.4g})")
    model = model or GreenModel.for_set(E)
    z = R * np.exp(2j * np.pi * np.arange(circle_points) / circle_points)
    return float(np.exp(np.max(model.evaluate(z))))


@dataclass(frozen=True)
class BernsteinMargin:
    degree: int
    max_coeff: float
    sup: float
    C: float
    margin: float

    @property
    def holds(self) -> bool:
        return self.margin <= 1.0


def _trim(coeffs: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(coeffs)
    return coeffs[:nz[-1] + 1] if len(nz) else coeffs[:1]


def bernstein_check(P: Sequence[complex], E: SampleSet, C: float) -> BernsteinMargin:
    """
    margen = max_k |a_k| / (C^n max_E |P|); <= 1 si la desigualdad se cumple

    Args:
        P: Coeficientes a_0..a_n en orden ascendente
        E: Conjunto muestreado
        C: Constante a auditar

    Returns:
        BernsteinMargin
    """
    coeffs = _trim(np.asarray(P, dtype=complex))
    n = len(coeffs) - 1
    sup = float(np.max(np.abs(np.polynomial.polynomial.polyval(E.points, coeffs))))
    max_coeff = float(np.max(np.abs(coeffs)))
    if max_coeff == 0:
        margin = 0.0
    elif sup == 0:
        margin = math.inf
    else:
        margin = max_coeff / (C ** n * sup)
    return BernsteinMargin(degree=n, max_coeff=max_coeff, sup=sup, C=float(C), margin=margin)


def bernstein_audit(E: SampleSet, C: float, count: int = 100, max_degree: int = 12,
                    seed: int = RANDOM_STATE) -> pd.DataFrame:
    """Audita la desigualdad sobre polinomios aleatorios de grado <= max_degree"""
    rng = np.random.default_rng(seed)
    rows = []
    for idx in range(count):
        deg = int(rng.integers(0, max_degree + 1))
        coeffs = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        report = bernstein_check(coeffs, E, C)
        rows.append({'poly': idx, 'degree': report.degree, 'max_coeff': report.max_coeff,
                     'sup': report.sup, 'margin': report.margin, 'holds': report.holds})
    return pd.DataFrame(rows)


@dataclass(frozen=True)
class MonicPolynomial:
    """Polinomio mónico con raíces en puntos de Leja y su sup sobre la muestra"""
    roots: np.ndarray
    coeffs: np.ndarray
    sup: float
    log_sup: float

    @property
    def degree(self) -> int:
        return len(self.roots)

    @property
    def sup_root(self) -> float:
        """sup^{1/n}"""
        return float(np.exp(self.log_sup / self.degree))


def small_sup_monic(E: SampleSet, n: int) -> MonicPolynomial:
    """
    Polinomio mónico de grado n con raíces en los primeros puntos de Leja de E

    Si n > |E| las raíces recorren E cíclicamente (el polinomio se anula en E).

    Args:
        E: Conjunto muestreado
        n: Grado (>= 1)

    Returns:
        MonicPolynomial con coeficientes ascendentes
    """
    if n < 1:
        raise ValueError(f"Grado n = {n} debe ser >= 1")
    base = leja_points(E, min(n, len(E))).points
    roots = base[np.arange(n) % len(base)]
    with np.errstate(divide='ignore'):
        logs = np.log(np.abs(E.points[:, None] - roots[None, :])).sum(axis=1)
    log_sup = float(np.max(logs))
    coeffs = np.poly(roots)[::-1].astype(complex)
    return MonicPolynomial(roots=roots, coeffs=coeffs, sup=float(np.exp(log_sup)), log_sup=log_sup)
