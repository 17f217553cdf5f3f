"""
Transformaciones de series: composición, dilataciones anisótropas, tablas d_pq,
rebanadas cuasi-homogéneas, reversión, raíces, rotaciones y cambios de variable
"""
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from src.models.series import Number, PowerTable, Series1, Series2, WeightPair


def _require_origin(h: Series1, name: str = "h"):
    if h[0] != 0:
        raise ValueError(f"{name}(0) ≠ 0: la composición formal no está definida")


def _powers(s: complex, exponents: np.ndarray) -> np.ndarray:
    """s^e para un arreglo de exponentes enteros (0^0 = 1)"""
    cache: Dict[int, complex] = {}
    out = np.empty(len(exponents), dtype=complex)
    for idx, e in enumerate(exponents):
        e = int(e)
        if e not in cache:
            cache[e] = s ** e
        out[idx] = cache[e]
    return out


def scaled_residual(actual: Series1, expected: Series1, scale: Optional[Series1] = None) -> float:
    """
    Error relativo por coeficiente frente a una escala de magnitud

    La escala es la misma cuenta hecha con módulos (cota de los sumandos);
    sin escala se usa max(|expected|, 1).

    Args:
        actual: Serie calculada
        expected: Serie de referencia
        scale: Serie real no negativa con la magnitud de los sumandos

    Returns:
        max_p |actual_p - expected_p| / escala_p
    """
    order = min(actual.order, expected.order)
    diff = np.abs(actual.coeffs[:order + 1] - expected.coeffs[:order + 1])
    if scale is None:
        ref = np.maximum(np.abs(expected.coeffs[:order + 1]), 1.0)
    else:
        ref = np.abs(scale.coeffs[:order + 1])
    safe = np.where(ref > 0, ref, 1.0)
    return float(np.max(diff / safe)) if len(diff) else 0.0


# ---------------------------------------------------------------
# Potencias y composición
# ---------------------------------------------------------------

def power_table(h: Series1, maxj: int) -> PowerTable:
    """
    Calcula c_jk, los coeficientes de h(x)^j

    Args:
        h: Serie con h(0) = 0
        maxj: Potencia máxima

    Returns:
        PowerTable con filas j = 0..maxj
    """
    _require_origin(h)
    order = h.order
    entries = np.zeros((maxj + 1, order + 1), dtype=complex)
    entries[0, 0] = 1.0
    for j in range(1, maxj + 1):
        entries[j] = np.convolve(entries[j - 1], h.coeffs)[:order + 1]
    entries.setflags(write=False)
    return PowerTable(base=h, maxj=maxj, entries=entries)


def compose(g: Series2, h: Series1) -> Series1:
    """
    Calcula g(x, h(x)) truncada en min(orden de g, orden de h)

    Args:
        g: Serie en dos variables
        h: Serie con h(0) = 0

    Returns:
        Serie en x
    """
    _require_origin(h)
    order = min(g.order, h.order)
    table = power_table(h.truncate(order), order)
    mixed = g.truncate(order).to_dense() @ table.entries
    out = np.zeros(order + 1, dtype=complex)
    for i in range(order + 1):
        out[i:] += mixed[i, :order + 1 - i]
    return Series1(out)


def substitute(outer: Series1, inner: Series1) -> Series1:
    """Composición en una variable outer(inner(x)) con inner(0) = 0"""
    _require_origin(inner, "u")
    order = min(outer.order, inner.order)
    table = power_table(inner.truncate(order), order)
    return Series1(outer.coeffs[:order + 1] @ table.entries)


def dilate_weights(g: Series2, w: WeightPair, s: Number) -> Series2:
    """
    Dilatación anisótropa a_ij -> s^(sigma i + tau j) a_ij, es decir g(s^sigma x, s^tau y)

    Args:
        g: Serie en dos variables
        w: Pesos (sigma, tau)
        s: Parámetro complejo

    Returns:
        Serie dilatada
    """
    s = complex(s)
    if s == 0 and (w.sigma < 0 or w.tau < 0):
        raise ValueError("s = 0 con exponente negativo: dilatación no definida")
    exponents = np.empty(Series2.size_for(g.order), dtype=int)
    for n in range(g.order + 1):
        j = np.arange(n + 1)
        exponents[n * (n + 1) // 2 + j] = w.sigma * (n - j) + w.tau * j
    return Series2(g.coeffs * _powers(s, exponents), g.order)


def anisotropic_substitute(g: Series2, h: Series1, w: WeightPair, s: Number) -> Series1:
    """
    Calcula g(s^sigma x, s^tau h(x))

    Args:
        g: Serie en dos variables
        h: Serie con h(0) = 0
        w: Pesos (sigma, tau), no necesariamente canónicos
        s: Parámetro (no nulo si algún peso es negativo)

    Returns:
        Serie en x truncada en min(órdenes)
    """
    return compose(dilate_weights(g, w, s), h)


def substitution_scale(g: Series2, h: Series1, w: WeightPair, s: Number) -> Series1:
    """Misma sustitución sobre módulos: cota de magnitud de cada coeficiente"""
    return anisotropic_substitute(g.abs(), h.abs(), w, abs(complex(s)))


def monomial_exclusion_holds(h: Series1, w: WeightPair) -> bool:
    """
    Hipótesis del teorema principal: si sigma tau > 0, h no es un monomio
    b_k x^k con sigma k - tau = 0
    """
    if w.sigma * w.tau <= 0:
        return True
    support = np.flatnonzero(h.coeffs)
    if len(support) != 1:
        return True
    k = int(support[0])
    return w.sigma * k - w.tau != 0


# ---------------------------------------------------------------
# Tabla d_pq
# ---------------------------------------------------------------

@dataclass(frozen=True)
class DTable:
    """
    Coeficientes d_pq con g(s^sigma x, s^tau h(x)) = sum_p (sum_q d_pq s^q) x^p

    Filas p = 0..P (la fila 0 sólo contiene a_00), columnas q desde
    -tau^- P hasta (sigma + tau^+) P.
    """
    weights: WeightPair
    order: int
    qmin: int
    values: np.ndarray

    @property
    def qmax(self) -> int:
        return self.qmin + self.values.shape[1] - 1

    def q_range(self, p: int) -> Tuple[int, int]:
        w = self.weights
        return (-w.tau_minus * p, (w.sigma + w.tau_plus) * p)

    def d(self, p: int, q: int) -> complex:
        if p < 0 or p > self.order:
            raise IndexError(f"Fila p = {p} fuera de 0..{self.order}")
        if q < self.qmin or q > self.qmax:
            return 0j
        return complex(self.values[p, q - self.qmin])

    def u(self, p: int, s: Number) -> complex:
        """u_p(s) = sum_q d_pq s^q"""
        s = complex(s)
        row = self.values[p]
        nz = np.flatnonzero(row)
        if len(nz) == 0:
            return 0j
        if s == 0 and self.qmin + nz[0] < 0:
            raise ValueError("s = 0 con exponente negativo en u_p(s)")
        return complex(np.sum(row[nz] * _powers(s, self.qmin + nz)))

    def u_series(self, s: Number) -> Series1:
        """Serie sum_p u_p(s) x^p"""
        return Series1([self.u(p, s) for p in range(self.order + 1)])

    def column(self, q: int) -> Series1:
        """phi_q(x) = sum_p d_pq x^p"""
        if q < self.qmin or q > self.qmax:
            return Series1.zeros(self.order)
        return Series1(self.values[:, q - self.qmin])

    def degree_bound_holds(self) -> bool:
        """s^{tau^- p} u_p(s) tiene grado <= (sigma + |tau|) p en cada fila"""
        for p in range(self.order + 1):
            nz = np.flatnonzero(self.values[p])
            if len(nz) == 0:
                continue
            lo, hi = self.q_range(p)
            if self.qmin + nz[0] < lo or self.qmin + nz[-1] > hi:
                return False
        return True

    def to_frame(self) -> pd.DataFrame:
        """Tabla larga (p, q, re, im) con las entradas no nulas"""
        p_idx, q_idx = np.nonzero(self.values)
        vals = self.values[p_idx, q_idx]
        return pd.DataFrame({
            'p': p_idx,
            'q': q_idx + self.qmin,
            're': vals.real,
            'im': vals.imag,
        })


def _require_canonical(w: WeightPair):
    if not w.is_canonical:
        raise ValueError(
            f"Pesos no canónicos {w.as_tuple()}: aplique normalize_weights primero"
        )


def d_table(g: Series2, h: Series1, w: WeightPair) -> DTable:
    """
    Calcula d_pq = sum_{sigma i + tau j = q} a_ij c_{j, p-i}

    Args:
        g: Serie en dos variables
        h: Serie con h(0) = 0
        w: Pesos canónicos

    Returns:
        DTable de orden min(órdenes)
    """
    _require_canonical(w)
    _require_origin(h)
    order = min(g.order, h.order)
    table = power_table(h.truncate(order), order)
    qmin = -w.tau_minus * order
    qmax = (w.sigma + w.tau_plus) * order
    values = np.zeros((order + 1, qmax - qmin + 1), dtype=complex)
    for i, j, a in g.truncate(order).terms():
        q = w.weight(i, j)
        values[i:, q - qmin] += a * table.entries[j, :order + 1 - i]
    values.setflags(write=False)
    return DTable(weights=w, order=order, qmin=qmin, values=values)


# ---------------------------------------------------------------
# Rebanadas g_q
# ---------------------------------------------------------------

@dataclass(frozen=True)
class Slice:
    """
    Rebanada g_q = sum_{sigma i + tau j = q} a_ij x^i y^j con su soporte Omega_q,
    el ancla (lambda, mu) y psi_q
    """
    q: int
    series: Series2
    support: Tuple[Tuple[int, int], ...]
    anchor: Optional[Tuple[int, int]]
    psi: Series1

    @property
    def omega(self) -> int:
        return len(self.support)

    @property
    def is_empty(self) -> bool:
        return self.omega == 0

    def rebuild(self, w: WeightPair) -> Series2:
        """Reconstruye x^lambda y^mu psi_q(x^{-tau} y^sigma) como serie"""
        if self.is_empty:
            return Series2.zeros(self.series.order)
        lam, mu = self.anchor
        terms = {
            (lam - k * w.tau, mu + k * w.sigma): c
            for k, c in enumerate(self.psi.coeffs)
        }
        return Series2.from_terms(terms, self.series.order)


@dataclass(frozen=True)
class SliceDecomposition:
    """Descomposición de g en rebanadas cuasi-homogéneas para unos pesos"""
    weights: WeightPair
    order: int
    slices: Dict[int, Slice] = field(default_factory=dict)

    @property
    def qs(self) -> List[int]:
        return sorted(self.slices)

    def __getitem__(self, q: int) -> Slice:
        if q in self.slices:
            return self.slices[q]
        return Slice(q=q, series=Series2.zeros(self.order), support=(), anchor=None,
                     psi=Series1.zeros(0))

    def reassemble(self) -> Series2:
        total = Series2.zeros(self.order)
        for q in self.qs:
            total = total + self.slices[q].series
        return total


def _lattice(order: int, w: WeightPair) -> Dict[int, List[Tuple[int, int]]]:
    groups: Dict[int, List[Tuple[int, int]]] = {}
    for n in range(order + 1):
        for j in range(n + 1):
            i = n - j
            groups.setdefault(w.weight(i, j), []).append((i, j))
    return groups


def _build_slice(g: Series2, w: WeightPair, q: int, support: List[Tuple[int, int]]) -> Slice:
    order = g.order
    if not support:
        return Slice(q=q, series=Series2.zeros(order), support=(), anchor=None,
                     psi=Series1.zeros(0))
    support = sorted(support, key=lambda ij: (ij[1], ij[0]))
    lam, mu = support[0]
    series = Series2.from_terms({ij: g.coeff(*ij) for ij in support}, order)
    psi = []
    k = 0
    while True:
        i, j = lam - k * w.tau, mu + k * w.sigma
        if i < 0 or j < 0 or i + j > order:
            break
        psi.append(g.coeff(i, j))
        k += 1
    if len(psi) != len(support):
        raise ValueError(f"Omega_{q} no es una progresión aritmética para {w.as_tuple()}")
    return Slice(q=q, series=series, support=tuple(support), anchor=(lam, mu), psi=Series1(psi))


def slices(g: Series2, w: WeightPair) -> SliceDecomposition:
    """
    Construye g_q, Omega_q, (lambda, mu) y psi_q para cada q

    Omega_q se toma dentro de la truncación (i + j <= P). El ancla es el
    elemento de mu mínimo; con (sigma, tau) = (0, -1) resulta (0, -q).

    Args:
        g: Serie en dos variables
        w: Pesos canónicos

    Returns:
        SliceDecomposition
    """
    _require_canonical(w)
    groups = _lattice(g.order, w)
    built = {q: _build_slice(g, w, q, support) for q, support in sorted(groups.items())}
    return SliceDecomposition(weights=w, order=g.order, slices=built)


def phi_q(g: Series2, h: Series1, w: WeightPair, q: int) -> Series1:
    """phi_q(x) = g_q(x, h(x))"""
    _require_canonical(w)
    support = _lattice(g.order, w).get(q, [])
    g_q = _build_slice(g, w, q, support).series
    return compose(g_q, h)


# ---------------------------------------------------------------
# Reversión y raíces
# ---------------------------------------------------------------

def reversion(u: Series1) -> Series1:
    """
    Inversa composicional phi con phi(u(x)) = x

    Resuelve el sistema triangular sum_{j<=k} phi_j c_jk = delta_{k1} sobre
    la tabla de potencias de u.

    Args:
        u: Serie con u(0) = 0 y u'(0) ≠ 0

    Returns:
        Serie phi del mismo orden
    """
    if u[0] != 0:
        raise ValueError("u(0) ≠ 0: la reversión no está definida")
    if u.order < 1 or u[1] == 0:
        raise ValueError("u'(0) = 0: coeficiente lineal nulo, no hay inversa")
    order = u.order
    table = power_table(u, order).entries
    phi = np.zeros(order + 1, dtype=complex)
    for k in range(1, order + 1):
        rhs = (1.0 if k == 1 else 0.0) - np.dot(phi[1:k], table[1:k, k])
        phi[k] = rhs / table[k, k]
    return Series1(phi)


def nth_root(w_series: Series1, nu: int) -> Series1:
    """
    Calcula beta con beta^nu = w_series, beta = c^(1/nu) x (1 + ...)

    Se usa la raíz principal de c. El resultado tiene orden P - nu + 1, que
    determina beta^nu hasta el orden P.

    Args:
        w_series: Serie c x^nu (1 + ...) con c ≠ 0
        nu: Exponente positivo

    Returns:
        Serie beta
    """
    if nu < 1:
        raise ValueError(f"nu debe ser positivo: {nu}")
    v = w_series.valuation()
    if v != nu:
        raise ValueError(f"Orden de anulación {v} distinto de nu = {nu}")
    c = complex(w_series[nu])
    f = w_series.coeffs[nu:] / c
    m = len(f) - 1
    alpha = 1.0 / nu
    g = np.zeros(m + 1, dtype=complex)
    g[0] = 1.0
    for n in range(1, m + 1):
        k = np.arange(1, n + 1)
        g[n] = np.sum(((alpha + 1) * k - n) * f[1:n + 1] * g[n - k]) / n
    lead = c ** alpha
    return Series1(np.concatenate([[0.0], lead * g]))


# ---------------------------------------------------------------
# Cambios lineales de variables
# ---------------------------------------------------------------

def linear_substitute(f: Series2, x_form: Tuple[Number, Number], y_form: Tuple[Number, Number]) -> Series2:
    """
    Calcula f(alpha x + beta y, gamma x + delta y), exacto por grado total

    Args:
        f: Serie en dos variables
        x_form: (alpha, beta)
        y_form: (gamma, delta)

    Returns:
        Serie del mismo orden
    """
    order = f.order
    x_lin = np.array(x_form, dtype=complex)
    y_lin = np.array(y_form, dtype=complex)
    # potencias homogéneas indexadas por la potencia de y
    xp = [np.ones(1, dtype=complex)]
    yp = [np.ones(1, dtype=complex)]
    for _ in range(order):
        xp.append(np.convolve(xp[-1], x_lin))
        yp.append(np.convolve(yp[-1], y_lin))
    out = np.zeros(Series2.size_for(order), dtype=complex)
    for n in range(order + 1):
        level = f.level(n)
        acc = np.zeros(n + 1, dtype=complex)
        for j, a in enumerate(level):
            if a != 0:
                acc += a * np.convolve(xp[n - j], yp[j])
        out[n * (n + 1) // 2:n * (n + 1) // 2 + n + 1] = acc
    return Series2(out, order)


def diagonal_scale(f: Series2, a: Number, b: Number) -> Series2:
    """f(a x, b y)"""
    return linear_substitute(f, (a, 0), (0, b))


def rotate2(f: Series2, theta: float) -> Series2:
    """f_theta(x, y) = f(x cos(theta) - y sin(theta), x sin(theta) + y cos(theta))"""
    c, s = math.cos(theta), math.sin(theta)
    return linear_substitute(f, (c, -s), (s, c))


def to_pm(f: Series2) -> Series2:
    """g(x, y) = f((x + y)/2, -i (x - y)/2)"""
    return linear_substitute(f, (0.5, 0.5), (-0.5j, 0.5j))


def from_pm(g: Series2) -> Series2:
    """f(x, y) = g(x + i y, x - i y)"""
    return linear_substitute(g, (1, 1j), (1, -1j))


def rotate_via_pm(f: Series2, theta: float) -> Series2:
    """Rotación por conjugación: from_pm(to_pm(f)(e^{i theta} x, e^{-i theta} y))"""
    phase = complex(math.cos(theta), math.sin(theta))
    return from_pm(diagonal_scale(to_pm(f), phase, phase.conjugate()))


# ---------------------------------------------------------------
# Curvas, restricciones y normalización de pesos
# ---------------------------------------------------------------

def dilate_curve(h: Series1, s: Number) -> Series1:
    """h_s(x) = s^{-1} h(s x), es decir b_i -> s^(i-1) b_i"""
    s = complex(s)
    if s == 0:
        raise ValueError("s = 0: la dilatación de la curva no está definida")
    _require_origin(h)
    return Series1(h.coeffs * _powers(s, np.arange(h.order + 1) - 1))


def directional_restrict(g: Series2, s1: Number, s2: Number) -> Series1:
    """g_s(t) = g(s1 t, s2 t); el coeficiente de t^n es sum_{i+j=n} a_ij s1^i s2^j"""
    s1, s2 = complex(s1), complex(s2)
    out = np.zeros(g.order + 1, dtype=complex)
    for n in range(g.order + 1):
        j = np.arange(n + 1)
        out[n] = np.sum(g.level(n) * _powers(s1, n - j) * _powers(s2, j))
    return Series1(out)


@dataclass(frozen=True)
class EMapDescriptor:
    """
    Transformación del conjunto E inducida por la normalización de pesos

    root_degree d > 1 corresponde a dividir los pesos por d; inversion a
    cambiar el signo de ambos pesos.
    """
    root_degree: int = 1
    inversion: bool = False

    @property
    def kind(self) -> str:
        if self.root_degree > 1 and self.inversion:
            return 'root+inversion'
        if self.root_degree > 1:
            return 'root'
        if self.inversion:
            return 'inversion'
        return 'identity'

    def pushforward(self, points: np.ndarray) -> np.ndarray:
        """
        Parámetros para los pesos reducidos: s -> s^d (y luego 1/s)

        Con t = s^d (o t = s^-d) se cumple g(s^sigma x, s^tau h) =
        g(t^sigma' x, t^tau' h), así que las restricciones conocidas en E
        quedan en la imagen.
        """
        pts = np.asarray(points, dtype=complex) ** self.root_degree
        if self.inversion:
            if np.any(pts == 0):
                raise ValueError("0 en E: la inversión no está definida")
            pts = 1.0 / pts
        return pts

    def preimage(self, points: np.ndarray) -> np.ndarray:
        """Conjunto literal {s : s^d ∈ E} seguido de {s : 1/s ∈ ...}"""
        pts = np.asarray(points, dtype=complex)
        if np.any(pts == 0):
            raise ValueError("0 en E: las raíces e inversiones excluyen el origen")
        d = self.root_degree
        if d > 1:
            unit = np.exp(2j * np.pi * np.arange(d) / d)
            pts = (pts[:, None] ** (1.0 / d) * unit[None, :]).ravel()
        if self.inversion:
            pts = 1.0 / pts
        return pts


def normalize_weights(w: WeightPair) -> Tuple[WeightPair, EMapDescriptor]:
    """
    Reduce (sigma, tau) a la forma canónica

    Divide por d = gcd(|sigma|, |tau|) y cambia el signo si sigma < 0 o si
    (sigma, tau) = (0, 1).

    Args:
        w: Pesos en Q

    Returns:
        (pesos canónicos, descriptor del mapa de E)
    """
    d = math.gcd(abs(w.sigma), abs(w.tau))
    sigma, tau = w.sigma // d, w.tau // d
    invert = sigma < 0 or (sigma == 0 and tau == 1)
    if invert:
        sigma, tau = -sigma, -tau
    return WeightPair(sigma, tau), EMapDescriptor(root_degree=d, inversion=invert)
