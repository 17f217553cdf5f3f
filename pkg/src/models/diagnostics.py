"""
Diagnósticos de convergencia: ledgers de magnitud, clasificación de crecimiento,
barridos de restricciones, certificados de cotas y extracción de Taylor
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from sklearn.linear_model import TheilSenRegressor
from sklearn.metrics import r2_score

from src.config import (
    CERTIFICATE_CIRCLE_POINTS,
    CURVE_TEST_ORDER,
    CURVE_TEST_STEP,
    FILTRATION_CAP,
    FLAT_COEFF_FLOOR,
    FLAT_PROBE_DIRECTIONS,
    FLAT_PROBE_RADII,
    FLAT_VALUE_FLOOR,
    RANDOM_STATE,
    TAYLOR_DEFAULT_STEP,
    TAYLOR_MAX_ORDER,
    VERDICT_THRESHOLDS,
)
from src.models.potential import SampleSet, bernstein_constant
from src.models.series import Series1, Series2, WeightPair
from src.models.transforms import (
    DTable,
    anisotropic_substitute,
    compose,
    dilate_curve,
    nth_root,
    rotate2,
    scaled_residual,
)

VERDICT_COLUMNS = ['param_re', 'param_im', 'slope', 'radius', 'verdict', 'confidence']


# ---------------------------------------------------------------
# Ledger y clasificación
# ---------------------------------------------------------------

@dataclass(frozen=True)
class MagnitudeLedger:
    """L_n = max_{i+j=n} log|a_ij| por grado total (-inf en niveles nulos)"""
    levels: np.ndarray
    label: str = ""

    def __post_init__(self):
        levels = np.asarray(self.levels, dtype=float)
        if np.any(np.isnan(levels)) or np.any(levels == np.inf):
            raise ValueError("El ledger sólo admite valores finitos o -inf")
        levels.setflags(write=False)
        object.__setattr__(self, 'levels', levels)

    @classmethod
    def from_series(cls, series, label: str = "") -> 'MagnitudeLedger':
        """Construye el ledger de una Series1 o Series2"""
        if isinstance(series, Series1):
            mags = np.abs(series.coeffs)
        else:
            mags = np.array([np.abs(series.level(n)).max() for n in range(series.order + 1)])
        with np.errstate(divide='ignore'):
            return cls(np.log(mags), label)

    @classmethod
    def from_logs(cls, logs: Sequence[float], label: str = "") -> 'MagnitudeLedger':
        return cls(np.asarray(logs, dtype=float), label)

    @property
    def order(self) -> int:
        return len(self.levels) - 1

    def shifted(self, log_factor: float) -> 'MagnitudeLedger':
        return MagnitudeLedger(self.levels + log_factor, self.label)

    def to_list(self) -> List[Optional[float]]:
        """Lista serializable: -inf se representa como None"""
        return [None if not np.isfinite(v) else float(v) for v in self.levels]


@dataclass(frozen=True)
class GrowthReport:
    verdict: str
    slope: float
    radius: float
    window: Tuple[int, int]
    confidence: float
    trend: float = 0.0

    @property
    def is_convergent(self) -> bool:
        return self.verdict == 'convergent'

    @property
    def is_divergent(self) -> bool:
        return self.verdict == 'divergent'

    def to_dict(self) -> Dict:
        return {
            'verdict': self.verdict,
            'slope': self.slope,
            'radius': self.radius,
            'window': list(self.window),
            'confidence': self.confidence,
            'trend': self.trend,
        }


def default_window(order: int, thresholds: Dict = VERDICT_THRESHOLDS) -> Tuple[int, int]:
    """Los últimos min(window, N) grados con n >= 1"""
    length = min(thresholds['window'], order)
    return (max(1, order - length + 1), order)


def _polynomial_tail(finite: np.ndarray, minimum: int) -> bool:
    """Racha final de niveles nulos de al menos minimum y mayor que todo hueco interior"""
    idx = np.flatnonzero(finite)
    if len(idx) == 0:
        return True
    tail = len(finite) - 1 - idx[-1]
    gaps = np.diff(idx) - 1
    widest = int(gaps.max()) if len(gaps) else 0
    return tail >= minimum and tail > widest


def growth_classify(
    ledger: MagnitudeLedger,
    window: Optional[Tuple[int, int]] = None,
    thresholds: Dict = VERDICT_THRESHOLDS,
) -> GrowthReport:
    """
    Clasifica el crecimiento de L_n/n en una ventana de grados

    Ajusta L_n/n ≈ a + beta log n + c/n con Theil-Sen. La pendiente reportada
    es max(a + beta log n) en la ventana; el término c/n absorbe constantes
    multiplicativas.

    Args:
        ledger: Ledger de magnitudes
        window: (n_min, n_max); por defecto los últimos grados
        thresholds: Umbrales del veredicto

    Returns:
        GrowthReport
    """
    lo, hi = window or default_window(ledger.order, thresholds)
    if lo < 1 or hi > ledger.order or hi < lo:
        raise ValueError(f"Ventana ({lo}, {hi}) fuera del ledger 1..{ledger.order}")
    if hi - lo + 1 < thresholds['min_window']:
        raise ValueError(
            f"Ventana de {hi - lo + 1} grados; se necesitan al menos {thresholds['min_window']}"
        )

    n = np.arange(lo, hi + 1)
    levels = ledger.levels[lo:hi + 1]
    finite = np.isfinite(levels)
    if finite.sum() < thresholds['min_finite_levels'] or _polynomial_tail(finite, thresholds['polynomial_tail']):
        return GrowthReport('convergent', -math.inf, math.inf, (lo, hi), 1.0, 0.0)

    n, y = n[finite].astype(float), levels[finite] / n[finite]
    X = np.column_stack([np.log(n), 1.0 / n])
    model = TheilSenRegressor(random_state=RANDOM_STATE,
                              max_subpopulation=thresholds['max_subpopulation'])
    model.fit(X, y)
    trend = float(model.coef_[0])
    slope = float(np.max(model.intercept_ + trend * np.log(n)))

    if np.ptp(y) < 1e-9:
        confidence = 1.0
    else:
        confidence = float(np.clip(r2_score(y, model.predict(X)), 0.0, 1.0))

    if trend >= thresholds['superlinear_trend'] or slope > thresholds['slope_cap']:
        verdict = 'divergent'
    elif trend <= thresholds['bounded_trend']:
        verdict = 'convergent'
    else:
        verdict = 'inconclusive'
    return GrowthReport(verdict, slope, math.exp(-slope), (lo, hi), confidence, trend)


def classify_series(series, thresholds: Dict = VERDICT_THRESHOLDS) -> GrowthReport:
    return growth_classify(MagnitudeLedger.from_series(series), thresholds=thresholds)


def verdict_row(param: complex, report: GrowthReport) -> Dict:
    return {
        'param_re': float(np.real(param)),
        'param_im': float(np.imag(param)),
        'slope': report.slope,
        'radius': report.radius,
        'verdict': report.verdict,
        'confidence': report.confidence,
    }


def verdict_table(params: Sequence[complex], reports: Sequence[GrowthReport]) -> pd.DataFrame:
    rows = [verdict_row(p, r) for p, r in zip(params, reports)]
    return pd.DataFrame(rows, columns=VERDICT_COLUMNS)


def parallel_map(fn: Callable, items: Sequence, n_workers: int = 1) -> List:
    """map en orden de entrada, opcionalmente con hilos"""
    if n_workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------
# Barridos de restricciones
# ---------------------------------------------------------------

@dataclass
class SweepReport:
    table: pd.DataFrame
    g_report: GrowthReport
    h_report: Optional[GrowthReport]
    all_convergent: bool
    restrictions: List[Series1] = field(default_factory=list, repr=False)


def restriction_sweep(
    g: Series2,
    h: Series1,
    w: WeightPair,
    E: SampleSet,
    n_workers: int = 1,
    thresholds: Dict = VERDICT_THRESHOLDS,
) -> SweepReport:
    """
    Clasifica g(s^sigma x, s^tau h(x)) para cada s en E, y también g y h

    Args:
        g: Serie en dos variables
        h: Serie con h(0) = 0
        w: Pesos
        E: Parámetros s
        n_workers: Hilos del barrido (el orden del resultado no cambia)
        thresholds: Umbrales del veredicto

    Returns:
        SweepReport con una fila por s
    """
    def restrict(s):
        series = anisotropic_substitute(g, h, w, s)
        return series, growth_classify(MagnitudeLedger.from_series(series), thresholds=thresholds)

    results = parallel_map(restrict, list(E.points), n_workers)
    reports = [rep for _, rep in results]
    return SweepReport(
        table=verdict_table(E.points, reports),
        g_report=classify_series(g, thresholds),
        h_report=classify_series(h, thresholds),
        all_convergent=all(r.is_convergent for r in reports),
        restrictions=[series for series, _ in results],
    )


# ---------------------------------------------------------------
# Certificados de cotas
# ---------------------------------------------------------------

@dataclass(frozen=True)
class BoundCertificate:
    """
    Constantes de las cotas |u_p(s)| <= n^p y |d_pq| <= C^p

    case es 'i' (sigma, tau > 0) o 'ii' (sigma tau <= 0); nu y delta sólo
    aplican al caso (ii) y C_F al caso (i).
    """
    validated: bool
    n_filter: Optional[int]
    C: float
    C_E: float
    r: float
    m: float
    M: float
    L: float
    K: float
    case: str
    nu: Optional[int] = None
    delta: Optional[float] = None
    C_F: Optional[float] = None
    message: str = ""
    table: Optional[pd.DataFrame] = field(default=None, compare=False, repr=False)

    def to_dict(self) -> Dict:
        return {
            'validated': self.validated,
            'C': self.C,
            'n_filter': self.n_filter,
            'r': self.r,
            'm': self.m,
            'M': self.M,
            'L': self.L,
            'K': self.K,
            'C_E': self.C_E,
            'case': self.case,
            'nu': self.nu,
            'delta': self.delta,
            'C_F': self.C_F,
            'message': self.message,
        }


def _least_filtration(u_abs: np.ndarray, p: np.ndarray, cap: int) -> Optional[int]:
    with np.errstate(divide='ignore'):
        roots = np.where(u_abs > 0, u_abs ** (1.0 / p[:, None]), 0.0)
    n = max(1, int(math.ceil(float(roots.max()) - 1e-9)))
    while n <= cap and np.any(u_abs > (n ** p[:, None].astype(float)) * (1 + 1e-9)):
        n += 1
    return n if n <= cap else None


def _circle_min(series: Series1, r: float, count: int = CERTIFICATE_CIRCLE_POINTS) -> float:
    x = r * np.exp(2j * np.pi * np.arange(count) / count)
    return float(np.min(np.abs(series(x))))


def filtration_level(
    d: DTable,
    E: SampleSet,
    Pmax: Optional[int] = None,
    h: Optional[Series1] = None,
    cap: int = FILTRATION_CAP,
) -> BoundCertificate:
    """
    Busca el menor n con |u_p(s)| <= n^p en E y certifica |d_pq| <= C^p

    Args:
        d: Tabla d_pq
        E: Conjunto de parámetros
        Pmax: Última fila usada (por defecto el orden de la tabla)
        h: Curva; necesaria para las constantes r, m, L, K
        cap: Nivel máximo de la filtración

    Returns:
        BoundCertificate (validated = False si alguna cota falla)
    """
    Pmax = d.order if Pmax is None else Pmax
    if Pmax < 1 or Pmax > d.order:
        raise ValueError(f"Pmax = {Pmax} fuera de 1..{d.order} (filas de la tabla)")
    w = d.weights
    p = np.arange(1, Pmax + 1)
    u_abs = np.abs(np.array([[d.u(int(k), s) for s in E.points] for k in p]))
    M = E.max_modulus
    case = 'i' if (w.sigma > 0 and w.tau > 0) else 'ii'

    n_filter = _least_filtration(u_abs, p, cap)
    if n_filter is None:
        return BoundCertificate(False, None, math.inf, math.nan, math.nan, math.nan, M,
                                math.nan, math.nan, case,
                                message=f"sin nivel de filtración finito hasta {cap}")

    try:
        C_E = bernstein_constant(E, max(2.0, 1.5 * M))
    except ValueError as exc:
        return BoundCertificate(False, n_filter, math.inf, math.inf, math.nan, math.nan, M,
                                math.nan, math.nan, case, message=f"cap(E) = 0: {exc}")

    C = C_E ** w.total * M ** w.tau_minus * n_filter
    d_abs = np.abs(d.values[1:Pmax + 1])
    bound = C ** p.astype(float)
    max_d = d_abs.max(axis=1) if d_abs.size else np.zeros(Pmax)
    validated = bool(np.all(max_d <= bound * (1 + 1e-9)))
    table = pd.DataFrame({
        'p': p,
        'max_u': u_abs.max(axis=1),
        'n_pow_p': float(n_filter) ** p,
        'max_d': max_d,
        'C_pow_p': bound,
    })
    message = "" if validated else "|d_pq| <= C^p falla en alguna fila"

    r = m = L = K = math.nan
    nu = delta = C_F = None
    if h is not None and not h.is_zero():
        r = 1.0 / (2 * C)
        m = _circle_min(h, r)
        for _ in range(60):
            if m > 0:
                break
            r /= 2
            m = _circle_min(h, r)
        if m > 0:
            L = (1 + 1 / r + 1 / m) / (1 - C * r)
            if case == 'i':
                x = r * np.exp(2j * np.pi * np.arange(CERTIFICATE_CIRCLE_POINTS) / CERTIFICATE_CIRCLE_POINTS)
                image = np.unique(np.round(x ** (-w.tau) * h(x) ** w.sigma, 12))
                F = SampleSet(image, label="F")
                C_F = bernstein_constant(F, max(2.0, 1.5 * F.max_modulus))
                K = (L + C_F) ** (2 * (w.sigma + w.tau))
            else:
                base = h.power(w.sigma).shift(abs(w.tau))
                nu = base.valuation()
                if nu <= base.order:
                    beta = nth_root(base, nu)
                    delta = _circle_min(beta, r)
                    if delta > 0:
                        K = (1 + 1 / r + 1 / m + delta ** (-nu)) / (1 - C * r)

    return BoundCertificate(validated, n_filter, C, C_E, r, m, M, L, K, case,
                            nu=nu, delta=delta, C_F=C_F, message=message, table=table)


# ---------------------------------------------------------------
# Escenario de Malgrange
# ---------------------------------------------------------------

@dataclass
class MalgrangeReport:
    g_report: GrowthReport
    h_report: GrowthReport
    compose_report: GrowthReport
    composed: Series1
    auxiliary: Series2
    auxiliary_residual: float
    consistent: bool
    contrapositive: bool

    def to_dict(self) -> Dict:
        return {
            'g': self.g_report.to_dict(),
            'h': self.h_report.to_dict(),
            'compose': self.compose_report.to_dict(),
            'auxiliary_residual': self.auxiliary_residual,
            'consistent': self.consistent,
            'contrapositive': self.contrapositive,
        }


def malgrange_scenario(g: Series2, h: Series1, thresholds: Dict = VERDICT_THRESHOLDS) -> MalgrangeReport:
    """
    Clasifica g, h y g(x, h(x)) y revisa el patrón de Malgrange

    consistent es False sólo si g y la composición convergen pero h diverge.
    contrapositive marca instancias con g convergente y h divergente.
    También construye f(x, y) = g(x, y) - g(x, h(x)) y comprueba f(x, h(x)) = 0.

    Args:
        g: Serie con g'_y no nula en el orden de truncación
        h: Serie con h(0) = 0
        thresholds: Umbrales del veredicto

    Returns:
        MalgrangeReport
    """
    if g.derivative_y().is_zero():
        raise ValueError("g'_y = 0 hasta el orden de truncación: escenario no aplicable")
    composed = compose(g, h)
    order = composed.order
    aux_terms = {(i, 0): -c for i, c in enumerate(composed.coeffs) if c != 0}
    auxiliary = g.truncate(order) + Series2.from_terms(aux_terms, order)
    residual = scaled_residual(compose(auxiliary, h), Series1.zeros(order),
                               compose(auxiliary.abs(), h.abs()))

    g_rep = classify_series(g, thresholds)
    h_rep = classify_series(h, thresholds)
    c_rep = classify_series(composed, thresholds)
    consistent = not (g_rep.is_convergent and c_rep.is_convergent and h_rep.is_divergent)
    contrapositive = g_rep.is_convergent and h_rep.is_divergent
    return MalgrangeReport(g_rep, h_rep, c_rep, composed, auxiliary, residual, consistent, contrapositive)


# ---------------------------------------------------------------
# Extracción de Taylor
# ---------------------------------------------------------------

def stencil_weights(offsets: np.ndarray, k: int) -> np.ndarray:
    """
    Pesos w con sum_m w_m f(m h) = f^(k)(0) h^k + O(h^{len(offsets)})

    Resuelve el sistema de Vandermonde A[r, m] = m^r / r!, b = e_k.
    """
    size = len(offsets)
    A = np.array([[float(m) ** r / math.factorial(r) for m in offsets] for r in range(size)])
    b = np.zeros(size)
    b[k] = 1.0
    return np.linalg.solve(A, b)


@dataclass
class TaylorEstimate:
    series: Series2
    error: float
    flat: bool
    step: float


def _extract(f: Callable, order: int, step: float) -> Series2:
    half = int(math.ceil(order / 2))
    offsets = np.arange(-half, half + 1)
    X, Y = np.meshgrid(offsets * step, offsets * step, indexing='ij')
    values = np.asarray(f(X, Y), dtype=complex)
    if values.shape != X.shape or not np.all(np.isfinite(values)):
        raise ValueError("Muestras no finitas (o de forma inválida) en la malla del stencil")
    W = np.array([stencil_weights(offsets, k) / (math.factorial(k) * step ** k)
                  for k in range(order + 1)])
    dense = W @ values @ W.T
    return Series2.from_function(lambda i, j: dense[i, j], order)


def is_flat(f: Callable, series: Series2, coeff_floor: float = FLAT_COEFF_FLOOR,
            value_floor: float = FLAT_VALUE_FLOOR) -> bool:
    """Coeficientes nulos pero valores no nulos cerca del origen"""
    if np.max(np.abs(series.coeffs)) > coeff_floor:
        return False
    theta = 2 * np.pi * np.arange(FLAT_PROBE_DIRECTIONS) / FLAT_PROBE_DIRECTIONS
    for radius in FLAT_PROBE_RADII:
        values = np.asarray(f(radius * np.cos(theta), radius * np.sin(theta)), dtype=complex)
        if np.any(np.abs(values) > value_floor):
            return True
    return False


def taylor_from_samples(f: Callable, order: int, step: float = TAYLOR_DEFAULT_STEP) -> TaylorEstimate:
    """
    Estima a_ij = d^{i+j} f / (i! j!) en el origen por diferencias centrales

    f se evalúa vectorizada sobre mallas (x, y). El error estimado compara
    los pasos h y 2h; se devuelve la estimación con paso h.

    Args:
        f: Función de dos reales con valores complejos
        order: Grado total (<= 10)
        step: Paso h

    Returns:
        TaylorEstimate
    """
    if order < 0 or order > TAYLOR_MAX_ORDER:
        raise ValueError(f"Orden {order} fuera de 0..{TAYLOR_MAX_ORDER}")
    if step <= 0:
        raise ValueError(f"Paso no positivo: {step}")
    estimate = _extract(f, order, step)
    coarse = _extract(f, order, 2 * step)
    error = float(np.max(np.abs(estimate.coeffs - coarse.coeffs)))
    return TaylorEstimate(series=estimate, error=error, flat=is_flat(f, estimate), step=step)


# ---------------------------------------------------------------
# Familias de curvas
# ---------------------------------------------------------------

@dataclass
class CurveFamilyReport:
    family: str
    taylor: TaylorEstimate
    table: pd.DataFrame
    g_report: GrowthReport
    all_convergent: bool
    verdict: str

    @property
    def consistent(self) -> bool:
        return not (self.all_convergent and not self.taylor.flat and self.g_report.is_divergent)

    def to_dict(self) -> Dict:
        return {
            'family': self.family,
            'flat': self.taylor.flat,
            'taylor_error': self.taylor.error,
            'g': self.g_report.to_dict(),
            'all_restrictions_convergent': self.all_convergent,
            'verdict': self.verdict,
            'consistent': self.consistent,
        }


def curve_family_test(
    f: Callable,
    gamma: Series1,
    family: str,
    E: SampleSet,
    order: int = CURVE_TEST_ORDER,
    step: float = CURVE_TEST_STEP,
    n_workers: int = 1,
) -> CurveFamilyReport:
    """
    Restringe la serie de Taylor de f a una familia de curvas y clasifica

    Dilataciones: g(x, gamma_{1/s}(x)) con s en E ⊂ R \\ {0}.
    Rotaciones: g_theta(x, gamma(x)) con theta en E.

    Args:
        f: Función muestreable cerca de 0
        gamma: Curva y = gamma(t) con gamma(0) = 0
        family: 'dilation' o 'rotation'
        E: Parámetros de la familia
        order: Orden de extracción
        step: Paso de diferencias finitas
        n_workers: Hilos del barrido

    Returns:
        CurveFamilyReport
    """
    if gamma[0] != 0:
        raise ValueError("gamma(0) ≠ 0")
    if family not in ('dilation', 'rotation'):
        raise ValueError(f"Familia desconocida: {family}")
    if family == 'dilation':
        if not np.any(gamma.coeffs[2:]):
            raise ValueError("gamma es lineal: la familia de dilataciones requiere una curva no lineal")
        if np.any(E.points == 0):
            raise ValueError("s = 0 en la familia de dilataciones")

    taylor = taylor_from_samples(f, order, step)
    # ruido de redondeo del stencil
    noise = 2 * taylor.error
    g = Series2(np.where(np.abs(taylor.series.coeffs) <= noise, 0, taylor.series.coeffs), order)
    curve = gamma.truncate(order) if gamma.order >= order else Series1(gamma.coeffs, order)

    def restrict(param):
        if family == 'dilation':
            series = compose(g, dilate_curve(curve, 1.0 / param))
        else:
            series = compose(rotate2(g, float(np.real(param))), curve)
        return growth_classify(MagnitudeLedger.from_series(series))

    params = list(E.points)
    reports = parallel_map(restrict, params, n_workers)
    g_report = classify_series(g)
    all_convergent = all(r.is_convergent for r in reports)
    if taylor.flat:
        verdict = 'flat'
    elif all_convergent and g_report.is_convergent:
        verdict = 'analytic'
    elif g_report.is_divergent:
        verdict = 'divergent'
    else:
        verdict = 'inconclusive'
    return CurveFamilyReport(family, taylor, verdict_table(params, reports), g_report,
                             all_convergent, verdict)
