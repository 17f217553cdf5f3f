"""
Generadores de las familias de contraejemplos y escenarios de los teoremas
de convergencia
"""
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from src.config import (
    DEFAULT_ORDER,
    EXAMPLE31_ORDER,
    GENERATOR_CHECK_POINTS,
    GENERATOR_RTOL,
    SAFE_DEGREE,
    SCENARIOS,
    VERDICT_THRESHOLDS,
)
from src.models.diagnostics import (
    VERDICT_COLUMNS,
    BoundCertificate,
    GrowthReport,
    MagnitudeLedger,
    classify_series,
    filtration_level,
    growth_classify,
    malgrange_scenario,
    parallel_map,
    restriction_sweep,
    verdict_table,
)
from src.models.potential import SampleSet, leja_points
from src.models.series import Number, Series1, Series2, WeightPair
from src.models.transforms import (
    anisotropic_substitute,
    compose,
    d_table,
    dilate_curve,
    monomial_exclusion_holds,
    normalize_weights,
    nth_root,
    reversion,
    rotate2,
    rotate_via_pm,
    scaled_residual,
    substitution_scale,
)
from src.utils.sampling import angles, finite, segment


# ---------------------------------------------------------------
# Series divergentes por defecto
# ---------------------------------------------------------------

def nn_logs(order: int) -> np.ndarray:
    """log|phi_n| para phi = sum_{n>=1} n^n x^n (-inf en n = 0)"""
    n = np.arange(order + 1, dtype=float)
    with np.errstate(divide='ignore', invalid='ignore'):
        out = n * np.log(n)
    out[0] = -np.inf
    return out


def factorial_logs(order: int) -> np.ndarray:
    """log|u_n| para u = x + sum_{n>=2} n! x^n"""
    out = np.array([math.lgamma(n + 1) for n in range(order + 1)])
    out[0] = -np.inf
    return out


def factorial_series(order: int) -> Series1:
    """x + sum_{n>=2} n! x^n"""
    return Series1([0.0, 1.0] + [float(math.factorial(n)) for n in range(2, order + 1)], order)


def random_convergent_series2(rng: np.random.Generator, order: int) -> Series2:
    """Coeficientes aleatorios de módulo <= 1"""
    size = Series2.size_for(order)
    moduli = rng.uniform(0.1, 1.0, size)
    phases = rng.uniform(0, 2 * np.pi, size)
    return Series2(moduli * np.exp(1j * phases), order)


def random_convergent_curve(rng: np.random.Generator, order: int) -> Series1:
    """h = x + x^2 + términos pequeños (no monomio, convergente)"""
    c = np.zeros(order + 1, dtype=complex)
    c[1] = 1.0
    c[2] = 1.0
    c[3:] = rng.uniform(-0.5, 0.5, order - 2) if order >= 3 else []
    return Series1(c)


# ---------------------------------------------------------------
# Instancias
# ---------------------------------------------------------------

@dataclass
class Example31Spec:
    """
    Parámetros del Ejemplo 3.1: E finito, delta_n -> 0 (por defecto 1/n)

    Args:
        E: Conjunto finito
        delta: Función n -> delta_n (n >= 1)
        order: Orden del ledger en espacio logarítmico
        safe_degree: Orden de la serie en doble precisión
    """
    E: SampleSet
    delta: Optional[Callable[[int], float]] = None
    order: int = EXAMPLE31_ORDER
    safe_degree: int = SAFE_DEGREE

    def delta_values(self) -> np.ndarray:
        fn = self.delta or (lambda n: 1.0 / n)
        values = np.ones(self.order + 1)
        values[1:] = [fn(n) for n in range(1, self.order + 1)]
        if np.any(values <= 0):
            raise ValueError("delta_n debe ser positivo")
        if np.any(np.diff(values[1:]) > 0):
            raise ValueError("delta_n debe ser no creciente")
        return values


@dataclass
class ExampleInstance:
    """Serie g (ventana segura) y curva h con sus ledgers y las verificaciones de construcción"""
    name: str
    g: Series2
    g_ledger: MagnitudeLedger
    h: Series1
    h_ledger: MagnitudeLedger
    weights: WeightPair
    params: Dict = field(default_factory=dict)
    checks: Dict = field(default_factory=dict)
    extras: Dict = field(default_factory=dict)

    def summary(self) -> Dict:
        return {
            'name': self.name,
            'weights': list(self.weights.as_tuple()),
            'params': self.params,
            'checks': self.checks,
            'g': growth_classify(self.g_ledger).to_dict(),
            'h': growth_classify(self.h_ledger).to_dict() if self.h_ledger.order >= 8 else None,
        }


def _check_points(seed: int, count: int = GENERATOR_CHECK_POINTS) -> np.ndarray:
    rng = np.random.default_rng(seed)
    moduli = rng.uniform(0.5, 2.0, count)
    phases = rng.uniform(0, 2 * np.pi, count)
    return moduli * np.exp(1j * phases)


def _require(residual: float, what: str, rtol: float = GENERATOR_RTOL):
    if not residual <= rtol:
        raise ValueError(f"La identidad {what} falla en la construcción: residuo {residual:.3g}")


def gen_example31(spec: Example31Spec) -> ExampleInstance:
    """
    Serie divergente cuyas restricciones g(x, s x), s en E finito, están acotadas

    P_n = prod_{k<n} (x - e_{k mod m}) con E en orden de Leja y
    a_ij = delta_n^{-n} [x^j] P_n, n = i + j. Si sup_E |P_n| > delta_n^n
    (sólo posible con n < |E|) se usa delta_n efectivo = sup^{1/n}.

    Args:
        spec: Example31Spec

    Returns:
        ExampleInstance con ledger completo y serie en la ventana segura
    """
    E = spec.E
    if not E.is_finite:
        raise ValueError("El Ejemplo 3.1 requiere un conjunto E finito")
    N = spec.order
    safe = min(spec.safe_degree, N)
    delta = spec.delta_values()
    roots = leja_points(E, len(E)).points
    m = len(roots)

    poly = np.array([1.0 + 0j])
    log_p_on_E = np.zeros(len(E))
    levels = np.full(N + 1, -np.inf)
    effective = np.ones(N + 1)
    restriction_log_max = -np.inf
    rows: List[np.ndarray] = []
    for n in range(N + 1):
        if n > 0:
            r = roots[(n - 1) % m]
            poly = np.convolve(poly, np.array([-r, 1.0]))
            with np.errstate(divide='ignore'):
                log_p_on_E = log_p_on_E + np.log(np.abs(E.points - r))
            log_delta = max(math.log(delta[n]), float(np.max(log_p_on_E)) / n)
        else:
            log_delta = 0.0
        if not np.all(np.isfinite(poly)):
            raise ValueError(f"Coeficientes de P_{n} no representables en doble precisión")
        effective[n] = math.exp(log_delta)
        levels[n] = -n * log_delta + math.log(np.max(np.abs(poly)))
        restriction_log_max = max(restriction_log_max, float(np.max(log_p_on_E - n * log_delta)))
        if n <= safe:
            rows.append(poly * math.exp(-n * log_delta))

    g = Series2.from_function(lambda i, j: rows[i + j][j], safe)
    column = np.array([abs(g.coeff(0, n)) for n in range(safe + 1)])
    column_residual = float(np.max(np.abs(np.log(column) + np.arange(safe + 1) * np.log(effective[:safe + 1]))))
    restriction_max = math.exp(restriction_log_max)
    if restriction_max > 1 + 1e-9:
        raise ValueError(f"Restricción no acotada por 1: {restriction_max:.6g}")
    _require(column_residual, "a_0j = delta_j^-j")

    h = Series1.identity(safe)
    return ExampleInstance(
        name='example31',
        g=g,
        g_ledger=MagnitudeLedger(levels, 'g'),
        h=h,
        h_ledger=MagnitudeLedger.from_series(h, 'h'),
        weights=WeightPair(0, 1),
        params={'E': [[float(e.real), float(e.imag)] for e in E.points], 'order': N, 'safe_degree': safe},
        checks={'restriction_max': restriction_max, 'column_residual': column_residual},
        extras={'roots': roots, 'effective_delta': effective},
    )


def gen_example32(
    k: int,
    sigma: int,
    phi_logs: Optional[Callable[[int], np.ndarray]] = None,
    order: int = DEFAULT_ORDER,
    ledger_order: int = EXAMPLE31_ORDER,
    seed: int = 0,
) -> ExampleInstance:
    """
    g(x, y) = phi(x^k) - phi(y), h = x^k, pesos (sigma, sigma k)

    Todas las restricciones se anulan y g diverge.

    Args:
        k: Exponente de la curva
        sigma: Peso sigma
        phi_logs: N -> log|phi_n| para n = 0..N (por defecto n log n)
        order: Orden de la serie en doble precisión
        ledger_order: Orden del ledger logarítmico
        seed: Semilla de los puntos de verificación

    Returns:
        ExampleInstance
    """
    if k < 1 or sigma < 1:
        raise ValueError(f"k y sigma deben ser positivos: k={k}, sigma={sigma}")
    phi_logs = phi_logs or nn_logs
    logs = np.asarray(phi_logs(max(order, ledger_order)), dtype=float)
    if np.isfinite(logs[0]):
        raise ValueError("phi(0) debe ser 0")
    phi = np.concatenate([[0.0], np.exp(logs[1:order + 1])])

    terms: Dict = {}
    for n in range(1, order + 1):
        terms[(0, n)] = -phi[n]
        if k * n <= order:
            terms[(k * n, 0)] = terms.get((k * n, 0), 0) + phi[n]
    g = Series2.from_terms(terms, order)
    h = Series1.monomial(k, order)
    w = WeightPair(sigma, sigma * k)

    levels = logs[:ledger_order + 1].copy()
    for d in range(k, ledger_order + 1, k):
        levels[d] = max(levels[d], logs[d // k])

    residual = max(
        scaled_residual(anisotropic_substitute(g, h, w, s), Series1.zeros(order),
                        substitution_scale(g, h, w, s))
        for s in _check_points(seed)
    )
    _require(residual, "g(s^sigma x, s^tau h(x)) = 0")
    return ExampleInstance(
        name='example32',
        g=g,
        g_ledger=MagnitudeLedger(levels, 'g'),
        h=h,
        h_ledger=MagnitudeLedger.from_series(h, 'h'),
        weights=w,
        params={'k': k, 'sigma': sigma, 'order': order},
        checks={'restriction_residual': residual},
        extras={'phi': Series1(phi)},
    )


def gen_example33(
    w: WeightPair,
    u: Optional[Series1] = None,
    order: int = DEFAULT_ORDER,
    seed: int = 0,
) -> ExampleInstance:
    """
    f(x, y) = phi(x^|tau| y^sigma), donde phi(u(x)) = x y h cumple x^|tau| h^sigma = u(x^{sigma+|tau|})

    Para todo s ≠ 0 se cumple f(s^sigma x, s^tau h(x)) = x^{sigma+|tau|}.

    Args:
        w: Pesos con tau <= 0 < sigma
        u: Serie x + ... (por defecto x + sum n! x^n)
        order: Orden de f y h
        seed: Semilla de los puntos de verificación

    Returns:
        ExampleInstance (g guarda f)
    """
    if not (w.tau <= 0 < w.sigma):
        raise ValueError(f"Se requiere tau <= 0 < sigma: {w.as_tuple()}")
    m = w.total
    u_order = int(math.ceil(order / m))
    u = factorial_series(u_order) if u is None else u
    # coeficientes ausentes de u se toman como cero
    u = Series1(u.coeffs, u_order)
    if u[0] != 0 or u[1] != 1:
        raise ValueError("u debe ser x + O(x^2): u(0) = 0, u'(0) = 1")

    phi = reversion(u)
    spread = np.zeros(m * (u_order + 1), dtype=complex)
    spread[::m][:u_order + 1] = u.coeffs
    u_of_xm = Series1(spread)
    base = Series1(u_of_xm.coeffs[abs(w.tau):])
    h = nth_root(base, w.sigma).truncate(order)

    f = Series2.from_terms(
        {(abs(w.tau) * n, w.sigma * n): phi[n] for n in range(1, order // m + 1)}, order
    )

    target = Series1.monomial(m, order)
    residual = max(
        scaled_residual(anisotropic_substitute(f, h, w, s), target, substitution_scale(f, h, w, s))
        for s in _check_points(seed)
    )
    _require(residual, "f(s^sigma x, s^tau h(x)) = x^(sigma+|tau|)")
    relation = h.power(w.sigma).shift(abs(w.tau)).truncate(order)
    relation_residual = scaled_residual(relation, u_of_xm.truncate(order),
                                        h.abs().power(w.sigma).shift(abs(w.tau)).truncate(order))
    phi_round_trip = scaled_residual(compose(Series2.from_terms({(0, n): c for n, c in enumerate(phi.coeffs)}, u_order), u),
                                     Series1.identity(u_order))

    return ExampleInstance(
        name='example33',
        g=f,
        g_ledger=MagnitudeLedger.from_series(f, 'f'),
        h=h,
        h_ledger=MagnitudeLedger.from_series(h, 'h'),
        weights=w,
        params={'sigma': w.sigma, 'tau': w.tau, 'order': order},
        checks={'restriction_residual': residual, 'relation_residual': relation_residual,
                'reversion_residual': phi_round_trip},
        extras={'phi': phi, 'u': u, 'phi_ledger': MagnitudeLedger.from_series(phi, 'phi')},
    )


def gen_example33b(h: Optional[Series1] = None, order: int = DEFAULT_ORDER, seed: int = 0) -> ExampleInstance:
    """
    Caso (sigma, tau) = (0, 1): phi = x^2 / h, f(x, y) = phi(x) y, f(x, s h(x)) = s x^2

    Args:
        h: Serie x + ... (por defecto x + sum n! x^n)
        order: Orden de phi y f
        seed: Semilla de los puntos de verificación

    Returns:
        ExampleInstance
    """
    h = factorial_series(order + 1) if h is None else h
    if h.order < order + 1:
        h = Series1(h.coeffs, order + 1)
    if h[0] != 0:
        raise ValueError("h(0) ≠ 0")
    if h.order < 1 or h[1] == 0:
        raise ValueError("h'(0) = 0: la división x^2 / h pierde orden")
    phi = Series1.monomial(2, h.order).divide(h)
    order = min(order, phi.order)
    phi = phi.truncate(order)
    h = h.truncate(order)
    f = Series2.from_terms({(i, 1): phi[i] for i in range(order)}, order)
    w = WeightPair(0, 1)

    residuals = []
    for s in _check_points(seed):
        actual = anisotropic_substitute(f, h, w, s)
        residuals.append(scaled_residual(actual, Series1.monomial(2, actual.order, s),
                                         substitution_scale(f, h, w, s)))
    residual = max(residuals)
    _require(residual, "f(x, s h(x)) = s x^2")
    return ExampleInstance(
        name='example33b',
        g=f,
        g_ledger=MagnitudeLedger.from_series(f, 'f'),
        h=h,
        h_ledger=MagnitudeLedger.from_series(h, 'h'),
        weights=w,
        params={'order': order},
        checks={'restriction_residual': residual},
        extras={'phi': phi, 'phi_ledger': MagnitudeLedger.from_series(phi, 'phi')},
    )


# ---------------------------------------------------------------
# Escenarios
# ---------------------------------------------------------------

@dataclass
class ScenarioInputs:
    """Entradas de un escenario; en thm16 g es la serie f a rotar"""
    g: Optional[Series2] = None
    h: Optional[Series1] = None
    weights: Optional[WeightPair] = None
    E: Optional[SampleSet] = None


@dataclass
class ScenarioReport:
    name: str
    hypotheses: Dict[str, bool]
    warnings: List[str]
    table: pd.DataFrame
    conclusion: GrowthReport
    all_restrictions_convergent: bool
    certificate: Optional[BoundCertificate] = None
    details: Dict = field(default_factory=dict)

    @property
    def hypotheses_hold(self) -> bool:
        return all(self.hypotheses.values())

    @property
    def consistent(self) -> bool:
        """False sólo si las hipótesis se cumplen, las restricciones convergen y la conclusión diverge"""
        return not (self.hypotheses_hold and self.all_restrictions_convergent
                    and self.conclusion.is_divergent)

    def to_dict(self) -> Dict:
        return {
            'scenario': self.name,
            'hypotheses': self.hypotheses,
            'warnings': self.warnings,
            'conclusion': self.conclusion.to_dict(),
            'all_restrictions_convergent': self.all_restrictions_convergent,
            'consistent': self.consistent,
            'certificate': self.certificate.to_dict() if self.certificate else None,
            'details': self.details,
            'verdicts': self.table.to_dict('records'),
        }


def _require_inputs(name: str, inputs: ScenarioInputs, fields: Sequence[str]):
    missing = [f for f in fields if getattr(inputs, f) is None]
    if missing:
        raise ValueError(f"Escenario {name}: faltan entradas {missing}")


def _cap_positive(E: SampleSet) -> bool:
    return not E.is_finite and len(E) >= 2


def _reduced_parameters(w: WeightPair, E: SampleSet):
    canonical, emap = normalize_weights(w)
    if emap.kind == 'identity':
        return canonical, emap, E
    mapped = SampleSet(np.unique(emap.pushforward(E.points)), label=f"{E.label}|{emap.kind}",
                       geometry={'kind': 'finite'} if E.is_finite else None)
    return canonical, emap, mapped


def _certificate(g: Series2, h: Series1, w: WeightPair, E: SampleSet, warnings: List[str]):
    try:
        return filtration_level(d_table(g, h, w), E, h=h)
    except ValueError as exc:
        warnings.append(f"certificado no disponible: {exc}")
        return None


def _weighted_scenario(name: str, inputs: ScenarioInputs, n_workers: int, thresholds: Dict) -> ScenarioReport:
    _require_inputs(name, inputs, ['g', 'h', 'weights', 'E'])
    g, h, w, E = inputs.g, inputs.h, inputs.weights, inputs.E
    warnings: List[str] = []

    h_report = classify_series(h, thresholds)
    hypotheses = {
        'h_origin': h[0] == 0,
        'h_nonzero': not h.is_zero(),
        'E_excludes_origin': bool(np.all(E.points != 0)),
        'cap_positive': _cap_positive(E),
    }
    if name == 'thm11':
        hypotheses['h_convergent'] = h_report.is_convergent
        hypotheses['monomial_exclusion'] = monomial_exclusion_holds(h, w)
        if not hypotheses['monomial_exclusion']:
            warnings.append("h es un monomio b_k x^k con sigma k - tau = 0")
    else:
        hypotheses['g_y_nonzero'] = not g.derivative_y().is_zero()
        hypotheses['sigma_tau_positive'] = w.sigma * w.tau > 0
    for key, ok in hypotheses.items():
        if not ok and key != 'monomial_exclusion':
            warnings.append(f"hipótesis no satisfecha: {key}")
    if not hypotheses['h_origin']:
        raise ValueError("h(0) ≠ 0")

    canonical, emap, E_reduced = _reduced_parameters(w, E)
    sweep = restriction_sweep(g, h, canonical, E_reduced, n_workers=n_workers, thresholds=thresholds)
    conclusion = sweep.g_report if name == 'thm11' else sweep.h_report
    certificate = _certificate(g, h, canonical, E_reduced, warnings) if hypotheses['E_excludes_origin'] else None
    return ScenarioReport(
        name=name,
        hypotheses=hypotheses,
        warnings=warnings,
        table=sweep.table,
        conclusion=conclusion,
        all_restrictions_convergent=sweep.all_convergent,
        certificate=certificate,
        details={
            'weights': list(w.as_tuple()),
            'canonical_weights': list(canonical.as_tuple()),
            'emap': emap.kind,
            'root_degree': emap.root_degree,
            'g': sweep.g_report.to_dict(),
            'h': sweep.h_report.to_dict(),
        },
    )


def reduction_residual(restriction: Series1, g: Series2, h: Series1, s: Number) -> float:
    """
    Compara g(x, h_s(x)) evaluada en s^-1 x con g(s^-1 x, s^-1 h(x))

    El segundo miembro se calcula con anisotropic_substitute y pesos (-1, -1).

    Args:
        restriction: Serie g(x, h_s(x)) ya calculada
        g: Serie en dos variables
        h: Curva con h(0) = 0
        s: Parámetro no nulo

    Returns:
        Residuo relativo a la escala de módulos
    """
    w = WeightPair(-1, -1)
    direct = anisotropic_substitute(g, h, w, s)
    return scaled_residual(restriction.scale_argument(1 / s), direct, substitution_scale(g, h, w, s))


def _cor15(inputs: ScenarioInputs, n_workers: int, thresholds: Dict) -> ScenarioReport:
    _require_inputs('cor15', inputs, ['g', 'h', 'E'])
    g, h, E = inputs.g, inputs.h, inputs.E
    warnings: List[str] = []
    if h[0] != 0:
        raise ValueError("h(0) ≠ 0")
    hypotheses = {
        'h_nonzero': not h.is_zero(),
        'h_nonlinear': bool(np.any(h.coeffs[2:])),
        'E_real_nonzero': bool(np.all(np.abs(E.points.imag) < 1e-12) and np.all(E.points != 0)),
        'cap_positive': _cap_positive(E),
    }
    for key, ok in hypotheses.items():
        if not ok:
            warnings.append(f"hipótesis no satisfecha: {key}")

    params = [s for s in E.points if s != 0]

    def restrict(s):
        series = compose(g, dilate_curve(h, s))
        return growth_classify(MagnitudeLedger.from_series(series), thresholds=thresholds), \
            reduction_residual(series, g, h, s)

    results = parallel_map(restrict, params, n_workers)
    reports = [r for r, _ in results]
    g_report = classify_series(g, thresholds)
    return ScenarioReport(
        name='cor15',
        hypotheses=hypotheses,
        warnings=warnings,
        table=verdict_table(params, reports),
        conclusion=g_report,
        all_restrictions_convergent=all(r.is_convergent for r in reports),
        details={
            'reduction_residual': max((res for _, res in results), default=0.0),
            'g': g_report.to_dict(),
            'h': classify_series(h, thresholds).to_dict(),
        },
    )


def _thm16(inputs: ScenarioInputs, n_workers: int, thresholds: Dict) -> ScenarioReport:
    _require_inputs('thm16', inputs, ['g', 'h', 'E'])
    f, h, E = inputs.g, inputs.h, inputs.E
    warnings: List[str] = []
    if h[0] != 0:
        raise ValueError("h(0) ≠ 0")
    thetas = np.real(E.points)
    h_report = classify_series(h, thresholds)
    hypotheses = {
        'h_convergent': h_report.is_convergent,
        'E_in_0_2pi': bool(np.all(np.abs(E.points.imag) < 1e-12)
                           and np.all((thetas >= 0) & (thetas <= 2 * np.pi))),
        'cap_positive': _cap_positive(E),
    }
    for key, ok in hypotheses.items():
        if not ok:
            warnings.append(f"hipótesis no satisfecha: {key}")

    def restrict(theta):
        rotated = rotate2(f, float(theta))
        conjugated = rotate_via_pm(f, float(theta))
        scale = max(1.0, float(np.max(np.abs(rotated.coeffs))))
        residual = float(np.max(np.abs(rotated.coeffs - conjugated.coeffs))) / scale
        series = compose(rotated, h)
        return growth_classify(MagnitudeLedger.from_series(series), thresholds=thresholds), residual

    results = parallel_map(restrict, list(thetas), n_workers)
    reports = [r for r, _ in results]
    f_report = classify_series(f, thresholds)
    return ScenarioReport(
        name='thm16',
        hypotheses=hypotheses,
        warnings=warnings,
        table=verdict_table(thetas, reports),
        conclusion=f_report,
        all_restrictions_convergent=all(r.is_convergent for r in reports),
        details={
            'conjugation_residual': max((res for _, res in results), default=0.0),
            'f': f_report.to_dict(),
            'h': h_report.to_dict(),
        },
    )


def _thm13(inputs: ScenarioInputs, thresholds: Dict) -> ScenarioReport:
    _require_inputs('thm13', inputs, ['g', 'h'])
    g, h = inputs.g, inputs.h
    if h[0] != 0:
        raise ValueError("h(0) ≠ 0")
    warnings: List[str] = []
    try:
        report = malgrange_scenario(g, h, thresholds)
    except ValueError as exc:
        warnings.append(str(exc))
        h_report = classify_series(h, thresholds)
        return ScenarioReport(
            name='thm13',
            hypotheses={'g_y_nonzero': False},
            warnings=warnings,
            table=pd.DataFrame(columns=VERDICT_COLUMNS),
            conclusion=h_report,
            all_restrictions_convergent=False,
        )

    hypotheses = {
        'g_y_nonzero': True,
        'g_convergent': report.g_report.is_convergent,
    }
    if report.contrapositive:
        warnings.append("g convergente y h divergente: la composición debe divergir")
    return ScenarioReport(
        name='thm13',
        hypotheses=hypotheses,
        warnings=warnings,
        table=verdict_table([0.0], [report.compose_report]),
        conclusion=report.h_report,
        all_restrictions_convergent=report.compose_report.is_convergent,
        details=report.to_dict(),
    )


def run_scenario(
    name: str,
    inputs: ScenarioInputs,
    n_workers: int = 1,
    thresholds: Dict = VERDICT_THRESHOLDS,
) -> ScenarioReport:
    """
    Ejecuta un escenario: thm11, thm12, thm13, cor15 o thm16

    Las hipótesis que fallan se reportan en el informe; sólo las entradas
    incompletas o h(0) ≠ 0 lanzan ValueError.

    Args:
        name: Nombre del escenario
        inputs: ScenarioInputs
        n_workers: Hilos de los barridos
        thresholds: Umbrales del veredicto

    Returns:
        ScenarioReport
    """
    if name in ('thm11', 'thm12'):
        return _weighted_scenario(name, inputs, n_workers, thresholds)
    if name == 'cor15':
        return _cor15(inputs, n_workers, thresholds)
    if name == 'thm16':
        return _thm16(inputs, n_workers, thresholds)
    if name == 'thm13':
        return _thm13(inputs, thresholds)
    raise ValueError(f"Escenario desconocido: {name}")


def random_scenario_inputs(name: str, seed: int, order: int = DEFAULT_ORDER) -> ScenarioInputs:
    """Entradas convergentes que satisfacen las hipótesis del escenario"""
    rng = np.random.default_rng(seed)
    g = random_convergent_series2(rng, order)
    h = random_convergent_curve(rng, order)
    if name == 'thm16':
        return ScenarioInputs(g=g, h=h, E=angles(12))
    if name == 'cor15':
        return ScenarioInputs(g=g, h=h, E=segment(1.0, 2.0, count=16))
    if name == 'thm13':
        return ScenarioInputs(g=g, h=h)
    return ScenarioInputs(g=g, h=h, weights=WeightPair(1, 1), E=segment(1.0, 2.0, count=16))


def run_example31(E: Sequence[complex] = (1, -1), order: int = EXAMPLE31_ORDER) -> ExampleInstance:
    """
    Función de conveniencia para reproducir el Ejemplo 3.1
    """
    print(f"Generando Ejemplo 3.1 con |E| = {len(E)}, orden {order}...")
    instance = gen_example31(Example31Spec(E=finite(E), order=order))
    report = growth_classify(instance.g_ledger)
    print(f"   max |g(x, e x)|_n = {instance.checks['restriction_max']:.3g}")
    print(f"   Veredicto de g: {report.verdict} (tendencia {report.trend:.3f})")
    return instance


def run_all_scenarios(seed: int = 0, n_workers: int = 1) -> Dict[str, ScenarioReport]:
    """
    Función de conveniencia: ejecuta todos los escenarios con entradas convergentes
    """
    reports = {}
    for name in SCENARIOS:
        print(f"Escenario {name}...")
        report = run_scenario(name, random_scenario_inputs(name, seed), n_workers=n_workers)
        print(f"   conclusión: {report.conclusion.verdict}, consistente: {report.consistent}")
        reports[name] = report
    return reports


if __name__ == "__main__":
    run_example31()
    run_all_scenarios()
