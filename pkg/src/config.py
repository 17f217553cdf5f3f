"""Configuración de rutas, órdenes de truncación y umbrales del laboratorio"""
from pathlib import Path
import math

# Rutas del proyecto
PROJECT_ROOT = Path(__file__).parent.parent
DATA_DIR = PROJECT_ROOT / "data"
FIXTURES_DIR = DATA_DIR / "fixtures"

# ============================================
# SERIES - truncación
# ============================================

# Orden por defecto de las series truncadas (grado total P)
DEFAULT_ORDER = 30

# Orden máximo razonable en doble precisión
MAX_ORDER = 64

# Ventana de grados "segura" en doble precisión para familias superexponenciales
SAFE_DEGREE = 30

# ============================================
# POTENCIAL - muestreo, capacidad y Bernstein
# ============================================

# Puntos por unidad de longitud de frontera al muestrear un conjunto cerrado
SAMPLING_DENSITY = 512

# Número de puntos de Leja por defecto para estimar el diámetro transfinito
DEFAULT_LEJA_POINTS = 24

# Primer k usado en la extrapolación de d_k
EXTRAPOLATION_MIN_K = 4

# Ruido tolerado en secuencias que deberían ser monótonas
MONOTONE_NOISE = 0.02

# Tamaño máximo del subconjunto de candidatos para Fekete exacto
FEKETE_MAX_CANDIDATES = 16
FEKETE_MAX_POINTS = 8

# Puntos sobre el círculo |z| = R al maximizar e^{u(z)}
BERNSTEIN_CIRCLE_POINTS = 720

# Puntos de Leja para el modelo empírico de Green
GREEN_EMPIRICAL_POINTS = 64

# Factor para verificar la asintótica u(z) = log|z| - log(alpha) + o(1)
GREEN_ASYMPTOTIC_FACTOR = 1e3
GREEN_ASYMPTOTIC_TOL = 1e-2

# ============================================
# DIAGNÓSTICOS - umbrales de veredicto
# ============================================

VERDICT_THRESHOLDS = {
    # |a| <= C_max^n con C_max = 1e6
    'slope_cap': math.log(1e6),
    # tendencia de L_n/n contra log n a partir de la cual se declara divergencia
    'superlinear_trend': 0.3,
    # tendencia máxima compatible con un veredicto convergente
    'bounded_trend': 0.15,
    # longitud de la ventana de grados
    'window': 24,
    'min_window': 8,
    # mínimo de niveles finitos para ajustar; con menos se trata como polinomio
    'min_finite_levels': 4,
    # niveles nulos finales (más largos que cualquier hueco interior) que marcan un polinomio
    'polynomial_tail': 3,
    # subpoblación de Theil-Sen (determinista con random_state)
    'max_subpopulation': 300,
}

RANDOM_STATE = 42

# Nivel máximo de la filtración E_n antes de declarar el certificado fallido
FILTRATION_CAP = 10**6

# Puntos sobre |x| = r al calcular m = min |h(x)|
CERTIFICATE_CIRCLE_POINTS = 256

# Extracción de Taylor por diferencias finitas
TAYLOR_MAX_ORDER = 10
TAYLOR_DEFAULT_STEP = 1e-2
FLAT_COEFF_FLOOR = 1e-6
FLAT_VALUE_FLOOR = 1e-6
FLAT_PROBE_RADII = (0.25, 0.5)
FLAT_PROBE_DIRECTIONS = 8

# Familias de curvas: orden y paso de extracción
CURVE_TEST_ORDER = 8
CURVE_TEST_STEP = 0.025

# ============================================
# PAPERLAB - generadores y escenarios
# ============================================

# Orden del ledger en espacio logarítmico para el Ejemplo 3.1
EXAMPLE31_ORDER = 200

# Número de s aleatorios al verificar identidades en construcción
GENERATOR_CHECK_POINTS = 5

# Tolerancia de las identidades de los generadores
GENERATOR_RTOL = 1e-9

SCENARIOS = ['thm11', 'thm12', 'thm13', 'cor15', 'thm16']

# Semilla por defecto de los experimentos
DEFAULT_SEED = 0
