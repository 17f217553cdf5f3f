"""
Series formales truncadas en una y dos variables con coeficientes complejos
"""
import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Iterator, Optional, Tuple, Union

import numpy as np

Number = Union[int, float, complex]


def _frozen(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


def _check_finite(values: np.ndarray, what: str):
    if not np.all(np.isfinite(values)):
        raise ValueError(f"{what}: coeficientes no finitos (desbordamiento o NaN)")


class Series1:
    """
    Serie formal truncada h(x) = b_0 + b_1 x + ... + b_P x^P

    Los coeficientes más allá del orden P son desconocidos (no cero). Toda
    operación devuelve una serie válida hasta el mínimo de los órdenes de
    sus argumentos.
    """

    __slots__ = ('_c',)

    def __init__(self, coeffs: Iterable[Number], order: Optional[int] = None):
        """
        Args:
            coeffs: Coeficientes c_0..c_P
            order: Orden de truncación (rellena con ceros o recorta)
        """
        c = np.array(coeffs, dtype=complex).ravel()
        if order is not None:
            if order < 0:
                raise ValueError(f"El orden no puede ser negativo: {order}")
            if len(c) > order + 1:
                c = c[:order + 1].copy()
            elif len(c) < order + 1:
                c = np.concatenate([c, np.zeros(order + 1 - len(c), dtype=complex)])
        if len(c) == 0:
            raise ValueError("Serie sin coeficientes")
        _check_finite(c, "Series1")
        self._c = _frozen(c)

    @classmethod
    def zeros(cls, order: int) -> 'Series1':
        return cls(np.zeros(order + 1, dtype=complex))

    @classmethod
    def monomial(cls, k: int, order: int, coeff: Number = 1.0) -> 'Series1':
        """Serie coeff * x^k truncada en `order`"""
        c = np.zeros(order + 1, dtype=complex)
        if k <= order:
            c[k] = coeff
        return cls(c)

    @classmethod
    def identity(cls, order: int) -> 'Series1':
        return cls.monomial(1, order)

    @property
    def order(self) -> int:
        return len(self._c) - 1

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    def __getitem__(self, i: int) -> complex:
        if i < 0 or i > self.order:
            raise IndexError(f"Coeficiente x^{i} fuera del orden {self.order}")
        return complex(self._c[i])

    def __iter__(self) -> Iterator[complex]:
        return iter(self._c)

    def __repr__(self) -> str:
        return f"Series1(order={self.order}, coeffs={np.array2string(self._c, precision=4)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series1):
            return NotImplemented
        return self.order == other.order and bool(np.array_equal(self._c, other._c))

    __hash__ = None

    # ---------------------------------------------------------------
    # Aritmética
    # ---------------------------------------------------------------

    def __add__(self, other: Union['Series1', Number]) -> 'Series1':
        if isinstance(other, Series1):
            order = min(self.order, other.order)
            return Series1(self._c[:order + 1] + other._c[:order + 1])
        c = self._c.copy()
        c[0] += other
        return Series1(c)

    __radd__ = __add__

    def __neg__(self) -> 'Series1':
        return Series1(-self._c)

    def __sub__(self, other: Union['Series1', Number]) -> 'Series1':
        return self + (-other)

    def __rsub__(self, other: Number) -> 'Series1':
        return (-self) + other

    def __mul__(self, other: Union['Series1', Number]) -> 'Series1':
        if isinstance(other, Series1):
            order = min(self.order, other.order)
            return Series1(np.convolve(self._c, other._c)[:order + 1])
        return Series1(other * self._c)

    __rmul__ = __mul__

    def __truediv__(self, other: Union['Series1', Number]) -> 'Series1':
        if isinstance(other, Series1):
            return self.divide(other)
        return Series1(self._c / other)

    def divide(self, other: 'Series1') -> 'Series1':
        """
        Cociente formal self / other

        Si other = x^k * (unidad), self debe anularse al menos hasta x^{k-1};
        el resultado es válido hasta min(orden) - k.

        Args:
            other: Divisor con valoración k finita

        Returns:
            Serie cociente
        """
        k = other.valuation()
        if k > other.order:
            raise ValueError("División por la serie nula")
        if self.valuation() < k:
            raise ValueError(
                f"El dividendo no es divisible por x^{k}: valoración {self.valuation()}"
            )
        num = self._c[k:]
        den = other._c[k:]
        order = min(len(num), len(den)) - 1
        out = np.zeros(order + 1, dtype=complex)
        for n in range(order + 1):
            tot = num[n] - np.dot(out[:n], den[n:0:-1]) if n else num[0]
            out[n] = tot / den[0]
        return Series1(out)

    def power(self, n: int, order: Optional[int] = None) -> 'Series1':
        """
        Potencia entera no negativa h^n

        Con valoración v >= 1 el coeficiente de grado d de h^n depende sólo de
        coeficientes de h de grado <= d - (n-1) v, así que el resultado puede
        extenderse hasta orden P + (n-1) v.

        Args:
            n: Exponente
            order: Orden pedido (por defecto el de la serie)

        Returns:
            Serie h^n truncada en `order`
        """
        if n < 0:
            raise ValueError("Exponente negativo: use divide()")
        v = self.valuation()
        limit = self.order + (n - 1) * v if n >= 1 and v <= self.order else self.order
        order = self.order if order is None else order
        if order > limit:
            raise ValueError(f"Orden {order} no determinado por los datos (máximo {limit})")
        base = np.zeros(order + 1, dtype=complex)
        m = min(order, self.order)
        base[:m + 1] = self._c[:m + 1]
        out = np.zeros(order + 1, dtype=complex)
        out[0] = 1.0
        for _ in range(n):
            out = np.convolve(out, base)[:order + 1]
        return Series1(out)

    # ---------------------------------------------------------------
    # Utilidades
    # ---------------------------------------------------------------

    def valuation(self) -> int:
        """Índice del primer coeficiente no nulo (orden + 1 si la serie es nula)"""
        nz = np.flatnonzero(self._c)
        return int(nz[0]) if len(nz) else self.order + 1

    def is_zero(self) -> bool:
        return not np.any(self._c)

    def truncate(self, order: int) -> 'Series1':
        if order > self.order:
            raise ValueError(f"No se puede extender de orden {self.order} a {order}")
        return Series1(self._c[:order + 1])

    def shift(self, k: int) -> 'Series1':
        """Multiplica por x^k"""
        return Series1(np.concatenate([np.zeros(k, dtype=complex), self._c]))

    def derivative(self) -> 'Series1':
        if self.order == 0:
            return Series1.zeros(0)
        return Series1(self._c[1:] * np.arange(1, self.order + 1))

    def scale_argument(self, s: Number) -> 'Series1':
        """Serie h(s x)"""
        return Series1(self._c * np.power(complex(s), np.arange(self.order + 1)))

    def abs(self) -> 'Series1':
        """Serie de módulos |b_i| (escala de magnitud)"""
        return Series1(np.abs(self._c))

    def evaluate(self, x):
        return np.polynomial.polynomial.polyval(x, self._c)

    def __call__(self, x):
        return self.evaluate(x)


class Series2:
    """
    Serie formal truncada g(x, y) = sum_{i+j<=P} a_ij x^i y^j

    Almacenamiento triangular denso por grado total: el coeficiente a_ij
    vive en (i+j)(i+j+1)/2 + j.
    """

    __slots__ = ('_a', '_order')

    def __init__(self, coeffs: Iterable[Number], order: int):
        """
        Args:
            coeffs: Vector triangular de longitud (P+1)(P+2)/2
            order: Grado total de truncación P
        """
        if order < 0:
            raise ValueError(f"El orden no puede ser negativo: {order}")
        a = np.array(coeffs, dtype=complex).ravel()
        expected = self.size_for(order)
        if len(a) != expected:
            raise ValueError(
                f"Se esperaban {expected} coeficientes para orden {order}, hay {len(a)}"
            )
        _check_finite(a, "Series2")
        self._a = _frozen(a)
        self._order = order

    @staticmethod
    def size_for(order: int) -> int:
        return (order + 1) * (order + 2) // 2

    @staticmethod
    def tri_index(i: int, j: int) -> int:
        n = i + j
        return n * (n + 1) // 2 + j

    @classmethod
    def zeros(cls, order: int) -> 'Series2':
        return cls(np.zeros(cls.size_for(order), dtype=complex), order)

    @classmethod
    def from_function(cls, fn: Callable[[int, int], Number], order: int) -> 'Series2':
        """Construye a_ij = fn(i, j) para i + j <= order"""
        a = np.zeros(cls.size_for(order), dtype=complex)
        for n in range(order + 1):
            for j in range(n + 1):
                a[cls.tri_index(n - j, j)] = fn(n - j, j)
        return cls(a, order)

    @classmethod
    def from_terms(cls, terms: Union[Dict[Tuple[int, int], Number], Iterable], order: int) -> 'Series2':
        """
        Construye la serie a partir de términos dispersos

        Args:
            terms: Diccionario {(i, j): a_ij} o iterable de (i, j, a_ij)
            order: Grado total de truncación

        Returns:
            Serie con los términos indicados (los demás nulos)
        """
        items = terms.items() if isinstance(terms, dict) else (((i, j), c) for i, j, c in terms)
        a = np.zeros(cls.size_for(order), dtype=complex)
        for (i, j), c in items:
            if i < 0 or j < 0:
                raise ValueError(f"Exponentes negativos ({i}, {j})")
            if i + j <= order:
                a[cls.tri_index(i, j)] += c
        return cls(a, order)

    @classmethod
    def from_dense(cls, matrix: np.ndarray, order: Optional[int] = None) -> 'Series2':
        """Construye la serie desde una matriz a[i, j] (se ignora i + j > order)"""
        matrix = np.asarray(matrix, dtype=complex)
        if order is None:
            order = min(matrix.shape) - 1
        return cls.from_function(
            lambda i, j: matrix[i, j] if i < matrix.shape[0] and j < matrix.shape[1] else 0.0,
            order,
        )

    @property
    def order(self) -> int:
        return self._order

    @property
    def coeffs(self) -> np.ndarray:
        return self._a

    def coeff(self, i: int, j: int) -> complex:
        if i < 0 or j < 0 or i + j > self._order:
            raise IndexError(f"Coeficiente x^{i} y^{j} fuera del orden {self._order}")
        return complex(self._a[self.tri_index(i, j)])

    def __getitem__(self, ij: Tuple[int, int]) -> complex:
        return self.coeff(*ij)

    def level(self, n: int) -> np.ndarray:
        """Coeficientes de grado total n ordenados por j = 0..n"""
        if n < 0 or n > self._order:
            raise IndexError(f"Nivel {n} fuera del orden {self._order}")
        start = n * (n + 1) // 2
        return self._a[start:start + n + 1]

    def to_dense(self) -> np.ndarray:
        """Matriz (P+1) x (P+1) con a[i, j] (ceros para i + j > P)"""
        out = np.zeros((self._order + 1, self._order + 1), dtype=complex)
        for n in range(self._order + 1):
            lev = self.level(n)
            j = np.arange(n + 1)
            out[n - j, j] = lev
        return out

    def terms(self) -> Iterator[Tuple[int, int, complex]]:
        """Itera (i, j, a_ij) sobre los coeficientes no nulos"""
        for n in range(self._order + 1):
            for j, c in enumerate(self.level(n)):
                if c != 0:
                    yield n - j, j, complex(c)

    def __repr__(self) -> str:
        return f"Series2(order={self._order}, nonzero={int(np.count_nonzero(self._a))})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series2):
            return NotImplemented
        return self._order == other._order and bool(np.array_equal(self._a, other._a))

    __hash__ = None

    def _aligned(self, other: 'Series2') -> Tuple[np.ndarray, np.ndarray, int]:
        order = min(self._order, other._order)
        size = self.size_for(order)
        return self._a[:size], other._a[:size], order

    def __add__(self, other: 'Series2') -> 'Series2':
        if isinstance(other, Series2):
            a, b, order = self._aligned(other)
            return Series2(a + b, order)
        a = self._a.copy()
        a[0] += other
        return Series2(a, self._order)

    __radd__ = __add__

    def __neg__(self) -> 'Series2':
        return Series2(-self._a, self._order)

    def __sub__(self, other: 'Series2') -> 'Series2':
        return self + (-other)

    def __mul__(self, scalar: Number) -> 'Series2':
        if isinstance(scalar, (Series1, Series2)):
            return NotImplemented
        return Series2(scalar * self._a, self._order)

    __rmul__ = __mul__

    def truncate(self, order: int) -> 'Series2':
        if order > self._order:
            raise ValueError(f"No se puede extender de orden {self._order} a {order}")
        return Series2(self._a[:self.size_for(order)], order)

    def abs(self) -> 'Series2':
        return Series2(np.abs(self._a), self._order)

    def is_zero(self) -> bool:
        return not np.any(self._a)

    def derivative_y(self) -> 'Series2':
        """g'_y = sum j a_ij x^i y^(j-1), truncada en orden P - 1"""
        if self._order == 0:
            return Series2.zeros(0)
        return Series2.from_function(lambda i, j: (j + 1) * self.coeff(i, j + 1), self._order - 1)

    def evaluate(self, x, y):
        """Evalúa el polinomio truncado en (x, y)"""
        return np.polynomial.polynomial.polyval2d(x, y, self.to_dense())

    def __call__(self, x, y):
        return self.evaluate(x, y)


@dataclass(frozen=True)
class WeightPair:
    """
    Exponentes de dilatación (sigma, tau) en Q = Z^2 \\ {(0, 0)}

    Forma canónica: gcd(|sigma|, |tau|) = 1, sigma >= 0 y sigma = 0 => tau = -1.
    """
    sigma: int
    tau: int

    def __post_init__(self):
        if not isinstance(self.sigma, (int, np.integer)) or not isinstance(self.tau, (int, np.integer)):
            raise ValueError(f"Los pesos deben ser enteros: ({self.sigma}, {self.tau})")
        if self.sigma == 0 and self.tau == 0:
            raise ValueError("(sigma, tau) = (0, 0) no pertenece a Q")

    @property
    def tau_plus(self) -> int:
        return max(0, self.tau)

    @property
    def tau_minus(self) -> int:
        return -min(0, self.tau)

    @property
    def total(self) -> int:
        """sigma + |tau|"""
        return self.sigma + abs(self.tau)

    @property
    def is_canonical(self) -> bool:
        if math.gcd(abs(self.sigma), abs(self.tau)) != 1 or self.sigma < 0:
            return False
        return self.sigma > 0 or self.tau == -1

    def weight(self, i: int, j: int) -> int:
        return self.sigma * i + self.tau * j

    def as_tuple(self) -> Tuple[int, int]:
        return (self.sigma, self.tau)


@dataclass(frozen=True)
class PowerTable:
    """
    Tabla c_jk de coeficientes de h^j (0 <= j <= maxj, k <= orden)

    Cumple c_jk = 0 para k < j cuando h(0) = 0.
    """
    base: Series1
    maxj: int
    entries: np.ndarray

    @property
    def order(self) -> int:
        return self.base.order

    def c(self, j: int, k: int) -> complex:
        if j < 0 or j > self.maxj:
            raise IndexError(f"Potencia j = {j} fuera de 0..{self.maxj}")
        if k < 0 or k > self.order:
            raise IndexError(f"Grado k = {k} fuera del orden {self.order}")
        return complex(self.entries[j, k])

    def row(self, j: int) -> Series1:
        return Series1(self.entries[j])
