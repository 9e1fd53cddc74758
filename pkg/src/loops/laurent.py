"""
Laurent Polynomials and 2x2 Laurent Matrices

Coefficient arithmetic in the loop parameter λ. Two modes share the code:

* float mode: complex128 coefficient arrays, negligible end terms trimmed
  (|c| < 1e-14 * max|c|);
* exact mode: object arrays of sympy numbers, only exact zeros trimmed.

A LaurentMatrix stores one 2x2 block per exponent, exponents contiguous
from ``lo``. The JSON form is {"lo": int, "coeffs": [block, ...]} with each
block a 2x2 list of [re, im] pairs.
"""

import logging
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np
import sympy

logger = logging.getLogger(__name__)

TRIM_RELATIVE = 1e-14

Scalar = Union[complex, float, int, Any]


def _is_exact(arr: np.ndarray) -> bool:
    return arr.dtype == object


def exact_scalar(v) -> Any:
    """Exact sympy number for v; doubles are taken at their binary value."""
    if isinstance(v, sympy.Basic):
        return v
    if isinstance(v, (int, np.integer, Fraction)):
        return sympy.Rational(v)
    c = complex(v)
    if c.imag == 0.0:
        return sympy.Rational(c.real)
    return sympy.Rational(c.real) + sympy.I * sympy.Rational(c.imag)


def _as_coeff_array(values, exact: bool) -> np.ndarray:
    if exact:
        arr = np.asarray(values, dtype=object)
        return np.array([exact_scalar(v) for v in arr.ravel()], dtype=object).reshape(arr.shape)
    return np.asarray(values, dtype=complex)


def _block_abs(coeffs: np.ndarray) -> np.ndarray:
    """Magnitude per exponent (max over the block for matrices)."""
    if coeffs.size == 0:
        return np.zeros(0)
    if _is_exact(coeffs):
        flat = coeffs.reshape(coeffs.shape[0], -1)
        return np.array([0.0 if all(c == 0 for c in row) else 1.0 for row in flat])
    mags = np.abs(coeffs.reshape(coeffs.shape[0], -1))
    return mags.max(axis=1)


def _trim(lo: int, coeffs: np.ndarray) -> Tuple[int, np.ndarray]:
    mags = _block_abs(coeffs)
    if mags.size == 0:
        return 0, coeffs[:0]
    if _is_exact(coeffs):
        keep = mags > 0
    else:
        peak = mags.max()
        if peak == 0.0:
            return 0, coeffs[:0]
        keep = mags >= TRIM_RELATIVE * peak
    idx = np.flatnonzero(keep)
    if idx.size == 0:
        return 0, coeffs[:0]
    first, last = int(idx[0]), int(idx[-1])
    return lo + first, coeffs[first:last + 1]


def _convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.size == 0 or b.size == 0:
        dtype = object if (_is_exact(a) or _is_exact(b)) else complex
        return np.zeros(0, dtype=dtype)
    if _is_exact(a) or _is_exact(b):
        out = np.array([sympy.Integer(0)] * (a.size + b.size - 1), dtype=object)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return np.array([sympy.expand(c) for c in out], dtype=object)
    return np.convolve(a, b)


def _conj(arr: np.ndarray) -> np.ndarray:
    if _is_exact(arr):
        return np.array([sympy.conjugate(c) for c in arr.ravel()], dtype=object).reshape(arr.shape)
    return np.conj(arr)


def _to_complex(arr: np.ndarray) -> np.ndarray:
    if _is_exact(arr):
        return np.array([complex(sympy.N(c)) for c in arr.ravel()], dtype=complex).reshape(arr.shape)
    return arr


class LaurentPoly:
    """Laurent polynomial Σ coeffs[i] λ^(lo+i).

    The zero polynomial is canonical: lo = 0 and no coefficients.
    """

    __slots__ = ("lo", "coeffs")
    __array_ufunc__ = None

    def __init__(self, lo: int, coeffs: Iterable[Scalar], exact: bool = False):
        arr = np.asarray(list(coeffs), dtype=object)
        arr = _as_coeff_array(arr, exact)
        self.lo, self.coeffs = _trim(int(lo), arr)

    @classmethod
    def _raw(cls, lo: int, coeffs: np.ndarray) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj.lo, obj.coeffs = _trim(int(lo), coeffs)
        return obj

    @classmethod
    def zero(cls, exact: bool = False) -> "LaurentPoly":
        return cls._raw(0, np.zeros(0, dtype=object if exact else complex))

    @classmethod
    def constant(cls, c: Scalar, exact: bool = False) -> "LaurentPoly":
        return cls(0, [c], exact=exact)

    @classmethod
    def monomial(cls, k: int, c: Scalar = 1, exact: bool = False) -> "LaurentPoly":
        return cls(k, [c], exact=exact)

    @property
    def exact(self) -> bool:
        return _is_exact(self.coeffs)

    @property
    def hi(self) -> int:
        return self.lo + len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def coefficient(self, k: int) -> Scalar:
        i = k - self.lo
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return sympy.Integer(0) if self.exact else 0j

    def coefficients_on(self, lo: int, hi: int) -> np.ndarray:
        """Dense coefficient vector for exponents lo..hi (zero padded)."""
        out = np.zeros(hi - lo + 1, dtype=object if self.exact else complex)
        if self.exact:
            out[:] = sympy.Integer(0)
        for k in range(max(lo, self.lo), min(hi, self.hi) + 1):
            out[k - lo] = self.coeffs[k - self.lo]
        return out

    def _aligned(self, other: "LaurentPoly") -> Tuple[int, np.ndarray, np.ndarray]:
        if self.is_zero() and other.is_zero():
            lo = hi = 0
        elif self.is_zero():
            lo, hi = other.lo, other.hi
        elif other.is_zero():
            lo, hi = self.lo, self.hi
        else:
            lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        return lo, self.coefficients_on(lo, hi), other.coefficients_on(lo, hi)

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        return LaurentPoly.constant(other, exact=self.exact)

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        lo, a, b = self._aligned(other)
        return LaurentPoly._raw(lo, a + b)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw(self.lo, -self.coeffs)

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentMatrix):
            return NotImplemented
        if isinstance(other, LaurentPoly):
            return LaurentPoly._raw(self.lo + other.lo, _convolve(self.coeffs, other.coeffs))
        return LaurentPoly._raw(self.lo, self.coeffs * other)

    __rmul__ = __mul__

    def __call__(self, lam):
        return self.evaluate(lam)

    def evaluate(self, lam):
        """Value at λ (scalar or array of nonzero complex numbers)."""
        lam = np.asarray(lam, dtype=complex)
        if self.is_zero():
            return np.zeros_like(lam)
        coeffs = _to_complex(self.coeffs)
        # Horner on the polynomial part, then shift by λ^lo
        acc = np.zeros_like(lam)
        for c in coeffs[::-1]:
            acc = acc * lam + c
        return acc * lam ** self.lo

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by λ^k."""
        return LaurentPoly._raw(self.lo + k, self.coeffs.copy())

    def conj(self) -> "LaurentPoly":
        """λ ↦ conj(p(λ̄)): conjugated coefficients."""
        return LaurentPoly._raw(self.lo, _conj(self.coeffs))

    def invert(self) -> "LaurentPoly":
        """λ ↦ p(λ⁻¹)."""
        if self.is_zero():
            return self
        return LaurentPoly._raw(-self.hi, self.coeffs[::-1].copy())

    def derivative(self) -> "LaurentPoly":
        if self.is_zero():
            return self
        ks = np.arange(self.lo, self.hi + 1)
        return LaurentPoly._raw(self.lo - 1, self.coeffs * ks)

    def to_float(self) -> "LaurentPoly":
        return LaurentPoly._raw(self.lo, _to_complex(self.coeffs))

    def max_abs(self) -> float:
        if self.is_zero():
            return 0.0
        return float(np.abs(_to_complex(self.coeffs)).max())

    def allclose(self, other: "LaurentPoly", atol: float = 1e-12) -> bool:
        return (self - other).to_float().max_abs() <= atol

    def to_json(self) -> Dict[str, Any]:
        coeffs = _to_complex(self.coeffs)
        return {"lo": self.lo, "coeffs": [[float(c.real), float(c.imag)] for c in coeffs]}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "LaurentPoly":
        return cls(int(data["lo"]), [complex(re, im) for re, im in data["coeffs"]])

    def __repr__(self) -> str:
        terms = ", ".join(f"{c}·λ^{self.lo + i}" for i, c in enumerate(self.coeffs))
        return f"LaurentPoly({terms or '0'})"


class LaurentMatrix:
    """2x2 matrix with Laurent-polynomial entries, stored as blocks.

    ``coeffs[i]`` is the 2x2 coefficient of λ^(lo+i).
    """

    __slots__ = ("lo", "coeffs")
    __array_ufunc__ = None

    def __init__(self, lo: int, coeffs, exact: bool = False):
        arr = np.asarray(coeffs, dtype=object) if exact else np.asarray(coeffs, dtype=complex)
        if arr.size == 0:
            arr = arr.reshape(0, 2, 2)
        if arr.ndim != 3 or arr.shape[1:] != (2, 2):
            raise ValueError(f"expected blocks of shape (n, 2, 2), got {arr.shape}")
        if exact:
            arr = _as_coeff_array(arr, True)
        self.lo, self.coeffs = _trim(int(lo), arr)

    @classmethod
    def _raw(cls, lo: int, coeffs: np.ndarray) -> "LaurentMatrix":
        obj = cls.__new__(cls)
        obj.lo, obj.coeffs = _trim(int(lo), coeffs)
        return obj

    @classmethod
    def zero(cls, exact: bool = False) -> "LaurentMatrix":
        return cls._raw(0, np.zeros((0, 2, 2), dtype=object if exact else complex))

    @classmethod
    def identity(cls, exact: bool = False) -> "LaurentMatrix":
        return cls.constant(np.eye(2), exact=exact)

    @classmethod
    def constant(cls, m, exact: bool = False) -> "LaurentMatrix":
        return cls(0, [np.asarray(m, dtype=object if exact else complex)], exact=exact)

    @classmethod
    def monomial(cls, k: int, m, exact: bool = False) -> "LaurentMatrix":
        return cls(k, [np.asarray(m, dtype=object if exact else complex)], exact=exact)

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence[LaurentPoly]]) -> "LaurentMatrix":
        """Build from a 2x2 nested list of LaurentPoly."""
        polys = [entries[0][0], entries[0][1], entries[1][0], entries[1][1]]
        exact = any(p.exact for p in polys)
        nonzero = [p for p in polys if not p.is_zero()]
        if not nonzero:
            return cls.zero(exact=exact)
        lo = min(p.lo for p in nonzero)
        hi = max(p.hi for p in nonzero)
        blocks = np.zeros((hi - lo + 1, 2, 2), dtype=object if exact else complex)
        for idx, p in enumerate(polys):
            col = p.coefficients_on(lo, hi)
            if exact and not p.exact:
                col = _as_coeff_array(col, True)
            blocks[:, idx // 2, idx % 2] = col
        return cls._raw(lo, blocks)

    @property
    def exact(self) -> bool:
        return _is_exact(self.coeffs)

    @property
    def hi(self) -> int:
        return self.lo + len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def entry(self, i: int, j: int) -> LaurentPoly:
        return LaurentPoly._raw(self.lo, self.coeffs[:, i, j].copy())

    def entries(self) -> List[List[LaurentPoly]]:
        return [[self.entry(0, 0), self.entry(0, 1)], [self.entry(1, 0), self.entry(1, 1)]]

    def coefficient(self, k: int) -> np.ndarray:
        i = k - self.lo
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        if self.exact:
            return np.array([[sympy.Integer(0)] * 2] * 2, dtype=object)
        return np.zeros((2, 2), dtype=complex)

    def blocks_on(self, lo: int, hi: int) -> np.ndarray:
        out = np.zeros((hi - lo + 1, 2, 2), dtype=object if self.exact else complex)
        if self.exact:
            out[...] = sympy.Integer(0)
        if not self.is_zero():
            for k in range(max(lo, self.lo), min(hi, self.hi) + 1):
                out[k - lo] = self.coeffs[k - self.lo]
        return out

    def _span_with(self, other: "LaurentMatrix") -> Tuple[int, int]:
        spans = [(m.lo, m.hi) for m in (self, other) if not m.is_zero()]
        if not spans:
            return 0, 0
        return min(s[0] for s in spans), max(s[1] for s in spans)

    def __add__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        lo, hi = self._span_with(other)
        return LaurentMatrix._raw(lo, self.blocks_on(lo, hi) + other.blocks_on(lo, hi))

    def __neg__(self) -> "LaurentMatrix":
        return LaurentMatrix._raw(self.lo, -self.coeffs)

    def __sub__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        return self + (-other)

    def __mul__(self, other) -> "LaurentMatrix":
        """Scalar or LaurentPoly multiple (entrywise)."""
        if isinstance(other, LaurentPoly):
            entries = [[e * other for e in row] for row in self.entries()]
            return LaurentMatrix.from_entries(entries)
        if isinstance(other, LaurentMatrix):
            return self @ other
        return LaurentMatrix._raw(self.lo, self.coeffs * other)

    __rmul__ = __mul__

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        return laurent_product(self, other)

    def __call__(self, lam):
        return self.evaluate(lam)

    def evaluate(self, lam) -> np.ndarray:
        """Value at λ: shape (2, 2) for scalar λ, (..., 2, 2) for arrays."""
        lam = np.asarray(lam, dtype=complex)
        out = np.zeros(lam.shape + (2, 2), dtype=complex)
        if self.is_zero():
            return out
        coeffs = _to_complex(self.coeffs)
        for c in coeffs[::-1]:
            out = out * lam[..., None, None] + c
        return out * (lam ** self.lo)[..., None, None]

    def trace(self) -> LaurentPoly:
        return self.entry(0, 0) + self.entry(1, 1)

    def transpose(self) -> "LaurentMatrix":
        return LaurentMatrix._raw(self.lo, np.swapaxes(self.coeffs, 1, 2).copy())

    def shift(self, k: int) -> "LaurentMatrix":
        return LaurentMatrix._raw(self.lo + k, self.coeffs.copy())

    def to_float(self) -> "LaurentMatrix":
        return LaurentMatrix._raw(self.lo, _to_complex(self.coeffs))

    def max_abs(self) -> float:
        if self.is_zero():
            return 0.0
        return float(np.abs(_to_complex(self.coeffs)).max())

    def allclose(self, other: "LaurentMatrix", atol: float = 1e-12) -> bool:
        return (self - other).to_float().max_abs() <= atol

    def to_json(self) -> Dict[str, Any]:
        coeffs = _to_complex(self.coeffs)
        return {
            "lo": self.lo,
            "coeffs": [
                [[[float(c.real), float(c.imag)] for c in row] for row in block]
                for block in coeffs
            ],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "LaurentMatrix":
        blocks = [
            [[complex(re, im) for re, im in row] for row in block]
            for block in data["coeffs"]
        ]
        return cls(int(data["lo"]), blocks if blocks else np.zeros((0, 2, 2)))

    def __repr__(self) -> str:
        return f"LaurentMatrix(lo={self.lo}, hi={self.hi}, exact={self.exact})"


def laurent_product(a: LaurentMatrix, b: LaurentMatrix) -> LaurentMatrix:
    """Matrix product (ab)(λ) = a(λ)b(λ) with exact exponent bookkeeping."""
    exact = a.exact or b.exact
    if a.is_zero() or b.is_zero():
        return LaurentMatrix.zero(exact=exact)
    n = len(a.coeffs) + len(b.coeffs) - 1
    if not exact:
        out = np.zeros((n, 2, 2), dtype=complex)
        for i, blk in enumerate(a.coeffs):
            out[i:i + len(b.coeffs)] += np.einsum("ij,njk->nik", blk, b.coeffs)
        return LaurentMatrix._raw(a.lo + b.lo, out)
    out = np.empty((n, 2, 2), dtype=object)
    out[...] = sympy.Integer(0)
    for i, blk in enumerate(a.coeffs):
        for j, blk2 in enumerate(b.coeffs):
            out[i + j] = out[i + j] + blk.dot(blk2)
    out = np.vectorize(sympy.expand, otypes=[object])(out)
    return LaurentMatrix._raw(a.lo + b.lo, out)


def involution_star(x: LaurentMatrix) -> LaurentMatrix:
    """λ ↦ conj(X(λ̄))^t: conjugate coefficients, transpose blocks."""
    return LaurentMatrix._raw(x.lo, np.swapaxes(_conj(x.coeffs), 1, 2).copy())


def involution_invert(x: LaurentMatrix) -> LaurentMatrix:
    """λ ↦ X(λ⁻¹) by exponent negation."""
    if x.is_zero():
        return x
    return LaurentMatrix._raw(-x.hi, x.coeffs[::-1].copy())


def determinant(x: LaurentMatrix) -> LaurentPoly:
    e = x.entries()
    return e[0][0] * e[1][1] - e[0][1] * e[1][0]


def adjugate(x: LaurentMatrix) -> LaurentMatrix:
    e = x.entries()
    return LaurentMatrix.from_entries([[e[1][1], -e[0][1]], [-e[1][0], e[0][0]]])


def commutator(a: LaurentMatrix, b: LaurentMatrix) -> LaurentMatrix:
    return laurent_product(a, b) - laurent_product(b, a)


def poly_divide(num: LaurentPoly, den: LaurentPoly) -> Tuple[LaurentPoly, LaurentPoly]:
    """Long division num = q·den + r after factoring out the lowest powers.

    The remainder carries num's lowest power, so r ≡ 0 iff den divides num
    as Laurent polynomials.
    """
    if den.is_zero():
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    if num.is_zero():
        return LaurentPoly.zero(), LaurentPoly.zero()
    n = _to_complex(num.coeffs)[::-1]
    d = _to_complex(den.coeffs)[::-1]
    q, r = np.polydiv(n, d)
    quotient = LaurentPoly(num.lo - den.lo, np.atleast_1d(q)[::-1])
    remainder = LaurentPoly(num.lo, np.atleast_1d(r)[::-1])
    return quotient, remainder
