"""Finite truncations of shift operators and their norms.

Two families of matrices realize a symbol ``f``:

* ``build_unilateral(f, N)``: the compression of ``f`` applied to the
  unilateral shift ``T e_j = e_{j+1}`` onto the first ``N`` basis vectors.
  For causal ``f`` this is the lower-triangular Toeplitz matrix with
  ``a_{i-j}`` at entry ``(i, j)``.
* ``build_bilateral(f, N)``: the symbol applied to the cyclic shift, a
  circulant matrix whose eigenvalues are the symbol's values at the N-th
  roots of unity.

``build_toeplitz`` constructs the same matrix as ``build_unilateral``
through a deliberately independent route (projected multiplication,
column by column) so the two can be compared entrywise.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import wiener
from .wiener import WienerElement

__all__ = [
    "OperatorKind",
    "TruncatedOperator",
    "SzegoVector",
    "IsometryRow",
    "build_unilateral",
    "build_bilateral",
    "build_toeplitz",
    "operator_norm",
    "rayleigh_quotient",
    "isometry_sweep",
    "isometry_csv",
    "dump_matrix",
]

# Largest dimension handled by dense SVD; larger matrices go through ARPACK.
DENSE_SVD_MAX_DIM = 1024

# Szego vectors are only defined strictly inside the circle.
MAX_SZEGO_MODULUS = 1.0 - 1e-6


class OperatorKind(enum.Enum):
    UNILATERAL_COMPRESSION = "unilateral"
    BILATERAL_CIRCULANT = "circulant"


def _freeze(matrix: np.ndarray) -> np.ndarray:
    matrix = np.ascontiguousarray(matrix, dtype=complex)
    matrix.setflags(write=False)
    return matrix


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    """An ``N x N`` matrix remembering the symbol and truncation it came from."""

    matrix: np.ndarray
    kind: OperatorKind
    source: WienerElement
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "matrix", _freeze(self.matrix))
        if self.matrix.shape != (self.dim, self.dim):
            raise ValueError("matrix shape does not match dim")


@dataclass(frozen=True, eq=False)
class SzegoVector:
    """Truncated reproducing kernel at a point ``w`` strictly inside the circle.

    ``values[k] = conj(w)**k`` for ``k = 0 .. dim-1``, so ``values[0] == 1``.
    Rayleigh quotients against these vectors converge to ``f(w)``.
    """

    point: complex
    values: np.ndarray

    def __post_init__(self):
        point = complex(self.point)
        if abs(point) > MAX_SZEGO_MODULUS:
            raise ValueError(
                f"kernel point must satisfy |w| <= {MAX_SZEGO_MODULUS}, got |w| = {abs(point)}"
            )
        values = _freeze(self.values)
        if values.ndim != 1 or values.shape[0] < 1:
            raise ValueError("values must be a nonempty vector")
        if values[0] != 1:
            raise ValueError("values[0] must equal 1")
        object.__setattr__(self, "point", point)
        object.__setattr__(self, "values", values)

    @classmethod
    def truncated(cls, point: complex, dim: int) -> "SzegoVector":
        point = complex(point)
        values = np.conj(point) ** np.arange(int(dim))
        return cls(point, values)


def build_unilateral(f: WienerElement, dim: int) -> TruncatedOperator:
    """Power series in the truncated shift: ``sum_n a_n S**n``.

    ``S`` is the ``dim x dim`` matrix with ones on the first subdiagonal
    (``S e_j = e_{j+1}``, last basis vector annihilated), so ``S**n`` has ones
    on the n-th subdiagonal and the sum lands each coefficient on its own
    diagonal exactly.  Requires a causal symbol.
    """
    dim = int(dim)
    if dim < 1:
        raise ValueError("dim must be at least 1")
    if not f.is_causal:
        raise ValueError(
            "unilateral compression needs a causal symbol (offset >= 0); "
            f"got offset {f.offset}"
        )
    matrix = np.zeros((dim, dim), dtype=complex)
    for k, c in enumerate(f.coeffs):
        n = f.offset + k
        if n < dim:
            matrix += c * np.eye(dim, k=-n, dtype=complex)
    return TruncatedOperator(matrix, OperatorKind.UNILATERAL_COMPRESSION, f, dim)


def build_toeplitz(f: WienerElement, dim: int) -> TruncatedOperator:
    """Toeplitz matrix of ``f`` by projected multiplication, column by column.

    Column ``j`` is the coefficient sequence of ``f(z) * z**j`` with negative
    indices projected away, truncated to indices ``0 .. dim-1``.  Independent
    of :func:`build_unilateral`; for causal symbols the two agree entrywise.
    """
    dim = int(dim)
    if dim < 1:
        raise ValueError("dim must be at least 1")
    if not f.is_causal:
        raise ValueError(
            "Toeplitz construction needs a causal symbol (offset >= 0); "
            f"got offset {f.offset}"
        )
    matrix = np.zeros((dim, dim), dtype=complex)
    for j in range(dim):
        shifted = wiener.multiply(f, wiener.monomial(j))
        for i in range(dim):
            matrix[i, j] = shifted.coeff(i)
    return TruncatedOperator(matrix, OperatorKind.UNILATERAL_COMPRESSION, f, dim)


def build_bilateral(f: WienerElement, dim: int) -> TruncatedOperator:
    """Symbol applied to the cyclic shift: a circulant matrix.

    Requires ``dim >= support_length`` so that distinct coefficients never
    alias onto the same residue mod ``dim``; entry ``(i, j)`` is the
    coefficient at the unique support index congruent to ``i - j``.
    """
    dim = int(dim)
    if dim < 1:
        raise ValueError("dim must be at least 1")
    if dim < f.support_length:
        raise ValueError(
            f"dim {dim} is smaller than the support length {f.support_length}; "
            "coefficients would alias"
        )
    first_col = np.zeros(dim, dtype=complex)
    for k, c in enumerate(f.coeffs):
        first_col[(f.offset + k) % dim] += c
    i = np.arange(dim)
    matrix = first_col[(i[:, None] - i[None, :]) % dim]
    return TruncatedOperator(matrix, OperatorKind.BILATERAL_CIRCULANT, f, dim)


def _largest_singular_value_arpack(matrix: np.ndarray) -> float:
    from scipy.sparse.linalg import ArpackNoConvergence, svds

    n = min(matrix.shape)
    # A fixed but generic start vector keeps reruns deterministic without
    # landing on an invariant subspace (for a circulant, the all-ones vector
    # is an eigenvector and would trap the iteration at the wrong value).
    gen = np.random.Generator(np.random.Philox(0x5EED))
    v0 = gen.standard_normal(n) + 1j * gen.standard_normal(n)
    v0 /= np.linalg.norm(v0)
    try:
        vals = svds(
            matrix,
            k=1,
            which="LM",
            tol=1e-10,
            v0=v0,
            ncv=min(n - 1, 64),
            return_singular_vectors=False,
        )
        return float(vals[0])
    except ArpackNoConvergence:
        # nearly degenerate leading singular values can stall the restarts;
        # fall back to the dense answer rather than report garbage
        return float(np.linalg.svd(matrix, compute_uv=False)[0])


def operator_norm(operator) -> float:
    """Largest singular value, accurate to about 1e-8 relative.

    Dense SVD up to ``DENSE_SVD_MAX_DIM``; Lanczos-style iteration (ARPACK)
    with a fixed start vector beyond that.  Accepts a
    :class:`TruncatedOperator` or a plain square array.
    """
    matrix = operator.matrix if isinstance(operator, TruncatedOperator) else np.asarray(operator, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError("operator must be a square matrix")
    if matrix.shape[0] <= DENSE_SVD_MAX_DIM:
        return float(np.linalg.svd(matrix, compute_uv=False)[0])
    return _largest_singular_value_arpack(matrix)


def rayleigh_quotient(f: WienerElement, w: SzegoVector) -> complex:
    """``<A k_w, k_w> / <k_w, k_w>`` for ``A = build_unilateral(f, len(k_w))``.

    Converges to ``f(w.point)`` as the truncation grows, and its modulus
    never exceeds the operator norm.
    """
    k = w.values
    a = build_unilateral(f, k.shape[0]).matrix
    return complex(np.vdot(k, a @ k) / np.vdot(k, k))


@dataclass(frozen=True)
class IsometryRow:
    dim: int
    norm: float
    gap: float


def isometry_sweep(f: WienerElement, dims, grid_size: int = 1 << 16) -> list[IsometryRow]:
    """Compression norms against the grid sup norm over increasing dimensions.

    Returns rows ``(N, ||f(T_N)||, sup - ||f(T_N)||)``.  The norm column is
    nondecreasing (each truncation is a compression of the next) and the gap
    column nonincreasing, up to float noise of order 1e-14 near zero.
    """
    dims = [int(d) for d in dims]
    if any(b <= a for a, b in zip(dims, dims[1:])):
        raise ValueError("dims must be strictly increasing")
    sup = wiener.sup_norm(f, grid_size)
    rows = []
    for dim in dims:
        nrm = operator_norm(build_unilateral(f, dim))
        rows.append(IsometryRow(dim, nrm, sup - nrm))
    return rows


def isometry_csv(rows) -> str:
    lines = ["N,norm,gap"]
    for r in rows:
        lines.append(f"{r.dim},{r.norm:.17g},{r.gap:.17g}")
    return "\n".join(lines) + "\n"


def dump_matrix(operator: TruncatedOperator) -> str:
    """Dense text dump: header ``"N kind"`` then N rows of ``re,im`` pairs."""
    lines = [f"{operator.dim} {operator.kind.value}"]
    for row in operator.matrix:
        lines.append(" ".join(f"{c.real:.17g},{c.imag:.17g}" for c in row))
    return "\n".join(lines) + "\n"
