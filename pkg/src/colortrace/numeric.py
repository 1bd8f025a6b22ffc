"""Concrete matrix Lie algebras and floating-point evaluation.

This is the ground-truth side of the package: su(2) (Pauli basis),
su(3) (standard Gell-Mann basis) and su(N) (generalized Gell-Mann
construction) realized as explicit matrices normalized to
Tr(T^a T^b) = delta^{ab}/2, with structure constants and symmetrized
traces computed from the matrices themselves.  Symbolic expressions are
evaluated by fixing their free adjoint indices and summing every dummy
pair over the adjoint dimension.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .colorexpr import ColorExpr, free_letters

_CONSTRUCTION_TOL = 1e-12

# dummy-axis labels for einsum; 't' is reserved for the trial axis
_EINSUM_LETTERS = "abcdefghijklmnopqrsuvwxyz"


def _pauli_over_two() -> list:
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    return [sx / 2, sy / 2, sz / 2]


def _gell_mann_over_two() -> list:
    l1 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=complex)
    l2 = np.array([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]], dtype=complex)
    l3 = np.array([[1, 0, 0], [0, -1, 0], [0, 0, 0]], dtype=complex)
    l4 = np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]], dtype=complex)
    l5 = np.array([[0, 0, -1j], [0, 0, 0], [1j, 0, 0]], dtype=complex)
    l6 = np.array([[0, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=complex)
    l7 = np.array([[0, 0, 0], [0, 0, -1j], [0, 1j, 0]], dtype=complex)
    l8 = np.diag([1, 1, -2]).astype(complex) / np.sqrt(3)
    return [m / 2 for m in (l1, l2, l3, l4, l5, l6, l7, l8)]


def _generalized_gell_mann_over_two(N: int) -> list:
    """Symmetric pairs, then antisymmetric pairs, then diagonals, scaled
    so that Tr(T^a T^b) = delta^{ab}/2."""
    out = []
    for j in range(N):
        for k in range(j + 1, N):
            m = np.zeros((N, N), dtype=complex)
            m[j, k] = m[k, j] = 1
            out.append(m / 2)
    for j in range(N):
        for k in range(j + 1, N):
            m = np.zeros((N, N), dtype=complex)
            m[j, k] = -1j
            m[k, j] = 1j
            out.append(m / 2)
    for l in range(1, N):
        diag = [1.0] * l + [-float(l)] + [0.0] * (N - l - 1)
        m = np.diag(diag).astype(complex) * np.sqrt(2.0 / (l * (l + 1)))
        out.append(m / 2)
    return out


# Largest dense symmetrized-trace tensor worth materializing; beyond it
# evaluation falls back to per-entry lookups.
_DENSE_D_LIMIT = 600_000


@dataclass
class MatrixAlgebra:
    """A concrete su(N) with its generators and derived tensors.

    Immutable after construction apart from insert-only caches (the
    symmetrized-product matrices, the symmetrized-trace values, and the
    dense symmetrized-trace tensors); concurrent duplicate inserts are
    harmless.
    """

    name: str
    dim: int
    generators: list
    f: np.ndarray
    _sym_cache: dict = field(default_factory=dict, repr=False)
    _dense_d: dict = field(default_factory=dict, repr=False)

    def d_value(self, indices: tuple) -> complex:
        """Symmetrized trace at a sorted tuple of 0-based indices."""
        return complex(np.trace(self._sym_product(indices)))

    def _sym_product(self, key: tuple) -> np.ndarray:
        cached = self._sym_cache.get(key)
        if cached is not None:
            return cached
        if not key:
            n = self.generators[0].shape[0]
            result = np.eye(n, dtype=complex)
        else:
            result = np.zeros_like(self.generators[0])
            for i in range(len(key)):
                rest = key[:i] + key[i + 1 :]
                result = result + self._sym_product(rest) @ self.generators[key[i]]
            result = result / len(key)
        self._sym_cache[key] = result
        return result

    def dense_d(self, arity: int):
        """Dense symmetrized-trace tensor of a given arity, or None when
        it would be too large to be worth it."""
        if self.dim**arity > _DENSE_D_LIMIT:
            return None
        cached = self._dense_d.get(arity)
        if cached is None:
            cached = np.empty((self.dim,) * arity, dtype=complex)
            for combo in itertools.product(range(self.dim), repeat=arity):
                cached[combo] = self.d_value(tuple(sorted(combo)))
            self._dense_d[arity] = cached
        return cached


def build_algebra(name: str) -> MatrixAlgebra:
    """su2, su3, or suN:<N> with 2 <= N <= 5.

    su2 and su3 use the standard Pauli and Gell-Mann bases (so e.g.
    f^{123} = 1 in both); suN:<N> uses the generalized construction,
    whose basis ordering differs from the standard one at N = 3.
    """
    key = name.strip().lower()
    if key == "su2":
        gens = _pauli_over_two()
    elif key == "su3":
        gens = _gell_mann_over_two()
    elif key.startswith("sun:"):
        try:
            N = int(key.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"malformed algebra name: {name!r}") from None
        if not 2 <= N <= 5:
            raise ValueError(f"suN supports 2 <= N <= 5, got {N}")
        gens = _generalized_gell_mann_over_two(N)
    else:
        raise ValueError(f"unknown algebra {name!r} (su2, su3 or suN:<N>)")

    dim = len(gens)
    stack = np.stack(gens)
    gram = np.einsum("aij,bji->ab", stack, stack)
    if not np.allclose(gram, np.eye(dim) / 2, atol=_CONSTRUCTION_TOL):
        raise AssertionError("generator normalization Tr(T^aT^b)=delta/2 failed")
    for g in gens:
        if abs(np.trace(g)) > _CONSTRUCTION_TOL:
            raise AssertionError("generators must be traceless")
        if not np.allclose(g, g.conj().T, atol=_CONSTRUCTION_TOL):
            raise AssertionError("generators must be Hermitian")
    algebra = MatrixAlgebra(name=key, dim=dim, generators=gens, f=np.empty(0))
    algebra.f = structure_constants(algebra)
    return algebra


def structure_constants(algebra: MatrixAlgebra) -> np.ndarray:
    """Real totally antisymmetric tensor with [T^a,T^b] = i f^{abc} T^c,
    extracted as f^{abc} = -2i Tr([T^a,T^b] T^c) under the half-delta
    normalization."""
    stack = np.stack(algebra.generators)
    comm = np.einsum("aij,bjk->abik", stack, stack) - np.einsum(
        "bij,ajk->abik", stack, stack
    )
    ften = -2j * np.einsum("abij,cji->abc", comm, stack)
    if np.abs(ften.imag).max() > _CONSTRUCTION_TOL:
        raise AssertionError("structure constants are not real")
    freal = ften.real
    recon = 1j * np.einsum("abc,cij->abij", freal, stack)
    if np.abs(comm - recon).max() > _CONSTRUCTION_TOL:
        raise AssertionError("structure constants do not reproduce commutators")
    return freal


def symmetric_trace(algebra: MatrixAlgebra, indices: Sequence[int]) -> complex:
    """Average of the matrix trace over all orderings of the generators;
    ``indices`` are 1-based adjoint labels."""
    if len(indices) < 1:
        raise ValueError("need at least one index")
    key = tuple(sorted(i - 1 for i in indices))
    if not all(0 <= i < algebra.dim for i in key):
        raise ValueError(f"adjoint index out of range 1..{algebra.dim}: {indices}")
    return algebra.d_value(key)


def direct_trace(algebra: MatrixAlgebra, indices: Sequence[int]) -> complex:
    """Trace of the ordered product of generators (1-based labels)."""
    if len(indices) < 1:
        raise ValueError("need at least one index")
    prod = algebra.generators[indices[0] - 1]
    for i in indices[1:]:
        prod = prod @ algebra.generators[i - 1]
    return complex(np.trace(prod))


def _factor_tensor_batch(
    algebra: MatrixAlgebra, kind: str, idx: tuple, fixed: dict, T: int
):
    """(has_trial_axis, dummy_axes, array) for one factor, vectorized over
    the trial axis.

    ``fixed`` maps free letters to 0-based index arrays of shape (T,).
    Factors without dummy slots come back as per-trial scalars (shape
    (T,), dummy_axes empty); factors without free slots carry no trial
    axis at all.
    """
    dim = algebra.dim
    dummies = tuple(t for t in idx if t < 0)
    frees = tuple(t for t in idx if t > 0)
    if kind == "delta":
        u, v = idx
        if not dummies:
            return True, (), (fixed[u] == fixed[v]).astype(complex)
        if len(dummies) == 1:
            pos = fixed[u] if u > 0 else fixed[v]
            arr = np.zeros((len(pos), dim), dtype=complex)
            arr[np.arange(len(pos)), pos] = 1.0
            return True, (dummies[0],), arr
        return False, (u, v), np.eye(dim, dtype=complex)
    if kind == "f":
        tensor = algebra.f
    else:
        tensor = algebra.dense_d(len(idx)) if dummies else None
        if dummies and tensor is None:
            # too large for a dense tensor: fill the open axes per trial
            arr = np.empty((T,) + (dim,) * len(dummies), dtype=complex)
            fixed_part = [fixed[t] for t in frees]
            for trial in range(T):
                base = [col[trial] for col in fixed_part]
                for combo in itertools.product(range(dim), repeat=len(dummies)):
                    arr[(trial,) + combo] = algebra.d_value(
                        tuple(sorted(base + list(combo)))
                    )
            return True, dummies, arr
        if not dummies:
            cols = [fixed[t] for t in frees]
            vals = np.array(
                [
                    algebra.d_value(tuple(sorted(col[k] for col in cols)))
                    for k in range(T)
                ],
                dtype=complex,
            )
            return True, (), vals
    # f (any pattern) and dense d: transpose free slots to the front and
    # gather with the per-trial index arrays
    free_axes = tuple(i for i, t in enumerate(idx) if t > 0)
    dummy_axes = tuple(i for i, t in enumerate(idx) if t < 0)
    if not frees:
        return False, dummies, np.asarray(tensor, dtype=complex)
    base = np.transpose(tensor, free_axes + dummy_axes)
    arr = base[tuple(fixed[idx[i]] for i in free_axes)]
    if not dummies:
        return True, (), arr.astype(complex)
    return True, dummies, arr.astype(complex)


def evaluate_many(
    expr: ColorExpr, algebra: MatrixAlgebra, assignments: Sequence[Mapping[int, int]]
) -> np.ndarray:
    """Numeric values of an expression under many index assignments.

    Each assignment maps every free letter to a 1-based adjoint index;
    the result is a complex array of one value per assignment.  Dummy
    pairs are summed over the full adjoint range; the contraction for
    each term runs once with the trial axis vectorized.
    """
    letters = sorted(free_letters(expr))
    T = len(assignments)
    for a in assignments:
        missing = [x for x in letters if x not in a]
        if missing:
            raise ValueError(f"assignment misses free letters {missing}")
    fixed = {
        x: np.array([a[x] - 1 for a in assignments], dtype=np.intp) for x in letters
    }
    if any((col < 0).any() or (col >= algebra.dim).any() for col in fixed.values()):
        raise ValueError(f"adjoint index out of range 1..{algebra.dim}")
    total = np.zeros(T, dtype=complex)
    if T == 0:
        return total
    for t in expr.terms:
        vals = np.full(T, complex(t.coeff))
        subs = []
        arrays = []
        batched = False
        for kind, idx in t.factors:
            has_t, axes, arr = _factor_tensor_batch(algebra, kind, idx, fixed, T)
            if has_t and not axes:
                vals = vals * arr
            else:
                batched = batched or has_t
                subs.append(("t",) + axes if has_t else axes)
                arrays.append(arr)
        if arrays:
            labels: dict = {"t": "t"}
            for axes in subs:
                for dummy in axes:
                    if dummy not in labels:
                        labels[dummy] = _EINSUM_LETTERS[len(labels) - 1]
            spec = ",".join("".join(labels[x] for x in axes) for axes in subs)
            out = "->t" if batched else "->"
            vals = vals * np.einsum(spec + out, *arrays, optimize=True)
        total += vals
    return total


def evaluate(
    expr: ColorExpr, algebra: MatrixAlgebra, assignment: Mapping[int, int]
) -> complex:
    """Numeric value of an expression under an index assignment.

    ``assignment`` maps every free letter to a 1-based adjoint index;
    dummy pairs are summed over the full adjoint range.
    """
    return complex(evaluate_many(expr, algebra, [assignment])[0])
