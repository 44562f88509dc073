"""Internal dense-operator machinery shared by the expansion engines.

Everything here works on operators embedded into the Hilbert space of a
"union" support (a sorted tuple of site indices).  Ordered-product sums over
multisets of Hamiltonian terms are evaluated by dynamic programming over
sub-multisets, which groups the factorially many orderings into
exponentially many subset states.  For pure product states the tables hold
vectors instead of matrices, which keeps every step at matvec cost.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from itertools import product as _iproduct
from typing import Callable, Iterable, Sequence

import numpy as np


def fsum_complex(values: Iterable[complex]) -> complex:
    """Exactly rounded complex sum; result independent of summation order."""
    vals = [complex(v) for v in values]
    return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))


def pmap(fn: Callable, items: Sequence, workers: int | None) -> list:
    """Order-preserving map, optionally on a thread pool.

    The caller reduces the returned list in canonical order, so results do
    not depend on the worker count.
    """
    items = list(items)
    if workers is None or workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def kron_all(factors: Sequence[np.ndarray]) -> np.ndarray:
    out = np.array([[1.0 + 0.0j]])
    for f in factors:
        out = np.kron(out, f)
    return out


def embed_matrix(matrix: np.ndarray, support: Sequence[int], union: Sequence[int], d: int) -> np.ndarray:
    """Embed an operator on `support` into the space of `union` ⊇ `support`.

    Tensor factors of both input and output are ordered by ascending site
    index.
    """
    support = tuple(support)
    union = tuple(union)
    if support == union:
        return np.asarray(matrix, dtype=np.complex128)
    extra = len(union) - len(support)
    big = np.kron(np.asarray(matrix, dtype=np.complex128), np.eye(d**extra, dtype=np.complex128))
    # leg j of `big` belongs to site order[j]; permute legs to union order
    order = list(support) + [s for s in union if s not in support]
    perm = [order.index(s) for s in union]
    u = len(union)
    tens = big.reshape((d,) * (2 * u))
    axes = perm + [u + p for p in perm]
    dim = d**u
    return np.ascontiguousarray(tens.transpose(axes).reshape(dim, dim))


def vector_on(site_vectors: Sequence[np.ndarray], union: Sequence[int]) -> np.ndarray:
    """Product-state vector restricted to the sites in `union`."""
    out = np.array([1.0 + 0.0j])
    for v in union:
        out = np.kron(out, site_vectors[v])
    return out


def density_on(site_matrices: Sequence[np.ndarray], union: Sequence[int]) -> np.ndarray:
    """Product-state density matrix restricted to the sites in `union`."""
    return kron_all([site_matrices[v] for v in union])


# ---------------------------------------------------------------------------
# sub-multiset bookkeeping


def submultiset_counts(mult: Sequence[int]) -> list[tuple[int, ...]]:
    """All count vectors c with 0 <= c_i <= mult_i, ordered by total then lex."""
    ranges = [range(m + 1) for m in mult]
    counts = [tuple(c) for c in _iproduct(*ranges)]
    counts.sort(key=lambda c: (sum(c), c))
    return counts


def split_weight(mult: Sequence[int], counts: Sequence[int]) -> int:
    """Number of labeled-unit subsets realizing the sub-multiset `counts`."""
    w = 1
    for mu, c in zip(mult, counts):
        w *= math.comb(mu, c)
    return w


def ordered_sum_vectors(
    h_mats: Sequence[np.ndarray], mult: Sequence[int], start: np.ndarray
) -> dict[tuple[int, ...], np.ndarray]:
    """DP table c -> P(c) @ start, where P(T) sums products of the terms of T
    over all labeled orderings.  Uses P(T) = sum_x mu_T(x) h_x P(T - x).
    """
    table: dict[tuple[int, ...], np.ndarray] = {}
    zero = (0,) * len(mult)
    table[zero] = start
    for c in submultiset_counts(mult):
        if c == zero:
            continue
        acc = None
        for i, ci in enumerate(c):
            if ci == 0:
                continue
            prev = table[c[:i] + (ci - 1,) + c[i + 1 :]]
            piece = ci * (h_mats[i] @ prev)
            acc = piece if acc is None else acc + piece
        table[c] = acc
    return table


def ordered_sum_matrices(h_mats: Sequence[np.ndarray], mult: Sequence[int], dim: int) -> dict[tuple[int, ...], np.ndarray]:
    """Matrix variant of :func:`ordered_sum_vectors` (P(T) itself)."""
    eye = np.eye(dim, dtype=np.complex128)
    return ordered_sum_vectors(h_mats, mult, eye)


# ---------------------------------------------------------------------------
# symmetrized products and nested commutators


def symmetrized_value_pure(h_mats: Sequence[np.ndarray], mult: Sequence[int], psi: np.ndarray) -> complex:
    """<h^V>_s for a pure product state factor psi on the union support."""
    m = sum(mult)
    table = ordered_sum_vectors(h_mats, mult, psi)
    full = table[tuple(mult)]
    return complex(np.vdot(psi, full)) / math.factorial(m)


def symmetrized_value_ie(h_mats: Sequence[np.ndarray], mult: Sequence[int], rho: np.ndarray) -> complex:
    """<h^V>_s by inclusion-exclusion over sub-multisets with operator powers
    evaluated through Hermitian eigendecompositions.
    """
    m = sum(mult)
    zero = (0,) * len(mult)
    pieces = []
    for c in submultiset_counts(mult):
        if c == zero:
            continue
        hc = None
        for i, ci in enumerate(c):
            if ci:
                hc = ci * h_mats[i] if hc is None else hc + ci * h_mats[i]
        vals, vecs = np.linalg.eigh(hc)
        power = (vecs * (vals**m)) @ vecs.conj().T
        sign = -1.0 if (m - sum(c)) % 2 else 1.0
        pieces.append(sign * split_weight(mult, c) * np.einsum("ij,ji->", power, rho))
    return fsum_complex(pieces) / math.factorial(m)


def symmetrized_value_naive(h_units: Sequence[np.ndarray], rho: np.ndarray) -> complex:
    """m!-term permutation sum; test oracle for small multisets."""
    from itertools import permutations

    m = len(h_units)
    pieces = []
    for perm in permutations(range(m)):
        prod = h_units[perm[0]]
        for idx in perm[1:]:
            prod = prod @ h_units[idx]
        pieces.append(np.einsum("ij,ji->", prod, rho))
    return fsum_complex(pieces) / math.factorial(m)


def nested_commutator_theta_pure(
    h_mats: Sequence[np.ndarray], mult: Sequence[int], a_emb: np.ndarray, psi: np.ndarray
) -> complex:
    """(1/m!) sum_sigma <psi| [h_s1,[...,[h_sm, A]]] |psi> for a pure state.

    Inclusion-exclusion over the left/right split of the nested commutator;
    both symmetrized factors come from one ordered-sum vector table.
    """
    m = sum(mult)
    table = ordered_sum_vectors(h_mats, mult, psi)
    right = {c: a_emb @ v for c, v in table.items()}
    total_mult = tuple(mult)
    pieces = []
    for c, vec in table.items():
        comp = tuple(mu - ci for mu, ci in zip(total_mult, c))
        size = sum(c)
        sign = -1.0 if (m - size) % 2 else 1.0
        weight = sign * math.comb(m, size) * split_weight(total_mult, c)
        pieces.append(weight * np.vdot(vec, right[comp]))
    return fsum_complex(pieces) / math.factorial(m)


def nested_commutator_theta_mixed(
    h_mats: Sequence[np.ndarray], mult: Sequence[int], a_emb: np.ndarray, rho: np.ndarray
) -> complex:
    dim = a_emb.shape[0]
    m = sum(mult)
    table = ordered_sum_matrices(h_mats, mult, dim)
    right = {c: a_emb @ p @ rho for c, p in table.items()}
    total_mult = tuple(mult)
    pieces = []
    for c, left in table.items():
        comp = tuple(mu - ci for mu, ci in zip(total_mult, c))
        size = sum(c)
        sign = -1.0 if (m - size) % 2 else 1.0
        weight = sign * math.comb(m, size) * split_weight(total_mult, c)
        pieces.append(weight * np.einsum("ij,ji->", left, right[comp]))
    return fsum_complex(pieces) / math.factorial(m)


def nested_commutator_theta_naive(h_units: Sequence[np.ndarray], a_emb: np.ndarray, rho: np.ndarray) -> complex:
    """Literal permutation sum over nested commutators; test oracle."""
    from itertools import permutations

    m = len(h_units)
    pieces = []
    for perm in permutations(range(m)):
        c = a_emb
        for idx in reversed(perm):
            h = h_units[idx]
            c = h @ c - c @ h
        pieces.append(np.einsum("ij,ji->", c, rho))
    return fsum_complex(pieces) / math.factorial(m)
