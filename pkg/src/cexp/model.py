"""Hamiltonians, product states, observables, and dense operator algebra.

Matrices are dense complex128, row-major, with tensor factors ordered by
ascending site index.  Every object is immutable after construction and safe
to share across workers; the operations below are pure functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _ops
from .errors import (
    CoefficientOutOfRange,
    DimensionMismatch,
    DuplicateSupport,
    MalformedSpec,
    NonHermitianTerm,
    NormViolation,
)

NORM_TOL = 1e-9
HERM_TOL = 1e-12
STATE_TOL = 1e-10
PURE_TOL = 1e-10


def spectral_norm(matrix: np.ndarray) -> float:
    """Largest singular value (operator norm)."""
    mat = np.asarray(matrix)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {mat.shape}")
    return float(np.linalg.norm(mat, 2))


def _frozen_array(matrix) -> np.ndarray:
    arr = np.array(matrix, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Term:
    """One local interaction: coefficient * matrix acting on `support`."""

    support: tuple[int, ...]
    coefficient: float
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "support", tuple(self.support))
        object.__setattr__(self, "matrix", _frozen_array(self.matrix))


@dataclass(frozen=True, eq=False)
class LocalHamiltonian:
    """Sum of unit-norm Hermitian terms with coefficients |lambda| <= 1."""

    n: int
    d: int
    terms: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.n < 1 or self.d < 2:
            raise MalformedSpec(f"need n >= 1 and d >= 2, got n={self.n}, d={self.d}")
        seen = set()
        for i, term in enumerate(self.terms):
            sup = term.support
            if len(sup) == 0:
                raise MalformedSpec(f"term {i} has empty support")
            if list(sup) != sorted(set(sup)):
                raise MalformedSpec(f"term {i} support must be strictly increasing, got {sup}")
            if sup[0] < 0 or sup[-1] >= self.n:
                raise MalformedSpec(f"term {i} support {sup} out of range for n={self.n}")
            if sup in seen:
                raise DuplicateSupport(f"two terms share the support {sup}; merge them before loading")
            seen.add(sup)
            if abs(term.coefficient) > 1.0:
                raise CoefficientOutOfRange(f"term {i} coefficient {term.coefficient} violates |lambda| <= 1")
            dim = self.d ** len(sup)
            if term.matrix.shape != (dim, dim):
                raise DimensionMismatch(f"term {i} matrix shape {term.matrix.shape}, expected {(dim, dim)}")
            herm = np.max(np.abs(term.matrix - term.matrix.conj().T))
            if herm > HERM_TOL:
                raise NonHermitianTerm(f"term {i} deviates from Hermiticity by {herm:.3e}")
            norm = spectral_norm(term.matrix)
            if abs(norm - 1.0) > NORM_TOL:
                raise NormViolation(f"term {i} has spectral norm {norm!r}; normalize it to 1")

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    @property
    def k(self) -> int:
        return max(len(t.support) for t in self.terms)

    def supports(self) -> tuple[tuple[int, ...], ...]:
        return tuple(t.support for t in self.terms)


@dataclass(frozen=True, eq=False)
class ProductState:
    """Tensor product of per-site density matrices."""

    sites: tuple[np.ndarray, ...]

    def __post_init__(self):
        mats = tuple(_frozen_array(m) for m in self.sites)
        object.__setattr__(self, "sites", mats)
        if not mats:
            raise MalformedSpec("a product state needs at least one site")
        d = mats[0].shape[0]
        vectors = []
        for v, rho in enumerate(mats):
            if rho.shape != (d, d):
                raise DimensionMismatch(f"site {v} matrix shape {rho.shape}, expected {(d, d)}")
            if np.max(np.abs(rho - rho.conj().T)) > STATE_TOL:
                raise MalformedSpec(f"site {v} density matrix is not Hermitian")
            evals, evecs = np.linalg.eigh(rho)
            if evals[0] < -STATE_TOL:
                raise MalformedSpec(f"site {v} density matrix has negative eigenvalue {evals[0]:.3e}")
            tr = float(np.real(np.trace(rho)))
            if abs(tr - 1.0) > STATE_TOL:
                raise MalformedSpec(f"site {v} density matrix has trace {tr!r}")
            if vectors is not None and evals[-1] >= 1.0 - PURE_TOL:
                vectors.append(evecs[:, -1].astype(np.complex128))
            else:
                vectors = None
        object.__setattr__(self, "site_vectors", tuple(vectors) if vectors is not None else None)

    @classmethod
    def from_vectors(cls, vectors: Sequence[np.ndarray]) -> "ProductState":
        mats = []
        for vec in vectors:
            v = np.asarray(vec, dtype=np.complex128).ravel()
            nrm = np.linalg.norm(v)
            if nrm == 0:
                raise MalformedSpec("zero state vector")
            v = v / nrm
            mats.append(np.outer(v, v.conj()))
        return cls(tuple(mats))

    @property
    def n(self) -> int:
        return len(self.sites)

    @property
    def d(self) -> int:
        return self.sites[0].shape[0]

    @property
    def is_pure(self) -> bool:
        return self.site_vectors is not None


@dataclass(frozen=True, eq=False)
class Observable:
    """Few-body observable with its cached operator norm."""

    support: tuple[int, ...]
    matrix: np.ndarray
    norm: float

    def __post_init__(self):
        object.__setattr__(self, "support", tuple(self.support))
        object.__setattr__(self, "matrix", _frozen_array(self.matrix))
        if len(self.support) == 0:
            raise MalformedSpec("observable support must be nonempty")
        if list(self.support) != sorted(set(self.support)):
            raise MalformedSpec(f"observable support must be strictly increasing, got {self.support}")
        recomputed = spectral_norm(self.matrix)
        if abs(self.norm - recomputed) > NORM_TOL * max(1.0, recomputed):
            raise NormViolation(f"cached norm {self.norm!r} disagrees with recomputed {recomputed!r}")

    @classmethod
    def create(cls, support: Sequence[int], matrix: np.ndarray) -> "Observable":
        mat = np.asarray(matrix, dtype=np.complex128)
        return cls(tuple(support), mat, spectral_norm(mat))


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """Dense operator pinned to an explicit support (workspace type)."""

    support: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "support", tuple(self.support))
        object.__setattr__(self, "matrix", _frozen_array(self.matrix))


def _parse_complex_matrix(obj, what: str) -> np.ndarray:
    if not isinstance(obj, dict) or "re" not in obj:
        raise MalformedSpec(f"{what}: matrix must be an object with 're' (and optional 'im') arrays")
    try:
        re = np.array(obj["re"], dtype=float)
        im = np.array(obj.get("im", np.zeros_like(re)), dtype=float)
    except (TypeError, ValueError) as exc:
        raise MalformedSpec(f"{what}: could not parse matrix arrays: {exc}") from None
    if re.shape != im.shape or re.ndim != 2:
        raise MalformedSpec(f"{what}: 're'/'im' must be equal-shape 2-d arrays")
    return re + 1j * im


def load_hamiltonian(doc: dict) -> LocalHamiltonian:
    """Build a validated LocalHamiltonian from a parsed Hamiltonian document."""
    if not isinstance(doc, dict):
        raise MalformedSpec("Hamiltonian document must be a JSON object")
    try:
        n = int(doc["n"])
        d = int(doc["d"])
        raw_terms = doc["terms"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedSpec(f"Hamiltonian document needs integer 'n', 'd' and a 'terms' list: {exc}") from None
    if not isinstance(raw_terms, list) or not raw_terms:
        raise MalformedSpec("'terms' must be a nonempty list")
    terms = []
    for i, raw in enumerate(raw_terms):
        if not isinstance(raw, dict):
            raise MalformedSpec(f"term {i} must be an object")
        try:
            support = tuple(int(s) for s in raw["support"])
            coefficient = float(raw["coefficient"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedSpec(f"term {i}: {exc}") from None
        matrix = _parse_complex_matrix(raw.get("matrix"), f"term {i}")
        terms.append(Term(support, coefficient, matrix))
    return LocalHamiltonian(n, d, tuple(terms))


def embed_product(operators: Sequence[DenseOperator], d: int) -> DenseOperator:
    """Multiply operators after embedding them on the union of their supports.

    The product is taken in list order; the union support is sorted ascending.
    """
    if not operators:
        raise MalformedSpec("embed_product needs at least one operator")
    union = sorted(set().union(*(op.support for op in operators)))
    for op in operators:
        dim = d ** len(op.support)
        if op.matrix.shape != (dim, dim):
            raise DimensionMismatch(
                f"operator on support {op.support} has shape {op.matrix.shape}, expected {(dim, dim)}"
            )
    out = np.eye(d ** len(union), dtype=np.complex128)
    for op in operators:
        out = out @ _ops.embed_matrix(op.matrix, op.support, union, d)
    return DenseOperator(tuple(union), out)


def product_expectation(op: DenseOperator, state: ProductState) -> complex:
    """tr(op * rho) against a product state; sites outside the support trace to 1."""
    d = state.d
    dim = d ** len(op.support)
    if op.matrix.shape != (dim, dim):
        raise DimensionMismatch(f"operator shape {op.matrix.shape} does not match d^|support| = {dim}")
    if op.support and (op.support[0] < 0 or op.support[-1] >= state.n):
        raise DimensionMismatch(f"support {op.support} out of range for an {state.n}-site state")
    rho = _ops.density_on(state.sites, op.support)
    return complex(np.einsum("ij,ji->", op.matrix, rho))


def identity_term(support: Sequence[int], d: int) -> Term:
    """Zero-coefficient placeholder term (used to register an observable support)."""
    support = tuple(support)
    return Term(support, 0.0, np.eye(d ** len(support), dtype=np.complex128))
