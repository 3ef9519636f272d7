"""Normal form A = U Sigma U^T of a conjugate-normal matrix.

A square complex A is *conjugate-normal* when A^T A* = A A^H.  Equivalently
the antilinear operator x -> A conj(x) is normal, and A is then unitarily
congruent to a Hermitian matrix Sigma built from 2x2 blocks
``[[0, s], [conj(s), 0]]`` and real non-negative 1x1 blocks.  The spectrum of
Lambda = A conj(A) drives everything: an eigenvalue omega contributes

* a conjugate pair of eigenspaces and blocks with ``s = sqrt(omega)``
  (principal branch) when omega is genuinely complex,
* blocks with ``s = i sqrt(|omega|)`` — half the eigenspace dimension of them
  — when omega is negative real,
* 1x1 blocks ``sigma = sqrt(omega)`` when omega is non-negative real.

This module classifies the spectrum, constructs U block by block, and
assembles the *collected* Sigma: all 2x2 blocks first, as
``[[0, S], [S^H ... ]]`` with the s values on an off-diagonal, then the 1x1
entries on the diagonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    InputError,
    NotConjugateNormalError,
    ReconstructionError,
    SpectralConsistencyError,
)
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    as_square_matrix,
    det_lu,
    eig_normal,
    frobenius,
    unitarity_defect,
)

COMPLEX_PAIR = "complex-pair"
NEGATIVE_REAL = "negative-real"
NONNEGATIVE_REAL = "nonnegative-real"

#: threshold below which a column component is ignored when fixing the
#: eigenvector phase gauge (relative to the column's largest component)
_PHASE_GAUGE_RTOL = 1e-8

#: ||u|| below this triggers the alternate invariant-vector formula
_INVARIANT_FALLBACK_NORM = 1e-8


@dataclass(frozen=True)
class OffDiagBlock:
    """A 2x2 Hermitian block [[0, s], [conj(s), 0]] with sqrt eigenvalue s.

    ``s = sqrt(omega)`` lies in the closed upper half plane and is never a
    non-negative real (those are 1x1 blocks).  ``multiplicity`` counts how
    many identical copies of the block the spectrum carries.
    """

    s: complex
    multiplicity: int

    def __post_init__(self):
        if self.multiplicity < 1:
            raise InputError("block multiplicity must be >= 1")
        s = complex(self.s)
        if s.imag < 0 or (s.imag == 0 and s.real >= 0):
            raise InputError(
                f"off-diagonal block value {s} must lie in the open upper "
                "half plane or on the negative real axis"
            )


@dataclass(frozen=True)
class Real1Block:
    """A 1x1 block holding sigma = sqrt(omega) >= 0."""

    sigma: float
    multiplicity: int

    def __post_init__(self):
        if self.multiplicity < 1:
            raise InputError("block multiplicity must be >= 1")
        if not (self.sigma >= 0.0 and math.isfinite(self.sigma)):
            raise InputError(f"1x1 block value must be finite and >= 0, got {self.sigma}")


def _check_block_order(blocks) -> int:
    """Validate the canonical block order; returns the pair count."""
    seen_real = False
    prev_off = None
    prev_sigma = None
    pairs = 0
    for block in blocks:
        if isinstance(block, OffDiagBlock):
            if seen_real:
                raise InputError("2x2 blocks must precede all 1x1 blocks")
            key = (-abs(block.s), np.angle(block.s))
            if prev_off is not None and key < prev_off:
                raise InputError(
                    "2x2 blocks must be sorted by descending |s|, ties by ascending arg(s)"
                )
            prev_off = key
            pairs += block.multiplicity
        elif isinstance(block, Real1Block):
            seen_real = True
            if prev_sigma is not None and block.sigma < prev_sigma:
                raise InputError("1x1 blocks must be sorted by ascending sigma")
            prev_sigma = block.sigma
        else:
            raise InputError(f"unknown block type: {type(block).__name__}")
    return pairs


def assemble_sigma(blocks) -> np.ndarray:
    """Dense Sigma for a block sequence in collected order.

    The 2x2 blocks are interleaved across the two off-diagonals of the
    leading 2p x 2p sector (entry (j, p+j) holds s_j), then the 1x1 sigmas
    sit on the trailing diagonal.  The result is Hermitian by construction.
    """
    blocks = tuple(blocks)
    pairs = _check_block_order(blocks)
    svals = []
    sigmas = []
    for block in blocks:
        if isinstance(block, OffDiagBlock):
            svals.extend([complex(block.s)] * block.multiplicity)
        else:
            sigmas.extend([float(block.sigma)] * block.multiplicity)
    dim = 2 * pairs + len(sigmas)
    sigma = np.zeros((dim, dim), dtype=np.complex128)
    for j, s in enumerate(svals):
        sigma[j, pairs + j] = s
        sigma[pairs + j, j] = np.conj(s)
    for r, value in enumerate(sigmas):
        sigma[2 * pairs + r, 2 * pairs + r] = value
    return sigma


@dataclass(frozen=True)
class NormalForm:
    """Result of the normal-form construction.

    u
        Unitary factor; columns are ordered to match ``blocks`` (all first
        members of the 2x2 pairs, then all second members in the same order,
        then the 1x1 columns).
    blocks
        Canonically sorted block sequence.
    half_dim
        Number of 2x2 pairs p (with multiplicity); for an even-dimensional
        matrix without 1x1 blocks this is dim/2.
    det_u
        Cached determinant of u.
    """

    u: np.ndarray
    blocks: tuple
    half_dim: int
    det_u: complex

    def __post_init__(self):
        u = as_square_matrix(self.u).copy()
        u.flags.writeable = False
        object.__setattr__(self, "u", u)
        blocks = tuple(self.blocks)
        object.__setattr__(self, "blocks", blocks)
        pairs = _check_block_order(blocks)
        if pairs != self.half_dim:
            raise InputError(
                f"half_dim {self.half_dim} does not match the {pairs} pair(s) in blocks"
            )
        dim = 2 * pairs + sum(
            b.multiplicity for b in blocks if isinstance(b, Real1Block)
        )
        if u.shape[0] != dim:
            raise InputError(
                f"u has dimension {u.shape[0]} but blocks describe dimension {dim}"
            )
        defect = unitarity_defect(u)
        if defect > DEFAULT_TOL.unitarity_threshold(dim) * 100:
            # a hard sanity floor only; the constructor checks the real bound
            raise InputError(f"u is far from unitary: defect {defect:.3e}")


def reconstruct(nf: NormalForm) -> np.ndarray:
    """U Sigma U^T for a normal form."""
    sigma = assemble_sigma(nf.blocks)
    return nf.u @ sigma @ nf.u.T


def is_conjugate_normal(a, tol: Tolerances = DEFAULT_TOL) -> tuple[bool, float]:
    """Whether A^T A* = A A^H within tolerance; returns (flag, residual).

    The residual is ``||A^T A* - A A^H||_F / (1 + ||A||_F^2)``, compared
    against ``tol.eig_residual``.
    """
    m = as_square_matrix(a)
    norm = frobenius(m)
    defect = np.linalg.norm(m.T @ m.conj() - m @ m.conj().T)
    residual = float(defect / (1.0 + norm * norm))
    return residual <= tol.eig_residual, residual


def antisymmetric_part(a) -> np.ndarray:
    """(A - A^T) / 2."""
    m = as_square_matrix(a)
    return (m - m.T) / 2.0


@dataclass(frozen=True)
class SpectralCluster:
    """One clustered eigenvalue of Lambda = A conj(A).

    ``partner`` is the index of the conjugate cluster for complex pairs
    (None for real clusters).  ``mu`` is the common eigenvalue of
    M = A^T A* on the cluster subspace, which must equal |omega|.
    ``columns`` indexes the cluster's eigenvectors inside
    :attr:`SpectralPairing.vectors`.
    """

    omega: complex
    multiplicity: int
    kind: str
    partner: int | None
    mu: float
    columns: tuple[int, ...]


@dataclass(frozen=True)
class SpectralPairing:
    """Clustered, classified and paired spectrum of Lambda = A conj(A)."""

    clusters: tuple[SpectralCluster, ...]
    vectors: np.ndarray

    def __post_init__(self):
        v = as_square_matrix(self.vectors).copy()
        v.flags.writeable = False
        object.__setattr__(self, "vectors", v)
        object.__setattr__(self, "clusters", tuple(self.clusters))


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Deterministic gauge: first significant component of each column made
    positive real.  Significant means > _PHASE_GAUGE_RTOL times the column's
    largest magnitude."""
    out = vectors.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        mags = np.abs(col)
        top = mags.max()
        if top == 0.0:
            continue
        idx = int(np.argmax(mags > _PHASE_GAUGE_RTOL * top))
        pivot = col[idx]
        out[:, k] = col * (np.conj(pivot) / abs(pivot))
    return out


def _cluster_indices(values: np.ndarray, threshold: float) -> list[list[int]]:
    """Group eigenvalues into connected components at the given distance.

    Single-linkage via union-find over all pairs; order independent."""
    count = len(values)
    parent = list(range(count))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(count):
        for j in range(i + 1, count):
            if abs(values[i] - values[j]) <= threshold:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    groups: dict[int, list[int]] = {}
    for i in range(count):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def classify_spectrum(a, tol: Tolerances = DEFAULT_TOL) -> SpectralPairing:
    """Cluster and classify the spectrum of Lambda = A conj(A).

    Eigenvalues within ``tol.cluster * (1 + ||A||^2)`` of each other are
    merged.  Each cluster is labelled non-negative real, negative real, or
    one half of a complex-conjugate pair; complex clusters are matched with
    their partner, which must exist with equal multiplicity.  The common
    M = A^T A* eigenvalue ``mu`` of every cluster is computed and verified
    to equal |omega|.

    Raises :class:`NotConjugateNormalError` for input failing the
    conjugate-normality test and :class:`SpectralConsistencyError` when the
    cluster structure violates the constraints above (odd negative-real
    multiplicity, unmatched complex cluster, mu mismatch).
    """
    m = as_square_matrix(a)
    ok, residual = is_conjugate_normal(m, tol)
    if not ok:
        raise NotConjugateNormalError(
            f"matrix is not conjugate-normal: residual {residual:.3e} exceeds "
            f"{tol.eig_residual:.1e}",
            residual=residual,
        )
    norm = frobenius(m)
    lam = m @ m.conj()
    values, vectors = eig_normal(lam, tol)
    vectors = _fix_phases(vectors)

    threshold = tol.cluster_threshold(norm)
    raw_groups = _cluster_indices(values, threshold)
    reps = [complex(np.mean(values[g])) for g in raw_groups]
    order = sorted(range(len(reps)), key=lambda i: (reps[i].real, reps[i].imag))

    m_op = m.T @ m.conj()
    clusters: list[dict] = []
    for pos in order:
        group = raw_groups[pos]
        omega = reps[pos]
        cols = vectors[:, group]
        mv = m_op @ cols
        mu = float(np.mean(np.real(np.sum(np.conj(cols) * mv, axis=0))))
        if abs(mu - abs(omega)) > threshold:
            raise SpectralConsistencyError(
                f"cluster at omega={omega:.6g} has mu={mu:.6g} != |omega|; "
                "the spectra of A conj(A) and A^T A* are inconsistent"
            )
        scale = tol.cluster * (1.0 + abs(omega))
        real_like = abs(omega.imag) <= scale
        if real_like and omega.real >= -scale:
            kind = NONNEGATIVE_REAL
        elif real_like:
            kind = NEGATIVE_REAL
            if len(group) % 2:
                raise SpectralConsistencyError(
                    f"negative real eigenvalue {omega.real:.6g} has odd "
                    f"multiplicity {len(group)}"
                )
        else:
            kind = COMPLEX_PAIR
        clusters.append(
            {"omega": omega, "cols": tuple(group), "kind": kind, "partner": None, "mu": mu}
        )

    for i, ci in enumerate(clusters):
        if ci["kind"] != COMPLEX_PAIR or ci["partner"] is not None:
            continue
        target = np.conj(ci["omega"])
        best, best_dist = None, np.inf
        for j, cj in enumerate(clusters):
            if j == i or cj["kind"] != COMPLEX_PAIR or cj["partner"] is not None:
                continue
            dist = abs(cj["omega"] - target)
            if dist < best_dist:
                best, best_dist = j, dist
        if best is None or best_dist > threshold:
            raise SpectralConsistencyError(
                f"complex eigenvalue {ci['omega']:.6g} has no conjugate partner "
                "in the spectrum"
            )
        if len(clusters[best]["cols"]) != len(ci["cols"]):
            raise SpectralConsistencyError(
                f"conjugate eigenvalues {ci['omega']:.6g} have mismatched "
                f"multiplicities {len(ci['cols'])} vs {len(clusters[best]['cols'])}"
            )
        ci["partner"] = best
        clusters[best]["partner"] = i

    final = tuple(
        SpectralCluster(
            omega=c["omega"],
            multiplicity=len(c["cols"]),
            kind=c["kind"],
            partner=c["partner"],
            mu=c["mu"],
            columns=c["cols"],
        )
        for c in clusters
    )
    return SpectralPairing(clusters=final, vectors=vectors)


def _haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Small local Haar unitary used only for gauge randomization."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    phases = np.where(np.abs(d) > 0, d / np.abs(np.where(d == 0, 1, d)), 1.0)
    return q * phases


def _complement(coeffs: list[np.ndarray], dim: int) -> np.ndarray:
    """Orthonormal basis (as columns) of the orthocomplement of the given
    coefficient vectors inside C^dim, via SVD of the projector."""
    proj = np.eye(dim, dtype=np.complex128)
    for c in coeffs:
        proj -= np.outer(c, c.conj())
    u, _, _ = np.linalg.svd(proj)
    return u[:, : dim - len(coeffs)]


def wigner_normal_form(
    a,
    tol: Tolerances = DEFAULT_TOL,
    *,
    gauge_seed: int | None = None,
) -> NormalForm:
    """Construct the normal form A = U Sigma U^T of a conjugate-normal A.

    The construction walks the classified spectrum of Lambda = A conj(A):

    1. a complex pair omega (the Im > 0 member is used) with orthonormal
       eigenbasis V yields partner columns ``W = (s / mu) A conj(V)`` with
       ``s = sqrt(omega)``; (V, W) columns carry 2x2 blocks s;
    2. a negative real omega (eigenspace dimension 2m) yields m pairs with
       ``s = i sqrt(|omega|)``, built by repeatedly taking the first basis
       vector v, forming ``w = (s / mu) A conj(v)``, and deflating {v, w}
       out of the remaining eigenspace basis;
    3. a positive omega yields invariant columns ``u = v + A conj(v)/sqrt(omega)``
       (normalized), with the alternate formula
       ``u = i v - i A conj(v)/sqrt(omega)`` whenever ||u|| < 1e-8, again
       with deflation;
    4. a zero cluster contributes its eigenbasis unchanged with sigma = 0.

    The blocks are then sorted canonically (2x2 first, by descending |s|
    with ties by ascending arg(s); then 1x1 by ascending sigma), the columns
    of U are permuted to match, and unitarity of U plus the reconstruction
    residual are verified before returning.

    ``gauge_seed`` (testing hook) re-mixes every cluster's eigenbasis by a
    random unitary and randomizes the processing order; the result must
    agree with the deterministic gauge up to the block structure's intrinsic
    freedom.
    """
    m = as_square_matrix(a)
    dim = m.shape[0]
    norm = frobenius(m)
    pairing = classify_spectrum(m, tol)
    zero_floor = tol.cluster_threshold(norm)

    rng = np.random.default_rng(gauge_seed) if gauge_seed is not None else None
    order = list(range(len(pairing.clusters)))
    if rng is not None:
        order = [int(i) for i in rng.permutation(len(order))]

    # each entry: (sort_key_block, V_columns, W_columns or None)
    pair_groups: list[tuple[OffDiagBlock, np.ndarray, np.ndarray]] = []
    real_groups: list[tuple[Real1Block, np.ndarray]] = []

    for idx in order:
        cluster = pairing.clusters[idx]
        basis = pairing.vectors[:, cluster.columns].copy()
        if rng is not None:
            basis = basis @ _haar_unitary(rng, basis.shape[1])
        mu = cluster.mu

        if cluster.kind == COMPLEX_PAIR:
            if cluster.omega.imag < 0:
                continue  # handled through the Im > 0 partner
            s = complex(np.sqrt(cluster.omega))
            w = (s / mu) * (m @ basis.conj())
            pair_groups.append((OffDiagBlock(s, cluster.multiplicity), basis, w))
        elif cluster.kind == NEGATIVE_REAL:
            s = 1j * math.sqrt(-cluster.omega.real)
            vs, ws = [], []
            while basis.shape[1]:
                d = basis.shape[1]
                v = basis[:, 0]
                w_raw = (s / mu) * (m @ v.conj())
                coeff = basis.conj().T @ w_raw
                coeff[0] = 0.0  # w is orthogonal to v in exact arithmetic
                coeff /= np.linalg.norm(coeff)
                vs.append(v)
                ws.append(basis @ coeff)
                e1 = np.zeros(d, dtype=np.complex128)
                e1[0] = 1.0
                basis = basis @ _complement([e1, coeff], d)
            block = OffDiagBlock(s, len(vs))
            pair_groups.append((block, np.column_stack(vs), np.column_stack(ws)))
        else:  # NONNEGATIVE_REAL
            omega = max(cluster.omega.real, 0.0)
            if omega <= zero_floor:
                real_groups.append((Real1Block(0.0, cluster.multiplicity), basis))
                continue
            s = math.sqrt(omega)
            us = []
            while basis.shape[1]:
                d = basis.shape[1]
                v = basis[:, 0]
                image = (m @ v.conj()) / s
                u = v + image
                if np.linalg.norm(u) < _INVARIANT_FALLBACK_NORM:
                    u = 1j * v - 1j * image
                coeff = basis.conj().T @ u
                coeff /= np.linalg.norm(coeff)
                us.append(basis @ coeff)
                basis = basis @ _complement([coeff], d)
            real_groups.append((Real1Block(s, len(us)), np.column_stack(us)))

    pair_groups.sort(key=lambda g: (-abs(g[0].s), np.angle(g[0].s)))
    real_groups.sort(key=lambda g: g[0].sigma)

    columns: list[np.ndarray] = []
    columns.extend(g[1] for g in pair_groups)
    columns.extend(g[2] for g in pair_groups)
    columns.extend(g[1] for g in real_groups)
    u_mat = np.column_stack(columns) if columns else np.zeros((dim, 0))
    if u_mat.shape != (dim, dim):
        raise SpectralConsistencyError(
            f"normal-form construction produced {u_mat.shape[1]} columns for "
            f"a dimension-{dim} matrix"
        )

    defect = unitarity_defect(u_mat)
    if defect > tol.unitarity_threshold(dim):
        raise SpectralConsistencyError(
            f"normal-form U is not unitary within tolerance: defect {defect:.3e} "
            f"exceeds {tol.unitarity:.1e} * sqrt({dim})"
        )

    blocks = tuple(g[0] for g in pair_groups) + tuple(g[0] for g in real_groups)
    half_dim = sum(b.multiplicity for b in blocks if isinstance(b, OffDiagBlock))
    nf = NormalForm(u=u_mat, blocks=blocks, half_dim=half_dim, det_u=det_lu(u_mat))

    residual = float(np.linalg.norm(m - reconstruct(nf)))
    if residual > tol.reconstruct * norm:
        raise ReconstructionError(
            f"||A - U Sigma U^T|| = {residual:.3e} exceeds "
            f"{tol.reconstruct:.1e} * ||A||; the input is likely further from "
            "conjugate-normal than the tolerances assume"
        )
    return nf
