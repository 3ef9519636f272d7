"""Generalized Pfaffians of conjugate-normal matrices.

Two extensions of the Pfaffian beyond skew-symmetric matrices live here:

* the normal-form Pfaffian ``pf(A) = i^(n^2) det(U) sqrt(|det(Sigma)|)``,
  defined for conjugate-normal A whose Lambda = A conj(A) has no positive
  real eigenvalue (equivalently, whose antisymmetric part is non-singular),
  extended by pf(A) = 0 for singular A;
* the antisymmetrized Pfaffian ``apf(A) = pf_skew((A - A^T)/2)``, defined
  for every square matrix.

They are linked by ``pf(A) = sqrt(det(A) / det((A - A^T)/2)) * apf(A)``
with a positive real ratio, which doubles as an internal cross-check, and
they always share their complex phase.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import InputError, NotConjugateNormalError, PfUndefinedError
from .linalg import DEFAULT_TOL, Tolerances, as_square_matrix, det_lu, frobenius
from .normal_form import (
    Real1Block,
    antisymmetric_part,
    is_conjugate_normal,
    wigner_normal_form,
)
from .pfaffian import pf_polynomial, pf_skew_householder

#: a 1x1 block sigma below SINGULAR_SIGMA_RTOL * ||A|| is treated as zero
SINGULAR_SIGMA_RTOL = 1e-10

#: |Im(ratio)| <= RATIO_IMAG_RTOL * |Re(ratio)| is required of the
#: det(A)/det((A - A^T)/2) ratio before its square root is taken
RATIO_IMAG_RTOL = 1e-6

METHODS = ("normal-form", "antisymmetrized", "relation", "polynomial")

_I_POWER = (1 + 0j, 1j, -1 + 0j, -1j)


def _i_power_n_squared(n: int) -> complex:
    """i**(n*n) via the exact 4-cycle (never a floating-point power)."""
    return _I_POWER[(n * n) % 4]


@dataclass(frozen=True)
class PfDiagnostics:
    """Side values recorded while computing a Pfaffian.

    ``cross_check_residual`` is the relative discrepancy between the
    normal-form value and an independent recomputation through the
    determinant-ratio relation (None when not applicable).
    """

    det: complex
    det_antisymmetric: complex
    conjugate_normal_residual: float
    singular: bool
    cross_check_residual: float | None


@dataclass(frozen=True)
class PfResult:
    value: complex
    method: str
    diagnostics: PfDiagnostics

    def __post_init__(self):
        if self.method not in METHODS:
            raise InputError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.diagnostics.singular and self.value != 0:
            raise InputError("a singular result must carry the exact value 0")


def _relation_value(det_a: complex, det_as: complex, apf: complex) -> complex:
    """sqrt(det(A)/det(A_as)) * apf with the positivity checks applied."""
    if det_as == 0:
        raise PfUndefinedError(
            "the antisymmetric part is singular; the determinant-ratio "
            "relation does not apply"
        )
    ratio = det_a / det_as
    if not (ratio.real > 0.0 and abs(ratio.imag) <= RATIO_IMAG_RTOL * abs(ratio.real)):
        raise NotConjugateNormalError(
            f"det(A)/det((A - A^T)/2) = {ratio:.6g} is not positive real; "
            "the input is not conjugate-normal (the ratio is guaranteed "
            "positive for conjugate-normal matrices)"
        )
    # positive real root of the real part; the imaginary residue is noise
    return math.sqrt(ratio.real) * apf


def generalized_pfaffian(
    a,
    tol: Tolerances = DEFAULT_TOL,
    *,
    gauge_seed: int | None = None,
) -> PfResult:
    """Pfaffian of a conjugate-normal matrix through its normal form.

    ``pf(A) = i^(n^2) det(U) prod |s_k|`` over the 2x2 blocks, n = dim/2.
    A 1x1 block with sigma = 0 (within ``SINGULAR_SIGMA_RTOL * ||A||``), or
    an exactly zero determinant, makes the matrix singular: the value is 0
    with ``diagnostics.singular`` set.  A 1x1 block with sigma > 0 on a
    non-singular matrix (this includes every non-singular odd-dimensional
    matrix) means no continuous Pfaffian extension exists and
    :class:`PfUndefinedError` is raised.

    For non-singular results the value is independently recomputed through
    the determinant-ratio relation and the relative discrepancy is recorded
    in ``diagnostics.cross_check_residual``.

    ``gauge_seed`` is forwarded to the normal-form construction (testing
    hook for gauge invariance).
    """
    m = as_square_matrix(a)
    ok, cn_residual = is_conjugate_normal(m, tol)
    if not ok:
        raise NotConjugateNormalError(
            f"matrix is not conjugate-normal: residual {cn_residual:.3e} "
            f"exceeds {tol.eig_residual:.1e}",
            residual=cn_residual,
        )
    det_a = det_lu(m)
    a_as = antisymmetric_part(m)
    det_as = det_lu(a_as)
    nf = wigner_normal_form(m, tol, gauge_seed=gauge_seed)

    sigma_floor = SINGULAR_SIGMA_RTOL * frobenius(m)
    real_blocks = [b for b in nf.blocks if isinstance(b, Real1Block)]
    if any(b.sigma <= sigma_floor for b in real_blocks) or det_a == 0:
        diag = PfDiagnostics(det_a, det_as, cn_residual, True, None)
        return PfResult(0j, "normal-form", diag)
    if real_blocks:
        dim = m.shape[0]
        extra = " (odd dimension)" if dim % 2 else ""
        raise PfUndefinedError(
            "the spectrum of A conj(A) contains a positive real "
            f"eigenvalue{extra}; the antisymmetric part is singular while A "
            "is not, so no continuous Pfaffian extension exists"
        )

    magnitude = 1.0
    for block in nf.blocks:
        magnitude *= abs(block.s) ** block.multiplicity
    value = _i_power_n_squared(nf.half_dim) * nf.det_u * magnitude

    apf = pf_skew_householder(a_as)
    cross = abs(value - _relation_value(det_a, det_as, apf)) / abs(value)
    diag = PfDiagnostics(det_a, det_as, cn_residual, False, float(cross))
    return PfResult(complex(value), "normal-form", diag)


def antisymmetrized_pfaffian(a) -> PfResult:
    """Pfaffian of the antisymmetric part (A - A^T)/2.

    Defined for every square matrix; odd dimension gives 0 (there the
    antisymmetric part is always singular).
    """
    m = as_square_matrix(a)
    a_as = antisymmetric_part(m)
    value = pf_skew_householder(a_as)
    _, cn_residual = is_conjugate_normal(m)
    diag = PfDiagnostics(det_lu(m), det_lu(a_as), cn_residual, value == 0, None)
    return PfResult(value, "antisymmetrized", diag)


def generalized_pfaffian_via_relation(
    a,
    tol: Tolerances = DEFAULT_TOL,
    *,
    engine: str = "householder",
) -> PfResult:
    """Pfaffian via ``sqrt(det(A)/det((A - A^T)/2)) * apf(A)``.

    Avoids the normal-form construction entirely: two determinants and one
    skew Pfaffian.  The ratio must be positive real within
    ``RATIO_IMAG_RTOL``; a violation signals non-conjugate-normal input.

    ``engine`` selects how the skew Pfaffian is evaluated: "householder"
    (default; result method "relation") or "polynomial" (the brute-force
    matching sum, subject to its size guard; result method "polynomial").
    """
    if engine not in ("householder", "polynomial"):
        raise InputError(f"unknown engine {engine!r}")
    m = as_square_matrix(a)
    ok, cn_residual = is_conjugate_normal(m, tol)
    if not ok:
        raise NotConjugateNormalError(
            f"matrix is not conjugate-normal: residual {cn_residual:.3e} "
            f"exceeds {tol.eig_residual:.1e}",
            residual=cn_residual,
        )
    a_as = antisymmetric_part(m)
    det_a = det_lu(m)
    det_as = det_lu(a_as)
    if engine == "polynomial":
        apf = pf_polynomial(a_as)
        method = "polynomial"
    else:
        apf = pf_skew_householder(a_as)
        method = "relation"
    value = _relation_value(det_a, det_as, apf)
    diag = PfDiagnostics(det_a, det_as, cn_residual, value == 0, None)
    return PfResult(complex(value), method, diag)


def pfaffian_derivative(a, da, tol: Tolerances = DEFAULT_TOL) -> complex:
    """Directional derivative ``(1/2) pf(A) tr(A^{-1} dA)``.

    Requires a non-singular A with a defined Pfaffian.
    """
    m = as_square_matrix(a)
    d = as_square_matrix(da)
    if d.shape != m.shape:
        raise InputError(f"dA has shape {d.shape}, expected {m.shape}")
    result = generalized_pfaffian(m, tol)
    if result.diagnostics.singular:
        raise PfUndefinedError("the derivative formula requires a non-singular matrix")
    trace = complex(np.trace(np.linalg.solve(m, d)))
    return complex(0.5 * result.value * trace)


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    residual: float
    threshold: float
    passed: bool


@dataclass(frozen=True)
class IdentityReport:
    """Relative residuals of the full identity battery on one matrix."""

    checks: tuple[IdentityCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> IdentityCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


#: phase agreement is held to its own floor (radians)
PHASE_THRESHOLD = 1e-7


def identity_report(
    a,
    b=None,
    lam: complex = 2.0,
    tol: Tolerances = DEFAULT_TOL,
    *,
    threshold: float = 1e-8,
    congruence_seed: int = 1905,
) -> IdentityReport:
    """Evaluate every algebraic Pfaffian identity on (A, B, lambda).

    Checks, with relative residuals |lhs - rhs| / |rhs|:

    * ``square-det``          pf(A)^2 = det(A)
    * ``scale``               pf(lam A) = lam^n pf(A)
    * ``transpose``           pf(A^T) = (-1)^n pf(A)
    * ``adjoint``             pf(A^H) = (-1)^n conj(pf(A))
    * ``inverse``             pf(A^{-1}) = (-1)^n pf(A)^{-1}
    * ``direct-sum``          pf(A + A) = pf(A)^2 (block direct sum)
    * ``tensor``              pf(A x B) = (-1)^(n m(m-1)/2) pf(A)^m det(B)^n
      for symmetric m x m B
    * ``row-swap``            swapping rows/columns 0,1 negates pf
    * ``unitary-congruence``  pf(Q A Q^T) = det(Q) pf(A), seeded random Q
    * ``phase``               arg apf(A) = arg pf(A) (mod 2pi, radians;
      compared against max(threshold, PHASE_THRESHOLD))

    Note the (-1)^n in the adjoint and inverse rows.  Both operations
    conjugate the i^(n^2) prefactor of the definition (i^(n^2) vs
    i^(-n^2) differ by (-1)^(n^2) = (-1)^n), so the naive identities
    without the sign fail exactly for every odd n.  The skew-symmetric
    special case pins both: for A = [[0,1],[-1,0]], pf(A^H) = pf(-A) = -1
    and pf(A^{-1}) = pf(-A) = -1, while conj(pf(A)) = pf(A)^{-1} = +1; the
    Hermitian example [[0,1+i],[1-i,0]] (equal to its own adjoint, Pfaffian
    i sqrt(2)) confirms the adjoint sign independently.

    B defaults to diag(2, 3).  Raises :class:`PfUndefinedError` for
    singular A (most rows degenerate there); other errors propagate from
    the individual Pfaffian computations.
    """
    from .ensembles import random_unitary  # local import to keep layering acyclic

    m = as_square_matrix(a)
    base = generalized_pfaffian(m, tol)
    if base.diagnostics.singular:
        raise PfUndefinedError("the identity battery requires a non-singular matrix")
    pf_a = base.value
    dim = m.shape[0]
    n = dim // 2
    if b is None:
        b = np.diag([2.0, 3.0])
    b = as_square_matrix(b)
    if np.linalg.norm(b - b.T) > 1e-12 * (1.0 + np.linalg.norm(b)):
        raise InputError("the tensor partner B must be symmetric")
    lam = complex(lam)

    checks: list[IdentityCheck] = []

    def add(name: str, lhs: complex, rhs: complex, thr: float = threshold):
        residual = float(abs(lhs - rhs) / max(abs(rhs), 1e-300))
        checks.append(IdentityCheck(name, residual, thr, residual <= thr))

    def pf(x) -> complex:
        return generalized_pfaffian(x, tol).value

    sign_n = -1.0 if n % 2 else 1.0
    add("square-det", pf_a * pf_a, base.diagnostics.det)
    add("scale", pf(lam * m), lam**n * pf_a)
    add("transpose", pf(m.T), sign_n * pf_a)
    add("adjoint", pf(m.conj().T), sign_n * np.conj(pf_a))
    add("inverse", pf(np.linalg.inv(m)), sign_n / pf_a)
    add("direct-sum", pf(scipy.linalg.block_diag(m, m)), pf_a * pf_a)

    mdim = b.shape[0]
    tensor_sign = -1.0 if (n * mdim * (mdim - 1) // 2) % 2 else 1.0
    add("tensor", pf(np.kron(m, b)), tensor_sign * pf_a**mdim * det_lu(b) ** n)

    perm = np.arange(dim)
    perm[[0, 1]] = perm[[1, 0]]
    add("row-swap", pf(m[np.ix_(perm, perm)]), -pf_a)

    q = random_unitary(dim, congruence_seed)
    add("unitary-congruence", pf(q @ m @ q.T), det_lu(q) * pf_a)

    apf = pf_skew_householder(antisymmetric_part(m))
    delta = cmath.phase(apf) - cmath.phase(pf_a)
    wrapped = (delta + math.pi) % (2.0 * math.pi) - math.pi
    phase_thr = max(threshold, PHASE_THRESHOLD)
    checks.append(
        IdentityCheck("phase", abs(wrapped), phase_thr, abs(wrapped) <= phase_thr)
    )

    return IdentityReport(checks=tuple(checks))
