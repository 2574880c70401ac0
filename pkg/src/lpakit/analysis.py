"""Convergence diagnostics for least-squares projection approximations.

Given a bounded operator T, truncated to an m x m matrix, and a
finite-dimensional subspace X_n, the approximation under study replaces T by
T_n = T P_{X_n} and the minimum-norm least-squares solution T^+ y by
T_n^+ y. Whether T_n^+ y converges to T^+ y as the subspaces fill the space
is governed by quantities this module computes at each finite n:

* the offset angle theta_n = arcsin gap(T^+T(X_n), T^*T(X_n)), computed by
  two independent routes that must agree,
* the kernel core, the intersection of N(T) with X_n, whose failure to
  exhaust N(T) rules convergence out no matter how the angles behave,
* ||T_n^+ T||, bounded across n exactly when the scheme converges,
* the per-instance error bound
  ||T_n^+ y - T^+ y|| <= sqrt(1 + tan^2 theta_n) * dist(T^+ y, X_n),
  valid once N(T) is contained in X_n.

Every diagnostic on one instance reuses a single cached SVD of T and a single
rank decision, so identities that hold in exact arithmetic stay consistent to
machine precision across the different routes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import Tolerances, resolve_m
from .linalg import (
    Subspace,
    as_matrix,
    as_vector,
    deficiency,
    gap,
    kernel_basis,
    numerical_rank,
    orthonormal_range,
    pseudo_inverse,
    projector,
    svd,
)
from .operators import OperatorFamily, du_bad_y, du_vector_e, get_family

__all__ = [
    "PreconditionError",
    "LpaInstance",
    "OffsetAngle",
    "LpaDiagnostics",
    "make_lpa",
    "tn_pinv_apply",
    "qn_matrix",
    "offset_angle",
    "kernel_core",
    "kernel_approximability_scan",
    "norm_tn_dag_t",
    "error_identity_check",
    "error_bound_check",
    "zero_offset_characterization",
    "du_divergence_check",
    "coercive_bound_check",
    "diagnose",
]


class PreconditionError(ValueError):
    """A diagnostic was asked for outside the regime where it is asserted."""


class LpaInstance:
    """One (T, X_n) pair at truncation m, with the SVD of T cached.

    x_basis defaults to the coordinate subspace span{e^1, ..., e^n}; an
    arbitrary orthonormal basis may be supplied instead. T_n itself is never
    stored, every consumer derives it on demand as T @ projector(X_n).
    """

    def __init__(self, t, n: int, x_basis: np.ndarray | None = None,
                 rank_tol: float | None = None):
        t = as_matrix(t)
        if t.shape[0] != t.shape[1]:
            raise ValueError(f"expected a square truncation, got {t.shape}")
        self.m = t.shape[0]
        if not 1 <= n <= self.m:
            raise ValueError(f"need 1 <= n <= m, got n={n}, m={self.m}")
        self.n = int(n)
        self.t = t
        if x_basis is None:
            self.x_n = Subspace.coordinate(self.m, n)
        else:
            self.x_n = Subspace(np.asarray(x_basis, dtype=float))
            if self.x_n.ambient_dim != self.m:
                raise ValueError("x_basis ambient dimension does not match t")
        self.rank_tol = rank_tol
        res = svd(t)
        self.rank = numerical_rank(res.singular_values, t.shape, rank_tol)
        self.sigma_max = float(res.singular_values[0]) if self.m else 0.0
        r = self.rank
        if r == 0:
            self.t_pinv = np.zeros((self.m, self.m))
        else:
            self.t_pinv = (res.vt[:r].T / res.singular_values[:r]) @ res.u[:, :r].T
        self.rowspace = Subspace(res.vt[:r].T.copy())
        self.kernel = Subspace(res.vt[r:].T.copy())
        self.p_xn = projector(self.x_n)

    def tn(self) -> np.ndarray:
        """The approximating operator T P_{X_n}, built on demand."""
        return self.t @ self.p_xn

    def tn_pinv(self) -> np.ndarray:
        return pseudo_inverse(self.tn(), self.rank_tol)


def make_lpa(family: OperatorFamily, n: int, m: int,
             rank_tol: float | None = None) -> LpaInstance:
    """Instance at subspace index n and ambient truncation m.

    Uses the family's own approximation subspaces when it defines them,
    coordinate subspaces otherwise.
    """
    if n > m:
        raise ValueError(f"subspace index n={n} exceeds truncation size m={m}")
    x_basis = family.xn_basis(n, m) if family.xn_basis is not None else None
    return LpaInstance(family.truncate(m), n, x_basis, rank_tol)


def tn_pinv_apply(inst: LpaInstance, y) -> np.ndarray:
    """Minimum-norm least-squares solution of T_n x = y.

    The result must lie in X_n (its component outside is pure roundoff); this
    is checked and a violation raises, since it would mean the rank decision
    on T_n went wrong.
    """
    y = as_vector(y)
    if y.shape[0] != inst.m:
        raise ValueError(f"y has dimension {y.shape[0]}, expected {inst.m}")
    x = inst.tn_pinv() @ y
    nx = float(np.linalg.norm(x))
    outside = float(np.linalg.norm(x - inst.p_xn @ x))
    if nx > 0 and outside > 1e-9 * nx:
        raise ArithmeticError(
            f"solution leaked outside the subspace: {outside:.3e} vs norm {nx:.3e}")
    return x


def qn_matrix(inst: LpaInstance) -> np.ndarray:
    """The oblique projector T^+ P_{T(X_n)} T.

    Its range is T^+T(X_n), its kernel is the orthogonal complement of
    T^*T(X_n), and it is idempotent up to roundoff.
    """
    if inst.rank == 0:
        return np.zeros((inst.m, inst.m))
    txn = orthonormal_range(inst.t @ inst.x_n.basis, inst.rank_tol,
                            scale=inst.sigma_max)
    return inst.t_pinv @ projector(txn) @ inst.t


@dataclass(frozen=True)
class OffsetAngle:
    """Offset angle with the sines from both computation routes.

    theta comes from the gap route, which degrades more gracefully under rank
    tolerance; the oblique-projector route is the cross-check. The warning
    flags mark a rank disagreement between the two image subspaces (possible
    only through roundoff or truncation, so worth surfacing) and a sine
    disagreement between routes beyond the configured threshold. Neither is a
    hard failure.
    """

    theta: float
    sin_gap_route: float
    sin_qn_route: float
    rank_mismatch: bool
    route_disagreement: bool


def offset_angle(inst: LpaInstance, tolerances: Tolerances | None = None) -> OffsetAngle:
    """Angle between T^+T(X_n) and T^*T(X_n), by two routes.

    Route one orthonormalizes the images of the X_n basis under T^+T and
    T^*T (using the cached factorization: T^+T is applied as the projector
    onto the row space, which does not amplify roundoff in kernel directions)
    and takes the gap between them. Route two evaluates
    sqrt(1 - 1/||I - Q_n||^2) with Q_n the oblique projector. The two agree
    in exact arithmetic.
    """
    tolerances = tolerances or Tolerances.default()
    rank_tol = tolerances.rank if tolerances.rank is not None else inst.rank_tol
    xb = inst.x_n.basis
    if inst.rank == 0:
        r1 = Subspace.zero(inst.m)
        r2 = Subspace.zero(inst.m)
    else:
        vr = inst.rowspace.basis
        r1 = orthonormal_range(vr @ (vr.T @ xb), rank_tol, scale=1.0)
        r2 = orthonormal_range(inst.t.T @ (inst.t @ xb), rank_tol,
                               scale=inst.sigma_max**2)
    sin_gap = gap(r1, r2)

    qn = qn_matrix(inst)
    nrm = float(np.linalg.norm(np.eye(inst.m) - qn, 2))
    sin_qn = math.sqrt(max(0.0, 1.0 - 1.0 / nrm**2)) if nrm > 1.0 else 0.0

    theta = math.asin(min(max(sin_gap, 0.0), 1.0))
    return OffsetAngle(
        theta=theta,
        sin_gap_route=sin_gap,
        sin_qn_route=sin_qn,
        rank_mismatch=(r1.dim != r2.dim),
        route_disagreement=(abs(sin_gap - sin_qn) > tolerances.route_warn),
    )


def kernel_core(inst: LpaInstance, rank_tol: float | None = None) -> Subspace:
    """Orthonormal basis of the intersection of N(T) with X_n.

    Computed as the kernel of T restricted to the X_n basis, lifted back to
    the ambient space. For T numerically zero the core is all of X_n.
    """
    if rank_tol is None:
        rank_tol = inst.rank_tol
    if inst.rank == 0:
        return inst.x_n
    coeff = kernel_basis(inst.t @ inst.x_n.basis, rank_tol, scale=inst.sigma_max)
    return Subspace(inst.x_n.basis @ coeff.basis)


def norm_tn_dag_t(inst: LpaInstance) -> float:
    """Spectral norm of T_n^+ T at the instance truncation."""
    return float(np.linalg.norm(inst.tn_pinv() @ inst.t, 2))


@dataclass(frozen=True)
class LpaDiagnostics:
    """Per-n diagnostics row. bound_factor is sqrt(1 + tan^2 theta_n)."""

    n: int
    m: int
    theta_n: float
    sin_theta_gap: float
    sin_theta_qn: float
    norm_tn_dag_t: float
    kernel_core_dim: int
    kernel_dim: int
    kernel_gap: float
    bound_factor: float


def _bound_factor(sin_theta: float) -> float:
    c2 = 1.0 - min(max(sin_theta, 0.0), 1.0) ** 2
    return math.inf if c2 <= 0.0 else 1.0 / math.sqrt(c2)


def diagnose(inst: LpaInstance, tolerances: Tolerances | None = None) -> LpaDiagnostics:
    """All scalar diagnostics of one instance in one record."""
    tolerances = tolerances or Tolerances.default()
    ang = offset_angle(inst, tolerances)
    core = kernel_core(inst)
    return LpaDiagnostics(
        n=inst.n,
        m=inst.m,
        theta_n=ang.theta,
        sin_theta_gap=ang.sin_gap_route,
        sin_theta_qn=ang.sin_qn_route,
        norm_tn_dag_t=norm_tn_dag_t(inst),
        kernel_core_dim=core.dim,
        kernel_dim=inst.kernel.dim,
        kernel_gap=gap(core, inst.kernel),
        bound_factor=_bound_factor(ang.sin_gap_route),
    )


@dataclass(frozen=True)
class KernelScanRow:
    n: int
    m: int
    kernel_core_dim: int
    kernel_dim: int
    kernel_gap: float


@dataclass(frozen=True)
class KernelScanReport:
    rows: tuple[KernelScanRow, ...]
    holds: bool
    message: str


def kernel_approximability_scan(family: OperatorFamily, n_list,
                                m_rule: str | None = None,
                                tolerances: Tolerances | None = None) -> KernelScanReport:
    """Track the kernel core along ascending n.

    The scan reports holds=True when, by the last n, the core dimension has
    reached the kernel dimension and the gap between core and kernel has
    dropped below the check tolerance. A persistent shortfall means the
    subspaces never capture the kernel, which rules out convergence of the
    scheme regardless of the angles.
    """
    tolerances = tolerances or Tolerances.default()
    n_list = list(n_list)
    if not n_list or any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be nonempty and strictly ascending")
    rows = []
    for n in n_list:
        inst = make_lpa(family, n, resolve_m(m_rule, n), tolerances.rank)
        core = kernel_core(inst)
        rows.append(KernelScanRow(
            n=n, m=inst.m,
            kernel_core_dim=core.dim,
            kernel_dim=inst.kernel.dim,
            kernel_gap=gap(core, inst.kernel),
        ))
    last = rows[-1]
    holds = (last.kernel_core_dim == last.kernel_dim
             and last.kernel_gap <= tolerances.check)
    if holds:
        first = next(r.n for r in rows
                     if r.kernel_core_dim == r.kernel_dim
                     and r.kernel_gap <= tolerances.check)
        message = f"kernel captured from n={first}"
    else:
        message = "kernel approximability violated at tested range"
    return KernelScanReport(rows=tuple(rows), holds=holds, message=message)


@dataclass(frozen=True)
class CheckReport:
    """Two independently evaluated sides and their agreement."""

    lhs: float
    rhs: float
    diff: float
    tol: float
    passed: bool


def error_identity_check(inst: LpaInstance, y,
                         tolerances: Tolerances | None = None) -> CheckReport:
    """Check T_n^+ y - T^+ y = (T_n^+ T - I)(I - P_{X_n}) T^+ y.

    The identity holds for every y, with no containment condition on the
    kernel. Both sides are evaluated separately; they must agree to
    identity_rel * (1 + ||T^+ y||).
    """
    tolerances = tolerances or Tolerances.default()
    y = as_vector(y)
    tp_y = inst.t_pinv @ y
    lhs = tn_pinv_apply(inst, y) - tp_y
    w = tp_y - inst.p_xn @ tp_y
    rhs = inst.tn_pinv() @ (inst.t @ w) - w
    diff = float(np.linalg.norm(lhs - rhs))
    tol = tolerances.identity_rel * (1.0 + float(np.linalg.norm(tp_y)))
    return CheckReport(lhs=float(np.linalg.norm(lhs)), rhs=float(np.linalg.norm(rhs)),
                       diff=diff, tol=tol, passed=diff <= tol)


@dataclass(frozen=True)
class BoundCheck:
    lhs: float
    rhs: float
    ratio: float
    bound_factor: float
    passed: bool


def error_bound_check(inst: LpaInstance, y,
                      tolerances: Tolerances | None = None) -> BoundCheck:
    """Check ||T_n^+ y - T^+ y|| <= sqrt(1 + tan^2 theta_n) * dist(T^+ y, X_n).

    Only asserted when N(T) is contained in X_n (checked numerically); below
    the index where the subspaces capture the kernel the bound simply does
    not hold, and asking for it raises PreconditionError.
    """
    tolerances = tolerances or Tolerances.default()
    y = as_vector(y)
    if deficiency(inst.kernel, inst.x_n) > tolerances.check:
        raise PreconditionError(
            "kernel not contained in the subspace at this index; the bound is "
            "only asserted from the index where the kernel is captured")
    ang = offset_angle(inst, tolerances)
    factor = _bound_factor(ang.sin_gap_route)
    tp_y = inst.t_pinv @ y
    lhs = float(np.linalg.norm(tn_pinv_apply(inst, y) - tp_y))
    dist = float(np.linalg.norm(tp_y - inst.p_xn @ tp_y))
    rhs = factor * dist
    if rhs > 0:
        ratio = lhs / rhs
    else:
        ratio = 0.0 if lhs == 0.0 else math.inf
    passed = lhs <= rhs * (1.0 + tolerances.bound_rel) + tolerances.bound_abs
    return BoundCheck(lhs=lhs, rhs=rhs, ratio=ratio, bound_factor=factor,
                      passed=passed)


@dataclass(frozen=True)
class ZeroOffsetReport:
    """Three separately evaluated faces of the zero-offset condition.

    theta_zero: the measured offset angle vanishes.
    pinv_is_projected_pinv: T_n^+ equals P_{X_n} T^+ as matrices.
    invariance_holds: N(T) + T^*T(X_n) is contained in X_n.
    consistent: the three answers agree.
    kernel_inside: whether N(T) is contained in X_n. The three-way
        equivalence is a theorem only under this containment; the report
        still evaluates everything when it fails, and leaves the flag for
        the caller to judge.
    """

    theta_zero: bool
    pinv_is_projected_pinv: bool
    invariance_holds: bool
    consistent: bool
    kernel_inside: bool
    sin_theta: float
    pinv_diff: float
    sum_deficiency: float


def zero_offset_characterization(inst: LpaInstance,
                                 tolerances: Tolerances | None = None) -> ZeroOffsetReport:
    """Evaluate the three zero-offset conditions independently."""
    tolerances = tolerances or Tolerances.default()
    tol = tolerances.check
    ang = offset_angle(inst, tolerances)

    pinv_diff = float(np.linalg.norm(inst.tn_pinv() - inst.p_xn @ inst.t_pinv, 2))
    pinv_scale = 1.0 + float(np.linalg.norm(inst.t_pinv, 2))

    if inst.rank == 0:
        image = Subspace.zero(inst.m)
    else:
        image = orthonormal_range(inst.t.T @ (inst.t @ inst.x_n.basis),
                                  inst.rank_tol, scale=inst.sigma_max**2)
    stacked = np.hstack([image.basis, inst.kernel.basis])
    # both blocks are orthonormal, so the honest scale of the stack is 1
    total = orthonormal_range(stacked, inst.rank_tol, scale=1.0) \
        if stacked.shape[1] else Subspace.zero(inst.m)
    sum_def = deficiency(total, inst.x_n)

    theta_zero = ang.sin_gap_route <= tol
    pinv_ok = pinv_diff <= tol * pinv_scale
    invariance = sum_def <= tol
    return ZeroOffsetReport(
        theta_zero=theta_zero,
        pinv_is_projected_pinv=pinv_ok,
        invariance_holds=invariance,
        consistent=(theta_zero == pinv_ok == invariance),
        kernel_inside=deficiency(inst.kernel, inst.x_n) <= tol,
        sin_theta=ang.sin_gap_route,
        pinv_diff=pinv_diff,
        sum_deficiency=sum_def,
    )


@dataclass(frozen=True)
class DuDivergenceRow:
    n: int
    m: int
    coefficient: float
    coefficient_closed: float
    solution_norm: float
    divergence_gap: float


@dataclass(frozen=True)
class DuDivergenceReport:
    """Bounded solutions that still refuse to converge, quantified.

    The solutions T_n^+ y follow P_n y - c_n * P_n e with
    c_n = 4^n <(I - P_n) y, e> = 1 - (3/7) 2^(-n) -> 1, while the target
    solution has coefficient <y, e> = 4/7 along e. The persistent mismatch
    keeps ||T_n^+ y - T^+ y|| above a fixed floor even though ||T_n^+ y||
    stays bounded.
    """

    rows: tuple[DuDivergenceRow, ...]
    inner_ye: float
    inner_ye_expected: float
    limit_mismatch: float
    floor: float
    solution_cap: float
    passed: bool


def du_divergence_check(n_max: int = 20,
                        tolerances: Tolerances | None = None) -> DuDivergenceReport:
    """Verify the bounded-but-divergent behavior of the du family up to n_max.

    n_max is capped at 20: the coefficient check multiplies a 4^(-n)-scale
    inner product back up by 4^n, and beyond n = 20 the least-squares route
    it is compared against has lost too much precision to be meaningful.
    """
    if not 1 <= n_max <= 20:
        raise ValueError(f"n_max must be in [1, 20], got {n_max}")
    tolerances = tolerances or Tolerances.default()
    family = get_family("du")
    rows = []
    passed = True
    floor, cap = 0.3, 2.0
    for n in range(1, n_max + 1):
        m = resolve_m(None, n)
        y = du_bad_y(m)
        e = du_vector_e(m)
        coef = float(np.exp2(2.0 * n) * np.dot(y[n:], e[n:]))
        closed = 1.0 - (3.0 / 7.0) * 2.0 ** (-n)
        inst = make_lpa(family, n, m, tolerances.rank)
        x = tn_pinv_apply(inst, y)
        sol_norm = float(np.linalg.norm(x))
        div_gap = float(np.linalg.norm(x - inst.t_pinv @ y))
        rows.append(DuDivergenceRow(
            n=n, m=m, coefficient=coef, coefficient_closed=closed,
            solution_norm=sol_norm, divergence_gap=div_gap,
        ))
        if abs(coef - closed) > 1e-9 or sol_norm > cap:
            passed = False
        if n >= 8 and div_gap < floor:
            passed = False
    m_last = rows[-1].m
    y = du_bad_y(m_last)
    e = du_vector_e(m_last)
    inner = float(np.dot(y, e))
    inner_expected = 4.0 / 7.0 - 3.0 * (4.0 ** (-m_last) / 3.0 - 8.0 ** (-m_last) / 7.0)
    if abs(inner - inner_expected) > 1e-12:
        passed = False
    limit_mismatch = abs(rows[-1].coefficient - inner)
    if limit_mismatch < 0.3:  # the coefficients must stay apart, 1 vs 4/7
        passed = False
    return DuDivergenceReport(
        rows=tuple(rows), inner_ye=inner, inner_ye_expected=inner_expected,
        limit_mismatch=limit_mismatch, floor=floor, solution_cap=cap,
        passed=passed,
    )


@dataclass(frozen=True)
class CoerciveRow:
    n: int
    bound_factor: float


@dataclass(frozen=True)
class CoerciveReport:
    rows: tuple[CoerciveRow, ...]
    alpha: float
    beta: float
    limit: float
    passed: bool


def coercive_bound_check(t, alpha: float, beta: float, n_list,
                         tol: float = 1e-8, seed: int = 0) -> CoerciveReport:
    """For coercive T, the bound factors never exceed beta/alpha.

    Coercivity (|<Tu, u>| >= alpha ||u||^2) and the norm bound ||T|| <= beta
    are verified first, by the smallest eigenvalue of the symmetric part and
    by seeded sampling; a failure raises PreconditionError. Then
    sqrt(1 + tan^2 theta_n) <= beta/alpha + tol is checked across n_list.
    """
    t = as_matrix(t)
    if t.shape[0] != t.shape[1]:
        raise ValueError(f"expected a square matrix, got {t.shape}")
    m = t.shape[0]
    lam_min = float(np.linalg.eigvalsh(0.5 * (t + t.T))[0])
    norm_t = float(np.linalg.norm(t, 2))
    if lam_min < alpha - 1e-10:
        raise PreconditionError(
            f"not coercive with alpha={alpha}: symmetric part has eigenvalue {lam_min:.6g}")
    if norm_t > beta + 1e-10:
        raise PreconditionError(f"||T|| = {norm_t:.6g} exceeds beta = {beta}")
    rng = np.random.default_rng(seed)
    for _ in range(20):
        u = rng.standard_normal(m)
        u /= np.linalg.norm(u)
        if abs(float(u @ t @ u)) < alpha - 1e-10:
            raise PreconditionError("sampled vector violates coercivity")
    limit = beta / alpha
    rows = []
    passed = True
    for n in n_list:
        inst = LpaInstance(t, n)
        ang = offset_angle(inst)
        factor = _bound_factor(ang.sin_gap_route)
        rows.append(CoerciveRow(n=n, bound_factor=factor))
        if not factor <= limit + tol:
            passed = False
    return CoerciveReport(rows=tuple(rows), alpha=alpha, beta=beta,
                          limit=limit, passed=passed)
