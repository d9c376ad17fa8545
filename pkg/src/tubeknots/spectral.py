"""Numeric work on evaluated transfer matrices: Perron roots, growth rates, norm bounds."""

from __future__ import annotations

import dataclasses
import math
from collections.abc import Mapping

import numpy as np
import scipy.sparse as sp

from .errors import MissingData, NoConvergence, Overflow
from .patterns import TransferSystem

UNIT_ROUNDOFF = np.finfo(np.float64).eps / 2


def evaluate(sys: TransferSystem, which: str, x: float) -> sp.csr_matrix:
    """Entrywise x**exponent of A, T or B as a float sparse matrix."""
    if not x > 0:
        raise ValueError("x must be positive")
    rows, cols, exps = sys.coo(which)
    vals = np.power(float(x), exps.astype(np.float64))
    return sp.csr_matrix((vals, (rows, cols)), shape=sys.shape(which))


def from_triplets(rows, cols, vals, shape) -> sp.csr_matrix:
    return sp.csr_matrix((np.asarray(vals, dtype=np.float64), (rows, cols)), shape=shape)


@dataclasses.dataclass
class EigenResult:
    value: float
    iterations: int
    residual: float


def perron(m, tol: float = 1e-13, max_iter: int = 200_000) -> EigenResult:
    """Power iteration from the all-ones vector with a Rayleigh-quotient estimate.

    Stops once successive estimates agree to tol and the residual
    ||Mv - lambda v|| / ||v|| is below sqrt(tol)."""
    m = sp.csr_matrix(m)
    n = m.shape[0]
    if n == 0:
        raise ValueError("empty matrix")
    v = np.ones(n) / math.sqrt(n)
    lam = 0.0
    for it in range(1, max_iter + 1):
        w = m @ v
        new = float(v @ w)
        nw = np.linalg.norm(w)
        if nw == 0:
            return EigenResult(0.0, it, 0.0)
        res = float(np.linalg.norm(w - new * v))
        if abs(new - lam) <= tol * max(1.0, abs(new)) and res <= math.sqrt(tol) * max(1.0, abs(new)):
            return EigenResult(new, it, res)
        lam = new
        v = w / nw
    raise NoConvergence(f"power iteration did not settle in {max_iter} steps")


def dominant_eigenvalue(m, tol: float = 1e-13) -> float:
    return perron(m, tol).value


@dataclasses.dataclass
class GrowthResult:
    kappa: float
    x0: float
    bisection_steps: int
    eigen_iterations: int


def growth_rate_detail(
    sys: TransferSystem, tol: float = 1e-12, bracket: tuple[float, float] = (0.3, 0.9), eig_tol: float = 1e-13
) -> GrowthResult:
    """Bisection on x for lambda_max(T(x)) = 1; kappa = -log x0."""
    lo, hi = bracket
    its = 0

    def lam(x):
        nonlocal its
        r = perron(evaluate(sys, "T", x), eig_tol)
        its += r.iterations
        return r.value

    if lam(lo) >= 1 or lam(hi) <= 1:
        raise NoConvergence(f"root not bracketed by {bracket}")
    steps = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if lam(mid) < 1:
            lo = mid
        else:
            hi = mid
        steps += 1
        if steps > 200:
            raise NoConvergence("bisection did not converge")
    x0 = 0.5 * (lo + hi)
    return GrowthResult(-math.log(x0), x0, steps, its)


def growth_rate(sys: TransferSystem, tol: float = 1e-12) -> float:
    return growth_rate_detail(sys, tol).kappa


@dataclasses.dataclass
class NormBound:
    value: float
    k: int
    rounding_budget: float  # relative bound on the rounding error of value

    @property
    def certified(self) -> float:
        """value inflated by the worst-case rounding budget."""
        return self.value * (1.0 + self.rounding_budget)


def norm_power_bound_detail(m, k: int) -> NormBound:
    """||M^k||_inf ** (1/k) for a nonnegative matrix, using k products with the ones vector.

    For M >= 0 the row sums of M^k are M^k 1.  Each float product of a row with
    at most r nonzeros adds relative error at most r*u, so after k products the
    row sums carry relative error at most (1 + r u)^k - 1; the k-th root shrinks
    it by a further factor of about k."""
    if k < 1:
        raise ValueError("k must be positive")
    m = sp.csr_matrix(m)
    if m.nnz and m.data.min() < 0:
        m = abs(m)
    v = np.ones(m.shape[0])
    with np.errstate(over="raise", invalid="raise"):
        try:
            for _ in range(k):
                v = m @ v
        except FloatingPointError as exc:
            raise Overflow("row sums overflowed") from exc
    top = float(v.max(initial=0.0))
    if not math.isfinite(top):
        raise Overflow("row sums overflowed")
    r = int(np.diff(m.indptr).max(initial=1))
    gamma = (1 + r * UNIT_ROUNDOFF) ** k - 1
    # pow and the max add one more rounding each
    budget = (1 + gamma) ** (1.0 / k) - 1 + 2 * UNIT_ROUNDOFF
    return NormBound(float(top ** (1.0 / k)), k, float(budget))


def norm_power_bound(m, k: int) -> float:
    return norm_power_bound_detail(m, k).value


def lower_bound_column(counts: Mapping[int, int]) -> dict[int, float]:
    """n -> (1/n) log p_{n-6} for every count available."""
    out = {}
    for m_, c in sorted(counts.items()):
        if c > 0:
            n = m_ + 6
            out[n] = math.log(c) / n
    return out


def unknot_lower_bound(counts: Mapping[int, int], n: int | None = None) -> float:
    """max over n of (1/n) log p_{n-6}; with n given, just that term."""
    col = lower_bound_column(counts)
    if not col:
        raise MissingData("no positive counts supplied")
    if n is not None:
        if n not in col:
            raise MissingData(f"p_{n - 6} not in the table")
        return col[n]
    return max(col.values())
