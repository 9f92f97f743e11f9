"""Energy-efficiency maximization over the two element counts.

The objective sum_streams log(1 + a/(b/(N_r N_s) + c)) / ((N_s + K N_r) P_1
+ P_2) is pseudo-concave in (N_s, N_r); its stationary point solves two
implicit equations that balance marginal rate against per-element power.
Everything internal uses natural logs (the argmax does not care about the
log base).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .channel import VarianceProfile
from .energy import PowerModel
from .link import LinkConfig, rate_constants

# outermost bracket for the 1-D implicit-equation solves
BRACKET_LO = 1e-3
BRACKET_HI = 1e9


class NumericalError(RuntimeError):
    """Solver could not produce a trustworthy answer."""


@dataclass(frozen=True)
class EEProblem:
    """Constants of one energy-efficiency instance.

    a, b are (K, n_r) stream constants, c the shared interference floor,
    P_1/P_2 the affine power model, and (n_s, n_r) the lower bounds on the
    element counts.
    """

    a: np.ndarray
    b: np.ndarray
    c: float
    P_1: float
    P_2: float
    n_s: int
    n_r: int
    K: int

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.a, dtype=float))
        b = np.atleast_2d(np.asarray(self.b, dtype=float))
        if a.shape != b.shape:
            raise ValueError("a and b must have the same shape")
        if a.shape[0] != self.K:
            raise ValueError("leading axis of a must be K")
        if not ((a > 0).all() and (b > 0).all() and np.isfinite(a).all()
                and np.isfinite(b).all()):
            raise ValueError("stream constants must be positive and finite")
        if not (self.c > 0 and math.isfinite(self.c)):
            raise ValueError("c must be positive")
        if self.P_1 < 0 or self.P_2 <= 0:
            raise ValueError("P_1 must be nonnegative and P_2 positive")
        if self.n_s < 1 or self.n_r < 1:
            raise ValueError("bounds must be at least 1")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


@dataclass(frozen=True)
class OptimumResult:
    """Integer optimum plus the continuous stationary data behind it."""

    N_s_opt: int
    N_r_opt: int
    ee_value: float
    active_case: str
    continuous_stationary: tuple[float, float] | None = None
    kkt_residuals: tuple[float, float] | None = None


def build_problem(
    profile: VarianceProfile,
    cfg: LinkConfig,
    model: PowerModel,
    n_s: int,
    n_r: int,
) -> EEProblem:
    """Assemble the instance from a profile, link config and power model.

    The stream constants are computed twice, once from the closed-form rate
    pieces and once from their definition, and must agree; a zero-variance
    stream makes the instance degenerate and is rejected.
    """
    if not (cfg.K == profile.K == model.K):
        raise ValueError("K disagrees between profile, link config and power model")
    if cfg.p_u != model.p_u:
        raise ValueError("link p_u and power-model p_u must be one shared value")
    if (profile.sigma2_r <= 0).any() or (profile.sigma2_s < 0).any():
        raise ValueError("degenerate variance profile: zero-variance stream")
    a, b, c = rate_constants(profile, cfg.p_u, cfg.sigma2_w)
    # independent recomputation straight from the definitions
    a2 = profile.sigma2_r * (profile.n_s * profile.mean_s) ** 2
    b2 = cfg.sigma2_w * profile.cross_sum / (profile.sigma2_r * cfg.p_u)
    c2 = profile.n_r * profile.mean_r * profile.sum_s4
    if not (np.allclose(a, a2, rtol=1e-12) and np.allclose(b, b2, rtol=1e-12)
            and math.isclose(c, c2, rel_tol=1e-12)):
        raise AssertionError("stream-constant routes disagree")
    if not ((a > 0).all() and np.isfinite(b).all() and c > 0):
        raise ValueError("degenerate variance profile: nonpositive constants")
    return EEProblem(a=a, b=b, c=c, P_1=model.P_1, P_2=model.P_2,
                     n_s=n_s, n_r=n_r, K=cfg.K)


def _per_stream_terms(prob: EEProblem, N_s, N_r):
    """Log-sum f and curvature sum T, broadcast over count arrays."""
    nn = (np.asarray(N_s, dtype=float) * np.asarray(N_r, dtype=float))[..., None, None]
    a, b, c = prob.a, prob.b, prob.c
    den1 = c * nn + b
    den2 = (c + a) * nn + b
    f = np.log1p(a * nn / den1).sum(axis=(-2, -1))
    T = (a * b / (den1 * den2)).sum(axis=(-2, -1))
    return f, T


def ee_objective(prob: EEProblem, N_s, N_r):
    """Energy efficiency in nat/Hz/J, broadcastable over count arrays."""
    f, _ = _per_stream_terms(prob, N_s, N_r)
    g = (np.asarray(N_s) + prob.K * np.asarray(N_r)) * prob.P_1 + prob.P_2
    return f / g


def kkt_residuals(prob: EEProblem, N_s, N_r):
    """Stationarity residuals (r1, r2); each is g^2 times the EE gradient.

    r1 = g N_r T - P_1 f and r2 = g N_s T - K P_1 f with
    T = sum a b / ((c NN + b)((c + a) NN + b)), evaluated at NN = N_s N_r.
    Both start positive near the origin and end negative for large counts.
    """
    f, T = _per_stream_terms(prob, N_s, N_r)
    N_s = np.asarray(N_s, dtype=float)
    N_r = np.asarray(N_r, dtype=float)
    g = (N_s + prob.K * N_r) * prob.P_1 + prob.P_2
    r1 = g * N_r * T - prob.P_1 * f
    r2 = g * N_s * T - prob.K * prob.P_1 * f
    return r1, r2


def _scaled(prob: EEProblem, N_s: float, N_r: float) -> np.ndarray:
    """Residuals divided by the magnitude of their log-sum terms."""
    f, _ = _per_stream_terms(prob, N_s, N_r)
    r1, r2 = kkt_residuals(prob, N_s, N_r)
    s1 = max(prob.P_1 * float(f), 1e-300)
    s2 = max(prob.K * prob.P_1 * float(f), 1e-300)
    return np.array([float(r1) / s1, float(r2) / s2])


def _bracket_root(fun, lo: float = BRACKET_LO, hi: float = BRACKET_HI) -> float:
    """Root of a decreasing-through-zero scalar function on [lo, hi]."""
    flo, fhi = fun(lo), fun(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo < 0.0 and fhi < 0.0:
        # already past the peak at the lower edge
        return lo
    if flo > 0.0 and fhi > 0.0:
        raise NumericalError(
            "no stationary point in [%g, %g]: objective still rising" % (lo, hi)
        )
    return brentq(fun, lo, hi, xtol=1e-12, rtol=8.9e-16, maxiter=200)


def solve_eq1_at(prob: EEProblem, N_r: float) -> float:
    """N_s solving r1 = 0 at fixed N_r."""
    return _bracket_root(lambda ns: float(kkt_residuals(prob, ns, N_r)[0]))


def solve_eq2_at(prob: EEProblem, N_s: float) -> float:
    """N_r solving r2 = 0 at fixed N_s."""
    return _bracket_root(lambda nr: float(kkt_residuals(prob, N_s, nr)[1]))


def solve_stationary(
    prob: EEProblem, tol: float = 1e-10, max_iter: int = 80
) -> tuple[float, float]:
    """Joint root of the two implicit equations.

    Damped Newton (finite-difference Jacobian, step halving) from
    (n_s, n_r); if it stalls, alternating 1-D bisection closes in and
    Newton is retried from there.  On success both residuals are below
    ``tol`` relative to their log-sum terms.
    """
    if prob.P_1 <= 0:
        raise NumericalError("P_1 = 0: efficiency never stops rising, no optimum")

    def newton(x0: np.ndarray) -> np.ndarray | None:
        x = x0.copy()
        for _ in range(max_iter):
            r = _scaled(prob, x[0], x[1])
            if np.abs(r).max() < tol:
                return x
            J = np.empty((2, 2))
            for j in range(2):
                h = 1e-6 * max(1.0, abs(x[j]))
                xp, xm = x.copy(), x.copy()
                xp[j] += h
                xm[j] -= h
                J[:, j] = (_scaled(prob, xp[0], xp[1])
                           - _scaled(prob, xm[0], xm[1])) / (2 * h)
            try:
                step = np.linalg.solve(J, -r)
            except np.linalg.LinAlgError:
                return None
            lam, base = 1.0, float(np.abs(r).max())
            for _ in range(60):
                cand = x + lam * step
                if (cand > 0).all():
                    if float(np.abs(_scaled(prob, cand[0], cand[1])).max()) < base:
                        break
                lam *= 0.5
            else:
                return None
            x = x + lam * step
        r = _scaled(prob, x[0], x[1])
        return x if np.abs(r).max() < tol else None

    x = newton(np.array([float(prob.n_s), float(prob.n_r)], dtype=float))
    if x is None:
        # alternating coordinate solves; converges on this family because the
        # objective is pseudo-concave with a single interior stationary point
        ns, nr = float(prob.n_s), float(prob.n_r)
        for _ in range(200):
            ns_new = solve_eq1_at(prob, nr)
            nr_new = solve_eq2_at(prob, ns_new)
            moved = max(abs(ns_new - ns) / max(ns, 1.0),
                        abs(nr_new - nr) / max(nr, 1.0))
            ns, nr = ns_new, nr_new
            if moved < 1e-13:
                break
        x = newton(np.array([ns, nr]))
        if x is None:
            r = _scaled(prob, ns, nr)
            if np.abs(r).max() < tol:
                x = np.array([ns, nr])
            else:
                raise NumericalError("stationary-point iteration did not converge")
    return float(x[0]), float(x[1])


def _integerize(
    prob: EEProblem, cont_s: float, cont_r: float
) -> tuple[int, int, float]:
    """Best bound-respecting rounding of the continuous point.

    Scans one cell beyond floor/ceil on each axis: along a diagonal ridge
    the best lattice point can sit just outside the unit box around the
    continuous optimum.  Ties go to the smaller N_s, then the smaller N_r.
    """
    cand_s = sorted({max(prob.n_s, int(math.floor(cont_s)) + d) for d in (-1, 0, 1, 2)})
    cand_r = sorted({max(prob.n_r, int(math.floor(cont_r)) + d) for d in (-1, 0, 1, 2)})
    best = None
    for ns in cand_s:
        for nr in cand_r:
            ee = float(ee_objective(prob, ns, nr))
            if best is None or ee > best[2]:
                best = (ns, nr, ee)
    return best


def optimize(prob: EEProblem) -> OptimumResult:
    """Integer element counts maximizing energy efficiency.

    Follows the stationary system: if the joint root violates a lower
    bound, that count is clamped and the remaining equation re-solved,
    ending at the bounds themselves when neither equation keeps a root.
    The surviving continuous point is rounded to the best feasible
    neighbor.
    """
    ns_bar, nr_bar = solve_stationary(prob)
    if ns_bar >= prob.n_s and nr_bar >= prob.n_r:
        cont, case = (ns_bar, nr_bar), "interior"
    else:
        # clamping one count shifts the best value of the other, so each
        # boundary restriction re-solves its remaining equation; the two
        # restrictions then compete on achieved efficiency
        candidates = []
        rho_r = solve_eq2_at(prob, float(prob.n_s))
        if rho_r >= prob.n_r:
            candidates.append(((float(prob.n_s), rho_r), "N_s_at_bound"))
        else:
            candidates.append(((float(prob.n_s), float(prob.n_r)), "both_at_bound"))
        rho_s = solve_eq1_at(prob, float(prob.n_r))
        if rho_s >= prob.n_s:
            candidates.append(((rho_s, float(prob.n_r)), "N_r_at_bound"))
        else:
            candidates.append(((float(prob.n_s), float(prob.n_r)), "both_at_bound"))
        best = None
        for cont_c, case_c in candidates:
            val = float(ee_objective(prob, cont_c[0], cont_c[1]))
            if best is None or val > best[0]:
                best = (val, cont_c, case_c)
        _, cont, case = best
    ns_i, nr_i, ee = _integerize(prob, cont[0], cont[1])
    r1, r2 = kkt_residuals(prob, cont[0], cont[1])
    return OptimumResult(
        N_s_opt=ns_i, N_r_opt=nr_i, ee_value=ee, active_case=case,
        continuous_stationary=(float(cont[0]), float(cont[1])),
        kkt_residuals=(float(r1), float(r2)),
    )


def optimize_ns(prob: EEProblem, N_r: int) -> tuple[int, float]:
    """Best integer N_s with the receive count frozen.

    Raises NumericalError when no stationary point exists (efficiency
    monotone in N_s over the whole bracket, e.g. P_1 = 0).
    """
    if prob.P_1 <= 0:
        raise NumericalError("P_1 = 0: efficiency never stops rising, no optimum")
    cont = solve_eq1_at(prob, float(N_r))
    cand = {max(prob.n_s, int(math.floor(cont))), max(prob.n_s, int(math.ceil(cont)))}
    best = None
    for ns in sorted(cand):
        ee = float(ee_objective(prob, ns, N_r))
        if best is None or ee > best[1]:
            best = (ns, ee)
    return best


def grid_scan_oracle(
    prob: EEProblem,
    Ns_range: tuple[int, int],
    Nr_range: tuple[int, int],
) -> OptimumResult:
    """Exhaustive integer scan over an inclusive box, for cross-checking.

    The box must contain the optimum: an argmax on the far edge of either
    axis raises, since a larger box could then only do better.
    """
    ns_lo, ns_hi = Ns_range
    nr_lo, nr_hi = Nr_range
    if ns_lo < prob.n_s or nr_lo < prob.n_r:
        raise ValueError("box must respect the lower bounds")
    if ns_hi < ns_lo or nr_hi < nr_lo:
        raise ValueError("empty box")
    ns = np.arange(ns_lo, ns_hi + 1)
    nr = np.arange(nr_lo, nr_hi + 1)
    # chunk the N_s axis so the (chunk, n_r, K, n_r) broadcast stays small
    best_val, best_ns, best_nr = -np.inf, None, None
    step = max(1, int(2e6 / max(1, nr.size * prob.a.size)))
    for s0 in range(0, ns.size, step):
        block = ns[s0:s0 + step]
        ee = ee_objective(prob, block[:, None], nr[None, :])
        idx = np.unravel_index(int(np.argmax(ee)), ee.shape)
        val = float(ee[idx])
        # strict > keeps the first (lexicographically smallest) maximizer
        if val > best_val:
            best_val = val
            best_ns = int(block[idx[0]])
            best_nr = int(nr[idx[1]])
    if (best_ns == ns_hi and ns.size > 1) or (best_nr == nr_hi and nr.size > 1):
        raise ValueError("optimum on the far edge of the box: box too small")
    return OptimumResult(N_s_opt=best_ns, N_r_opt=best_nr, ee_value=best_val,
                         active_case="grid")


def to_report(prob: EEProblem, result: OptimumResult) -> dict:
    """JSON-ready record of one optimization run."""
    cont = result.continuous_stationary or (None, None)
    res = result.kkt_residuals or (None, None)
    return {
        "n_s": prob.n_s,
        "n_r": prob.n_r,
        "Ns_bar": cont[0],
        "Nr_bar": cont[1],
        "case": result.active_case,
        "Ns_opt": result.N_s_opt,
        "Nr_opt": result.N_r_opt,
        "ee": result.ee_value,
        "residuals": [res[0], res[1]],
    }
