"""Heavy ball, Nesterov and proximal point iterations with their linear-rate constants."""

from __future__ import annotations

import io
import json
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Sequence

import numpy as np

from .analysis import estimate_lipschitz_grad, estimate_modulus
from .errors import ConfigError, PreconditionError
from .func_zoo import ObjectiveFunction, grad
from .prox import prox
from .reports import atomic_write_text, to_jsonable
from .sampling import plan_for
from .sets import StarShapedSet, whole_space

Array = np.ndarray

METHODS = ("gradient", "heavy_ball", "nesterov", "ppa")
QUANTITIES = ("dist_sq", "dist", "value_gap", "energy")
RATE_RTOL = 1e-9


@dataclass(frozen=True)
class SolverConfig:
    """Parameters of one run.

    ``alpha`` may be ``"auto"`` for Nesterov (0.99 of its admissible bound).
    ``gamma`` and ``lipschitz`` override the function's claimed constants.
    """

    method: str
    beta: float
    alpha: float | str = 0.0
    eta: float | None = None
    epsilon: float | None = None
    beta_schedule: tuple[float, ...] | None = None
    beta_prime: float | None = None
    max_iter: int = 1000
    stop_tol: float = 1e-10
    gamma: float | None = None
    lipschitz: float | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}, got {self.method!r}")
        if not (isinstance(self.beta, (int, float)) and self.beta > 0):
            raise ConfigError("beta must be positive")
        if self.alpha != "auto" and not self.alpha >= 0:
            raise ConfigError("alpha must be nonnegative")
        if self.alpha == "auto" and self.method != "nesterov":
            raise ConfigError('alpha="auto" is only defined for nesterov')
        if self.max_iter < 1:
            raise ConfigError("max_iter must be positive")
        if not self.stop_tol > 0:
            raise ConfigError("stop_tol must be positive")
        if self.method == "gradient" and self.alpha not in (0, 0.0):
            raise ConfigError("the gradient method has alpha = 0")
        if self.method == "nesterov":
            if self.eta is None or not self.eta > 1:
                raise ConfigError("nesterov needs eta > 1")
            if self.epsilon is None or not self.epsilon > 0:
                raise ConfigError("nesterov needs epsilon > 0")
        if self.method == "ppa":
            sched = self.schedule()
            bp = self.beta_prime if self.beta_prime is not None else min(sched)
            if not bp > 0:
                raise ConfigError("beta_prime must be positive")
            bad = [b for b in sched if b < bp]
            if bad:
                raise ConfigError(f"beta_k >= beta_prime violated: {bad[0]} < {bp}")

    def schedule(self) -> tuple[float, ...]:
        return tuple(self.beta_schedule) if self.beta_schedule else (float(self.beta),)

    def beta_at(self, k: int) -> float:
        s = self.schedule()
        return float(s[min(k, len(s) - 1)])

    @property
    def effective_beta_prime(self) -> float:
        return self.beta_prime if self.beta_prime is not None else min(self.schedule())

    def to_dict(self) -> dict:
        return to_jsonable(asdict(self))


@dataclass
class IterateTrace:
    iterates: Array
    values: Array
    dist_to_min: Array | None
    grad_norms: Array | None
    energies: Array | None
    stop_reason: str
    method: str
    metadata: dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.values)

    def dist_sq_ratio(self) -> Array | None:
        if self.dist_to_min is None:
            return None
        d2 = self.dist_to_min**2
        out = np.full(len(d2), np.nan)
        with np.errstate(divide="ignore", invalid="ignore"):
            out[1:] = np.where(d2[:-1] > 0, d2[1:] / d2[:-1], np.nan)
        return out

    def to_csv(self) -> str:
        n = self.iterates.shape[1]
        cols = ["k", *[f"x_{i}" for i in range(n)], "h", "grad_norm", "dist_to_min", "dist_sq_ratio", "energy"]
        ratio = self.dist_sq_ratio()
        buf = io.StringIO()
        buf.write(",".join(cols) + "\n")

        def fmt(v):
            return "" if v is None or not np.isfinite(v) else "%.17g" % v

        for k in range(len(self)):
            row = [str(k), *[fmt(v) for v in self.iterates[k]], fmt(self.values[k])]
            for arr in (self.grad_norms, self.dist_to_min, ratio, self.energies):
                row.append(fmt(arr[k]) if arr is not None else "")
            buf.write(",".join(row) + "\n")
        return buf.getvalue()

    def write_csv(self, path) -> None:
        atomic_write_text(path, self.to_csv())


@dataclass
class RateReport:
    theoretical_rate: float
    empirical_rate: float = math.nan
    c0: float = math.nan
    per_iter_violations: int = 0
    quantity: str | None = None
    n_points: int = 0
    vacuous: bool = False
    constants: dict[str, float] = field(default_factory=dict)
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.per_iter_violations == 0 and self.extra.get("chain_violations", 0) == 0

    def to_dict(self) -> dict:
        return to_jsonable({**asdict(self), "passed": self.passed})

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


# --------------------------------------------------------------- constants


def _constants(f: ObjectiveFunction, cfg: SolverConfig, need_gamma: bool, need_l: bool) -> tuple[float, float]:
    gamma = cfg.gamma if cfg.gamma is not None else f.modulus_claim
    lip = cfg.lipschitz if cfg.lipschitz is not None else f.lipschitz_claim
    if need_gamma and gamma is None:
        gamma = estimate_modulus(f, plan_for(f))
    if need_l and lip is None:
        lip = estimate_lipschitz_grad(f, plan_for(f))
    return gamma, lip


def nesterov_mus(gamma: float, lip: float, beta: float, eta: float) -> tuple[float, float]:
    den = 1.0 + beta * (gamma - eta * beta * lip**2)
    return 1.0 / den, (1.0 - 1.0 / eta) / den


def nesterov_alpha_bound(mu1: float, mu2: float, eps: float) -> float:
    a = mu1 * mu2 * (1.0 + eps)
    return a / (a + mu1 + mu1 / eps + mu2)


def resolve_config(f: ObjectiveFunction, cfg: SolverConfig) -> SolverConfig:
    """Validate ``cfg`` against the parameter window of its method.

    Returns the config with ``alpha="auto"`` replaced by a number; raises
    ConfigError naming the violated bound.  Never evaluates f except to
    estimate missing constants.
    """
    m = cfg.method
    if m in ("gradient", "heavy_ball"):
        a = float(cfg.alpha)
        if not a < math.sqrt(2.0) / 2.0:
            raise ConfigError(f"heavy ball needs alpha < sqrt(2)/2, got {a}")
        lip = cfg.lipschitz if cfg.lipschitz is not None else f.lipschitz_claim
        if lip is None:
            # nothing to validate the step against; heavy_ball records this
            return cfg
        bound = (1.0 - 2.0 * a * a) / lip
        if cfg.beta > bound * (1.0 + 1e-12):
            raise ConfigError(f"heavy ball needs beta <= (1 - 2 alpha^2)/L = {bound:.6g}, got {cfg.beta}")
        return cfg
    if m == "nesterov":
        gamma, lip = _constants(f, cfg, True, True)
        if not cfg.beta < gamma / (cfg.eta * lip**2):
            raise ConfigError(
                f"nesterov needs beta < gamma/(eta L^2) = {gamma / (cfg.eta * lip**2):.6g}, got {cfg.beta}"
            )
        mu1, mu2 = nesterov_mus(gamma, lip, cfg.beta, cfg.eta)
        if not cfg.epsilon < 1.0 / mu1 - 1.0:
            raise ConfigError(f"nesterov needs epsilon < 1/mu1 - 1 = {1.0 / mu1 - 1.0:.6g}, got {cfg.epsilon}")
        bound = nesterov_alpha_bound(mu1, mu2, cfg.epsilon)
        if cfg.alpha == "auto":
            return replace(cfg, alpha=0.99 * bound)
        if cfg.alpha > bound:
            raise ConfigError(f"nesterov needs alpha <= {bound:.6g}, got {cfg.alpha}")
        return cfg
    return cfg


def theoretical_rates(f: ObjectiveFunction, cfg: SolverConfig) -> RateReport:
    """Linear rate constant of the method under ``cfg`` (empirical fields unset)."""
    cfg = resolve_config(f, cfg)
    if cfg.method in ("gradient", "heavy_ball"):
        gamma, lip = _constants(f, cfg, True, True)
        a, b = float(cfg.alpha), cfg.beta
        rho = min(b / 2.0, (1.0 - b * lip - 2.0 * a * a) / (2.0 * b))
        sigma = max(15.0 / b, 2.0 * lip / gamma**2 + 15.0 * b)
        if not 0 < rho < sigma:
            raise ConfigError(f"need 0 < rho < sigma, got rho={rho}, sigma={sigma}")
        rate = 1.0 - rho / sigma
        consts = {"rho": rho, "sigma": sigma, "gamma": gamma, "lipschitz": lip, "alpha": a, "beta": b}
        quantity = "energy"
    elif cfg.method == "nesterov":
        gamma, lip = _constants(f, cfg, True, True)
        mu1, mu2 = nesterov_mus(gamma, lip, cfg.beta, cfg.eta)
        rate = mu1 * (1.0 + cfg.epsilon)
        consts = {"mu1": mu1, "mu2": mu2, "gamma": gamma, "lipschitz": lip, "alpha": float(cfg.alpha),
                  "beta": cfg.beta, "eta": cfg.eta, "epsilon": cfg.epsilon}
        quantity = "energy"
    else:
        gamma, _ = _constants(f, cfg, True, False)
        bp = cfg.effective_beta_prime
        rate = 1.0 / (1.0 + bp * gamma)
        consts = {"gamma": gamma, "beta_prime": bp}
        quantity = "dist_sq"
    if not 0 < rate < 1:
        raise ConfigError(f"rate {rate} outside (0, 1) for these parameters")
    return RateReport(theoretical_rate=rate, quantity=quantity, constants=consts)


# ------------------------------------------------------------------ solvers


def _h_star(f: ObjectiveFunction, values: Sequence[float]) -> tuple[float, bool]:
    if f.min_value is not None:
        return float(f.min_value), True
    return float(np.min(values)), False


def _finish(f, X, values, grads, energies, stop, method, meta) -> IterateTrace:
    X = np.asarray(X, dtype=float)
    values = np.asarray(values, dtype=float)
    dist = None
    if f.minimizer is not None:
        dist = np.linalg.norm(X - np.asarray(f.minimizer, dtype=float), axis=1)
    return IterateTrace(
        iterates=X,
        values=values,
        dist_to_min=dist,
        grad_norms=None if grads is None else np.asarray(grads, dtype=float),
        energies=None if energies is None else np.asarray(energies, dtype=float),
        stop_reason=stop,
        method=method,
        metadata=meta,
    )


def _start(f: ObjectiveFunction, x0) -> Array:
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    if x0.shape != (f.dim,):
        raise ConfigError(f"x0 must have {f.dim} coordinates")
    return x0


def heavy_ball(f: ObjectiveFunction, x0, cfg: SolverConfig) -> IterateTrace:
    """y_k = x_k + alpha(x_k - x_{k-1}); x_{k+1} = y_k - beta grad h(x_k), with x_{-1} = x_0."""
    if cfg.method not in ("gradient", "heavy_ball"):
        raise ConfigError(f"heavy_ball cannot run method {cfg.method!r}")
    cfg = resolve_config(f, cfg)
    try:
        rates = theoretical_rates(f, cfg)
        rate_meta = {"rates": rates.constants, "rate": rates.theoretical_rate}
    except ConfigError as exc:
        # admissible step, but the rate constant degenerates (e.g. beta = 1/L gives rho = 0)
        rate_meta = {"rates": {}, "rate": None, "rate_note": str(exc)}
    rate_meta["window_verified"] = cfg.lipschitz is not None or f.lipschitz_claim is not None
    a, b = float(cfg.alpha), cfg.beta
    x = x_prev = _start(f, x0)
    X, values, grads, steps = [], [], [], []
    stop = "max_iter"
    for k in range(cfg.max_iter + 1):
        g = grad(f, x)
        X.append(x)
        values.append(f(x))
        grads.append(float(np.linalg.norm(g)))
        steps.append(float(np.sum((x - x_prev) ** 2)))
        if grads[-1] <= cfg.stop_tol:
            stop = "tol"
            break
        if k == cfg.max_iter:
            break
        x, x_prev = x + a * (x - x_prev) - b * g, x
    h_star, exact = _h_star(f, values)
    energies = np.asarray(values) - h_star + (a * a / b) * np.asarray(steps)
    meta = {**rate_meta, "h_star": h_star, "h_star_exact": exact, "config": cfg.to_dict()}
    return _finish(f, X, values, grads, energies, stop, cfg.method, meta)


def nesterov(f: ObjectiveFunction, x0, cfg: SolverConfig) -> IterateTrace:
    """y_k = x_k + alpha(x_k - x_{k-1}); x_{k+1} = y_k - beta grad h(y_k), with x_{-1} = x_0."""
    if cfg.method != "nesterov":
        raise ConfigError(f"nesterov cannot run method {cfg.method!r}")
    cfg = resolve_config(f, cfg)
    rates = theoretical_rates(f, cfg)
    a, b = float(cfg.alpha), cfg.beta
    mu2 = rates.constants["mu2"]
    x = x_prev = _start(f, x0)
    X, values, grads, steps = [], [], [], []
    stop = "max_iter"
    for k in range(cfg.max_iter + 1):
        X.append(x)
        values.append(f(x))
        grads.append(float(np.linalg.norm(grad(f, x))))
        steps.append(float(np.sum((x - x_prev) ** 2)))
        if grads[-1] <= cfg.stop_tol:
            stop = "tol"
            break
        if k == cfg.max_iter:
            break
        y = x + a * (x - x_prev)
        x, x_prev = y - b * grad(f, y), x
    energies = None
    if f.minimizer is not None:
        d2 = np.sum((np.asarray(X) - np.asarray(f.minimizer)) ** 2, axis=1)
        energies = d2 + mu2 * (1.0 - a) * np.asarray(steps)
    meta = {"rates": rates.constants, "rate": rates.theoretical_rate, "config": cfg.to_dict()}
    return _finish(f, X, values, grads, energies, stop, "nesterov", meta)


def ppa(
    f: ObjectiveFunction,
    K: StarShapedSet | None,
    x0,
    cfg: SolverConfig,
    budget_per_step: int = 20000,
) -> IterateTrace:
    """x_{k+1} in Prox_{beta_k h}(K, x_k); stops once ||x_{k+1} - x_k|| <= stop_tol."""
    if cfg.method != "ppa":
        raise ConfigError(f"ppa cannot run method {cfg.method!r}")
    K = K if K is not None else whole_space(f.dim)
    x = _start(f, x0)
    if not K.members(x):
        raise PreconditionError(f"x0 is not in {K.name}")
    gamma, _ = _constants(f, cfg, False, False)
    X, values, betas, flagged = [x], [f(x)], [], []
    stop = "max_iter"
    for k in range(cfg.max_iter):
        b = cfg.beta_at(k)
        r = prox(f, K, b, x, budget_per_step)
        if not r.converged:
            flagged.append(k)
        if np.linalg.norm(r.point - x) <= cfg.stop_tol:
            stop = "fixed_point"
            break
        x = r.point
        X.append(x)
        values.append(f(x))
        betas.append(b)
    meta = {
        "betas": betas,
        "beta_prime": cfg.effective_beta_prime,
        "gamma": gamma,
        "set": K.name,
        "nonconverged_steps": flagged,
        "config": cfg.to_dict(),
    }
    if gamma is not None:
        meta["rate"] = 1.0 / (1.0 + cfg.effective_beta_prime * gamma)
    return _finish(f, X, values, None, None, stop, "ppa", meta)


def solve(f: ObjectiveFunction, x0, cfg: SolverConfig, K: StarShapedSet | None = None, budget_per_step: int = 20000):
    if cfg.method in ("gradient", "heavy_ball"):
        return heavy_ball(f, x0, cfg)
    if cfg.method == "nesterov":
        return nesterov(f, x0, cfg)
    return ppa(f, K, x0, cfg, budget_per_step)


# -------------------------------------------------------------- rate checks


def _quantity(trace: IterateTrace, quantity: str) -> Array:
    if quantity not in QUANTITIES:
        raise ConfigError(f"quantity must be one of {QUANTITIES}")
    if quantity in ("dist_sq", "dist"):
        if trace.dist_to_min is None:
            raise PreconditionError("trace has no distances (minimizer unknown)")
        return trace.dist_to_min**2 if quantity == "dist_sq" else trace.dist_to_min.copy()
    if quantity == "value_gap":
        if not trace.metadata.get("h_star_exact", False) and "h_star" not in trace.metadata:
            raise PreconditionError("trace has no optimal value")
        return trace.values - trace.metadata["h_star"]
    if trace.energies is None:
        raise PreconditionError("trace has no energies")
    return trace.energies.copy()


def fit_rate(q: Array) -> tuple[float, float]:
    """Least-squares fit of log q_k = log c0 + k log r over the tail half of positive entries."""
    k = np.arange(len(q))
    tail = k >= len(q) // 2
    use = tail & (q > 0)
    if np.count_nonzero(use) < 2:
        use = q > 0
    if np.count_nonzero(use) < 2:
        return math.nan, math.nan
    slope, icept = np.polyfit(k[use], np.log(q[use]), 1)
    return float(np.exp(slope)), float(np.exp(icept))


def verify_linear_rate(trace: IterateTrace, quantity: str, rate: float) -> RateReport:
    """Count k with q_{k+1} > rate q_k (1 + 1e-9) and fit the empirical rate.

    Heavy-ball energy traces also get the chained bound
    (gamma/4)||x_{k+1} - xbar||^2 <= h(x_{k+1}) - h* <= rate^k E_1, and
    Nesterov energy traces the bound ||x_k - xbar||^2 <= rate^(k-1) E_1.
    """
    if not 0 < rate < 1:
        raise ConfigError("rate must lie in (0, 1)")
    q = _quantity(trace, quantity)
    rep = RateReport(theoretical_rate=rate, quantity=quantity, n_points=len(q),
                     constants=dict(trace.metadata.get("rates", {})))
    if np.all(q == 0):
        rep.vacuous = True
        rep.empirical_rate = 0.0
        rep.c0 = 0.0
        return rep
    viol = q[1:] > rate * q[:-1] * (1.0 + RATE_RTOL)
    rep.per_iter_violations = int(np.count_nonzero(viol))
    if rep.per_iter_violations:
        rep.extra["first_violation_k"] = int(np.argmax(viol))
    rep.empirical_rate, rep.c0 = fit_rate(q)
    if trace.method in ("gradient", "heavy_ball") and quantity == "energy" and trace.dist_to_min is not None:
        gamma = trace.metadata.get("rates", {}).get("gamma", 0.0)
        gap = trace.values - trace.metadata["h_star"]
        d2 = trace.dist_to_min**2
        chain = 0
        if len(q) > 1:
            E1 = q[1]
            for k in range(1, len(q) - 1):
                lo_ok = 0.25 * gamma * d2[k + 1] <= gap[k + 1] + 1e-12 * (1 + abs(gap[k + 1]))
                hi_ok = gap[k + 1] <= rate**k * E1 * (1.0 + RATE_RTOL) + 1e-300
                chain += int(not (lo_ok and hi_ok))
        rep.extra["chain_violations"] = chain
    if trace.method == "nesterov" and quantity == "energy" and trace.dist_to_min is not None and len(q) > 1:
        d2 = trace.dist_to_min**2
        k = np.arange(1, len(q))
        bound = rate ** (k - 1) * q[1]
        rep.extra["chain_violations"] = int(np.count_nonzero(d2[1:] > bound * (1.0 + RATE_RTOL)))
    return rep
