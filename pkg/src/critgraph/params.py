"""Parameter ledger and the feasibility gate over the inequality system.

The whole pipeline is driven by five small constants (epsilon, epsilon',
delta, alpha, sigma), a list-size bound k, and the retention probability
K = .999*exp(-1/(1-epsilon')).  Thirteen inequalities tie them together;
every downstream threshold silently assumes they hold, so check_inequalities
is the trust anchor.  Constraints that involve only rationals are compared
exactly with Fractions; the ones involving K are evaluated with mpmath at
high precision and double-checked with interval arithmetic (epsilon is
2.6e-10 and one constraint passes by under one percent, so cancellation is
a real concern).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict, field
from fractions import Fraction
from typing import Optional, Union

import mpmath

Rational = Union[Fraction, int, str, float]

DEFAULT_PRECISION_BITS = 192


def _as_fraction(x: Rational) -> Fraction:
    """Exact conversion; decimal strings are parsed exactly, floats verbatim."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def _mpf(x: Fraction) -> mpmath.mpf:
    return mpmath.mpf(x.numerator) / mpmath.mpf(x.denominator)


def _iv(x: Fraction) -> "mpmath.iv.mpf":
    return mpmath.iv.mpf(x.numerator) / mpmath.iv.mpf(x.denominator)


def retention_probability(epsilon_prime: Fraction, prec: int = DEFAULT_PRECISION_BITS) -> mpmath.mpf:
    """K = .999 * exp(-1/(1 - epsilon')): the per-vertex colour retention rate."""
    with mpmath.workprec(prec):
        return mpmath.mpf("0.999") * mpmath.exp(-1 / (1 - _mpf(epsilon_prime)))


def log_power_term(k: int, base: Optional[float] = None) -> float:
    """The polylog threshold term log^10 k; natural log unless a base is given."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    if k == 1:
        return 0.0
    value = math.log(k) if base is None else math.log(k, base)
    return value ** 10


@dataclass(frozen=True)
class ParamSet:
    """The five analysis constants, the list-size bound k, and knobs.

    equalizing_epsilon is the sampler's coin parameter; by default it
    equals epsilon_prime so the sampler's K matches the ledger's K (the
    source text uses two conflicting conventions for which of the two
    epsilons drives the coin, so both are exposed).  log_base selects the
    base of the log^10 k term (None = natural log); it only matters for
    sufficiently-large-k statements, and small-k fixtures use base 10 to
    keep the term from swamping everything.
    """

    epsilon: Fraction
    epsilon_prime: Fraction
    delta: Fraction
    alpha: Fraction
    sigma: Fraction
    k: int
    equalizing_epsilon: Fraction = None  # type: ignore[assignment]
    log_base: Optional[float] = None

    def __post_init__(self):
        if self.equalizing_epsilon is None:
            object.__setattr__(self, "equalizing_epsilon", self.epsilon_prime)
        for name in ("epsilon", "epsilon_prime", "delta", "alpha", "sigma",
                     "equalizing_epsilon"):
            value = getattr(self, name)
            if not isinstance(value, Fraction):
                object.__setattr__(self, name, _as_fraction(value))
            value = getattr(self, name)
            if not (0 < value < 1):
                raise ValueError(f"{name} = {value} must lie in (0, 1)")
        if not (isinstance(self.k, int) and self.k >= 1):
            raise ValueError(f"k = {self.k} must be a positive integer")

    @property
    def K(self) -> float:
        return float(retention_probability(self.epsilon_prime))

    def K_exact(self, prec: int = DEFAULT_PRECISION_BITS) -> mpmath.mpf:
        return retention_probability(self.epsilon_prime, prec)

    def log_term(self, k: Optional[int] = None) -> float:
        return log_power_term(self.k if k is None else k, self.log_base)

    def to_json(self) -> str:
        payload = {
            "epsilon": str(self.epsilon),
            "epsilon_prime": str(self.epsilon_prime),
            "delta": str(self.delta),
            "alpha": str(self.alpha),
            "sigma": str(self.sigma),
            "k": self.k,
            "equalizing_epsilon": str(self.equalizing_epsilon),
            "log_base": self.log_base,
        }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ParamSet":
        """Load a ParamSet; epsilon_prime and alpha are derived if omitted."""
        payload = json.loads(text)
        kwargs = {name: _as_fraction(payload[name])
                  for name in ("epsilon", "epsilon_prime", "delta", "alpha", "sigma",
                               "equalizing_epsilon")
                  if name in payload}
        kwargs["k"] = int(payload.get("k", 100))
        kwargs["log_base"] = payload.get("log_base")
        return make_params(**kwargs)


def alpha_default(delta: Fraction, epsilon_prime: Fraction) -> Fraction:
    """alpha at its cap (delta*(2+eps') - 4*eps') / (4 - 3*delta), exactly."""
    return (delta * (2 + epsilon_prime) - 4 * epsilon_prime) / (4 - 3 * delta)


def make_params(epsilon: Rational = Fraction("2.6e-10"),
                delta: Rational = Fraction(1, 100),
                sigma: Rational = Fraction(2, 3),
                k: int = 100,
                epsilon_prime: Optional[Rational] = None,
                alpha: Optional[Rational] = None,
                equalizing_epsilon: Optional[Rational] = None,
                log_base: Optional[float] = None) -> ParamSet:
    """Build a ParamSet with the default wiring eps' = 11*eps, alpha at its cap."""
    eps = _as_fraction(epsilon)
    eps_prime = 11 * eps if epsilon_prime is None else _as_fraction(epsilon_prime)
    delta = _as_fraction(delta)
    sigma = _as_fraction(sigma)
    alpha_val = alpha_default(delta, eps_prime) if alpha is None else _as_fraction(alpha)
    return ParamSet(
        epsilon=eps, epsilon_prime=eps_prime, delta=delta, alpha=alpha_val,
        sigma=sigma, k=k,
        equalizing_epsilon=None if equalizing_epsilon is None else _as_fraction(equalizing_epsilon),
        log_base=log_base)


def default_paper_params(k: int = 100) -> ParamSet:
    """epsilon = 2.6e-10, delta = 1/100, sigma = 2/3, eps' = 11*eps, alpha at cap."""
    return make_params(k=k)


# ---------------------------------------------------------------------------
# Derived constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DerivedConstants:
    """The three savings constants; c_ES and c_BS must be positive for the
    egalitarian-sparse and bipartite-sparse machinery to mean anything."""

    c_A: float
    c_ES: float
    c_BS: float

    def feasible(self) -> bool:
        return self.c_A > 0 and self.c_ES > 0 and self.c_BS > 0


def derive_constants(p: ParamSet, prec: int = DEFAULT_PRECISION_BITS) -> DerivedConstants:
    """c_A, c_ES, c_BS evaluated at `prec` bits (values returned as floats)."""
    with mpmath.workprec(prec):
        K = p.K_exact(prec)
        eps_p = _mpf(p.epsilon_prime)
        delta = _mpf(p.delta)
        alpha = _mpf(p.alpha)
        sigma = _mpf(p.sigma)
        c_a = K * alpha * (1 - eps_p) / (1 + alpha)
        c_es = K * (1 - eps_p) * ((1 - 2 * delta) * K / (1 + alpha) ** 2
                                  - 1 / (3 * (1 - delta) ** 2 * (1 - eps_p) ** 2))
        c_bs = (K ** 2 * (1 - eps_p)
                * ((delta - eps_p) / (1 - eps_p) - 15 * delta / 16)
                * ((1 - sigma - delta) / ((1 + alpha) * (1 - delta))))
        return DerivedConstants(c_A=float(c_a), c_ES=float(c_es), c_BS=float(c_bs))


# ---------------------------------------------------------------------------
# Feasibility gate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstraintCheck:
    name: str
    relation: str           # "<" or "<="
    lhs: float
    rhs: float
    passed: bool
    exact: bool             # compared in exact rational arithmetic
    interval_conclusive: bool

    def describe(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        mode = "exact" if self.exact else ("interval-verified" if self.interval_conclusive
                                           else "interval-INCONCLUSIVE")
        return f"{status} {self.name}: {self.lhs:.9e} {self.relation} {self.rhs:.9e} [{mode}]"


@dataclass(frozen=True)
class FeasibilityReport:
    checks: tuple[ConstraintCheck, ...]
    constants: DerivedConstants
    precision_bits: int = DEFAULT_PRECISION_BITS

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def failing(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> ConstraintCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> str:
        return json.dumps({
            "all_pass": self.all_pass,
            "precision_bits": self.precision_bits,
            "constants": asdict(self.constants),
            "checks": [asdict(c) for c in self.checks],
        }, sort_keys=True)


def _rational_check(name: str, relation: str, lhs: Fraction, rhs: Fraction) -> ConstraintCheck:
    passed = lhs < rhs if relation == "<" else lhs <= rhs
    return ConstraintCheck(name, relation, float(lhs), float(rhs), passed,
                           exact=True, interval_conclusive=True)


def _real_check(name: str, relation: str, lhs, rhs, lhs_iv, rhs_iv) -> ConstraintCheck:
    passed = bool(lhs < rhs) if relation == "<" else bool(lhs <= rhs)
    # interval comparison is conclusive when the two ranges do not overlap
    if passed:
        conclusive = bool(lhs_iv.b < rhs_iv.a) if relation == "<" else bool(lhs_iv.b <= rhs_iv.a)
    else:
        conclusive = bool(lhs_iv.a >= rhs_iv.b) if relation == "<" else bool(lhs_iv.a > rhs_iv.b)
    return ConstraintCheck(name, relation, float(lhs), float(rhs), passed,
                           exact=False, interval_conclusive=conclusive)


def check_inequalities(p: ParamSet, prec: int = DEFAULT_PRECISION_BITS) -> FeasibilityReport:
    """Evaluate all thirteen constraints exactly as written.

    Four come from the neighbourhood-partition setup (headroom between
    delta and sigma, the cap on epsilon', and positivity of the two sparse
    savings constants); nine from the discharging ledger.  Failures are
    data, not errors.
    """
    eps, eps_p = p.epsilon, p.epsilon_prime
    delta, alpha, sigma = p.delta, p.alpha, p.sigma
    checks: list[ConstraintCheck] = []

    checks.append(_rational_check("delta-sigma-headroom", "<", delta, 1 - sigma))
    checks.append(_rational_check("epsilon-prime-cap", "<=", eps_p, Fraction(1, 2)))

    with mpmath.workprec(prec):
        K = p.K_exact(prec)
        f_eps, f_eps_p = _mpf(eps), _mpf(eps_p)
        f_delta, f_alpha = _mpf(delta), _mpf(alpha)

        f_sigma = _mpf(sigma)

        K_iv = mpmath.iv.mpf("0.999") * mpmath.iv.exp(-1 / (1 - _iv(eps_p)))
        i_eps, i_eps_p = _iv(eps), _iv(eps_p)
        i_delta, i_alpha, i_sigma = _iv(delta), _iv(alpha), _iv(sigma)

        def both(fn):
            return (fn(f_eps, f_eps_p, f_delta, f_alpha, f_sigma, K),
                    fn(i_eps, i_eps_p, i_delta, i_alpha, i_sigma, K_iv))

        c_a_f, c_a_i = both(lambda e, ep, d, a, s, k_: k_ * a * (1 - ep) / (1 + a))
        c_es_f, c_es_i = both(lambda e, ep, d, a, s, k_: k_ * (1 - ep) * (
            (1 - 2 * d) * k_ / (1 + a) ** 2 - 1 / (3 * (1 - d) ** 2 * (1 - ep) ** 2)))
        c_bs_f, c_bs_i = both(lambda e, ep, d, a, s, k_: k_ ** 2 * (1 - ep)
                              * ((d - ep) / (1 - ep) - 15 * d / 16)
                              * ((1 - s - d) / ((1 + a) * (1 - d))))

        lhs_f, lhs_i = both(lambda e, ep, d, a, s, k_: k_ / (3 * (1 - d) ** 2 * (1 - ep) ** 2))
        rhs_f, rhs_i = both(lambda e, ep, d, a, s, k_: (1 - 2 * d) / (1 + a) ** 2)
        checks.append(_real_check("egal-sparse-constant-positive", "<",
                                  lhs_f, rhs_f, lhs_i, rhs_i))

        checks.append(_rational_check(
            "bipartite-sparse-constant-positive", "<",
            15 * delta / 16, (delta - eps_p) / (1 - eps_p)))

        ledger = 36 / f_delta + 2
        ledger_i = 36 / i_delta + 2

        checks.append(_real_check("aberrance-epsilon", "<=",
                                  f_eps, c_a_f / (4 * ledger),
                                  i_eps, c_a_i / (4 * ledger_i)))
        checks.append(_real_check("bipartite-sparse-epsilon-1", "<=",
                                  f_eps, c_bs_f / (4 * ledger),
                                  i_eps, c_bs_i / (4 * ledger_i)))
        checks.append(_rational_check("bipartite-sparse-epsilon-2", "<=",
                                      eps, delta / (11 * (16 - 15 * delta))))
        checks.append(_rational_check("large-antimatching-epsilon", "<",
                                      eps, delta / (36 + 2 * delta)))

        rhs_f = c_es_f * (f_delta / 64 - 11 * f_eps * (f_delta / 8 + 1)
                          * ((1 + f_alpha) / (1 - f_eps_p) + 1)) / ledger
        rhs_i = c_es_i * (i_delta / 64 - 11 * i_eps * (i_delta / 8 + 1)
                          * ((1 + i_alpha) / (1 - i_eps_p) + 1)) / ledger_i
        checks.append(_real_check("egal-sparse-epsilon", "<=", f_eps, rhs_f, i_eps, rhs_i))

        rhs_f = (c_es_f / ledger) * ((1 - f_delta) / 16 - f_eps * (
            (mpmath.mpf(5) / 2 - f_alpha) / (f_delta * (36 + 2 * f_delta) - f_eps)
            + 22 * (2 + f_alpha - f_eps_p) / (1 - f_eps_p)))
        rhs_i = (c_es_i / ledger_i) * ((1 - i_delta) / 16 - i_eps * (
            (mpmath.iv.mpf(5) / 2 - i_alpha) / (i_delta * (36 + 2 * i_delta) - i_eps)
            + 22 * (2 + i_alpha - i_eps_p) / (1 - i_eps_p)))
        checks.append(_real_check("small-gap-egal-sparse-epsilon", "<=",
                                  f_eps, rhs_f, i_eps, rhs_i))

        checks.append(_rational_check("alpha-cap", "<=",
                                      alpha, alpha_default(delta, eps_p)))

        inv_sum_f = 1 / ((1 - K) * (1 - f_eps_p)) + 1 / c_a_f
        inv_sum_i = 1 / ((1 - K_iv) * (1 - i_eps_p)) + 1 / c_a_i
        checks.append(_real_check("heavy-epsilon", "<=",
                                  f_eps, (1 / (36 * (1 + f_delta / 18))) / inv_sum_f,
                                  i_eps, (1 / (36 * (1 + i_delta / 18))) / inv_sum_i))

        def delta_cap(e, ep, d, a, k_, inv_sum, one):
            numer = ((one / 2 - e * (36 + 2 * d) / (4 * (1 - k_) * (1 - ep)))
                     * ((one * 5 / 2 - a) * (1 - ep) * (36 + 2 * d)
                        / ((1 - e * (36 + 2 * d) / d) * (2 * (1 + d / 18)) * (1 + a * d / 4))))
            denom = 2 + 9 * (1 + e * (36 / d + 2) * inv_sum)
            return numer / denom

        checks.append(_real_check(
            "delta-cap", "<=",
            f_delta, delta_cap(f_eps, f_eps_p, f_delta, f_alpha, K, inv_sum_f, mpmath.mpf(1)),
            i_delta, delta_cap(i_eps, i_eps_p, i_delta, i_alpha, K_iv, inv_sum_i, mpmath.iv.mpf(1))))

    return FeasibilityReport(checks=tuple(checks), constants=derive_constants(p, prec),
                             precision_bits=prec)
