"""Weighted-mean handles, evaluation, and axiom conformance checks.

A weighted mean takes entries from an interval and a nonnegative weight
vector with positive sum, and must satisfy four axioms: it is unchanged
by positive rescaling of the weights (nullhomogeneity), splitting a
weight across a duplicated entry changes nothing (reduction), the value
lies between the smallest and largest entry (mean value), and entries
with zero weight can be dropped (elimination).  Symmetric means are
additionally invariant under simultaneous permutation of entries and
weights.

:class:`MeanHandle` packages a family tag, its parameters and a domain;
:func:`evaluate` dispatches to the family's closed form or to the
deviation solver.  The ``check_*`` helpers return the numeric residual
of each axiom on concrete inputs so conformance can be tested at scale.

The built-in arithmetic, min and max families accumulate exactly (one
rounding at the end), which makes the repetition-expansion bridge
:func:`weighted_from_repetition_invariant` agree with them bit for bit
on integer weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import deviation as dev
from .domain import Interval, NONNEGATIVE, POSITIVE, REALS
from .errors import (
    DomainViolation,
    IndexNotZeroWeighted,
    LengthMismatch,
    NonpositiveScale,
    Overflow,
    ZeroScale,
)
from .weights import WeightVector, make_weights, scale as scale_weights, shuffle

DEFAULT_EXPANSION_CAP = 10 ** 6


# ---------------------------------------------------------------------------
# Exact elementary means (single final rounding)
# ---------------------------------------------------------------------------

def exact_weighted_arithmetic(x, w) -> float:
    """Weighted arithmetic mean accumulated in exact rational arithmetic."""
    num = Fraction(0)
    den = Fraction(0)
    for xi, wi in zip(x, w):
        fw = wi if isinstance(wi, Fraction) else Fraction(wi)
        num += fw * Fraction(xi)
        den += fw
    return float(num / den)


def arithmetic_base(xs) -> float:
    """Unweighted arithmetic mean, exact accumulation."""
    acc = Fraction(0)
    for v in xs:
        acc += Fraction(v)
    return float(acc / len(xs))


# ---------------------------------------------------------------------------
# MeanHandle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeanHandle:
    """A weighted mean: family tag + parameters + entry domain.

    Build instances through the classmethods or :func:`mean_from_id`.
    ``_fn`` receives entries and float weights that already passed the
    domain/weight validation and zero-weight elimination in
    :func:`evaluate`.
    """

    family: str
    domain: Interval
    params: tuple = ()
    label: str = ""
    _fn: Callable = field(default=None, repr=False, compare=False)

    def __str__(self) -> str:
        return self.label or self.family

    # -- factories ----------------------------------------------------------

    @classmethod
    def arithmetic(cls) -> "MeanHandle":
        return cls("arithmetic", REALS, (), "arithmetic",
                   lambda x, w: exact_weighted_arithmetic(x, w))

    @classmethod
    def minimum(cls) -> "MeanHandle":
        return cls("min", REALS, (), "min", lambda x, w: float(min(x)))

    @classmethod
    def maximum(cls) -> "MeanHandle":
        return cls("max", REALS, (), "max", lambda x, w: float(max(x)))

    @classmethod
    def power(cls, p: float) -> "MeanHandle":
        p = float(p)
        return cls("power", POSITIVE, (p,), f"power:{_fmt(p)}",
                   lambda x, w: dev.power_mean(p, x, w))

    @classmethod
    def gini(cls, p: float, q: float) -> "MeanHandle":
        p, q = float(p), float(q)
        return cls("gini", POSITIVE, (p, q), f"gini:{_fmt(p)}:{_fmt(q)}",
                   lambda x, w: dev.gini(p, q, x, w))

    @classmethod
    def quasi_arithmetic(cls, gen: dev.GeneratorSpec) -> "MeanHandle":
        return cls("quasi-arithmetic", gen.domain, (gen,), f"qa:{gen.label}",
                   lambda x, w: dev.quasi_arithmetic(gen, x, w))

    @classmethod
    def homogeneous_deviation(cls, f: Callable[[float], float],
                              label: str = "custom",
                              tol: float = dev.DEFAULT_TOL) -> "MeanHandle":
        return cls("homogeneous-deviation", POSITIVE, (label,), f"homdev:{label}",
                   lambda x, w: dev.homogeneous_deviation(f, x, w, tol))

    @classmethod
    def custom_deviation(cls, spec: dev.DeviationSpec,
                         tol: float = dev.DEFAULT_TOL) -> "MeanHandle":
        return cls("custom-deviation", spec.domain, (spec,),
                   f"custom:{spec.label}",
                   lambda x, w: dev.solve_deviation_mean(spec, x, w, tol))

    @classmethod
    def gini21_counterexample(cls) -> "MeanHandle":
        return cls("gini21", NONNEGATIVE, (), "gini21",
                   lambda x, w: dev.gini21_counterexample(x, w))

    @classmethod
    def affine(cls, inner: "MeanHandle", a: float, b: float) -> "MeanHandle":
        """Conjugated mean ``a * M((x - b)/a, w) + b`` on the mapped domain."""
        if a == 0:
            raise ZeroScale("affine conjugation needs a != 0")
        a, b = float(a), float(b)
        fn = lambda x, w: a * evaluate(inner, [(xi - b) / a for xi in x], w) + b
        return cls("affine", inner.domain.transform(a, b), (inner, a, b),
                   f"affine({_fmt(a)},{_fmt(b)},{inner})", fn)


def _fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else str(v)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def _float_weights(w) -> tuple:
    if isinstance(w, WeightVector):
        return w.as_floats()
    wf = tuple(float(v) for v in w)
    if any(v < 0 for v in wf) or not any(v > 0 for v in wf):
        make_weights(w)  # raise the precise validation error
    return wf


def evaluate(mean: MeanHandle, x: Sequence[float], w) -> float:
    """Evaluate ``mean`` on entries ``x`` with weights ``w``.

    ``w`` may be a WeightVector or any nonnegative sequence with positive
    sum.  Zero-weight entries are dropped up front (elimination), and a
    constant entry vector short-circuits to the constant.
    """
    wf = _float_weights(w)
    if len(x) != len(wf):
        raise LengthMismatch(f"{len(x)} entries vs {len(wf)} weights")
    dom = mean.domain
    for xi in x:
        if not dom.contains(xi):
            raise DomainViolation(f"entry {xi} outside domain of {mean}")
    if len(x) == 1:
        return float(x[0])
    if any(v == 0.0 for v in wf):
        pairs = [(xi, wi) for xi, wi in zip(x, wf) if wi != 0.0]
        xs = [p[0] for p in pairs]
        ws = [p[1] for p in pairs]
    else:
        xs, ws = list(x), list(wf)
    if min(xs) == max(xs):
        return float(xs[0])
    return mean._fn(xs, ws)


# ---------------------------------------------------------------------------
# Axiom residuals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AxiomResidual:
    """``residual = |left - right|`` of one tested axiom identity."""

    axiom: str
    residual: float
    inputs: dict

    def __post_init__(self):
        if self.residual < 0:
            raise ValueError("residual must be nonnegative")


def check_nullhomogeneity(mean: MeanHandle, x, w, t) -> AxiomResidual:
    """Residual of ``M(x, w) = M(x, t*w)`` for ``t > 0``."""
    if isinstance(w, WeightVector):
        scaled = scale_weights(w, t)
    else:
        if not t > 0:
            raise NonpositiveScale(f"t must be positive, got {t}")
        scaled = [t * wi for wi in w]
    left = evaluate(mean, x, w)
    right = evaluate(mean, x, scaled)
    return AxiomResidual("nullhomogeneity", abs(left - right),
                         {"x": tuple(x), "w": tuple(w), "t": t})


def check_reduction(mean: MeanHandle, x, lam, mu) -> AxiomResidual:
    """Residual of ``M(x, lam + mu) = M(x shuffled with x, lam shuffled mu)``."""
    if not (len(x) == len(lam) == len(mu)):
        raise LengthMismatch("x, lam, mu must have equal lengths")
    summed = [a + b for a, b in zip(lam, mu)]
    left = evaluate(mean, x, summed)
    right = evaluate(mean, shuffle(x, x), shuffle(list(lam), list(mu)))
    return AxiomResidual("reduction", abs(left - right),
                         {"x": tuple(x), "lam": tuple(lam), "mu": tuple(mu)})


def check_elimination(mean: MeanHandle, x, w, j: int) -> AxiomResidual:
    """Residual of dropping the zero-weighted index ``j``."""
    wf = [float(v) for v in w]
    if wf[j] != 0.0:
        raise IndexNotZeroWeighted(f"w[{j}] = {wf[j]} is not zero")
    if len(x) < 2:
        raise LengthMismatch("need at least two entries to eliminate one")
    left = evaluate(mean, x, w)
    xr = [xi for i, xi in enumerate(x) if i != j]
    wr = [wi for i, wi in enumerate(wf) if i != j]
    right = evaluate(mean, xr, wr)
    return AxiomResidual("elimination", abs(left - right),
                         {"x": tuple(x), "w": tuple(w), "j": j})


def check_mean_value(mean: MeanHandle, x, w) -> bool:
    """True when the value lies within ``[min x, max x]`` up to tolerance.

    Tolerance is relative, ``1e-9 * max|x_i|`` with an absolute floor of
    1e-12, since solver-backed families cannot be exact.
    """
    v = evaluate(mean, x, w)
    tol = max(1e-9 * max(abs(float(xi)) for xi in x), 1e-12)
    return min(x) - tol <= v <= max(x) + tol


def mean_value_residual(mean: MeanHandle, x, w) -> AxiomResidual:
    """Distance of the value outside ``[min x, max x]`` (0 when inside)."""
    v = evaluate(mean, x, w)
    r = max(0.0, float(min(x)) - v, v - float(max(x)))
    return AxiomResidual("mean-value", r, {"x": tuple(x), "w": tuple(w)})


def check_symmetry(mean: MeanHandle, x, w, perm: Sequence[int]) -> AxiomResidual:
    """Residual under a simultaneous permutation of entries and weights."""
    if sorted(perm) != list(range(len(x))):
        raise ValueError("perm must be a permutation of the indices")
    wf = [float(v) for v in w]
    left = evaluate(mean, x, wf)
    right = evaluate(mean, [x[i] for i in perm], [wf[i] for i in perm])
    return AxiomResidual("symmetry", abs(left - right),
                         {"x": tuple(x), "w": tuple(w), "perm": tuple(perm)})


# ---------------------------------------------------------------------------
# Repetition-invariant bridge
# ---------------------------------------------------------------------------

def weighted_from_repetition_invariant(base: Callable, x, w,
                                       cap: int = DEFAULT_EXPANSION_CAP) -> float:
    """Evaluate a symmetric repetition-invariant mean with integer weights.

    ``base`` receives the multiset where each ``x_i`` appears ``w_i``
    times (zero-weight entries are omitted).  Weights are first divided
    by their gcd, which never changes the result; the remaining expansion
    length must not exceed ``cap``.
    """
    counts = []
    for wi in w:
        if isinstance(wi, float) and not wi.is_integer():
            raise ValueError(f"integer weights required, got {wi}")
        if isinstance(wi, Fraction) and wi.denominator != 1:
            raise ValueError(f"integer weights required, got {wi}")
        counts.append(int(wi))
    if len(x) != len(counts):
        raise LengthMismatch(f"{len(x)} entries vs {len(counts)} weights")
    if any(c < 0 for c in counts) or not any(c > 0 for c in counts):
        make_weights(counts)  # raise the precise validation error
    g = math.gcd(*counts)
    counts = [c // g for c in counts]
    total = sum(counts)
    if total > cap:
        raise Overflow(f"expansion length {total} exceeds cap {cap}")
    expanded = []
    for xi, c in zip(x, counts):
        expanded.extend([xi] * c)
    return base(expanded)


# ---------------------------------------------------------------------------
# String ids and JSON wire format
# ---------------------------------------------------------------------------

def mean_from_id(mean_id: str) -> MeanHandle:
    """Resolve a string id such as ``power:0.5`` or ``gini:2:1``.

    Supported ids: ``arithmetic``, ``min``, ``max``, ``geometric``,
    ``power:p``, ``gini:p:q``, ``gini21``, ``qa:log``, ``qa:pow:p``,
    ``homdev:shifted-power:p``.
    """
    parts = mean_id.strip().split(":")
    head = parts[0]
    try:
        if head == "arithmetic" and len(parts) == 1:
            return MeanHandle.arithmetic()
        if head == "min" and len(parts) == 1:
            return MeanHandle.minimum()
        if head == "max" and len(parts) == 1:
            return MeanHandle.maximum()
        if head == "geometric" and len(parts) == 1:
            return MeanHandle.power(0.0)
        if head == "power" and len(parts) == 2:
            return MeanHandle.power(float(Fraction(parts[1])))
        if head == "gini" and len(parts) == 3:
            return MeanHandle.gini(float(Fraction(parts[1])), float(Fraction(parts[2])))
        if head == "gini21" and len(parts) == 1:
            return MeanHandle.gini21_counterexample()
        if head == "qa" and len(parts) == 2 and parts[1] == "log":
            return MeanHandle.quasi_arithmetic(dev.log_generator())
        if head == "qa" and len(parts) == 3 and parts[1] == "pow":
            return MeanHandle.quasi_arithmetic(dev.power_generator(float(Fraction(parts[2]))))
        if head == "homdev" and len(parts) == 3 and parts[1] == "shifted-power":
            p = float(Fraction(parts[2]))
            return MeanHandle.homogeneous_deviation(dev.shifted_power(p),
                                                    f"shifted-power:{_fmt(p)}")
    except ValueError as exc:
        raise ValueError(f"bad parameter in mean id {mean_id!r}: {exc}") from exc
    raise ValueError(f"unknown mean id {mean_id!r}")


def mean_to_json(mean: MeanHandle) -> dict:
    """Serialize a handle to the JSON wire format."""
    out: dict = {"family": mean.family, "domain": mean.domain.to_json()}
    if mean.family == "power":
        out["p"] = mean.params[0]
    elif mean.family == "gini":
        out["p"], out["q"] = mean.params
    elif mean.family == "quasi-arithmetic":
        gen: dev.GeneratorSpec = mean.params[0]
        if gen.label == "log":
            out["generator"] = "log"
        elif gen.label.startswith("pow["):
            out["generator"] = "pow"
            out["p"] = float(gen.label[4:-1])
        else:
            raise ValueError(f"generator {gen.label!r} has no wire format")
    elif mean.family == "homogeneous-deviation":
        label = mean.params[0]
        if not label.startswith("shifted-power:"):
            raise ValueError(f"deviation {label!r} has no wire format")
        out["f"] = "shifted-power"
        out["p"] = float(Fraction(label.split(":", 1)[1]))
    elif mean.family == "affine":
        inner, a, b = mean.params
        out["a"], out["b"] = a, b
        out["inner"] = mean_to_json(inner)
    elif mean.family in ("arithmetic", "min", "max", "gini21"):
        pass
    else:
        raise ValueError(f"family {mean.family!r} has no wire format")
    return out


def mean_from_json(obj: dict) -> MeanHandle:
    """Inverse of :func:`mean_to_json`; applies each family's natural domain."""
    fam = obj["family"]
    if fam == "arithmetic":
        return MeanHandle.arithmetic()
    if fam == "min":
        return MeanHandle.minimum()
    if fam == "max":
        return MeanHandle.maximum()
    if fam == "power":
        return MeanHandle.power(obj["p"])
    if fam == "gini":
        return MeanHandle.gini(obj["p"], obj["q"])
    if fam == "gini21":
        return MeanHandle.gini21_counterexample()
    if fam == "quasi-arithmetic":
        if obj["generator"] == "log":
            return MeanHandle.quasi_arithmetic(dev.log_generator())
        return MeanHandle.quasi_arithmetic(dev.power_generator(obj["p"]))
    if fam == "homogeneous-deviation":
        p = obj["p"]
        return MeanHandle.homogeneous_deviation(dev.shifted_power(p),
                                                f"shifted-power:{_fmt(p)}")
    if fam == "affine":
        return MeanHandle.affine(mean_from_json(obj["inner"]), obj["a"], obj["b"])
    raise ValueError(f"unknown family {fam!r}")
