"""Finite weight vectors over Z/Q/R and their admissibility classes.

A weight vector is a nonempty tuple of nonnegative scalars with positive
sum (class ``W``).  Class ``W0`` additionally requires a positive first
entry.  Entries are kept homogeneous per vector: either all exact
rationals (``fractions.Fraction``; integers are stored as rationals) or
all floats.  Exactness matters for the rational step-function geometry,
so rational-mode arithmetic never rounds.

The class ``V`` of a vector in ``W0`` holds when the ratio sequence
``w_k / (w_1 + ... + w_k)`` is nonincreasing; this is the admissibility
condition for the weighted prefix-mean inequality.  The ratio test is
exact in both modes: floats are converted to the rationals they exactly
represent and compared by cross-multiplication, so there is no epsilon
and ties count as nonincreasing.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

from .errors import (
    AllZero,
    FirstWeightZero,
    LengthMismatch,
    NegativeWeight,
    NonpositiveScale,
)

Scalar = Union[int, float, Fraction]

RATIONAL = "rational"
FLOAT = "float"


class WeightVector(Sequence):
    """Validated immutable weight vector.

    Use :func:`make_weights` instead of calling this directly.
    """

    __slots__ = ("entries", "mode", "_floats")

    def __init__(self, entries: tuple, mode: str):
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "_floats", None)

    def __setattr__(self, name, value):
        raise AttributeError("WeightVector is immutable")

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self) -> Iterator:
        return iter(self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, WeightVector) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self) -> str:
        inner = ", ".join(str(e) for e in self.entries)
        return f"WeightVector([{inner}], mode={self.mode})"

    def as_floats(self) -> tuple:
        """Entries converted to floats (cached)."""
        cached = self._floats
        if cached is None:
            cached = tuple(float(e) for e in self.entries)
            object.__setattr__(self, "_floats", cached)
        return cached

    def total(self):
        if self.mode == RATIONAL:
            return sum(self.entries, Fraction(0))
        return math.fsum(self.entries)


def make_weights(entries: Iterable[Scalar], cls: str = "W") -> WeightVector:
    """Validate ``entries`` as a weight vector of class ``W`` or ``W0``.

    Integers and Fractions yield a rational-mode vector; floats yield a
    float-mode vector.  Mixing floats with exact rationals is rejected to
    avoid silent loss of exactness.
    """
    if cls not in ("W", "W0"):
        raise ValueError(f"unknown weight class {cls!r} (expected 'W' or 'W0')")
    items = list(entries)
    if not items:
        raise AllZero("weight vector must be nonempty")
    has_float = any(isinstance(e, float) for e in items)
    has_fraction = any(isinstance(e, Fraction) and e.denominator != 1 for e in items)
    if has_float and has_fraction:
        raise ValueError("cannot mix float and exact-rational weight entries")
    if has_float:
        vals: tuple = tuple(float(e) for e in items)
        mode = FLOAT
    else:
        vals = tuple(Fraction(e) for e in items)
        mode = RATIONAL
    for v in vals:
        if v < 0:
            raise NegativeWeight(f"negative weight {v}")
    if not any(v > 0 for v in vals):
        raise AllZero("weights sum to zero")
    if cls == "W0" and not vals[0] > 0:
        raise FirstWeightZero("first weight must be positive in class W0")
    return WeightVector(vals, mode)


def partial_sums(w: WeightVector) -> tuple:
    """Cumulative sums ``(w_1, w_1+w_2, ...)``; exact in rational mode."""
    out = []
    if w.mode == RATIONAL:
        acc = Fraction(0)
        for v in w.entries:
            acc += v
            out.append(acc)
    else:
        acc = 0.0
        for v in w.entries:
            acc += v
            out.append(acc)
    return tuple(out)


def _exact(v: Scalar) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


def is_in_V(w: WeightVector) -> bool:
    """Exact test that the ratio sequence ``w_k / cumsum_k`` is nonincreasing.

    Requires a positive first weight.  Comparisons are exact in both
    modes (floats are compared as the rationals they represent); equal
    consecutive ratios pass.
    """
    if not w.entries[0] > 0:
        raise FirstWeightZero("ratio test requires a class-W0 vector")
    vals = [_exact(v) for v in w.entries]
    acc = vals[0]
    for k in range(len(vals) - 1):
        nxt = acc + vals[k + 1]
        # w_k / acc >= w_{k+1} / nxt, cross-multiplied (denominators > 0)
        if vals[k] * nxt < vals[k + 1] * acc:
            return False
        acc = nxt
    return True


def scale(w: WeightVector, t: Scalar) -> WeightVector:
    """Entrywise positive rescaling; preserves mode where possible."""
    if not t > 0:
        raise NonpositiveScale(f"scale factor must be positive, got {t}")
    if w.mode == RATIONAL and not isinstance(t, float):
        return WeightVector(tuple(v * Fraction(t) for v in w.entries), RATIONAL)
    tf = float(t)
    return WeightVector(tuple(float(v) * tf for v in w.entries), FLOAT)


def shuffle(a: Sequence, b: Sequence) -> list:
    """Interleave two equal-length sequences: ``(a1, b1, a2, b2, ...)``."""
    if len(a) != len(b):
        raise LengthMismatch(f"shuffle of lengths {len(a)} and {len(b)}")
    out = []
    for x, y in zip(a, b):
        out.append(x)
        out.append(y)
    return out


def clear_denominators(w: WeightVector) -> WeightVector:
    """Rescale a rational-mode vector by the lcm of its denominators.

    The result has integer entries and represents the same weighting (the
    entrywise ratio to ``w`` is one constant).
    """
    if w.mode != RATIONAL:
        raise ValueError("clear_denominators requires rational-mode weights")
    q = 1
    for v in w.entries:
        q = math.lcm(q, v.denominator)
    return WeightVector(tuple(v * q for v in w.entries), RATIONAL)


def add(a: WeightVector, b: WeightVector) -> WeightVector:
    """Entrywise sum of two weight vectors of equal length."""
    if len(a) != len(b):
        raise LengthMismatch("weight vectors of different lengths")
    return make_weights([x + y for x, y in zip(a.entries, b.entries)])


def scalar_from_string(s: str, exact: bool = True) -> Scalar:
    """Parse a decimal or ``p/q`` literal, exactly or as a float."""
    s = s.strip()
    value = Fraction(s)  # accepts "3", "0.25" and "1/2"
    if exact:
        return value
    return float(value)


def weights_from_strings(items: Iterable[str], cls: str = "W",
                         exact: bool = True) -> WeightVector:
    """Build a weight vector from decimal or ``p/q`` string literals."""
    return make_weights([scalar_from_string(s, exact=exact) for s in items], cls)


def as_weight_vector(w, cls: str = "W") -> WeightVector:
    """Coerce a WeightVector or plain sequence into a validated vector."""
    if isinstance(w, WeightVector):
        if cls == "W0" and not w.entries[0] > 0:
            raise FirstWeightZero("first weight must be positive here")
        return w
    return make_weights(w, cls)
