"""Meromorphic functions on vertical strips with charged Laurent data.

A charged Laurent expansion splits the polar part of an ordinary Laurent
expansion into a "plus" and a "minus" part; the charge records on which side
of a Mellin inversion contour the pole is meant to sit.  Regular (order >= 0)
coefficients are shared between the two charges and are recovered numerically
by circle sampling when products need them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .util import SeltraceError, PoleProximityError, as_complex_array

__all__ = [
    "AdmissibilityError",
    "ChargedLaurent",
    "ChargedMeromorphicFunction",
    "charged_product",
    "negate_argument",
    "residue",
    "polar_consistency_check",
    "eval_vertical",
    "constant_function",
    "rational_from_poles",
]

DEFAULT_EXCLUSION_RADIUS = 1e-3


class AdmissibilityError(SeltraceError):
    """A plus pole met a minus pole at the same point (undefined product)."""


def _clean(coeffs: dict) -> dict:
    return {int(k): complex(v) for k, v in coeffs.items() if v != 0}


@dataclass(frozen=True)
class ChargedLaurent:
    """Charged Laurent data at one point.

    `plus` / `minus` map negative orders (<= -1) to coefficients of
    (s - location)^order; `regular` optionally stores orders >= 0 shared by
    both charges.
    """

    location: complex
    plus: dict = field(default_factory=dict)
    minus: dict = field(default_factory=dict)
    regular: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "location", complex(self.location))
        object.__setattr__(self, "plus", _clean(self.plus))
        object.__setattr__(self, "minus", _clean(self.minus))
        object.__setattr__(self, "regular", {int(k): complex(v) for k, v in self.regular.items()})
        if any(k > -1 for k in self.plus) or any(k > -1 for k in self.minus):
            raise ValueError("polar coefficients must have order <= -1")
        if any(k < 0 for k in self.regular):
            raise ValueError("regular coefficients must have order >= 0")

    @property
    def order(self) -> int:
        polar = list(self.plus) + list(self.minus)
        return min(polar) if polar else 0

    def total(self) -> dict:
        out = dict(self.plus)
        for k, v in self.minus.items():
            out[k] = out.get(k, 0.0) + v
        return _clean(out)

    def polar_eval(self, s):
        s = as_complex_array(s)
        out = np.zeros_like(s)
        ds = s - self.location
        for k, v in self.total().items():
            out = out + v * ds ** k
        return out

    def is_polar(self) -> bool:
        return bool(self.total())


def _combine_decay(a, b):
    kinds = {a[0], b[0]}
    if "unknown" in kinds:
        return ("unknown", 0)
    if "rapid" in kinds:
        return ("rapid", 0)
    return ("polynomial", a[1] + b[1])


@dataclass(frozen=True)
class ChargedMeromorphicFunction:
    """Evaluator + charged pole table on a vertical strip.

    decay_class is declared metadata: ("rapid", 0), ("polynomial", order) for
    |F| ~ |t|^-order, or ("unknown", 0).  It is verified elsewhere
    (pw_decay_profile), never inferred here.
    """

    evaluator: Callable
    poles: tuple = ()
    strip: tuple[float, float] = (-8.0, 8.0)
    decay_class: tuple = ("unknown", 0)
    label: str = ""
    # poles whose 1/s polar tails genuinely live in the evaluator's rational
    # part (sharp carriers); None means "assume all of them"
    sharp_poles: tuple | None = None

    def __call__(self, s):
        return self.evaluator(as_complex_array(s))

    @property
    def rational_poles(self) -> tuple:
        return self.poles if self.sharp_poles is None else self.sharp_poles

    def pole_at(self, s0: complex):
        for p in self.poles:
            if abs(p.location - s0) < 1e-10:
                return p
        return None

    def pole_locations(self):
        return [p.location for p in self.poles]

    def polar_sum(self, s):
        s = as_complex_array(s)
        out = np.zeros_like(s)
        for p in self.poles:
            out = out + p.polar_eval(s)
        return out

    def regular_part(self, s):
        return self(s) - self.polar_sum(s)

    # -- serialization ------------------------------------------------------

    def to_pole_table(self) -> dict:
        """JSON-ready pole table (documented schema, see README)."""
        rows = []
        for p in self.poles:
            for charge, table in (("plus", p.plus), ("minus", p.minus)):
                for order, coeff in sorted(table.items()):
                    rows.append(
                        {
                            "location": {"re": p.location.real, "im": p.location.imag},
                            "order": order,
                            "charge": charge,
                            "coefficient": {"re": coeff.real, "im": coeff.imag},
                        }
                    )
        return {
            "label": self.label,
            "strip": [self.strip[0], self.strip[1]],
            "decay_class": {"kind": self.decay_class[0], "order": self.decay_class[1]},
            "poles": rows,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_pole_table(), sort_keys=True)


def from_pole_table(table: dict) -> ChargedMeromorphicFunction:
    """Rebuild from a pole table; the evaluator is the rational polar sum."""
    if isinstance(table, str):
        table = json.loads(table)
    grouped: dict[complex, dict] = {}
    for row in table["poles"]:
        loc = complex(row["location"]["re"], row["location"]["im"])
        key = min(grouped, key=lambda g: abs(g - loc)) if grouped else None
        if key is None or abs(key - loc) > 1e-10:
            grouped[loc] = {"plus": {}, "minus": {}}
            key = loc
        coeff = complex(row["coefficient"]["re"], row["coefficient"]["im"])
        grouped[key][row["charge"]][int(row["order"])] = coeff
    poles = tuple(
        ChargedLaurent(location=loc, plus=data["plus"], minus=data["minus"])
        for loc, data in grouped.items()
    )
    return rational_from_poles(
        poles,
        strip=tuple(table.get("strip", (-8.0, 8.0))),
        label=table.get("label", ""),
    )


def rational_from_poles(poles, strip=(-8.0, 8.0), label="") -> ChargedMeromorphicFunction:
    poles = tuple(poles)

    def ev(s):
        s = as_complex_array(s)
        out = np.zeros_like(s)
        for p in poles:
            out = out + p.polar_eval(s)
        return out

    order = min((-p.order for p in poles if p.is_polar()), default=0)
    return ChargedMeromorphicFunction(
        evaluator=ev, poles=poles, strip=strip,
        decay_class=("polynomial", order), label=label,
    )


def constant_function(value: complex, label="") -> ChargedMeromorphicFunction:
    value = complex(value)

    def ev(s):
        s = as_complex_array(s)
        return np.full_like(s, value)

    return ChargedMeromorphicFunction(
        evaluator=ev, poles=(), strip=(-50.0, 50.0),
        decay_class=("polynomial", 0), label=label or f"const {value}",
    )


# ----------------------------------------------------------------------------
# circle sampling


def _circle_radius(h: ChargedMeromorphicFunction, s0: complex, default=5e-2) -> float:
    dists = [abs(p.location - s0) for p in h.poles if abs(p.location - s0) > 1e-10]
    r = default if not dists else min(default, 0.4 * min(dists))
    return max(r, 1e-6)


def circle_coefficients(f: Callable, s0: complex, orders, radius: float, samples: int = 256):
    """Laurent coefficients of f at s0 for the requested orders (FFT on a circle)."""
    m = samples
    th = 2.0 * np.pi * np.arange(m) / m
    ring = s0 + radius * np.exp(1j * th)
    vals = as_complex_array(f(ring))
    fft = np.fft.fft(vals) / m
    out = {}
    for k in orders:
        out[k] = fft[k % m] / radius ** k
    return out


def taylor_coefficients(h: ChargedMeromorphicFunction, s0: complex, depth: int, radius=None):
    """Laurent coefficients of orders 0..depth-1 of h at s0.

    Only the polar part at s0 itself is subtracted (other poles stay outside
    the sampling circle), so these are the a_i (i >= 0) of the Laurent
    expansion at s0, shared by both charges.
    """
    if depth <= 0:
        return {}
    own = h.pole_at(s0)
    r = radius or _circle_radius(h, s0)

    def without_own_polar(s):
        vals = h(s)
        if own is not None:
            vals = vals - own.polar_eval(s)
        return vals

    return circle_coefficients(without_own_polar, s0, range(depth), r)


# ----------------------------------------------------------------------------
# operations


def residue(h: ChargedMeromorphicFunction, s0: complex, charge: str = "total") -> complex:
    """a_{-1} of the requested charge at s0; non-poles return 0."""
    p = h.pole_at(complex(s0))
    if p is None:
        return 0.0 + 0.0j
    if charge == "plus":
        return p.plus.get(-1, 0.0 + 0.0j)
    if charge == "minus":
        return p.minus.get(-1, 0.0 + 0.0j)
    if charge == "total":
        return p.plus.get(-1, 0.0 + 0.0j) + p.minus.get(-1, 0.0 + 0.0j)
    raise ValueError("charge must be plus, minus or total")


def numeric_residue(h, s0: complex, radius: float = 1e-2, samples: int = 256) -> complex:
    """Contour-circle residue (1/2*pi*i) * loop integral of h around s0."""
    f = h.evaluator if isinstance(h, ChargedMeromorphicFunction) else h
    th = 2.0 * np.pi * np.arange(samples) / samples
    ring = complex(s0) + radius * np.exp(1j * th)
    vals = as_complex_array(f(ring))
    return np.mean(vals * (ring - complex(s0)))


def negate_argument(h: ChargedMeromorphicFunction) -> ChargedMeromorphicFunction:
    """s -> h(-s); poles move to their negatives and the charges swap."""
    ev = h.evaluator

    def neg_ev(s):
        return ev(-as_complex_array(s))

    def flip(coeffs):
        return {k: (-1.0) ** k * v for k, v in coeffs.items()}

    def flip_pole(p):
        return ChargedLaurent(
            location=-p.location,
            plus=flip(p.minus),
            minus=flip(p.plus),
            regular=flip(p.regular),
        )

    poles = tuple(flip_pole(p) for p in h.poles)
    sharp = None if h.sharp_poles is None else tuple(flip_pole(p) for p in h.sharp_poles)
    return ChargedMeromorphicFunction(
        evaluator=neg_ev,
        poles=poles,
        strip=(-h.strip[1], -h.strip[0]),
        decay_class=h.decay_class,
        label=f"({h.label})(-s)" if h.label else "",
        sharp_poles=sharp,
    )


def _poly_mul_window(a: dict, b: dict, lo: int, hi: int) -> dict:
    out: dict[int, complex] = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = ka + kb
            if lo <= k <= hi:
                out[k] = out.get(k, 0.0) + va * vb
    return out


def charged_product(
    h1: ChargedMeromorphicFunction,
    h2: ChargedMeromorphicFunction,
    taylor_radius: float | None = None,
) -> ChargedMeromorphicFunction:
    """Pointwise product with chargewise multiplication of Laurent data.

    Laur^+(h1 h2) = Laur^+(h1) * Laur^+(h2) (same for minus), where each
    factor's charged expansion shares the regular coefficients.  Admissibility
    (no plus pole of one factor against a minus pole of the other at the same
    point) is enforced; violations mean the regularized pairing the product is
    meant to feed does not exist.
    """
    locations: list[complex] = []
    for p in list(h1.poles) + list(h2.poles):
        if not any(abs(p.location - q) < 1e-10 for q in locations):
            locations.append(p.location)

    new_poles = []
    for s0 in locations:
        p1 = h1.pole_at(s0)
        p2 = h2.pole_at(s0)
        e1 = p1 or ChargedLaurent(location=s0)
        e2 = p2 or ChargedLaurent(location=s0)
        if (e1.plus and e2.minus) or (e1.minus and e2.plus):
            raise AdmissibilityError(
                f"plus/minus pole collision at s = {s0}: regularized product undefined"
            )
        # regular coefficients of each factor, deep enough to feed the other
        # factor's polar depth
        depth1 = -e2.order
        depth2 = -e1.order
        reg1 = (
            dict(e1.regular)
            if all(k in e1.regular for k in range(depth1))
            else taylor_coefficients(h1, s0, depth1, taylor_radius)
        )
        reg2 = (
            dict(e2.regular)
            if all(k in e2.regular for k in range(depth2))
            else taylor_coefficients(h2, s0, depth2, taylor_radius)
        )
        lo = e1.order + e2.order
        # the order <= -1 window of (polar + regular)(polar + regular) keeps
        # polar*polar and polar*regular cross terms only, which is exactly the
        # chargewise product rule
        plus = _poly_mul_window({**e1.plus, **reg1}, {**e2.plus, **reg2}, lo, -1)
        minus = _poly_mul_window({**e1.minus, **reg1}, {**e2.minus, **reg2}, lo, -1)
        lau = ChargedLaurent(location=s0, plus=plus, minus=minus)
        if lau.is_polar():
            new_poles.append(lau)

    ev1, ev2 = h1.evaluator, h2.evaluator

    def prod_ev(s):
        s = as_complex_array(s)
        return ev1(s) * ev2(s)

    strip = (max(h1.strip[0], h2.strip[0]), min(h1.strip[1], h2.strip[1]))
    return ChargedMeromorphicFunction(
        evaluator=prod_ev,
        poles=tuple(new_poles),
        strip=strip,
        decay_class=_combine_decay(h1.decay_class, h2.decay_class),
        label=f"({h1.label})*({h2.label})" if h1.label and h2.label else "",
    )


def polar_consistency_check(
    h1: ChargedMeromorphicFunction,
    h2: ChargedMeromorphicFunction,
    radius: float | None = None,
    samples: int = 256,
) -> dict:
    """Verify Laur^+ + Laur^- of the product matches its numerical polar part.

    At every pole of the charged product the polar coefficients are re-extracted
    from circle samples of the plain pointwise product and compared with the
    charged bookkeeping.  Returns {"max_deviation", "per_pole"}.
    """
    prod = charged_product(h1, h2)
    report = {"max_deviation": 0.0, "per_pole": []}
    for p in prod.poles:
        depth = -p.order
        r = radius or _circle_radius(prod, p.location)
        sampled = circle_coefficients(prod.evaluator, p.location, range(p.order, 0), r, samples)
        stored = p.total()
        dev = max(
            abs(sampled.get(k, 0.0) - stored.get(k, 0.0)) for k in range(p.order, 0)
        )
        report["per_pole"].append(
            {"location": p.location, "depth": depth, "deviation": float(dev)}
        )
        report["max_deviation"] = max(report["max_deviation"], float(dev))
    return report


def eval_vertical(
    h: ChargedMeromorphicFunction,
    sigma: float,
    t_grid,
    exclusion_radius: float = DEFAULT_EXCLUSION_RADIUS,
):
    """Sample h(sigma + i t); points inside a pole exclusion disk raise."""
    if not (h.strip[0] - 1e-12 <= sigma <= h.strip[1] + 1e-12):
        raise ValueError(f"sigma = {sigma} outside declared strip {h.strip}")
    t = np.asarray(t_grid, dtype=float)
    s = sigma + 1j * t
    flagged = []
    for p in h.poles:
        near = np.abs(s - p.location) < exclusion_radius
        if np.any(near):
            flagged.extend(s[near].tolist())
    if flagged:
        raise PoleProximityError(flagged)
    return h(s)
