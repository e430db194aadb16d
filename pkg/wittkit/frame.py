"""The Witt frame W(R)^+ and a generic checker for frames in triple form.

A homogeneous element of degree d <= 0 is u * t^(-d) with u in W(R); an
element of degree d >= 1 is v(u) in I_R and the preimage u is stored.
"""

from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from .common import CheckResult, SizeCap, UsageError
from .rings import CoefficientRing
from .witt import (
    WittVector,
    frobenius,
    frobenius_defect,
    verschiebung,
    witt_from_int,
    witt_one,
    witt_random,
)


class FrameElement:
    DEGREE_WINDOW = 8

    __slots__ = ("deg", "payload")

    def __init__(self, deg: int, payload: WittVector):
        if abs(deg) > self.DEGREE_WINDOW:
            raise SizeCap(f"Degree {deg} outside the window [-{self.DEGREE_WINDOW}, {self.DEGREE_WINDOW}]")
        self.deg = deg
        self.payload = payload

    @property
    def ring(self) -> CoefficientRing:
        return self.payload.ring

    def _check_deg(self, other: "FrameElement"):
        if not isinstance(other, FrameElement) or other.deg != self.deg:
            raise UsageError("Only elements of the same degree can be added")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check_deg(other)
        return FrameElement(self.deg, self.payload + other.payload)

    __radd__ = __add__

    def __sub__(self, other):
        self._check_deg(other)
        return FrameElement(self.deg, self.payload - other.payload)

    def __neg__(self):
        return FrameElement(self.deg, -self.payload)

    def __mul__(self, other):
        if isinstance(other, FrameElement):
            return frame_mul(self, other)
        return NotImplemented

    def is_zero(self) -> bool:
        return self.payload.is_zero()

    def eq(self, other: "FrameElement") -> bool:
        """Stored payloads agree on their certified prefix."""
        return self.deg == other.deg and self.payload.agrees_with(other.payload)

    def eq_as_image(self, other: "FrameElement") -> bool:
        """Equality of the truncated images v(u) in W_m(R) for degrees >= 1."""
        if self.deg != other.deg:
            return False
        if self.deg <= 0:
            return self.eq(other)
        n = min(self.payload.precision, other.payload.precision, self.payload.length - 1)
        if n < 1:
            return True
        return self.payload.coeffs[:n] == other.payload.coeffs[:n]

    def __eq__(self, other):
        if not isinstance(other, FrameElement):
            return NotImplemented
        return self.deg == other.deg and self.payload == other.payload

    def __hash__(self):
        return hash((self.deg, self.payload))

    def __repr__(self):
        if self.deg <= 0:
            suffix = "" if self.deg == 0 else (" t" if self.deg == -1 else f" t^{-self.deg}")
            return f"{self.payload!r}{suffix}"
        return f"v({self.payload!r})@{self.deg}"

    def to_json(self):
        return {"deg": self.deg, "payload": self.payload.to_json()}

    def sigma(self) -> WittVector:
        return frame_sigma(self)

    def tau(self) -> WittVector:
        return frame_tau(self)


def frame_one(ring: CoefficientRing, m: int) -> FrameElement:
    return FrameElement(0, witt_one(ring, m))


def frame_t(ring: CoefficientRing, m: int, power: int = 1) -> FrameElement:
    return FrameElement(-power, witt_one(ring, m))


def frame_v(u: WittVector, deg: int = 1) -> FrameElement:
    """v(u) placed in S_deg."""
    if deg < 1:
        raise UsageError("v-images live in positive degree")
    return FrameElement(deg, u)


def _p_power(x: WittVector, k: int) -> WittVector:
    if k == 0:
        return x
    return witt_from_int(x.ring.p**k, x.ring, x.length) * x


def frame_mul(a: FrameElement, b: FrameElement) -> FrameElement:
    if a.deg > b.deg:
        a, b = b, a
    d = a.deg + b.deg
    if a.deg >= 1 or b.deg <= 0:
        return FrameElement(d, a.payload * b.payload)
    # a = u t^k with k >= 0, b = v(w) in degree n >= 1
    k, u, w = -a.deg, a.payload, b.payload
    if d >= 1:
        # t^k v(w) = v(p^k w) and u v(y) = v(f(u) y)
        return FrameElement(d, frobenius(u) * _p_power(w, k))
    return FrameElement(d, u * frame_tau(b))


def frame_sigma(a: FrameElement) -> WittVector:
    if a.deg >= 1:
        return a.payload
    return _p_power(frobenius(a.payload), -a.deg)


def frame_tau(a: FrameElement) -> WittVector:
    if a.deg <= 0:
        return a.payload
    return verschiebung(_p_power(a.payload, a.deg - 1))


def frame_t_map(a: FrameElement) -> FrameElement:
    """t_n: S_(n+1) -> S_n."""
    return frame_mul(frame_t(a.ring, a.payload.length), a)


@dataclass
class FrameSpec:
    """A frame in triple form, given by sampling and structure maps."""

    name: str
    sample: Callable[[int, np.random.Generator], FrameElement]
    mul: Callable[[FrameElement, FrameElement], FrameElement]
    sigma: Callable[[FrameElement], WittVector]
    tau: Callable[[FrameElement], WittVector]
    t_map: Callable[[FrameElement], FrameElement]
    t: FrameElement
    p: WittVector
    from_s0: Callable[[WittVector], FrameElement]
    frobenius_witness: Callable[[WittVector], Optional[WittVector]]
    is_unit: Callable[[WittVector], bool]
    max_degree: int = 3


def witt_frame_spec(ring: CoefficientRing, m: int) -> FrameSpec:
    def sample(deg: int, rng: np.random.Generator) -> FrameElement:
        return FrameElement(deg, witt_random(ring, m, rng))

    return FrameSpec(
        name=f"W({ring.name}) at length {m}",
        sample=sample,
        mul=frame_mul,
        sigma=frame_sigma,
        tau=frame_tau,
        t_map=frame_t_map,
        t=frame_t(ring, m),
        p=witt_from_int(ring.p, ring, m),
        from_s0=lambda x: FrameElement(0, x),
        frobenius_witness=frobenius_defect,
        is_unit=lambda x: x.is_unit(),
    )


def frame_check(spec: FrameSpec, samples: int = 20, rng: Optional[np.random.Generator] = None) -> List[CheckResult]:
    """Check the frame axioms on random samples, one result per axiom."""
    rng = rng or np.random.default_rng(0)
    results = []

    def run(name: str, trial: Callable[[], Optional[str]]):
        for _ in range(samples):
            witness = trial()
            if witness is not None:
                results.append(CheckResult(name, False, witness, samples))
                return
        results.append(CheckResult(name, True, None, samples))

    def tau_zero():
        s = spec.sample(0, rng)
        return None if spec.tau(s).agrees_with(s.payload) else repr(s)

    def tau_negative():
        n = int(rng.integers(1, spec.max_degree + 1))
        x = spec.sample(-n, rng)
        back = spec.from_s0(spec.tau(x))
        for _ in range(n):
            back = spec.mul(spec.t, back)
        return None if back.eq(x) else repr(x)

    def sigma_frobenius():
        s = spec.sample(0, rng).payload
        try:
            y = spec.frobenius_witness(s)
        except AssertionError as err:
            return f"{s!r}: {err}"
        if y is None:
            return repr(s)
        return None if spec.sigma(spec.from_s0(s)).agrees_with(s**s.ring.p + spec.p * y) else repr(s)

    def sigma_t():
        return None if spec.sigma(spec.t).agrees_with(spec.p) else repr(spec.sigma(spec.t))

    def tau_t():
        one = spec.p**0
        return None if spec.tau(spec.t).agrees_with(one) else repr(spec.tau(spec.t))

    def sigma_t_map():
        n = int(rng.integers(0, spec.max_degree))
        a = spec.sample(n + 1, rng)
        lhs = spec.sigma(spec.t_map(a))
        rhs = spec.p * spec.sigma(a)
        return None if lhs.agrees_with(rhs) else f"n={n}, a={a!r}"

    def t_linear():
        n = int(rng.integers(0, spec.max_degree))
        k = int(rng.integers(0, spec.max_degree - n + 1))
        a = spec.sample(n + 1, rng)
        s = spec.sample(k, rng)
        lhs = spec.t_map(spec.mul(s, a))
        rhs = spec.mul(s, spec.t_map(a))
        return None if lhs.deg == rhs.deg and lhs.payload.agrees_with(rhs.payload) else f"s={s!r}, a={a!r}"

    def p_radical():
        x = spec.sample(0, rng).payload
        return None if spec.is_unit(spec.p * x + 1) else repr(x)

    run("tau_0 = id", tau_zero)
    run("tau_-n bijective", tau_negative)
    run("sigma_0(s) = s^p mod p", sigma_frobenius)
    run("sigma_-1(t) = p", sigma_t)
    run("tau_-1(t) = 1", tau_t)
    run("sigma_n(t_n(a)) = p sigma_n+1(a)", sigma_t_map)
    run("t_n is S_>=0-linear", t_linear)
    run("p in Rad(S_0)", p_radical)
    return results

