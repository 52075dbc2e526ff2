"""Standard small models: rings with their distinguished primes and matching posets."""
from __future__ import annotations

from .field import Field
from .poset import PrimePoint, SpectrumPoset
from .rings import RingModel

Q = Field.rationals()


def point(singular: bool = False, pid: str = "m") -> SpectrumPoset:
    return SpectrumPoset([PrimePoint(pid, singular=singular)])


def chain2(singular=()) -> SpectrumPoset:
    """``0 < m`` (a one-dimensional local domain)."""
    return SpectrumPoset.chain(["0", "m"], singular)


def antichain_one_singular() -> SpectrumPoset:
    return SpectrumPoset.antichain(["a", "b"], ["a"])


def q_x(field=Q) -> RingModel:
    return RingModel(field, ["x"], [1], [], primes={"0": [], "m": ["x"]}, local="m")


def q_x_y(field=Q) -> RingModel:
    return RingModel(field, ["x", "y"], [1, 1], [],
                     primes={"0": [], "px": ["x"], "py": ["y"], "m": ["x", "y"]}, local="m")


def q_x_y_poset() -> SpectrumPoset:
    pts = [PrimePoint(p) for p in ("0", "px", "py", "m")]
    return SpectrumPoset(pts, [("0", "px"), ("0", "py"), ("px", "m"), ("py", "m")])


def truncated_poly(n: int, field=Q) -> RingModel:
    """``k[x]/(x^n)``, local with maximal ideal ``m = (x)``."""
    return RingModel(field, ["x"], [1], ["x^%d" % n], primes={"m": ["x"]}, local="m")


def dual_numbers(field=Q) -> RingModel:
    return truncated_poly(2, field)


def product_model(field=Q) -> RingModel:
    """``k[x]/(x^2) x k`` as ``k[x, e]/(x^2, xe - x, e^2 - e)`` with ``deg e = 0``.

    ``e`` is the idempotent of the first factor; ``a = (x, 1 - e)`` is its
    (singular) point and ``b = (e)`` the point of the field factor.
    """
    return RingModel(field, ["x", "e"], [1, 0], ["x^2", "x*e - x", "e^2 - e"],
                     primes={"a": ["x", "1 - e"], "b": ["e"]})


def product_poset() -> SpectrumPoset:
    return SpectrumPoset([PrimePoint("a", singular=True), PrimePoint("b")])
