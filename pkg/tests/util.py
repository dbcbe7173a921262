"""Seeded draw helpers shared across the test suite."""

from __future__ import annotations

from fractions import Fraction

from qaskey import AWParams, GaussianRational, QBase


def rand_fraction(rng, max_num=8, max_den=8) -> Fraction:
    num = rng.randint(1, max_num)
    den = rng.randint(1, max_den)
    return Fraction(-num if rng.random() < 0.5 else num, den)


def rand_scalar(rng, gaussian=0.3) -> GaussianRational:
    re = rand_fraction(rng)
    if rng.random() < gaussian:
        return GaussianRational(re, rand_fraction(rng))
    return GaussianRational(re)


def rand_qbase(rng, big=False) -> QBase:
    while True:
        q = Fraction(rng.randint(1, 20), rng.randint(1, 20))
        if 0 < q < 1:
            break
    if big:
        q = 1 / q
    return QBase(GaussianRational(q))


def rand_aw_params(rng, n_max=6, big=False) -> AWParams:
    return AWParams([rand_scalar(rng) for _ in range(4)],
                    rand_qbase(rng, big=big), rand_scalar(rng),
                    rng.randint(0, n_max))


def divided_differences(xs, ys):
    """Newton divided differences; dd[k] approximates f[x_0..x_k]."""
    dd = list(ys)
    for j in range(1, len(xs)):
        for i in range(len(xs) - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j])
    return dd
