"""Randomized algebraic decider for exact perfect matching.

Each edge gets an independent random coefficient; red edges also carry a
formal variable y and blue edges a variable z.  For a bipartite graph the
determinant of the resulting Edmonds matrix is the generating polynomial of
perfect matchings by color counts (with random nonzero weights).  For a
general graph the Tutte matrix gives the square of that polynomial (the
Pfaffian), so we take a polynomial square root.

The polynomial in y is extracted exactly from one characteristic polynomial:
with B = A(y0) invertible, det(A0 + y*A1) = det(B) * det(I + (y - y0) B^-1 A1).
The z-direction (only when a blue target is set) is recovered by Lagrange
interpolation over dB + 1 random points.  Any step that could go wrong only
aborts the trial, so a "yes" is always correct and a "no" may be wrong with
small probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import flint
import numpy as np

from ..errors import ContractError, StructureError
from ..graph import Color, ColoredMultigraph

MERSENNE_61 = (1 << 61) - 1


@dataclass(frozen=True)
class RandomizedConfig:
    prime: int = MERSENNE_61
    trials: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ContractError("at least one trial is required")
        if not 3 <= self.prime < 1 << 63:
            raise ContractError("the modulus must be a prime in [3, 2^63)")
        if not flint.fmpz(self.prime).is_prime():
            raise ContractError(f"{self.prime} is not prime")

    def with_trials(self, trials: int) -> RandomizedConfig:
        return RandomizedConfig(self.prime, trials, self.seed)

    def with_seed(self, seed: int) -> RandomizedConfig:
        return RandomizedConfig(self.prime, self.trials, seed)


@dataclass(frozen=True)
class AlgebraicAnswer:
    """Outcome of the randomized test.

    ``found`` is certain when true.  ``error_log10`` bounds log10 of the
    probability that a false ``found`` is wrong; it is ``-inf`` when the
    negative answer was reached deterministically.
    """

    found: bool
    trials_run: int
    error_log10: float
    reason: str = ""

    def __bool__(self) -> bool:
        return self.found


def _poly_eval(poly: flint.nmod_poly, x: int) -> int:
    return int(poly(x))


def _det_poly_linear(b0: flint.nmod_mat, a1: flint.nmod_mat, q: int,
                     rng: np.random.Generator, attempts: int = 3):
    """Exact det(b0 + y*a1) as a polynomial in y, or None if no invertible shift was hit."""
    size = b0.nrows()
    if size == 0:
        return flint.nmod_poly([1], q)
    for _ in range(attempts):
        y0 = int(rng.integers(0, q))
        shifted = b0 + a1 * y0
        d = shifted.det()
        if int(d) == 0:
            continue
        chi = (shifted.inv() * a1).charpoly()
        coeffs = chi.coeffs() + [0] * (size + 1 - len(chi.coeffs()))
        # det(I + tC) = sum_i (-1)^i chi[n-i] t^i
        t_coeffs = [(-1) ** i * int(coeffs[size - i]) % q for i in range(size + 1)]
        in_t = flint.nmod_poly(t_coeffs, q) * int(d)
        return in_t.compose(flint.nmod_poly([(-y0) % q, 1], q))
    return None


def _interpolate(xs: list[int], ys: list[int], q: int) -> flint.nmod_poly:
    """Lagrange interpolation mod q through the points (xs[i], ys[i])."""
    result = flint.nmod_poly([], q)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if yi % q == 0:
            continue
        basis = flint.nmod_poly([1], q)
        denom = 1
        for j, xj in enumerate(xs):
            if j != i:
                basis *= flint.nmod_poly([(-xj) % q, 1], q)
                denom = denom * (xi - xj) % q
        result += basis * (yi * pow(denom, q - 2, q) % q)
    return result


def _coefficient(poly, k: int) -> int:
    return int(poly[k]) if k <= poly.degree() else 0


class _MatrixPattern:
    """Positions of each edge in the Edmonds or Tutte matrix."""

    def __init__(self, graph: ColoredMultigraph, use_blue: bool):
        self.bipartite = graph.bipartition is not None
        if self.bipartite:
            left = [v for v in graph.vertices if graph.side(v) == 0]
            right = [v for v in graph.vertices if graph.side(v) == 1]
            self.rows = {v: i for i, v in enumerate(left)}
            self.cols = {v: i for i, v in enumerate(right)}
            self.size = len(left)
            self.square = len(left) == len(right)
        else:
            self.rows = self.cols = graph.index
            self.size = graph.n
            self.square = True
        self.entries = []  # (row, col, sign, slot) with slot 0 plain, 1 red, 2 blue
        for e in graph.edges:
            slot = 0
            if e.color is Color.RED:
                slot = 1
            elif e.color is Color.BLUE and use_blue:
                slot = 2
            if self.bipartite:
                u, v = (e.u, e.v) if e.u in self.rows else (e.v, e.u)
                self.entries.append(((self.rows[u], self.cols[v], 1, slot),))
            else:
                i, j = self.rows[e.u], self.rows[e.v]
                if i > j:
                    i, j = j, i
                self.entries.append(((i, j, 1, slot), (j, i, -1, slot)))

    def matrices(self, coeffs: list[int], q: int) -> list[flint.nmod_mat]:
        n = self.size
        dense = [[0] * (n * n) for _ in range(3)]
        for c, places in zip(coeffs, self.entries):
            for i, j, sign, slot in places:
                dense[slot][i * n + j] = (dense[slot][i * n + j] + sign * c) % q
        return [flint.nmod_mat(n, n, d, q) for d in dense]


def decide_exact_pm_randomized(graph: ColoredMultigraph, k: int,
                               cfg: RandomizedConfig | None = None,
                               ell: int | None = None) -> AlgebraicAnswer:
    """Is there a perfect matching with exactly k red (and l blue) edges?

    When ``ell`` is None blue edges are treated as uncolored.
    """
    cfg = cfg or RandomizedConfig()
    if graph.directed:
        raise StructureError("perfect matching needs an undirected graph")
    q = cfg.prime
    n = graph.n
    neg_inf = float("-inf")
    if n % 2:
        return AlgebraicAnswer(False, 0, neg_inf, "odd number of vertices")
    use_blue = ell is not None
    reds = graph.count(Color.RED)
    blues = graph.count(Color.BLUE)
    d_red = min(reds, n // 2)
    d_blue = min(blues, n // 2) if use_blue else 0
    if k < 0 or k > d_red or (use_blue and not 0 <= ell <= d_blue):
        return AlgebraicAnswer(False, 0, neg_inf, "color target out of range")
    if use_blue and k + ell > n // 2:
        return AlgebraicAnswer(False, 0, neg_inf, "colored targets exceed the matching size")
    pattern = _MatrixPattern(graph, use_blue)
    if not pattern.square:
        return AlgebraicAnswer(False, 0, neg_inf, "bipartition sides differ in size")
    if n == 0:
        ok = k == 0 and (ell or 0) == 0
        return AlgebraicAnswer(ok, 0, neg_inf, "empty graph")

    # union bound on one trial's failure: the coefficient polynomial vanishing,
    # plus every random shift and interpolation point landing on a root
    per_trial = n * (d_blue + 2)
    error_log10 = cfg.trials * (math.log10(per_trial) - math.log10(q - 1))

    streams = np.random.SeedSequence(cfg.seed).spawn(cfg.trials)
    for t, stream in enumerate(streams, start=1):
        rng = np.random.default_rng(stream)
        coeffs = [int(c) for c in rng.integers(1, q, size=len(graph.edges))]
        if _trial(pattern, coeffs, q, k, ell, d_blue, rng):
            return AlgebraicAnswer(True, t, neg_inf, f"nonzero coefficient in trial {t}")
    return AlgebraicAnswer(False, cfg.trials, error_log10, "all coefficients vanished")


def _trial(pattern: _MatrixPattern, coeffs: list[int], q: int, k: int, ell: int | None,
           d_blue: int, rng: np.random.Generator) -> bool:
    a0, a_red, a_blue = pattern.matrices(coeffs, q)
    general = not pattern.bipartite

    if ell is None:
        poly = _det_poly_linear(a0, a_red, q, rng)
        if poly is None:
            return False
        if general:
            poly = _sqrt(poly)
            if poly is None:
                return False
        return _coefficient(poly, k) != 0

    z_points: list[int] = []
    while len(z_points) < d_blue + 1:
        z = int(rng.integers(0, q))
        if z not in z_points:
            z_points.append(z)
    slices = []
    for z in z_points:
        poly = _det_poly_linear(a0 + a_blue * z, a_red, q, rng)
        if poly is None:
            return False
        if general:
            poly = _sqrt(poly)
            if poly is None:
                return False
        slices.append(poly)

    if general:
        # each square root is only known up to sign; align them all against
        # one reference polynomial in z taken at a random y*
        y_star = int(rng.integers(0, q))
        ref = _det_poly_linear(a0 + a_red * y_star, a_blue, q, rng)
        if ref is None:
            return False
        ref = _sqrt(ref)
        if ref is None:
            return False
        for i, (z, poly) in enumerate(zip(z_points, slices)):
            if poly.is_zero():
                continue
            here = _poly_eval(poly, y_star)
            there = _poly_eval(ref, z)
            if here == 0:
                return False
            if here == there:
                continue
            if here == (-there) % q:
                slices[i] = -poly
            else:
                return False

    values = [_coefficient(poly, k) for poly in slices]
    in_z = _interpolate(z_points, values, q)
    return _coefficient(in_z, ell) != 0


def _sqrt(poly):
    if poly.is_zero():
        return poly
    try:
        return poly.sqrt()
    except (ValueError, ArithmeticError):
        return None
