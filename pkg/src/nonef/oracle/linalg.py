"""Linear algebra over prime fields, primes, and seed derivation."""

from __future__ import annotations

import hashlib
import random
from typing import Sequence

import flint

PRIME_BITS = 62


def derive_seed(*parts: object) -> int:
    """Deterministic 64-bit seed from arbitrary labelled parts."""
    digest = hashlib.sha256(repr(parts).encode()).digest()
    return int.from_bytes(digest[:8], "big")


def rng_for(*parts: object) -> random.Random:
    return random.Random(derive_seed(*parts))


def is_prime(n: int) -> bool:
    return n > 1 and bool(flint.fmpz(n).is_prime())


def random_prime(rng: random.Random, bits: int = PRIME_BITS) -> int:
    """Uniform odd starting point in [2^(bits-1), 2^bits), then the next prime up."""
    candidate = rng.getrandbits(bits - 1) | (1 << (bits - 1)) | 1
    while not is_prime(candidate):
        candidate += 2
        if candidate >= 1 << bits:
            candidate = (1 << (bits - 1)) | 1
    return candidate


def derive_primes(seed: int, count: int) -> list[int]:
    rng = rng_for("primes", seed)
    primes: list[int] = []
    while len(primes) < count:
        p = random_prime(rng)
        if p not in primes:
            primes.append(p)
    return primes


def _to_nmod_mat(rows: Sequence[Sequence[int]], ncols: int, p: int) -> flint.nmod_mat:
    flat = [x % p for row in rows for x in row]
    return flint.nmod_mat(len(rows), ncols, flat, p)


def rank_mod_p(rows: Sequence[Sequence[int]], ncols: int, p: int) -> int:
    if not rows or ncols == 0:
        return 0
    return int(_to_nmod_mat(rows, ncols, p).rank())


def nullspace_mod_p(rows: Sequence[Sequence[int]], ncols: int, p: int) -> list[list[int]]:
    """Basis of the right kernel, one vector per entry."""
    if not rows:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    basis, nullity = _to_nmod_mat(rows, ncols, p).nullspace()
    return [[int(basis[i, j]) for i in range(ncols)] for j in range(int(nullity))]


def rank_mod_p_python(rows: Sequence[Sequence[int]], p: int) -> int:
    """Plain row reduction, first nonzero entry as pivot.

    Slow; kept as an independent check on the FLINT route.
    """
    a = [[x % p for x in row] for row in rows]
    if not a:
        return 0
    ncols = len(a[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(a)) if a[r][col]), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        inv = pow(a[rank][col], -1, p)
        prow = [x * inv % p for x in a[rank]]
        a[rank] = prow
        for r in range(rank + 1, len(a)):
            f = a[r][col]
            if f:
                a[r] = [(x - f * y) % p for x, y in zip(a[r], prow)]
        rank += 1
        if rank == len(a):
            break
    return rank


def apply(rows: Sequence[Sequence[int]], vec: Sequence[int], p: int) -> list[int]:
    return [sum(x * y for x, y in zip(row, vec)) % p for row in rows]


def inverse3(m: Sequence[Sequence[int]], p: int) -> list[list[int]] | None:
    """Inverse of a 3x3 matrix mod p, or None when singular."""
    (a, b, c), (d, e, f), (g, h, i) = m
    cof = [
        [e * i - f * h, -(b * i - c * h), b * f - c * e],
        [-(d * i - f * g), a * i - c * g, -(a * f - c * d)],
        [d * h - e * g, -(a * h - b * g), a * e - b * d],
    ]
    det = (a * cof[0][0] + b * cof[1][0] + c * cof[2][0]) % p
    if det == 0:
        return None
    inv = pow(det, -1, p)
    return [[x * inv % p for x in row] for row in cof]


def matvec(m: Sequence[Sequence[int]], v: Sequence[int], p: int) -> tuple[int, int, int]:
    return tuple(sum(x * y for x, y in zip(row, v)) % p for row in m)  # type: ignore[return-value]
