"""Component codes: prime-field Reed-Solomon and small binary linear codes.

The RS codec is systematic over a prime field F_p with evaluation points
0..n-1: the first k points carry the message, the parities are the
interpolating polynomial's values at the remaining points.  Decoding is
Berlekamp-Welch rational interpolation; an independent brute-force
nearest-codeword path exists for small codes so the two can be checked
against each other.

The binary side provides [N, K, D] codes with exactly verified minimum
distance (exhaustive over the 2^K codewords at desk scale), a half-distance
decoder, and the integer-lift decoder that recovers a bounded nonnegative
integer vector w from G^T w + e by repeated bit-plane decoding.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .core import derive_seed
from .errors import AmbiguousDecoding, ConstructionFailure, DecodingFailure


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


def smallest_prime_above(m: int) -> int:
    """Smallest prime strictly greater than m (Bertrand: at most 2m for m >= 1)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    p = m + 1
    while not is_prime(p):
        p += 1
    return p


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("no inverse of 0")
        return pow(x, self.p - 2, self.p)


def _poly_eval(coeffs: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def _poly_divmod(num: list[int], den: list[int], p: int) -> tuple[list[int], list[int]]:
    """Quotient and remainder of polynomials with ascending coefficients."""
    den = list(den)
    while den and den[-1] == 0:
        den.pop()
    if not den:
        raise ZeroDivisionError("division by zero polynomial")
    rem = [c % p for c in num]
    while rem and rem[-1] == 0:
        rem.pop()
    inv_lead = pow(den[-1], p - 2, p)
    quot = [0] * max(len(rem) - len(den) + 1, 0)
    while len(rem) >= len(den):
        shift = len(rem) - len(den)
        factor = (rem[-1] * inv_lead) % p
        quot[shift] = factor
        for i, c in enumerate(den):
            rem[shift + i] = (rem[shift + i] - factor * c) % p
        while rem and rem[-1] == 0:
            rem.pop()
    return quot, rem


def _nullspace_vector(rows: list[list[int]], ncols: int, p: int) -> list[int] | None:
    """Some nonzero kernel vector of the row system, or None if full rank."""
    rows = [r[:] for r in rows]
    pivot_cols: list[int] = []
    rank = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(rank, len(rows)):
            if rows[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        inv = pow(rows[rank][c], p - 2, p)
        rows[rank] = [(v * inv) % p for v in rows[rank]]
        base = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c]
                ri = rows[i]
                rows[i] = [(ri[j] - f * base[j]) % p for j in range(ncols)]
        pivot_cols.append(c)
        rank += 1
        if rank == len(rows):
            break
    in_pivots = set(pivot_cols)
    free = [c for c in range(ncols) if c not in in_pivots]
    if not free:
        return None
    sol = [0] * ncols
    f0 = free[0]
    sol[f0] = 1
    for i, c in enumerate(pivot_cols):
        sol[c] = (-rows[i][f0]) % p
    return sol


class RSCodec:
    """Systematic [n_rs, k_rs, n_rs - k_rs + 1] Reed-Solomon code over F_p."""

    def __init__(self, prime_field: PrimeField, n_rs: int, k_rs: int):
        if not 1 <= k_rs <= n_rs:
            raise ValueError(f"need 1 <= k_rs <= n_rs, got k={k_rs}, n={n_rs}")
        if n_rs > prime_field.p:
            raise ValueError(
                f"n_rs={n_rs} exceeds the field size {prime_field.p}: "
                f"not enough distinct evaluation points"
            )
        self.field = prime_field
        self.n_rs = n_rs
        self.k_rs = k_rs
        p = prime_field.p
        # Lagrange preprocessing: parity_matrix[i][j] is the value at parity
        # point k_rs+j of the basis polynomial that is 1 at message point i.
        self._parity_matrix = []
        for i in range(k_rs):
            denom = 1
            for m in range(k_rs):
                if m != i:
                    denom = (denom * (i - m)) % p
            inv_denom = pow(denom, p - 2, p)
            vals = []
            for xp in range(k_rs, n_rs):
                num = 1
                for m in range(k_rs):
                    if m != i:
                        num = (num * (xp - m)) % p
                vals.append((num * inv_denom) % p)
            self._parity_matrix.append(vals)
        # x_i^l table for the Berlekamp-Welch system.
        max_deg = max((n_rs - k_rs) // 2 + k_rs - 1, (n_rs - k_rs) // 2, 0)
        self._powers = [[pow(x, l, p) for l in range(max_deg + 1)]
                        for x in range(n_rs)]

    @property
    def d_rs(self) -> int:
        return self.n_rs - self.k_rs + 1

    @property
    def radius(self) -> int:
        return (self.n_rs - self.k_rs) // 2

    def _check_elements(self, vec: Sequence[int]):
        p = self.field.p
        for v in vec:
            if not 0 <= v < p:
                raise ValueError(f"element {v} outside F_{p}")


def rs_encode(codec: RSCodec, message: Sequence[int]) -> list[int]:
    """Systematic codeword: the message followed by n_rs - k_rs parity symbols."""
    if len(message) != codec.k_rs:
        raise ValueError(f"message length {len(message)} != k_rs = {codec.k_rs}")
    codec._check_elements(message)
    p = codec.field.p
    parities = []
    for j in range(codec.n_rs - codec.k_rs):
        acc = 0
        for i, m in enumerate(message):
            if m:
                acc += m * codec._parity_matrix[i][j]
        parities.append(acc % p)
    return list(message) + parities


def rs_decode(codec: RSCodec, received: Sequence[int]) -> list[int]:
    """Berlekamp-Welch decoding of up to floor((n_rs - k_rs)/2) symbol errors.

    Finds polynomials Q (deg <= t + k - 1) and E (deg <= t, nonzero) with
    Q(x_i) = r_i E(x_i) at every point, divides, and verifies the resulting
    codeword lies within the radius.  Raises DecodingFailure otherwise.
    """
    n, k = codec.n_rs, codec.k_rs
    if len(received) != n:
        raise ValueError(f"received length {len(received)} != n_rs = {n}")
    codec._check_elements(received)
    p = codec.field.p
    t = codec.radius
    nq = t + k          # number of Q coefficients
    ncols = nq + t + 1
    rows = []
    for i in range(n):
        pw = codec._powers[i]
        r = received[i]
        row = [pw[l] for l in range(nq)]
        row += [(-r * pw[l]) % p for l in range(t + 1)]
        rows.append(row)
    sol = _nullspace_vector(rows, ncols, p)
    if sol is None:
        raise DecodingFailure("no rational interpolation exists")
    q_poly = sol[:nq]
    e_poly = sol[nq:]
    if not any(e_poly):
        raise DecodingFailure("degenerate error locator")
    f_poly, rem = _poly_divmod(q_poly, e_poly, p)
    if any(rem):
        raise DecodingFailure("interpolation ratio is not a polynomial")
    if len(f_poly) > k:
        raise DecodingFailure("message polynomial degree too large")
    codeword = [_poly_eval(f_poly, x, p) for x in range(n)]
    mismatches = sum(1 for a, b in zip(received, codeword) if a != b)
    if mismatches > t:
        raise DecodingFailure(f"{mismatches} mismatches exceed radius {t}")
    return codeword[:k]


def rs_decode_bruteforce(codec: RSCodec, received: Sequence[int],
                         budget: int = 200_000) -> list[int]:
    """Independent nearest-codeword oracle over all p^k_rs messages."""
    p = codec.field.p
    if p ** codec.k_rs > budget:
        raise ValueError("message space too large for brute force")
    codec._check_elements(received)
    best = None
    best_dist = codec.n_rs + 1
    tie = False
    for message in product(range(p), repeat=codec.k_rs):
        cw = rs_encode(codec, list(message))
        dist = sum(1 for a, b in zip(received, cw) if a != b)
        if dist < best_dist:
            best, best_dist, tie = list(message), dist, False
        elif dist == best_dist:
            tie = True
    if tie:
        raise DecodingFailure(f"tie at distance {best_dist}")
    return best


@dataclass(frozen=True)
class BinaryLinearCode:
    """[N, K, D] binary code given by a K x N generator; D is the design distance.

    The true minimum distance can be computed exhaustively (2^K codewords);
    constructions verify it is >= D before returning a code.
    """

    generator: tuple[tuple[int, ...], ...]
    design_distance: int
    seed: int | None = None

    def __post_init__(self):
        if not self.generator or not self.generator[0]:
            raise ValueError("generator must be nonempty")
        width = len(self.generator[0])
        for r in self.generator:
            if len(r) != width or any(b not in (0, 1) for b in r):
                raise ValueError("generator rows must be equal-length bit vectors")

    @property
    def N(self) -> int:
        return len(self.generator[0])

    @property
    def K(self) -> int:
        return len(self.generator)

    def _row_masks(self) -> list[int]:
        return [sum(bit << i for i, bit in enumerate(row)) for row in self.generator]

    def rank(self) -> int:
        masks = [m for m in self._row_masks() if m]
        rank = 0
        for _ in range(len(masks)):
            if not masks:
                break
            pivot = max(masks)
            masks.remove(pivot)
            rank += 1
            top = pivot.bit_length() - 1
            masks = [m ^ pivot if (m >> top) & 1 else m for m in masks]
            masks = [m for m in masks if m]
        return rank

    def min_distance(self, max_k: int = 20) -> int:
        """Exact minimum distance by Gray-code enumeration of all codewords."""
        if self.K > max_k:
            raise ValueError(f"K={self.K} too large for exhaustive distance")
        masks = self._row_masks()
        cw = 0
        best = self.N + 1
        for counter in range(1, 1 << self.K):
            j = (counter & -counter).bit_length() - 1
            cw ^= masks[j]
            w = cw.bit_count()
            if 0 < w < best:
                best = w
        return best

    def encode_bits(self, message: Sequence[int]) -> tuple[int, ...]:
        if len(message) != self.K:
            raise ValueError(f"message length {len(message)} != K = {self.K}")
        out = [0] * self.N
        for j, bit in enumerate(message):
            if bit:
                row = self.generator[j]
                for i in range(self.N):
                    out[i] ^= row[i]
        return tuple(out)

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "K": self.K,
            "D": self.design_distance,
            "seed": self.seed,
            "generator_rows": ["".join(str(b) for b in row) for row in self.generator],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BinaryLinearCode":
        gen = tuple(tuple(int(ch) for ch in row) for row in obj["generator_rows"])
        code = cls(generator=gen, design_distance=obj["D"], seed=obj.get("seed"))
        if code.N != obj["N"] or code.K != obj["K"]:
            raise ValueError("declared shape does not match generator rows")
        return code


def repetition_code(n_bits: int) -> BinaryLinearCode:
    """The [n, 1, n] repetition code."""
    if n_bits < 1:
        raise ValueError("need at least one bit")
    return BinaryLinearCode(generator=((1,) * n_bits,), design_distance=n_bits)


def build_outer_code(r: int, epsilon2, seed: int = 0,
                     max_attempts: int = 5000) -> BinaryLinearCode:
    """Find an [c1*r, r, >= ceil((1/2 - epsilon2) * c1*r)] binary code.

    c1 starts at ceil(2 / (1 + 2*epsilon2)) and is raised whenever seeded
    random generator matrices keep failing the exact distance check.  r = 1
    deterministically yields the all-ones (repetition) generator.  The seed
    of the successful attempt is recorded on the returned code.
    """
    if r < 1:
        raise ValueError("dimension r must be >= 1")
    eps = Fraction(epsilon2)
    if not 0 < eps < Fraction(1, 2):
        raise ValueError(f"epsilon2 must lie in (0, 1/2), got {epsilon2}")
    c1 = math.ceil(Fraction(2) / (1 + 2 * eps))
    attempts = 0
    per_c1 = 200
    while attempts < max_attempts:
        n_bits = c1 * r
        target = math.ceil((Fraction(1, 2) - eps) * n_bits)
        if r == 1:
            return BinaryLinearCode(generator=((1,) * n_bits,),
                                    design_distance=target, seed=seed)
        for local in range(per_c1):
            attempts += 1
            attempt_seed = derive_seed(seed, "outer-code", c1, local)
            rng = random.Random(attempt_seed)
            gen = tuple(tuple(rng.randint(0, 1) for _ in range(n_bits))
                        for _ in range(r))
            code = BinaryLinearCode(generator=gen, design_distance=target,
                                    seed=attempt_seed)
            if code.rank() < r:
                continue
            if code.min_distance() >= target:
                return code
            if attempts >= max_attempts:
                break
        c1 += 1
    raise ConstructionFailure(
        f"no [{c1 * r}, {r}] generator with distance target found",
        attempts=attempts,
    )


def _nearest_codeword(code: BinaryLinearCode,
                      bits: Sequence[int]) -> tuple[tuple[int, ...], int, int, bool]:
    """(message, codeword mask, distance, tie?) of the closest codeword."""
    target = sum((1 if b else 0) << i for i, b in enumerate(bits))
    masks = code._row_masks()
    msg = [0] * code.K
    cw = 0
    best_msg = tuple(msg)
    best_cw = 0
    best_dist = (cw ^ target).bit_count()
    tie = False
    for counter in range(1, 1 << code.K):
        j = (counter & -counter).bit_length() - 1
        msg[j] ^= 1
        cw ^= masks[j]
        dist = (cw ^ target).bit_count()
        if dist < best_dist:
            best_msg, best_cw, best_dist, tie = tuple(msg), cw, dist, False
        elif dist == best_dist:
            tie = True
    return best_msg, best_cw, best_dist, tie


def binary_half_distance_decode(code: BinaryLinearCode,
                                bits: Sequence[int]) -> tuple[int, ...]:
    """Nearest codeword by brute force; raises AmbiguousDecoding on a tie."""
    if len(bits) != code.N:
        raise ValueError(f"word length {len(bits)} != N = {code.N}")
    _, cw, dist, tie = _nearest_codeword(code, bits)
    if tie:
        raise AmbiguousDecoding(f"tie at distance {dist}: outside decoding radius")
    return tuple((cw >> i) & 1 for i in range(code.N))


def integer_lift_decode(code: BinaryLinearCode, y: Sequence[int],
                        w_max: int) -> tuple[int, ...]:
    """Recover w in {0..w_max}^K from y = G^T w + e with wt(e) < D/2.

    Bit-plane lifting: in each of bit_length(w_max) rounds the parity of y
    is a codeword of the message w mod 2 corrupted only inside supp(e), so a
    half-distance decode yields that bit plane; subtracting G^T (w mod 2)
    and halving reduces to the same problem for floor(w/2).  If the error
    weight exceeds the radius the output is arbitrary and the caller must
    treat it as untrusted (ties are then resolved to the first codeword
    found instead of failing).
    """
    if len(y) != code.N:
        raise ValueError(f"word length {len(y)} != N = {code.N}")
    if w_max < 0:
        raise ValueError("w_max must be >= 0")
    gen = code.generator
    values = list(y)
    w = [0] * code.K
    for plane in range(w_max.bit_length()):
        bits = [v & 1 for v in values]
        msg, _, _, _ = _nearest_codeword(code, bits)
        active = [j for j in range(code.K) if msg[j]]
        for j in active:
            w[j] += 1 << plane
        values = [(values[i] - sum(gen[j][i] for j in active)) >> 1
                  for i in range(code.N)]
    return tuple(w)
