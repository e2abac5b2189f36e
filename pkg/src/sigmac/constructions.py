"""Signature-code constructions and their matched decoders.

Three families, in increasing ambition:

* rs_augment: a noiseless-case base matrix whose columns are extended with
  Reed-Solomon parity symbols, bit-expanded into extra binary rows.  Each
  channel error corrupts at most one RS symbol, so 2t parity symbols repair
  t errors.  Best for small, constant t.

* construct_random: sample k x n matrices at the planned length until one
  passes the exact distinguishing-weight verifier.  Handles error budgets
  growing linearly with the length.

* kronecker pipeline: a small inner signature matrix M found by search,
  composed with a binary outer code G as G^T (x) M.  Decoding lifts each
  inner row through the outer code (bit-plane decoding), then fixes the at
  most t_inner untrusted rows by exhaustive search per block of users.

Every constructed artifact is (de)serializable to canonical JSON together
with all parameters, so the matched decoder can be rebuilt from file alone.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from .bounds import ConstantT, TMode, achievable_random, max_correctable_fraction
from .core import (
    InfoVector,
    SignatureMatrix,
    decode_min_distance,
    derive_seed,
    min_distinguishing_weight,
    z_enumeration_limit,
)
from .errors import AmbiguousDecoding, ConstructionFailure, DecodingFailure
from .linear import (
    BinaryLinearCode,
    PrimeField,
    RSCodec,
    build_outer_code,
    integer_lift_decode,
    repetition_code,
    rs_decode,
    rs_encode,
    smallest_prime_above,
)

# Single-draw acceptance rate >= 50% was measured over 100 seeds at these
# lengths; see the calibration test in the acceptance suite.
CALIBRATED_RANDOM_K = {(8, 3, 1): 12}


def construct_trivial(n: int) -> SignatureMatrix:
    """The n x n identity: uniquely decodable on the noiseless channel."""
    if n < 1:
        raise ValueError("need n >= 1")
    rows = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    return SignatureMatrix(q=2, rows=rows)


NOISELESS_PROVIDERS = {"trivial": construct_trivial}
KNOWN_PROVIDERS = ("trivial", "lindstrom")


@dataclass(frozen=True)
class NoiselessConstruction:
    matrix: SignatureMatrix
    provider_requested: str
    provider_used: str
    fallback: bool
    d_min: Optional[int]


def construct_noiseless(n: int, provider: str = "trivial",
                        limit: int | None = None) -> NoiselessConstruction:
    """Build a base matrix for the error-free channel via a named provider.

    Providers may be registered in NOISELESS_PROVIDERS; a known but
    unregistered provider (currently "lindstrom") falls back to the trivial
    identity with the fallback flag set.  The result is re-verified with the
    sign-pattern oracle whenever n is within the enumeration budget.
    """
    if provider not in KNOWN_PROVIDERS:
        raise ValueError(f"unknown provider {provider!r}; known: {KNOWN_PROVIDERS}")
    builder = NOISELESS_PROVIDERS.get(provider)
    fallback = builder is None
    used = provider if builder else "trivial"
    matrix = (builder or construct_trivial)(n)
    d_min = None
    if n <= z_enumeration_limit(limit):
        d_min = min_distinguishing_weight(matrix, limit).d_min
        if d_min < 1:
            raise ConstructionFailure(
                f"provider {used!r} produced a matrix that is not uniquely decodable"
            )
    return NoiselessConstruction(matrix, provider, used, fallback, d_min)


class AugmentedCode:
    """A base matrix plus bit-expanded Reed-Solomon parity rows.

    The extended matrix stacks the k_lin base rows on top of 2t * bit_width
    binary rows; parity symbol j of column i occupies rows
    k_lin + j*bit_width .. k_lin + (j+1)*bit_width - 1 in little-endian bit
    order.
    """

    def __init__(self, base: SignatureMatrix, extended: SignatureMatrix,
                 t: int, q_rs: int, bit_width: int):
        self.base = base
        self.extended = extended
        self.t = t
        self.q_rs = q_rs
        self.bit_width = bit_width
        self.codec = RSCodec(PrimeField(q_rs), n_rs=base.k + 2 * t, k_rs=base.k)
        self._base_is_identity = (
            base.k == base.n
            and all(base.rows[i][j] == (1 if i == j else 0)
                    for i in range(base.k) for j in range(base.n))
        )

    @property
    def rows_added(self) -> int:
        return 2 * self.t * self.bit_width

    def to_json(self) -> dict:
        return {
            "kind": "rs_augmented",
            "base": self.base.to_json(),
            "extended": self.extended.to_json(),
            "t": self.t,
            "q_rs": self.q_rs,
            "bit_width": self.bit_width,
            "rows_added": self.rows_added,
            "nominal_rows_2t_log_n": round(2 * self.t * math.log2(self.base.n), 6)
            if self.base.n > 1 else 0.0,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AugmentedCode":
        base = SignatureMatrix.from_json(obj["base"])
        code = cls(
            base=base,
            extended=SignatureMatrix.from_json(obj["extended"]),
            t=obj["t"],
            q_rs=obj["q_rs"],
            bit_width=obj["bit_width"],
        )
        rebuilt = rs_augment(base, obj["t"])
        if (rebuilt.extended.rows != code.extended.rows
                or rebuilt.q_rs != code.q_rs):
            raise ValueError("extended matrix does not match its base and t")
        return code


def rs_augment(base: SignatureMatrix, t: int) -> AugmentedCode:
    """Extend a noiseless-case base so that t output errors become correctable.

    The field must exceed every uncorrupted channel value n*(q-1), so data
    symbols reduce faithfully mod q_RS, and must offer k_lin + 2t distinct
    evaluation points; q_RS is the smallest prime satisfying both.  Each of
    the 2t parity symbols per column is appended as bit_width binary rows.
    """
    if t < 1:
        raise ValueError("t must be >= 1; use the base matrix directly for t = 0")
    k_lin = base.k
    n_rs = k_lin + 2 * t
    value_cap = base.n * (base.q - 1)
    q_rs = smallest_prime_above(max(value_cap, n_rs - 1))
    bit_width = q_rs.bit_length()
    codec = RSCodec(PrimeField(q_rs), n_rs=n_rs, k_rs=k_lin)
    parity_rows = [[0] * base.n for _ in range(2 * t * bit_width)]
    for col in range(base.n):
        column = [base.rows[i][col] for i in range(k_lin)]
        codeword = rs_encode(codec, column)
        for j, symbol in enumerate(codeword[k_lin:]):
            for b in range(bit_width):
                parity_rows[j * bit_width + b][col] = (symbol >> b) & 1
    extended = SignatureMatrix(
        q=base.q,
        rows=base.rows + tuple(tuple(r) for r in parity_rows),
    )
    return AugmentedCode(base, extended, t, q_rs, bit_width)


def rs_augmented_decode(code: AugmentedCode, y: Sequence[int]) -> InfoVector:
    """Recover the activity vector from an output with at most t errors.

    Data symbols are the first k_lin positions reduced mod q_RS; each parity
    symbol is reassembled from its bit rows and reduced likewise (integer
    column sums commute with the reduction because the code is linear over
    F_q_RS).  One channel error touches at most one RS symbol, so RS
    decoding returns the exact noiseless word, which the base then inverts.
    """
    k_lin = code.base.k
    if len(y) != code.extended.k:
        raise ValueError(f"word length {len(y)} != extended k = {code.extended.k}")
    q_rs = code.q_rs
    width = code.bit_width
    symbols = [y[j] % q_rs for j in range(k_lin)]
    for j in range(2 * code.t):
        acc = 0
        offset = k_lin + j * width
        for b in range(width):
            acc += y[offset + b] << b
        symbols.append(acc % q_rs)
    word = rs_decode(code.codec, symbols)
    if code._base_is_identity:
        if any(v not in (0, 1) for v in word):
            raise DecodingFailure("recovered word is not an activity vector")
        return tuple(word)
    return decode_min_distance(tuple(word), code.base, 0)


@dataclass(frozen=True)
class PlannedLength:
    k: int
    formula_value: float
    omitted_terms: tuple[str, ...]


def plan_random_length(n: int, q: int, t_mode: TMode) -> PlannedLength:
    """Code length at which random search is expected to succeed.

    Constant t: the smallest integer strictly above the closed-form value;
    linear tau: the smallest integer at least the closed-form value.  The
    unstated O(.) correction is excluded and flagged; construct_random
    compensates by escalating k when attempts exhaust.
    """
    value = achievable_random(n, q, t_mode)
    if isinstance(t_mode, ConstantT):
        k = math.floor(value) + 1
    else:
        k = math.ceil(value)
    from .bounds import RANDOM_OMITTED
    return PlannedLength(k=max(k, 1), formula_value=value,
                         omitted_terms=(RANDOM_OMITTED,))


@dataclass(frozen=True)
class RandomConstruction:
    matrix: SignatureMatrix
    seed: int
    attempts: int
    k: int
    d_min: int
    planned_k: int
    escalations: int

    def to_json(self) -> dict:
        return {
            "kind": "random",
            "matrix": self.matrix.to_json(),
            "seed": self.seed,
            "attempts": self.attempts,
            "k": self.k,
            "d_min": self.d_min,
            "planned_k": self.planned_k,
            "escalations": self.escalations,
        }


def construct_random(n: int, q: int, t: int, seed: int,
                     max_attempts: int = 100,
                     k_override: int | None = None,
                     batch_size: int = 25,
                     limit: int | None = None) -> RandomConstruction:
    """Sample uniform k x n matrices until one verifiably tolerates t errors.

    Acceptance is by the exact verifier (d_min >= 2t + 1), never by formula
    trust.  After each fully failed batch the length grows by 5% (at least
    one row).  Deterministic: attempt i uses the child seed (seed, i).
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    planned = k_override if k_override is not None \
        else plan_random_length(n, q, ConstantT(t)).k
    k = planned
    escalations = 0
    for attempt in range(1, max_attempts + 1):
        rng = random.Random(derive_seed(seed, "random-matrix", attempt))
        rows = tuple(tuple(rng.randrange(q) for _ in range(n)) for _ in range(k))
        matrix = SignatureMatrix(q=q, rows=rows)
        report = min_distinguishing_weight(matrix, limit)
        if report.d_min >= 2 * t + 1:
            return RandomConstruction(matrix=matrix, seed=seed, attempts=attempt,
                                      k=k, d_min=report.d_min, planned_k=planned,
                                      escalations=escalations)
        if attempt % batch_size == 0:
            k = max(k + 1, math.ceil(k * 1.05))
            escalations += 1
    raise ConstructionFailure(
        f"no {k}x{n} matrix with d_min >= {2 * t + 1} found in {max_attempts} "
        f"attempts ({escalations} length escalations from {planned})",
        attempts=max_attempts,
    )


@dataclass(frozen=True)
class InnerSearchResult:
    matrix: SignatureMatrix
    checked: int
    space: int
    mode: str


def find_inner_matrix(p: int, s: int, q: int, t_inner: int,
                      mode: str = "exhaustive", seed: int = 0,
                      budget: int = 300_000,
                      limit: int | None = None) -> InnerSearchResult:
    """Find a p x s matrix with d_min >= 2*t_inner + 1, verified exactly.

    Exhaustive mode walks all q^(p*s) candidate matrices in row-major order
    and is its own existence proof: exhausting the space proves emptiness.
    Seeded-random mode draws candidates instead.
    """
    if p < 1 or s < 1:
        raise ValueError("need p >= 1 and s >= 1")
    target = 2 * t_inner + 1
    space = q ** (p * s)
    if mode == "exhaustive":
        if space > budget:
            raise ValueError(
                f"q^(p*s) = {space} exceeds the exhaustive budget {budget}; "
                f"use seeded-random mode"
            )
        checked = 0
        for entries in product(range(q), repeat=p * s):
            checked += 1
            rows = tuple(entries[i * s:(i + 1) * s] for i in range(p))
            matrix = SignatureMatrix(q=q, rows=rows)
            if min_distinguishing_weight(matrix, limit).d_min >= target:
                return InnerSearchResult(matrix, checked, space, mode)
        raise ConstructionFailure(
            f"exhausted all {space} candidate {p}x{s} matrices over q={q}: "
            f"none reaches d_min >= {target}",
            attempts=space,
        )
    if mode == "seeded-random":
        for attempt in range(1, budget + 1):
            rng = random.Random(derive_seed(seed, "inner-matrix", attempt))
            rows = tuple(tuple(rng.randrange(q) for _ in range(s)) for _ in range(p))
            matrix = SignatureMatrix(q=q, rows=rows)
            if min_distinguishing_weight(matrix, limit).d_min >= target:
                return InnerSearchResult(matrix, attempt, space, mode)
        raise ConstructionFailure(
            f"no {p}x{s} matrix with d_min >= {target} in {budget} random draws",
            attempts=budget,
        )
    raise ValueError(f"unknown search mode {mode!r}")


def plan_epsilon_split(q: int, epsilon) -> tuple[Fraction, Fraction]:
    """Split a target slack epsilon into the inner and outer slacks.

    Solves ((q-1)/(2q) - eps1) * (1/4 - eps2/2) = (q-1)/(8q) - epsilon with
    eps2 = min(1/8, epsilon*4q/(q-1)).  Exact rational arithmetic; rejects
    any epsilon for which eps1 would leave the feasible range (that happens
    for epsilon <= (q-1)/(32q) as well as epsilon >= (q-1)/(8q)).
    """
    eps = Fraction(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    quarter_fraction = max_correctable_fraction(q) / 4     # (q-1)/(8q)
    target = quarter_fraction - eps
    if target <= 0:
        raise ValueError(
            f"epsilon = {eps} >= (q-1)/(8q) = {quarter_fraction}: "
            f"no positive error budget remains"
        )
    eps2 = min(Fraction(1, 8), eps * 4 * q / (q - 1))
    factor = Fraction(1, 4) - eps2 / 2
    eps1 = max_correctable_fraction(q) - target / factor
    if eps1 <= 0:
        raise ValueError(
            f"epsilon split failed: eps1 = {eps1} <= 0 "
            f"(epsilon must exceed (q-1)/(32q) = {quarter_fraction / 4})"
        )
    return eps1, eps2


class KroneckerCode:
    """Outer binary code composed with an inner signature matrix.

    The composed matrix is G^T (x) M: outer row a contributes p rows, whose
    block j equals G[j][a] * M.  Row i of M therefore shows up at global
    positions a*p + i, which is how the decoder regroups the output.
    """

    def __init__(self, inner: SignatureMatrix, outer: BinaryLinearCode,
                 composed: SignatureMatrix, t_inner: int,
                 eps1: Optional[Fraction] = None, eps2: Optional[Fraction] = None):
        self.inner = inner
        self.outer = outer
        self.composed = composed
        self.t_inner = t_inner
        self.eps1 = eps1
        self.eps2 = eps2

    @property
    def p(self) -> int:
        return self.inner.k

    @property
    def s(self) -> int:
        return self.inner.n

    @property
    def r(self) -> int:
        return self.outer.K

    @property
    def lift_threshold(self) -> int:
        """A lifted row is certainly correct below this many of its errors."""
        return math.ceil(self.outer.design_distance / 2)

    @property
    def certified_budget(self) -> int:
        """Largest total error weight for which decoding provably succeeds.

        At most floor(budget / lift_threshold) rows can reach the threshold,
        and the per-block search fixes up to t_inner untrusted rows.
        """
        return self.lift_threshold * (self.t_inner + 1) - 1

    @property
    def asymptotic_budget(self) -> Optional[int]:
        """floor(((q-1)/(8q) - epsilon) * k), when the slacks are recorded."""
        if self.eps1 is None or self.eps2 is None:
            return None
        q = self.inner.q
        per_k = (max_correctable_fraction(q) - self.eps1) * (Fraction(1, 4) - self.eps2 / 2)
        return math.floor(per_k * self.composed.k)

    def to_json(self) -> dict:
        return {
            "kind": "kronecker",
            "inner": self.inner.to_json(),
            "outer": self.outer.to_json(),
            "composed": self.composed.to_json(),
            "t_inner": self.t_inner,
            "eps1": None if self.eps1 is None else str(self.eps1),
            "eps2": None if self.eps2 is None else str(self.eps2),
            "p": self.p,
            "s": self.s,
            "r": self.r,
            "certified_budget": self.certified_budget,
            "asymptotic_budget": self.asymptotic_budget,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "KroneckerCode":
        inner = SignatureMatrix.from_json(obj["inner"])
        outer = BinaryLinearCode.from_json(obj["outer"])
        code = cls(
            inner=inner,
            outer=outer,
            composed=SignatureMatrix.from_json(obj["composed"]),
            t_inner=obj["t_inner"],
            eps1=None if obj.get("eps1") is None else Fraction(obj["eps1"]),
            eps2=None if obj.get("eps2") is None else Fraction(obj["eps2"]),
        )
        expected = kronecker_compose(outer, inner, t_inner=code.t_inner).composed
        if expected.rows != code.composed.rows:
            raise ValueError("composed matrix does not match its factors")
        return code


def kronecker_compose(outer: BinaryLinearCode, inner: SignatureMatrix,
                      t_inner: int = 0,
                      eps1: Optional[Fraction] = None,
                      eps2: Optional[Fraction] = None) -> KroneckerCode:
    """Compose G^T (x) M into a (N*p) x (K*s) signature matrix.

    Entries stay within {0,...,q-1} because the outer generator is binary:
    each block is either a copy of M or all zeros.
    """
    rows = []
    for a in range(outer.N):
        gains = [outer.generator[j][a] for j in range(outer.K)]
        for i in range(inner.k):
            inner_row = inner.rows[i]
            row = []
            for g in gains:
                row.extend(v * g for v in inner_row)
            rows.append(tuple(row))
    composed = SignatureMatrix(q=inner.q, rows=tuple(rows))
    return KroneckerCode(inner, outer, composed, t_inner, eps1, eps2)


def kronecker_decode(code: KroneckerCode, b: Sequence[int]) -> InfoVector:
    """Rows-then-blocks decoding of the composed code.

    Step 1 lifts each inner row index i: the subsequence (b[a*p+i])_a equals
    G^T w + e restricted to that row's errors, where w collects M_row_i
    applied to each user block; integer lifting recovers w whenever the
    row's error weight stays below half the outer distance, and produces an
    untrusted vector otherwise.  Step 2 searches each user block for the bit
    pattern whose inner image differs from the lifted values in the fewest
    rows; at most t_inner untrusted rows are outvoted.  Ties mean the error
    budget was exceeded and raise AmbiguousDecoding.
    """
    p, s, r = code.p, code.s, code.r
    n_outer = code.outer.N
    if len(b) != n_outer * p:
        raise ValueError(f"word length {len(b)} != k = {n_outer * p}")
    w_max = s * (code.inner.q - 1)
    lifted = []
    for i in range(p):
        segment = [b[a * p + i] for a in range(n_outer)]
        lifted.append(integer_lift_decode(code.outer, segment, w_max))
    inner_rows = code.inner.rows
    images = []
    for bits in product((0, 1), repeat=s):
        images.append((bits, tuple(sum(row[c] for c in range(s) if bits[c])
                                   for row in inner_rows)))
    result: list[int] = []
    for j in range(r):
        target = tuple(lifted[i][j] for i in range(p))
        best_bits = None
        best_dist = p + 1
        tie = False
        for bits, image in images:
            dist = sum(1 for x, y in zip(target, image) if x != y)
            if dist < best_dist:
                best_bits, best_dist, tie = bits, dist, False
            elif dist == best_dist:
                tie = True
        if tie:
            raise AmbiguousDecoding(
                f"block {j}: tie at {best_dist} mismatched rows "
                f"(error budget exceeded)"
            )
        result.extend(best_bits)
    return tuple(result)


def build_kronecker(q: int, epsilon, p: int, s: int, r: int, seed: int = 0,
                    outer_kind: str = "search",
                    t_inner: int | None = None,
                    c1: int | None = None,
                    inner_mode: str = "exhaustive") -> KroneckerCode:
    """Plan slacks, find the inner matrix, build the outer code, and compose.

    Desk-scale instances pick (p, s, r) directly; the asymptotic sizing
    formulas degenerate at small n.  t_inner defaults to the planned value
    floor(((q-1)/(2q) - eps1) * p) and may be overridden when the searched
    inner matrix supports more.
    """
    eps1, eps2 = plan_epsilon_split(q, epsilon)
    if t_inner is None:
        t_inner = math.floor((max_correctable_fraction(q) - eps1) * p)
    inner = find_inner_matrix(p, s, q, t_inner, mode=inner_mode,
                              seed=derive_seed(seed, "inner"))
    if outer_kind == "repetition":
        if r != 1:
            raise ValueError("a repetition outer code requires r = 1")
        width = c1 if c1 is not None else math.ceil(Fraction(2) / (1 + 2 * eps2))
        outer = repetition_code(width)
    elif outer_kind == "search":
        outer = build_outer_code(r, eps2, seed=derive_seed(seed, "outer"))
    else:
        raise ValueError(f"unknown outer code kind {outer_kind!r}")
    return kronecker_compose(outer, inner.matrix, t_inner=t_inner,
                             eps1=eps1, eps2=eps2)


def load_artifact(obj: dict):
    """Rebuild a construction from its JSON envelope."""
    kind = obj.get("kind")
    if kind == "rs_augmented":
        return AugmentedCode.from_json(obj)
    if kind == "kronecker":
        return KroneckerCode.from_json(obj)
    if kind in ("matrix", "trivial", "noiseless", "random"):
        return SignatureMatrix.from_json(obj["matrix"] if "matrix" in obj else obj)
    raise ValueError(f"unknown artifact kind {kind!r}")
