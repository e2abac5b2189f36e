"""Adder-channel model, signature verification, and generic decoding.

A signature matrix M is a k x n matrix over {0,...,q-1}; column j is the
codeword user j transmits when active.  The channel output for an activity
vector u in {0,1}^n is the integer (not modular) sum M u, and an adversary
may add an arbitrary integer error vector of Hamming weight at most t.

The central quantity is the distinguishing weight

    d_min(M) = min over nonzero z in {-1,0,1}^n of wt(M z),

because M u1 + e1 = M u2 + e2 with wt(e_i) <= t and u1 != u2 is possible
exactly when some z = u1 - u2 has wt(M z) <= 2t.  Hence M tolerates t
errors iff d_min >= 2t + 1.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

from .errors import AmbiguousDecoding, CapacityError, DecodingFailure

# Hard enumeration caps: verification walks 3^n sign patterns, decoding 2^n
# activity vectors.  Overridable per call or via SIGMAC_LIMIT_Z.
DEFAULT_Z_LIMIT = 18
DEFAULT_U_LIMIT = 24

InfoVector = tuple[int, ...]        # entries in {0,1}, one per user
ChannelWord = tuple[int, ...]       # length k, unbounded integers
ErrorPattern = Mapping[int, int]    # position -> nonzero value


def derive_seed(seed: int, *labels) -> int:
    """Stable child seed from a master seed and a component/counter path."""
    text = str(seed) + "".join(f"|{part}" for part in labels)
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


@dataclass(frozen=True)
class SignatureMatrix:
    """k x n query matrix over {0,...,q-1}; column j is user j's codeword."""

    q: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.q < 2:
            raise ValueError(f"alphabet size q must be >= 2, got {self.q}")
        if not self.rows or not self.rows[0]:
            raise ValueError("matrix must have at least one row and one column")
        width = len(self.rows[0])
        for r in self.rows:
            if len(r) != width:
                raise ValueError("ragged rows")
            for v in r:
                if not 0 <= v < self.q:
                    raise ValueError(f"entry {v} outside [0, {self.q - 1}]")

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def to_json(self) -> dict:
        return {"q": self.q, "k": self.k, "n": self.n,
                "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, obj: dict) -> "SignatureMatrix":
        m = cls(q=obj["q"], rows=tuple(tuple(r) for r in obj["rows"]))
        if m.k != obj["k"] or m.n != obj["n"]:
            raise ValueError("declared shape does not match rows")
        return m


def dumps_canonical(obj) -> str:
    """Bit-exact JSON encoding used for every serialized artifact."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


@dataclass(frozen=True)
class VerificationReport:
    d_min: int
    witness_z: tuple[int, ...]
    max_tolerable_t: int
    z_count_checked: int


def z_enumeration_limit(override: int | None = None) -> int:
    if override is not None:
        return override
    env = os.environ.get("SIGMAC_LIMIT_Z")
    return int(env) if env else DEFAULT_Z_LIMIT


def _check_info_vector(u: Sequence[int], n: int) -> None:
    if len(u) != n:
        raise ValueError(f"activity vector length {len(u)} != n = {n}")
    if any(b not in (0, 1) for b in u):
        raise ValueError("activity vector entries must be 0 or 1")


def encode(matrix: SignatureMatrix, u: Sequence[int]) -> ChannelWord:
    """Noiseless channel output M u over the integers."""
    _check_info_vector(u, matrix.n)
    active = [j for j, b in enumerate(u) if b]
    return tuple(sum(row[j] for j in active) for row in matrix.rows)


def apply_errors(y: Sequence[int], errors: ErrorPattern) -> ChannelWord:
    """Add a sparse integer error pattern; values are unrestricted in magnitude."""
    out = list(y)
    for pos, val in errors.items():
        if not 0 <= pos < len(out):
            raise ValueError(f"error position {pos} outside word of length {len(out)}")
        if val == 0:
            raise ValueError("error values must be nonzero")
        out[pos] += val
    return tuple(out)


def _column_support(matrix: SignatureMatrix) -> list[list[tuple[int, int]]]:
    rows = matrix.rows
    k = matrix.k
    return [[(i, rows[i][j]) for i in range(k) if rows[i][j]]
            for j in range(matrix.n)]


def min_distinguishing_weight(matrix: SignatureMatrix,
                              limit: int | None = None) -> VerificationReport:
    """Exact d_min by walking all 3^n - 1 nonzero sign patterns.

    The walk is a loopless reflected ternary Gray code, so consecutive
    patterns differ by +-1 in one coordinate and M z is updated in place at
    the cost of that column's support.  Stops early once a weight-0 pattern
    is found (no smaller value exists).
    """
    n, k = matrix.n, matrix.k
    budget = z_enumeration_limit(limit)
    if n > budget:
        raise CapacityError(
            f"n={n} exceeds the 3^n enumeration limit ({budget}); raise the "
            f"limit argument or SIGMAC_LIMIT_Z to override"
        )
    support = _column_support(matrix)
    # Start at z = (-1,...,-1), i.e. all digits 0 with z_j = digit_j - 1.
    y = [-sum(r) for r in matrix.rows]
    nonzero = sum(1 for v in y if v)
    digits = [0] * n
    focus = list(range(n + 1))
    direction = [1] * n
    ones = 0                       # digits equal to 1; z == 0 iff ones == n
    best = nonzero
    witness = tuple(-1 for _ in range(n))
    checked = 1
    while best > 0:
        j = focus[0]
        focus[0] = 0
        if j == n:
            break
        step = direction[j]
        old = digits[j]
        new = old + step
        digits[j] = new
        if new == 0 or new == 2:
            direction[j] = -step
            focus[j] = focus[j + 1]
            focus[j + 1] = j + 1
        if old == 1:
            ones -= 1
        elif new == 1:
            ones += 1
        for i, v in support[j]:
            w = y[i]
            nv = w + step * v
            if w == 0:
                nonzero += 1
            elif nv == 0:
                nonzero -= 1
            y[i] = nv
        if ones != n:
            checked += 1
            if nonzero < best:
                best = nonzero
                witness = tuple(d - 1 for d in digits)
    return VerificationReport(
        d_min=best,
        witness_z=witness,
        max_tolerable_t=(best - 1) // 2,
        z_count_checked=checked,
    )


def tolerates(matrix: SignatureMatrix, t: int, limit: int | None = None) -> bool:
    """True iff M corrects any t adversarial output errors (d_min >= 2t+1)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    return min_distinguishing_weight(matrix, limit).d_min >= 2 * t + 1


def decode_min_distance(y: Sequence[int], matrix: SignatureMatrix, t: int,
                        limit: int | None = None) -> InfoVector:
    """Return the activity vector u minimizing wt(y - M u).

    Enumerates all 2^n candidates with a Gray-code walk.  When the matrix
    tolerates t errors and at most t positions were corrupted, the minimizer
    is unique and equals the transmitted vector.  A tie at the minimum, or a
    second candidate within distance t, raises AmbiguousDecoding instead of
    silently picking one.
    """
    n, k = matrix.n, matrix.k
    if len(y) != k:
        raise ValueError(f"received word length {len(y)} != k = {k}")
    budget = DEFAULT_U_LIMIT if limit is None else limit
    if n > budget:
        raise CapacityError(
            f"n={n} exceeds the 2^n decoding limit ({budget}); "
            f"raise the limit argument to override"
        )
    support = _column_support(matrix)
    u = [0] * n
    diff = list(y)
    nonzero = sum(1 for v in diff if v)
    best = nonzero
    best_u = tuple(u)
    ties = 1
    within_budget = 1 if nonzero <= t else 0
    for counter in range(1, 1 << n):
        j = (counter & -counter).bit_length() - 1
        u[j] ^= 1
        step = 1 if u[j] else -1
        for i, v in support[j]:
            w = diff[i]
            nv = w - step * v
            if w == 0:
                nonzero += 1
            elif nv == 0:
                nonzero -= 1
            diff[i] = nv
        if nonzero < best:
            best = nonzero
            best_u = tuple(u)
            ties = 1
        elif nonzero == best:
            ties += 1
        if nonzero <= t:
            within_budget += 1
    if ties > 1:
        raise AmbiguousDecoding(
            f"{ties} candidates at minimum distance {best}"
        )
    if within_budget > 1:
        raise AmbiguousDecoding(
            f"{within_budget} candidates within the error budget t={t}"
        )
    return best_u


@dataclass(frozen=True)
class AdversarialWitness:
    """A concrete confusion: M u1 + e1 == M u2 + e2 with wt(e_i) <= t."""

    u1: InfoVector
    u2: InfoVector
    e1: dict[int, int]
    e2: dict[int, int]


def adversarial_witness(matrix: SignatureMatrix, t: int,
                        limit: int | None = None) -> Optional[AdversarialWitness]:
    """Split a low-weight sign pattern into an explicit confusion, if one exists.

    Returns None exactly when tolerates(matrix, t).  Otherwise takes a
    nonzero z with wt(M z) <= 2t, writes z = u1 - u2 with binary u1, u2, and
    spreads the difference M z over two error vectors of weight <= t each.
    """
    report = min_distinguishing_weight(matrix, limit)
    if report.d_min >= 2 * t + 1:
        return None
    z = report.witness_z
    u1 = tuple(1 if v == 1 else 0 for v in z)
    u2 = tuple(1 if v == -1 else 0 for v in z)
    mz = [sum(row[j] * z[j] for j in range(matrix.n) if z[j]) for row in matrix.rows]
    supp = [i for i, v in enumerate(mz) if v]
    cut = len(supp) // 2
    e2 = {i: mz[i] for i in supp[:cut]}
    e1 = {i: -mz[i] for i in supp[cut:]}
    y1 = apply_errors(encode(matrix, u1), e1)
    y2 = apply_errors(encode(matrix, u2), e2)
    assert y1 == y2, "witness construction must produce a collision"
    return AdversarialWitness(u1, u2, e1, e2)


RANDOM_ERRORS = "random-positions-random-values"
WORST_CASE_ERRORS = "worst-case-from-witness"


@dataclass(frozen=True)
class TrialRecord:
    success: bool
    transmitted: InfoVector
    decoded: Optional[InfoVector]
    errors: dict[int, int]
    mode: str
    seed: int
    note: str = ""


def _draw_error_pattern(rng: random.Random, k: int, t: int,
                        value_range: tuple[int, int]) -> dict[int, int]:
    lo, hi = value_range
    if lo > hi or (lo == 0 == hi):
        raise ValueError(f"value range [{lo}, {hi}] contains no nonzero value")
    positions = sorted(rng.sample(range(k), t))
    errors = {}
    for pos in positions:
        val = 0
        while val == 0:
            val = rng.randint(lo, hi)
        errors[pos] = val
    return errors


def simulate_round(matrix: SignatureMatrix, u: Sequence[int], t: int,
                   error_mode: str, seed: int,
                   value_range: tuple[int, int] | None = None,
                   decoder: Callable[[ChannelWord], InfoVector] | None = None,
                   witness: Optional[AdversarialWitness] = None,
                   limit: int | None = None) -> TrialRecord:
    """One encode / corrupt / decode round, deterministic given the seed.

    In random mode, exactly t positions are hit with values drawn uniformly
    from value_range minus {0} (default [-n(q-1), n(q-1)]).  In worst-case
    mode the transmitted vector and errors come from adversarial_witness;
    when no witness exists (the matrix tolerates t) the round falls back to
    a random draw and notes that.  A decoder for the specific code may be
    injected; the default is minimum-distance decoding at budget t.
    """
    _check_info_vector(u, matrix.n)
    if t < 0 or t > matrix.k:
        raise ValueError(f"need 0 <= t <= k, got t={t}")
    note = ""
    transmitted = tuple(u)
    if error_mode == RANDOM_ERRORS:
        rng = random.Random(derive_seed(seed, "simulate"))
        span = matrix.n * (matrix.q - 1)
        errors = _draw_error_pattern(rng, matrix.k, t, value_range or (-span, span))
    elif error_mode == WORST_CASE_ERRORS:
        if witness is None:
            witness = adversarial_witness(matrix, t, limit)
        if witness is None:
            rng = random.Random(derive_seed(seed, "simulate"))
            span = matrix.n * (matrix.q - 1)
            errors = _draw_error_pattern(rng, matrix.k, t, value_range or (-span, span))
            note = "no adversarial witness exists at this budget; random draw used"
        else:
            transmitted = witness.u1
            errors = dict(witness.e1)
    else:
        raise ValueError(f"unknown error mode {error_mode!r}")
    received = apply_errors(encode(matrix, transmitted), errors)
    decode = decoder or (lambda word: decode_min_distance(word, matrix, t, limit))
    try:
        decoded = decode(received)
    except (AmbiguousDecoding, DecodingFailure) as exc:
        return TrialRecord(False, transmitted, None, errors, error_mode, seed,
                           note=f"{type(exc).__name__}: {exc}")
    return TrialRecord(decoded == transmitted, transmitted, decoded, errors,
                       error_mode, seed, note=note)
