"""Constructive certificates for arbitrarily long runs of p-happy integers.

The construction rests on two exact identities:

* the all-ones number ones(x) = 1*1! + 1*2! + ... + 1*x! steps to x for
  every exponent, so every positive integer has a preimage;
* if x is padded with t low zeros and y has at most t digits, the digit
  multisets of pad(x) + y are disjoint, so
  step(pad_t(x) + y) = step(x) + step(y).

Chaining the two yields numbers l_0 whose next m successors all funnel
into a chosen fixed point p. The chain levels grow as towers of
factorials (the digit count of one level equals the *value* of the
next), so certificates stay symbolic: a ChainNumber records base, pad
width and depth, and verification replays the step map one level at a
time, checking the digit-count side condition exactly at each step and
finishing with ordinary integer iteration on the small concrete tail.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .dynamics import AttractorAtlas, classify, happy_step, happy_step_nat, iterate
from .factoradic import FactoradicRep, add, digit_count, shift, to_factoradic, to_natural


class WitnessError(RuntimeError):
    """An offset failed to steer every attractor member into the target."""


class ReplayError(RuntimeError):
    """Symbolic replay of a certificate broke an exact side condition."""


class SizeCapError(RuntimeError):
    """Materializing a chain would exceed the allowed digit count."""


class PaddingTooSmallError(ValueError):
    """strict additivity check called with fewer pad zeros than y has digits."""


def preimage_ones(x: int) -> FactoradicRep:
    """The all-ones representation of length x; its step image is x for any e."""
    if x < 1:
        raise ValueError(f"need a positive length, got {x}")
    return FactoradicRep((1,) * x)


def additivity_check(x: int, y: int, t: int, e: int, *, strict: bool = False) -> bool:
    """Evaluate step(pad_t(x) + y) == step(x) + step(y) concretely.

    True is guaranteed whenever t >= digit_count(y); with a smaller t
    the identity can fail, which is exactly what makes the negative
    cases informative. strict=True raises instead of evaluating when
    the side condition does not hold.
    """
    if x < 1 or y < 0 or t < 0:
        raise ValueError(f"need x >= 1, y >= 0, t >= 0, got {(x, y, t)}")
    if strict and t < digit_count(y):
        raise PaddingTooSmallError(
            f"t={t} is below the {digit_count(y)} digits of y={y}")
    padded = to_natural(shift(to_factoradic(x), t)) + y
    return happy_step_nat(padded, e) == happy_step_nat(x, e) + happy_step_nat(y, e)


@dataclass(frozen=True)
class NiceWitness:
    """An offset that drives every attractor member of an exponent to p.

    q_by_member[u] is the measured first-passage count: iterating the
    step map q_by_member[u] times from offset + u lands exactly on p.
    """

    e: int
    p: int
    offset: int
    q_by_member: dict[int, int]


def nice_check(e: int, p: int, offset: int, atlas: AttractorAtlas, *,
               cap: int = 1000) -> NiceWitness:
    """Verify that offset + u iterates to p for every attractor member u.

    Members are taken from the atlas (fixed points and all cycle
    members). Raises WitnessError naming the first failing member and
    where its orbit actually went. The cap is a safety net far above
    the step counts seen in practice (at most 12 for the bundled
    witnesses).
    """
    if atlas.e != e:
        raise ValueError(f"atlas is for exponent {atlas.e}, not {e}")
    if p not in atlas.fixed_points:
        raise WitnessError(f"{p} is not a fixed point for e={e}")
    members = sorted(
        m for att in atlas.attractors for m in att.members)
    q_by_member: dict[int, int] = {}
    for u in members:
        v = offset + u
        q = 0
        while v != p:
            v = happy_step_nat(v, e)
            q += 1
            if q > cap:
                landed = classify(offset + u, e, atlas).attractor
                raise WitnessError(
                    f"offset {offset}: member {u} did not reach {p} within "
                    f"{cap} steps (orbit settles on {landed.text})")
        q_by_member[u] = q
    return NiceWitness(e=e, p=p, offset=offset, q_by_member=q_by_member)


@dataclass(frozen=True)
class ChainNumber:
    """Symbolic tower value. depth 0 is the concrete integer base.

    For depth r >= 1 the value is defined top-down: level r is base,
    and level j (j < r) is the all-ones number of length value(level
    j+1), padded with shift low zeros. One step of the map therefore
    sends level j to level j+1, and sends level j plus a small y to
    level j+1 plus step(y) provided y fits in the pad.
    """

    base: int
    shift: int
    depth: int

    def __post_init__(self) -> None:
        if self.base < 0 or self.shift < 0 or self.depth < 0:
            raise ValueError("base, shift and depth must be nonnegative")
        if self.depth > 0 and self.base < 1:
            raise ValueError("a chain of positive depth needs base >= 1")


@dataclass(frozen=True)
class SequenceCertificate:
    """Witness that chain + 1, ..., chain + m all iterate to p.

    steps_by_index[i] is the exact total number of steps taken by
    chain + i: depth symbolic peels followed by the concrete tail.
    """

    e: int
    p: int
    m: int
    t: int
    r: int
    offset: int
    chain: ChainNumber
    steps_by_index: dict[int, int]
    size_note: str


def replay_run(cert: SequenceCertificate, i: int, *, cap: int = 10_000) -> int:
    """Replay the orbit of chain + i down to p; return the exact step count.

    The first r steps rewrite (level j) + y to (level j+1) + step(y),
    checking the pad condition digit_count(y) <= t exactly; afterwards
    the value is the small integer offset + y and plain iteration
    finishes the job. Any violated side condition or a tail that misses
    p raises ReplayError, since the construction guarantees both.
    """
    if not 1 <= i <= cert.m:
        raise ValueError(f"index {i} outside [1, {cert.m}]")
    y = i
    steps = 0
    for _ in range(cert.r):
        if digit_count(y) > cert.t:
            raise ReplayError(
                f"index {i}: intermediate {y} has more than t={cert.t} digits")
        y = happy_step_nat(y, cert.e)
        steps += 1
    v = cert.offset + y
    while v != cert.p:
        v = happy_step_nat(v, cert.e)
        steps += 1
        if steps - cert.r > cap:
            raise ReplayError(
                f"index {i}: concrete tail from {cert.offset + y} "
                f"missed {cert.p} within {cap} steps")
    return steps


def build_sequence(e: int, p: int, m: int, witness: NiceWitness,
                   atlas: AttractorAtlas) -> SequenceCertificate:
    """Construct and verify a certificate for m consecutive p-happy integers.

    Chooses the least depth r such that every i in [1, m] reaches an
    attractor member within r steps, and the least pad width t covering
    every intermediate digit count. The witness supplies the tail step
    counts; total steps per index are then r plus the tail. The
    certificate is only returned after replay_run confirms every index.
    """
    if m < 1:
        raise ValueError(f"run length must be positive, got {m}")
    if witness.e != e or witness.p != p:
        raise ValueError(
            f"witness is for (e={witness.e}, p={witness.p}), not (e={e}, p={p})")
    if atlas.e != e:
        raise ValueError(f"atlas is for exponent {atlas.e}, not {e}")
    r = max(classify(i, e, atlas).steps_to_attractor for i in range(1, m + 1))
    if r > 0 and witness.offset < 1:
        raise WitnessError(
            "offset 0 cannot seed a chain: the all-ones preimage needs a "
            "positive length")
    t = 0
    steps_by_index: dict[int, int] = {}
    for i in range(1, m + 1):
        v = i
        for _ in range(r + 1):
            t = max(t, digit_count(v))
            v = happy_step_nat(v, e)
        u = iterate(i, e, r)
        if u not in witness.q_by_member:
            raise WitnessError(
                f"value {u} reached from {i} is not covered by the witness")
        steps_by_index[i] = witness.q_by_member[u] + r
    chain = ChainNumber(base=witness.offset, shift=t, depth=r)
    cert = SequenceCertificate(
        e=e, p=p, m=m, t=t, r=r, offset=witness.offset, chain=chain,
        steps_by_index=steps_by_index, size_note=_size_note(chain),
    )
    for i in range(1, m + 1):
        measured = replay_run(cert, i)
        if measured != steps_by_index[i]:
            raise ReplayError(
                f"index {i}: replay took {measured} steps, expected "
                f"{steps_by_index[i]}")
    return cert


def _level_width_log10(chain: ChainNumber) -> float:
    """log10 of a lower bound on the expanded digit count of the chain.

    Tracks the digit count level by level from the top; each step down,
    the next digit count is pad + value(current level), and the value
    of a level with w digits is at least (w)!. Once a level passes
    10^18 digits the walk stops, so deep towers report the first
    astronomical level rather than the (even larger) final one.
    """
    width = chain.shift + chain.base
    for _ in range(chain.depth - 1):
        log_value = math.lgamma(width + 1) / math.log(10)
        if log_value > 18:
            return log_value
        ones_len = width - chain.shift
        width = chain.shift + sum(
            math.factorial(chain.shift + i) for i in range(1, ones_len + 1))
    return math.log10(max(width, 1))


def _size_note(chain: ChainNumber) -> str:
    if chain.depth == 0:
        return f"concrete value {chain.base}"
    if chain.depth == 1:
        return (f"ones block of length {chain.base} shifted by {chain.shift} "
                f"({chain.shift + chain.base} digits)")
    return (f"ones-block tower: depth {chain.depth}, pad {chain.shift}, "
            f"top value {chain.base}; at least 10^{_level_width_log10(chain):.0f} "
            f"digits when expanded")


def materialize(chain: ChainNumber, size_cap: int) -> FactoradicRep:
    """Expand a chain to an explicit digit string if it fits under size_cap.

    The feasibility check walks the levels exactly: the digit count of
    each level is the pad plus the value of the level above, so for
    typical offsets a depth-2 chain already needs more digits than any
    practical cap, while degenerate chains with tiny tops stay small.
    Failures carry the symbolic size estimate.
    """
    if chain.depth == 0:
        return to_factoradic(chain.base)
    width = chain.base
    for level in range(chain.depth):
        # A level of width w and pad t expands to t + w digits.
        if chain.shift + width > size_cap:
            raise SizeCapError(
                f"level {chain.depth - 1 - level} needs {chain.shift + width} "
                f"digits, above the cap of {size_cap} ({_size_note(chain)})")
        if level == chain.depth - 1:
            return shift(preimage_ones(width), chain.shift)
        # Next level's width is this level's value. Estimate first: the
        # value exceeds (shift + width)!, so beyond a small threshold it
        # cannot fit under any practical cap.
        if math.lgamma(chain.shift + width + 1) / math.log(10) > len(str(size_cap)) + 1:
            raise SizeCapError(
                f"level {chain.depth - 2 - level} would need about "
                f"10^{_level_width_log10(chain):.0f} digits, above the cap of "
                f"{size_cap} ({_size_note(chain)})")
        width = sum(math.factorial(chain.shift + i) for i in range(1, width + 1))
    raise AssertionError("unreachable")


def verify_concrete(cert: SequenceCertificate, *, size_cap: int = 10 ** 6) -> None:
    """Cross-check the symbolic replay against explicit digit strings.

    Materializes the chain (raising SizeCapError when it cannot fit),
    adds each index with full carry propagation, applies the first step
    directly on the digit string and the rest on plain integers, and
    demands the exact step counts of the certificate. The digit-string
    step is the one the symbolic replay performs by rewriting, so this
    closes the loop for every chain small enough to expand.
    """
    rep = materialize(cert.chain, size_cap)
    for i in range(1, cert.m + 1):
        with_index = add(rep, i)
        if cert.r == 0:
            value = to_natural(with_index)
            steps = 0
        else:
            value = happy_step(with_index, cert.e)
            steps = 1
            if cert.r == 1 and value != cert.offset + happy_step_nat(i, cert.e):
                raise ReplayError(
                    f"index {i}: digit-string step gave {value}, symbolic "
                    f"replay predicts {cert.offset + happy_step_nat(i, cert.e)}")
        budget = cert.steps_by_index[i]
        while value != cert.p:
            value = happy_step_nat(value, cert.e)
            steps += 1
            if steps > budget:
                raise ReplayError(
                    f"index {i}: concrete orbit missed {cert.p} within "
                    f"{budget} steps")
        if steps != budget:
            raise ReplayError(
                f"index {i}: concrete orbit took {steps} steps, certificate "
                f"says {budget}")


def certificate_to_json(cert: SequenceCertificate) -> str:
    """Stable JSON form: e, p, m, t, r, l, per_i, size_note in that order."""
    obj = {
        "e": cert.e,
        "p": cert.p,
        "m": cert.m,
        "t": cert.t,
        "r": cert.r,
        "l": cert.offset,
        "per_i": [{"i": i, "steps": cert.steps_by_index[i]}
                  for i in sorted(cert.steps_by_index)],
        "size_note": cert.size_note,
    }
    return json.dumps(obj)
