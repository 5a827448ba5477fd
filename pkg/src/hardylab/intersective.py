"""Roots of integer polynomials modulo prime powers and intersectivity screening.

A collection q_1, ..., q_k of integer polynomials is jointly intersective
if for every modulus m some n has q_1(n) = ... = q_k(n) = 0 (mod m).  By
CRT it is enough to check prime powers, so the screening walks the prime
powers up to a bound M: a missing root is a *certificate* of failure
(NoWitness), while passing every check up to M is evidence only (AllPass
never claims unconditional intersectivity).

Roots mod p^k are found by exhaustive search mod p followed by Hensel
lifting; singular roots (q'(r) = 0 mod p) fall back to branching over all
p lifts, which stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class IntPoly:
    """Integer polynomial, constant term first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = [int(c) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -1

    def __call__(self, n):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    def eval_mod(self, n, m):
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * n + c) % m
        return acc

    def derivative(self):
        return IntPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def __mul__(self, other):
        if not self.coeffs or not other.coeffs:
            return IntPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPoly(out)

    def __eq__(self, other):
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}t" if c != 1 else "t")
            else:
                parts.append(f"{c}t^{i}" if c != 1 else f"t^{i}")
        return " + ".join(reversed(parts))


@dataclass
class IntersectivityReport:
    """AllPass up to max_modulus, or NoWitness at the least failing one."""

    passed: bool
    max_modulus: int = 0
    failing_modulus: int = 0
    witnesses: dict = field(default_factory=dict)  # prime power -> common root

    @property
    def kind(self):
        return "all_pass" if self.passed else "no_witness"

    def to_json(self):
        out = {"kind": self.kind}
        if self.passed:
            out["max_modulus"] = self.max_modulus
            out["witnesses"] = {str(m): r for m, r in sorted(self.witnesses.items())}
        else:
            out["failing_modulus"] = self.failing_modulus
        return out


def _primes_up_to(n):
    sieve = bytearray([1]) * (n + 1) if n >= 0 else bytearray()
    out = []
    if n >= 2:
        sieve = bytearray([1]) * (n + 1)
        sieve[0:2] = b"\x00\x00"
        for p in range(2, n + 1):
            if sieve[p]:
                out.append(p)
                sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return out


def _factorize(m):
    out = {}
    d = 2
    while d * d <= m:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


_BRANCH_LIMIT = 4096


def _roots_mod_prime_power(q, p, k):
    """Sorted residues r mod p^k with q(r) = 0, by lifting from mod p."""
    roots = [r for r in range(p) if q.eval_mod(r, p) == 0]
    if k == 1:
        return roots
    dq = q.derivative()
    mod = p
    for _ in range(k - 1):
        nxt = []
        target = mod * p
        for r in roots:
            if dq.eval_mod(r, p) != 0:
                # nonsingular: unique Hensel lift
                val = q.eval_mod(r, target)
                inv = pow(dq.eval_mod(r, p), -1, p)
                t = (-(val // mod) * inv) % p
                nxt.append(r + t * mod)
            else:
                # singular: all lifts are candidates iff q(r) = 0 mod target
                if q.eval_mod(r, target) == 0:
                    nxt.extend(r + t * mod for t in range(p))
            if len(nxt) > _BRANCH_LIMIT:
                # degenerate blowup: certify by exhaustive search instead
                return [r for r in range(target) if q.eval_mod(r, target) == 0]
        roots = nxt
        mod = target
    return sorted(set(roots))


def roots_mod(q, m):
    """All residues n mod m with q(n) = 0 (mod m), via CRT over prime powers."""
    if m < 1:
        raise ValueError("modulus must be positive")
    if m == 1:
        return [0]
    if not q:
        return list(range(m))
    parts = []
    for p, k in sorted(_factorize(m).items()):
        rs = _roots_mod_prime_power(q, p, k)
        if not rs:
            return []
        parts.append((p ** k, rs))
    # CRT combination
    combined = [(1, 0)]
    for mod, rs in parts:
        new = []
        for tot_mod, r0 in combined:
            inv = pow(tot_mod, -1, mod)
            for r in rs:
                t = ((r - r0) * inv) % mod
                new.append((tot_mod * mod, r0 + t * tot_mod))
        combined = new
    return sorted(r for _, r in combined)


def _prime_powers_ascending(M):
    pps = []
    for p in _primes_up_to(M):
        pk = p
        while pk <= M:
            pps.append((pk, p))
            pk *= p
    pps.sort()
    return pps


def _maximal_prime_powers(M):
    out = []
    for p in _primes_up_to(M):
        pk = p
        while pk * p <= M:
            pk *= p
        out.append((pk, p))
    return sorted(out)


def is_intersective_up_to(q, M):
    """Screen a single polynomial against all prime powers <= M.

    Primes are visited in ascending order and, within a prime, powers
    ascend; the reported NoWitness modulus is the first failure in that
    walk (the least failing power of the least failing prime).
    """
    if not q:
        raise ValueError("zero polynomial")
    witnesses = {}
    for p in _primes_up_to(M):
        roots = None
        pk, k = p, 1
        while pk <= M:
            roots = _roots_mod_prime_power(q, p, k)
            if not roots:
                return IntersectivityReport(False, failing_modulus=pk)
            witnesses[pk] = min(roots)
            pk *= p
            k += 1
    maxpps = {pk for pk, _ in _maximal_prime_powers(M)}
    witnesses = {pk: r for pk, r in witnesses.items() if pk in maxpps}
    return IntersectivityReport(True, max_modulus=M, witnesses=witnesses)


def jointly_intersective_up_to(polys, M):
    """Screen a family for common roots mod every prime power <= M."""
    polys = list(polys)
    if not polys:
        raise ValueError("empty family")
    witnesses = {}
    failing = None
    # ascending order so a failure is the least failing modulus
    for pk, p in _prime_powers_ascending(M):
        common = None
        for q in polys:
            rs = set(_roots_mod_prime_power(q, p, _valuation(pk, p)))
            common = rs if common is None else (common & rs)
            if not common:
                failing = pk
                break
        if failing is not None:
            return IntersectivityReport(False, failing_modulus=failing)
        witnesses[pk] = min(common)
    # keep only maximal prime powers in the report (others are implied)
    maxpps = {pk for pk, _ in _maximal_prime_powers(M)}
    witnesses = {pk: r for pk, r in witnesses.items() if pk in maxpps}
    return IntersectivityReport(True, max_modulus=M, witnesses=witnesses)


def _valuation(pk, p):
    k = 0
    while pk % p == 0:
        pk //= p
        k += 1
    return k
