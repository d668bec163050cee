"""The decision tree for almost universality, the exceptional-family
generator for negative verdicts, and the full analysis pipeline (hypothesis
gate + local scan + decision) that the CLI drives.

Branch order is fixed: local failure, then (1) p != 7 mod 8, then (2a)
ord_p(dN) even, (2b) an inert prime divides rad(dN), (2c) epsilon a
nonsquare mod p, and finally the coset-representation test (2d).
"""

import dataclasses
from dataclasses import dataclass

from . import intmath, lattice, localrep, oracle
from .errors import InternalParity

BRANCH_LOCAL = "local_failure"
BRANCH_1 = "1"
BRANCH_2A = "2a"
BRANCH_2B = "2b"
BRANCH_2C = "2c"
BRANCH_2D_HOLDS = "2d-holds"
BRANCH_2D_FAILS = "2d-fails"
BRANCH_SHORT_CIRCUIT = "short_circuit"

AU = "AlmostUniversal"
NOT_AU = "NotAlmostUniversal"
REJECTED = "HypothesisRejected"


@dataclass(frozen=True)
class ExceptionFamily:
    """The arithmetic progression of primes certifying a negative verdict.

    Values q^2 * t for primes q = +-rho mod p^alpha that split in
    Q(sqrt(-p)) are never represented by the coset.
    """

    t: int
    mu: int
    rho: int
    modulus: int
    p: int
    split_condition: str = "-p is a square mod q"

    def predicted_values(self, count):
        return [q * q * self.t for q in self.predicted_primes(count)]

    def predicted_primes(self, count):
        """First `count` odd primes q = +-rho (mod p^alpha) split in E."""
        out = []
        residues = {self.rho % self.modulus, (-self.rho) % self.modulus}
        q = 2
        while len(out) < count:
            q += 1
            if q == self.p or q % self.modulus not in residues:
                continue
            if not intmath.is_prime(q):
                continue
            if intmath.legendre(-self.p, q) != 1:
                continue
            out.append(q)
        return out


@dataclass(frozen=True)
class Verdict:
    decision: str
    branch: str
    trace: tuple
    local_reports: tuple
    instance: object = None
    gate_outcome: object = None
    exception_family: ExceptionFamily | None = None
    witness: tuple | None = None
    rad: int = 0
    rad_prime: int = 0


def scan_primes(gram, p=None):
    """Primes whose completions need an explicit universality check:
    2 and the odd divisors of dN, minus p."""
    dn = gram.det
    qs = {2} | {q for q in intmath.factorize(dn) if q % 2 == 1}
    qs.discard(p)
    return sorted(qs)


def local_scan(gram, p=None):
    """LocalReports for every prime in the scan set; all other completions
    are universal without search (odd unimodular ternary)."""
    return [localrep.local_universal(gram, q) for q in scan_primes(gram, p)]


def represents_coset(instance, t):
    """Exact: does some x in N have Q(nu + x) = t?  Witness triple or None."""
    return oracle.coset_witness(instance.as_coset(), t)


def exception_family(instance):
    """The family data (t, mu, rho) for a 2d-fails verdict.

    mu is the inverse of t modulo p^alpha (so predicted values land in the
    progression epsilon + p^alpha Z) and rho^2 = epsilon * mu mod p^alpha;
    the square root exists because conditions (b) and (c) both failed.
    """
    p, alpha = instance.p, instance.alpha
    modulus = instance.modulus
    t = intmath.radical_nonp(instance.dN, p)
    mu = pow(t, -1, modulus)
    rho = intmath.sqrt_mod_prime_power(instance.epsilon * mu % modulus, p, alpha)
    if rho is None:
        raise InternalParity(
            "epsilon * mu must be a square mod p when (b) and (c) fail")
    family = ExceptionFamily(t, mu, rho, modulus, p)
    assert rho * rho % modulus == instance.epsilon * mu % modulus
    return family


def predict_exceptions(family, count):
    """First `count` predicted-unrepresented values q^2 * t, ascending."""
    values = family.predicted_values(count)
    target = family.rho * family.rho * family.t % family.modulus
    for v in values:
        # every value lands in the progression epsilon + p^alpha * Z
        if v % family.modulus != target:
            raise InternalParity(f"value {v} escapes the target progression")
    return values


def decide(instance, reports=None):
    """Branch classification for a validated instance."""
    trace = []
    reports = list(local_scan(instance.gram, instance.p)) if reports is None \
        else list(reports)
    bad = next((r for r in reports if not r.universal), None)
    trace.append(("local_scan",
                  "all universal" if bad is None else
                  f"q = {bad.prime} misses class {bad.missed_class.representative}",
                  bad is None))
    if bad is not None:
        return Verdict(NOT_AU, f"{BRANCH_LOCAL}({bad.prime})", tuple(trace),
                       tuple(reports), instance=instance,
                       rad=intmath.radical(instance.dN),
                       rad_prime=intmath.radical_nonp(instance.dN, instance.p))

    p = instance.p
    dn = instance.dN
    rad = intmath.radical(dn)
    rad_p = intmath.radical_nonp(dn, p)

    trace.append(("(1) p mod 8", p % 8, p % 8 != 7))
    if p % 8 != 7:
        return Verdict(AU, BRANCH_1, tuple(trace), tuple(reports),
                       instance=instance, rad=rad, rad_prime=rad_p)

    ordp = intmath.valuation(dn, p)
    trace.append(("(2a) ord_p(dN)", ordp, ordp % 2 == 0))
    if ordp % 2 == 0:
        return Verdict(AU, BRANCH_2A, tuple(trace), tuple(reports),
                       instance=instance, rad=rad, rad_prime=rad_p)

    inert = [q for q in intmath.factorize(rad)
             if q not in (2, p) and intmath.legendre(-p, q) == -1]
    trace.append(("(2b) inert primes dividing rad(dN)", inert, bool(inert)))
    if inert:
        return Verdict(AU, BRANCH_2B, tuple(trace), tuple(reports),
                       instance=instance, rad=rad, rad_prime=rad_p)

    chi = intmath.legendre(instance.epsilon, p)
    trace.append(("(2c) legendre(epsilon, p)", chi, chi == -1))
    if chi == -1:
        return Verdict(AU, BRANCH_2C, tuple(trace), tuple(reports),
                       instance=instance, rad=rad, rad_prime=rad_p)

    witness = represents_coset(instance, rad_p)
    trace.append(("(2d) rad(dN)' represented by nu + N",
                  witness if witness is not None else "no witness",
                  witness is not None))
    if witness is not None:
        return Verdict(AU, BRANCH_2D_HOLDS, tuple(trace), tuple(reports),
                       instance=instance, witness=witness,
                       rad=rad, rad_prime=rad_p)
    family = exception_family(instance)
    return Verdict(NOT_AU, BRANCH_2D_FAILS, tuple(trace), tuple(reports),
                   instance=instance, exception_family=family,
                   rad=rad, rad_prime=rad_p)


def analyze(gram, shift, canonicalize=True):
    """Full pipeline: gate, local scan, decision.

    Gate rejections and the short-circuit still produce a Verdict carrying
    local reports and service data for the oracle.
    """
    outcome = lattice.gate(gram, shift, canonicalize=canonicalize)
    if isinstance(outcome, lattice.Instance):
        return dataclasses.replace(decide(outcome), gate_outcome=outcome)
    if isinstance(outcome, lattice.ShortCircuit):
        reports = local_scan(gram, outcome.p)
        trace = (("hypothesis_gate", outcome.detail, False),)
        return Verdict(NOT_AU, BRANCH_SHORT_CIRCUIT, trace, tuple(reports),
                       gate_outcome=outcome,
                       rad=intmath.radical(gram.det),
                       rad_prime=intmath.radical_nonp(gram.det, outcome.p))
    # plain rejection: service mode (no distinguished p)
    reports = local_scan(gram, None) if outcome.coset is not None else ()
    trace = (("hypothesis_gate", f"{outcome.reason}: {outcome.detail}", False),)
    return Verdict(REJECTED, "rejected", trace, tuple(reports),
                   gate_outcome=outcome, rad=intmath.radical(gram.det),
                   rad_prime=intmath.radical(gram.det))
