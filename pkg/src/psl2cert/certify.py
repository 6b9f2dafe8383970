"""Maximal-subgroup elimination and machine-checkable surjectivity
certificates.

For a prime l >= 11 and a set of witness primes p with exact L-polynomial
data, three branches are eliminated by pure residue arithmetic:

  borel        some witness has P_p^(4)(eps * p^(4e)) nonzero mod l for all
               four choices of (eps, e) in {+-1} x {0, 1};
  cartan       some witness has P_p^(4) mod l equal to neither (1-T)^4 nor
               (1+T)^4 (the split case is subsumed by the borel branch);
  exceptional  some witness has u_p mod l outside {0, 1, 2, 4} with
               u_p^2 - 3 u_p + 1 nonzero.

A certificate records every residue it relied on together with the exact
rational witness data, so an independent checker can re-verify it without
recomputing any point counts.  The reduction from these residue conditions
to actual surjectivity onto PSL2(F_l) is external to this artifact.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .lpoly import MODE_FE, LPolynomial, lpolynomial, shape_classify
from .modarith import is_prime, primes_in_range
from .qpoly import (
    Q,
    QPolynomial,
    discriminant,
    eval_exact,
    nth_power_poly,
    reduce_mod,
    reduce_poly_mod,
)

MIN_ELL = 11

# (eps, e) choices of the borel branch, in fixed order
BOREL_POINTS = ((1, 0), (-1, 0), (1, 1), (-1, 1))

EXCEPTIONAL_TRACE_SET = (0, 1, 2, 4)


class OutOfRangeError(ValueError):
    """l below 11 (or otherwise outside the certifiable range)."""


class CertificateError(ValueError):
    """A certificate failed independent re-verification."""


@dataclass(frozen=True)
class WitnessData:
    """Exact per-witness inputs: P_p, its fourth power transform, the
    trace-square invariant, and the four borel evaluation values."""

    p: int
    lp: LPolynomial
    p4: QPolynomial
    u: Fraction
    borel_values: tuple[Fraction, ...]  # P4 at eps * p^(4e), BOREL_POINTS order
    disc: Fraction  # discriminant of P_p (separability support fact)

    @staticmethod
    def from_lpolynomial(lp: LPolynomial) -> "WitnessData":
        p4 = nth_power_poly(lp.as_qpoly(), 4)
        shape = shape_classify(lp)
        values = tuple(eval_exact(p4, eps * Q(lp.p) ** (4 * e)) for eps, e in BOREL_POINTS)
        return WitnessData(lp.p, lp, p4, shape.u, values, discriminant(lp.as_qpoly()))

    @staticmethod
    def from_prime(p: int, mode: str = MODE_FE, jobs: int = 1) -> "WitnessData":
        return WitnessData.from_lpolynomial(lpolynomial(p, mode, jobs))


@dataclass(frozen=True)
class BorelRecord:
    eliminated_by: int | None
    witness_residues: tuple[tuple[int, tuple[tuple[int, int, int], ...]], ...]
    failed: tuple[int, ...]

    @property
    def eliminated(self) -> bool:
        return self.eliminated_by is not None


@dataclass(frozen=True)
class CartanRecord:
    eliminated_by: int | None
    witness_reductions: tuple[tuple[int, tuple[int, ...]], ...]
    separability: tuple[tuple[int, int], ...]  # disc(P_p) mod l per witness
    failed: tuple[int, ...]

    @property
    def eliminated(self) -> bool:
        return self.eliminated_by is not None


@dataclass(frozen=True)
class ExceptionalRecord:
    eliminated_by: int | None
    witness_u: tuple[tuple[int, int], ...]
    failed: tuple[int, ...]

    @property
    def eliminated(self) -> bool:
        return self.eliminated_by is not None


@dataclass(frozen=True)
class Certificate:
    ell: int
    witnesses: tuple[int, ...]
    borel: BorelRecord
    cartan: CartanRecord
    exceptional: ExceptionalRecord
    witness_data: tuple[WitnessData, ...]

    @property
    def verdict(self) -> str:
        records = (self.borel, self.cartan, self.exceptional)
        return "Certified" if all(r.eliminated for r in records) else "Inconclusive"

    def failed_branches(self) -> list[str]:
        out = []
        for name in ("borel", "cartan", "exceptional"):
            if not getattr(self, name).eliminated:
                out.append(name)
        return out


def _validate(ell: int, witnesses: tuple[int, ...]):
    if not is_prime(ell):
        raise ValueError(f"l = {ell} is not prime")
    if ell < MIN_ELL:
        raise OutOfRangeError(f"l = {ell} is below the certifiable range (l >= {MIN_ELL})")
    if not witnesses:
        raise ValueError("witness set is empty")
    for p in witnesses:
        if not is_prime(p) or p == 2:
            raise ValueError(f"witness {p} is not an odd prime")
        if p == ell:
            raise ValueError(f"witness {p} coincides with l")


def eliminate_borel(ell: int, data: list[WitnessData]) -> BorelRecord:
    """One witness whose four evaluations are all nonzero mod l suffices."""
    residues = []
    eliminated_by = None
    failed = []
    for wd in data:
        res = tuple(
            (eps, e, reduce_mod(val, ell))
            for (eps, e), val in zip(BOREL_POINTS, wd.borel_values)
        )
        residues.append((wd.p, res))
        if all(r for _, _, r in res):
            if eliminated_by is None:
                eliminated_by = wd.p
        else:
            failed.append(wd.p)
    return BorelRecord(eliminated_by, tuple(residues), tuple(failed))


_PLUS_ONE_QUARTIC = QPolynomial([1, 1]) ** 4
_MINUS_ONE_QUARTIC = QPolynomial([1, -1]) ** 4


def eliminate_cartan(ell: int, data: list[WitnessData]) -> CartanRecord:
    """Non-split branch: some witness has P_p^(4) mod l equal to neither
    (1 - T)^4 nor (1 + T)^4.  Separability of each P_p mod l is recorded as
    the supporting fact for the normalizer-coset argument."""
    plus = reduce_poly_mod(_PLUS_ONE_QUARTIC, ell, 5)
    minus = reduce_poly_mod(_MINUS_ONE_QUARTIC, ell, 5)
    reductions = []
    separability = []
    eliminated_by = None
    failed = []
    for wd in data:
        red = reduce_poly_mod(wd.p4, ell, 5)
        reductions.append((wd.p, red))
        separability.append((wd.p, reduce_mod(wd.disc, ell)))
        if red != plus and red != minus:
            if eliminated_by is None:
                eliminated_by = wd.p
        else:
            failed.append(wd.p)
    return CartanRecord(eliminated_by, tuple(reductions), tuple(separability), tuple(failed))


def eliminate_exceptional(ell: int, data: list[WitnessData]) -> ExceptionalRecord:
    """Some witness must have u_p mod l outside {0, 1, 2, 4} and not a root
    of u^2 - 3u + 1."""
    values = []
    eliminated_by = None
    failed = []
    for wd in data:
        u = reduce_mod(wd.u, ell)
        values.append((wd.p, u))
        small = {x % ell for x in EXCEPTIONAL_TRACE_SET}
        if u not in small and (u * u - 3 * u + 1) % ell != 0:
            if eliminated_by is None:
                eliminated_by = wd.p
        else:
            failed.append(wd.p)
    return ExceptionalRecord(eliminated_by, tuple(values), tuple(failed))


def certify_with_data(ell: int, data: list[WitnessData]) -> Certificate:
    witnesses = tuple(wd.p for wd in data)
    _validate(ell, witnesses)
    return Certificate(
        ell,
        witnesses,
        eliminate_borel(ell, data),
        eliminate_cartan(ell, data),
        eliminate_exceptional(ell, data),
        tuple(data),
    )


def certify(ell: int, witnesses=(3, 5), mode: str = MODE_FE, jobs: int = 1) -> Certificate:
    """Run the three-branch elimination for one l; witnesses default to the
    smallest usable primes 3 and 5."""
    witnesses = tuple(witnesses)
    _validate(ell, witnesses)
    data = [WitnessData.from_prime(p, mode, jobs) for p in witnesses]
    return certify_with_data(ell, data)


@dataclass(frozen=True)
class RangeReport:
    """Certificates for a prime range, with per-l errors aggregated rather
    than aborting the sweep (a witness prime inside the range, say).
    Iterating yields the certificates in ascending l."""

    certificates: tuple[Certificate, ...]
    errors: tuple[tuple[int, str], ...]

    def __iter__(self):
        return iter(self.certificates)

    def __len__(self) -> int:
        return len(self.certificates)

    @property
    def certified_count(self) -> int:
        return sum(1 for c in self.certificates if c.verdict == "Certified")

    @property
    def all_certified(self) -> bool:
        return not self.errors and self.certified_count == len(self.certificates)


def _certify_prime_range(lo: int, hi: int, data) -> tuple[list[Certificate], list[tuple[int, str]]]:
    certs: list[Certificate] = []
    errors: list[tuple[int, str]] = []
    for ell in primes_in_range(lo, hi):
        try:
            certs.append(certify_with_data(ell, data))
        except ValueError as exc:
            errors.append((ell, str(exc)))
    return certs, errors


def _range_worker(args):
    lo, hi, data = args
    return _certify_prime_range(lo, hi, data)


def certify_range(ell_min: int, ell_max: int, witnesses=(3, 5), jobs: int = 1) -> RangeReport:
    """Certify every prime in [ell_min, ell_max], ascending.

    Witness data is computed once and reduced per l.  With jobs > 1 the
    prime range is split into contiguous chunks collected in order, so the
    output is independent of the worker count.
    """
    if not MIN_ELL <= ell_min <= ell_max:
        raise OutOfRangeError(f"need {MIN_ELL} <= ell_min <= ell_max")
    witnesses = tuple(witnesses)
    data = [WitnessData.from_prime(p) for p in witnesses]
    if jobs <= 1:
        certs, errors = _certify_prime_range(ell_min, ell_max, data)
        return RangeReport(tuple(certs), tuple(errors))
    bounds = [ell_min + (ell_max - ell_min + 1) * i // jobs for i in range(jobs + 1)]
    chunks = [(bounds[i], bounds[i + 1] - 1, data) for i in range(jobs)]
    certs = []
    errors = []
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for part_certs, part_errors in pool.map(_range_worker, chunks):
            certs.extend(part_certs)
            errors.extend(part_errors)
    return RangeReport(tuple(certs), tuple(errors))


# ---------------------------------------------------------------------------
# serialization: every integer as a decimal string, every rational "num/den"


def _frac_str(x: Fraction) -> str:
    x = Q(x)
    return f"{x.numerator}/{x.denominator}"


def _parse_frac(s: str) -> Fraction:
    num, den = s.split("/")
    return Q(int(num), int(den))


def certificate_to_dict(cert: Certificate) -> dict:
    return {
        "ell": str(cert.ell),
        "verdict": cert.verdict,
        "witnesses": [str(p) for p in cert.witnesses],
        "witness_data": [
            {
                "p": str(wd.p),
                "a": _frac_str(wd.lp.a),
                "b": _frac_str(wd.lp.b),
                "p4": [_frac_str(wd.p4[i]) for i in range(5)],
                "u": _frac_str(wd.u),
                "disc": _frac_str(wd.disc),
            }
            for wd in cert.witness_data
        ],
        "borel": {
            "eliminated_by": None if cert.borel.eliminated_by is None else str(cert.borel.eliminated_by),
            "residues": [
                {
                    "p": str(p),
                    "values": [[str(eps), str(e), str(r)] for eps, e, r in res],
                }
                for p, res in cert.borel.witness_residues
            ],
            "failed": [str(p) for p in cert.borel.failed],
        },
        "cartan": {
            "eliminated_by": None if cert.cartan.eliminated_by is None else str(cert.cartan.eliminated_by),
            "reductions": [
                {"p": str(p), "p4_mod_ell": [str(c) for c in red]}
                for p, red in cert.cartan.witness_reductions
            ],
            "separability": [[str(p), str(d)] for p, d in cert.cartan.separability],
            "failed": [str(p) for p in cert.cartan.failed],
        },
        "exceptional": {
            "eliminated_by": None if cert.exceptional.eliminated_by is None else str(cert.exceptional.eliminated_by),
            "witness_u": [[str(p), str(u)] for p, u in cert.exceptional.witness_u],
            "failed": [str(p) for p in cert.exceptional.failed],
        },
    }


def certificate_json(cert: Certificate) -> str:
    return json.dumps(certificate_to_dict(cert), sort_keys=True, separators=(",", ":"))


def verify_certificate(doc: dict) -> bool:
    """Independent checker: re-derive every stored residue from the exact
    rationals in the certificate and re-run the elimination logic.  Never
    recounts points."""
    try:
        _verify(doc)
        return True
    except (CertificateError, KeyError, ValueError, ArithmeticError, TypeError):
        return False


def _verify(doc: dict):
    ell = int(doc["ell"])
    if not is_prime(ell) or ell < MIN_ELL:
        raise CertificateError(f"bad l: {ell}")
    data = []
    for w in doc["witness_data"]:
        p = int(w["p"])
        lp = LPolynomial(p, _parse_frac(w["a"]), _parse_frac(w["b"]))
        wd = WitnessData.from_lpolynomial(lp)
        stored_p4 = [_parse_frac(c) for c in w["p4"]]
        if stored_p4 != [wd.p4[i] for i in range(5)]:
            raise CertificateError(f"stored fourth power transform mismatch for p={p}")
        if _parse_frac(w["u"]) != wd.u or _parse_frac(w["disc"]) != wd.disc:
            raise CertificateError(f"stored invariants mismatch for p={p}")
        data.append(wd)
    fresh = certify_with_data(ell, data)
    if certificate_to_dict(fresh) != doc:
        raise CertificateError("stored residues disagree with recomputation")
