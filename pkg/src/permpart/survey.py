"""Catalog ingestion, batch classification and per-degree survey reports.

Catalog file format (UTF-8): one group per line, ``name|degree|gen1;gen2;...``
with generators in 1-based cycle notation.  Lines starting with ``#`` are
comments; the special header ``#complete degree=<n>`` asserts that the file
lists every transitive group of degree n up to permutation isomorphism.
Completeness is always caller-asserted; nothing here assumes it silently.

The survey report is CSV with header
``degree,T,P,PP,QP,cov,phi,independence_gap`` and LF line endings.  The
association column ``cov`` is the covariance of the pre-primitive and
quasiprimitive indicators over the degree's groups; ``phi`` is the phi
coefficient of the same 2x2 contingency table (0 when a marginal vanishes).
Decimals are printed to 4 places, round-half-even.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from importlib import resources

from .classify import ClassificationFlags, classify_group
from .errors import ParseError, PermpartError
from .permcore import Perm, PermGroup, parse_perm


@dataclass(frozen=True)
class DatasetEntry:
    """One catalog line: a named group given by generator strings."""
    name: str
    degree: int
    generator_texts: tuple
    line: int = 0

    def group(self) -> PermGroup:
        gens = [parse_perm(t, self.degree) for t in self.generator_texts]
        return PermGroup(self.degree, gens)


class Catalog(list):
    """A parsed catalog: a list of DatasetEntry plus completeness claims."""

    def __init__(self, entries=(), complete_degrees=()):
        super().__init__(entries)
        self.complete_degrees = frozenset(complete_degrees)


def parse_catalog(text_or_path) -> Catalog:
    """Parse catalog text (or a path to a catalog file)."""
    text = text_or_path
    if "\n" not in text and (text.endswith(".cat") or "/" in text):
        with open(text_or_path, "r", encoding="utf-8") as fh:
            text = fh.read()
    entries = []
    complete = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("complete"):
                for token in body.split():
                    if token.startswith("degree="):
                        complete.add(int(token.split("=", 1)[1]))
            continue
        fields = line.split("|")
        if len(fields) != 3:
            raise ParseError("line %d: expected name|degree|gens" % lineno,
                             position=lineno)
        name, deg_text, gens_text = fields
        if not deg_text.strip().isdigit():
            raise ParseError("line %d: bad degree %r" % (lineno, deg_text),
                             position=lineno)
        degree = int(deg_text)
        texts = tuple(t.strip() for t in gens_text.split(";") if t.strip())
        for t in texts:
            try:
                parse_perm(t, degree)
            except ParseError as exc:
                raise ParseError("line %d: %s" % (lineno, exc),
                                 position=lineno) from None
        entries.append(DatasetEntry(name=name.strip(), degree=degree,
                                    generator_texts=texts, line=lineno))
    return Catalog(entries, complete)


def render_catalog(entries, complete_degrees=()) -> str:
    """Inverse of parse_catalog, producing the file format."""
    from .permcore import format_perm

    lines = []
    for d in sorted(complete_degrees):
        lines.append("#complete degree=%d" % d)
    for e in entries:
        if isinstance(e, DatasetEntry):
            lines.append("%s|%d|%s" % (e.name, e.degree,
                                       ";".join(e.generator_texts)))
        else:
            name, group = e
            gens = ";".join(format_perm(g) for g in group.generators) or "()"
            lines.append("%s|%d|%s" % (name, group.degree, gens))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ClassificationRecord:
    """Classification result for one catalog entry."""
    entry: DatasetEntry
    order: int | None
    flags: ClassificationFlags | None
    n_systems: int
    elapsed: float
    error: str | None = None


def _classify_entry(entry: DatasetEntry) -> ClassificationRecord:
    start = time.perf_counter()
    try:
        G = entry.group()
        flags = classify_group(G)
        return ClassificationRecord(entry, G.order, flags, flags.n_systems,
                                    time.perf_counter() - start)
    except PermpartError as exc:
        return ClassificationRecord(entry, None, None, 0,
                                    time.perf_counter() - start, str(exc))


def classify_catalog(entries, workers: int = 1):
    """One record per entry, in input order.

    Entries are independent; with workers > 1 they are distributed across a
    process pool and the results merged back in input order.  Per-entry
    failures are recorded in the record, never fatal to the batch.
    """
    entries = list(entries)
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_classify_entry, entries))
    return [_classify_entry(e) for e in entries]


@dataclass(frozen=True)
class SurveyRow:
    """Aggregate counts and association statistics for one degree."""
    degree: int
    T: int
    P: int
    PP: int
    QP: int
    cov: Fraction
    phi: float
    independence_gap: int

    def csv(self, sep: str = ",") -> str:
        return sep.join([
            str(self.degree), str(self.T), str(self.P), str(self.PP),
            str(self.QP), format_decimal(self.cov), format_decimal(self.phi),
            str(self.independence_gap)])


def format_decimal(value) -> str:
    """Four decimal places, round-half-even, fixed-point."""
    if isinstance(value, Fraction):
        dec = Decimal(value.numerator) / Decimal(value.denominator)
    else:
        dec = Decimal(value)
    return str(dec.quantize(Decimal("0.0001"), rounding=ROUND_HALF_EVEN))


def survey_table(records):
    """Per-degree SurveyRows (sorted by degree) from classification records.

    cov = a/T - (PP/T)(QP/T) with a the number of groups both pre-primitive
    and quasiprimitive; phi uses the full 2x2 contingency table and is 0
    when a marginal vanishes; independence_gap = T*P - QP*PP.
    """
    by_degree = {}
    for rec in records:
        if rec.error is not None:
            raise PermpartError("entry %r failed: %s" % (rec.entry.name, rec.error))
        by_degree.setdefault(rec.entry.degree, []).append(rec)
    rows = []
    for degree in sorted(by_degree):
        recs = by_degree[degree]
        T = len(recs)
        P = sum(1 for r in recs if r.flags.primitive)
        PP = sum(1 for r in recs if r.flags.preprimitive)
        QP = sum(1 for r in recs if r.flags.quasiprimitive)
        a = sum(1 for r in recs
                if r.flags.preprimitive and r.flags.quasiprimitive)
        b = PP - a
        c = QP - a
        d = T - PP - QP + a
        cov = Fraction(a, T) - Fraction(PP, T) * Fraction(QP, T)
        denom = (a + b) * (c + d) * (a + c) * (b + d)
        phi = 0.0 if denom == 0 else (a * d - b * c) / math.sqrt(denom)
        rows.append(SurveyRow(degree, T, P, PP, QP, cov, phi,
                              T * P - QP * PP))
    return rows


def render_report(rows, sep: str = ",") -> str:
    header = sep.join(["degree", "T", "P", "PP", "QP", "cov", "phi",
                       "independence_gap"])
    return "\n".join([header] + [row.csv(sep) for row in rows]) + "\n"


def compare_with_reference(rows, reference):
    """Compare computed cov values with reference decimals per degree.

    Returns one dict per matching row with ``magnitude_match`` (within
    5e-5 in absolute value) and ``sign_discrepancy`` (magnitudes agree but
    signs differ).  A reference row whose printed value has the opposite
    sign from the computed covariance is flagged, never forced to match.
    """
    out = []
    for row in rows:
        if row.degree not in reference:
            continue
        ref = Fraction(Decimal(str(reference[row.degree])))
        diff = abs(abs(row.cov) - abs(ref))
        magnitude_match = diff <= Fraction(5, 100_000)
        sign_discrepancy = bool(magnitude_match and ref != 0 and row.cov != 0
                                and (ref > 0) != (row.cov > 0))
        out.append({
            "degree": row.degree,
            "computed": row.cov,
            "reference": ref,
            "magnitude_match": magnitude_match,
            "sign_discrepancy": sign_discrepancy,
        })
    return out


def in_set_A(n: int) -> bool:
    """True iff n is not divisible by any p^3, nor by any pq with primes
    q | p-1, nor by any p^2 q with primes q | p+1."""
    if n < 1:
        raise ValueError("n must be positive")
    factors = _factorize(n)
    primes = sorted(factors)
    for p, e in factors.items():
        if e >= 3:
            return False
    for p in primes:
        for q in primes:
            if p == q:
                continue
            if (p - 1) % q == 0:
                return False
            if factors[p] >= 2 and (p + 1) % q == 0:
                return False
    return True


def _factorize(n: int):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def scan_degree(records, degree: int):
    """(in_S, p_squared_ok) for records covering all transitive groups of
    the given degree (completeness is caller-asserted).

    in_S is true iff every group is pre-primitive.  When the degree is the
    square of a prime, p_squared_ok reports whether the prime-square rule
    (all such groups pre-primitive) held; otherwise it is None.
    """
    recs = [r for r in records if r.entry.degree == degree]
    if not recs:
        raise ValueError("no records of degree %d" % degree)
    for r in recs:
        if r.error is not None:
            raise PermpartError("entry %r failed: %s" % (r.entry.name, r.error))
    in_s = all(r.flags.preprimitive for r in recs)
    root = math.isqrt(degree)
    is_p_squared = root * root == degree and _is_prime(root)
    return in_s, (in_s if is_p_squared else None)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def bundled_catalog_path(degree: int):
    """Path to a catalog file shipped with the package, or None."""
    ref = resources.files("permpart").joinpath("data/catalogs/deg%d.cat" % degree)
    return ref if ref.is_file() else None
