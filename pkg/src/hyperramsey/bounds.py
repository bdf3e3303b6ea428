"""Lower-bound tables for r_k(p, q) from seed facts and recurrence rules.

Every recurrence has the shape r_k(p, q) >= d * (r_k(p-1, q) - 1) + 1 for a
rule-specific factor d.  Two structural rules come on top.  SYM swaps colors,
so r_k(p, q) = r_k(q, p).  PAD is monotonicity: r_k(p, q) >= r_k(p-1, q) and
r_k(p, q) >= r_k(p, q-1).  ``compute_table`` iterates all of them to a least
fixpoint on a finite grid.  Each cell keeps the largest value found, with a
provenance tree down to seed facts.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from .direct import CliqueVerdict, EdgeColoring, verify_certificate
from .pasting import PcvColoring, build_pasting_cnf, decode_coloring, verify_pasting_coloring
from .sat import Status, solve_complete

__all__ = [
    "BoundFact",
    "BoundTable",
    "CertificateRejected",
    "ExtensionOutcome",
    "Limits",
    "RecurrenceRule",
    "builtin_rules",
    "compute_table",
    "derivation",
    "extend_rules",
    "replay",
    "seed_facts",
    "try_pasting_rule",
]

# provenance preference on equal values: seeds, then R1-R6, then dynamic rules, then SYM, then PAD
SEED_RANK = 0
SYM_RANK = 90
PAD_RANK = 95


@dataclass(frozen=True)
class BoundFact:
    k: int
    p: int
    q: int
    value: int
    rule: str  # "trivial", "base", "cert", "assumed", a rule id, "SYM" or "PAD"
    detail: str = ""
    factor: int | None = None
    premises: tuple["BoundFact", ...] = ()
    rank: int = SEED_RANK

    @property
    def cell(self) -> tuple[int, int, int]:
        return (self.k, self.p, self.q)

    @property
    def is_seed(self) -> bool:
        return not self.premises

    def __str__(self) -> str:
        return f"r_{self.k}({self.p},{self.q}) >= {self.value}"

    def chain(self) -> list[str]:
        """Rule ids from this fact down to its seed."""
        out = []
        node: BoundFact | None = self
        while node is not None:
            out.append(node.rule)
            node = node.premises[0] if node.premises else None
        return out


@dataclass(frozen=True)
class RecurrenceRule:
    id: str
    guard: Callable[[int, int, int], bool] = field(compare=False)
    factor: Callable[[int, int, int], int] = field(compare=False)
    guard_text: str
    justification: str
    rank: int
    colorings: tuple[PcvColoring, ...] = field(default=(), compare=False)

    def applies(self, k: int, p: int, q: int) -> bool:
        return self.guard(k, p, q) and self.factor(k, p, q) >= 2


def _r5_guard(k: int, p: int, q: int) -> bool:
    if k >= 4 and k % 2 == 0:
        return p >= k + 2 and q >= k + 1
    if k >= 5 and k % 2 == 1:
        return p >= k + 2 and q >= k + 2
    return False


def builtin_rules() -> list[RecurrenceRule]:
    return [
        RecurrenceRule(
            "R1", lambda k, p, q: k == 4 and p >= 6 and q >= 5, lambda k, p, q: 2,
            "k=4, p>=6, q>=5", "k=4 doubling, base coloring {(3,1):red, (2,2):blue} at (6,5)", 1,
        ),
        RecurrenceRule(
            "R2", lambda k, p, q: k == 4 and p >= 6 and q >= 7, lambda k, p, q: p - 1,
            "k=4, p>=6, q>=7", "k=4 with d=p-1, base coloring {(3,1),(1,1,1,1):red; (2,2),(2,1,1):blue}", 2,
        ),
        RecurrenceRule(
            "R3", lambda k, p, q: 5 <= k <= 25 and p >= k + 2 and q >= k + 2, lambda k, p, q: p - 1,
            "5<=k<=25, p>=k+2, q>=k+2", "d=p-1 from solved pasting CNFs (k,k+2,k+2,k+1), (k,k+3,k+2,k+2)", 3,
        ),
        RecurrenceRule(
            "R4", lambda k, p, q: 8 <= k <= 25 and k != 9 and p >= k + 2 and q >= k + 1, lambda k, p, q: p - 1,
            "8<=k<=25, k!=9, p>=k+2, q>=k+1", "d=p-1 from solved pasting CNF (k,k+2,k+1,k+1); UNSAT at k=9", 4,
        ),
        RecurrenceRule(
            "R5", _r5_guard, lambda k, p, q: 2,
            "even k>=4: p>=k+2, q>=k+1; odd k>=5: p>=k+2, q>=k+2", "d=2 by the shifted two-block coloring", 5,
        ),
        RecurrenceRule(
            "R6", lambda k, p, q: k >= 4 and p >= k + 2 and q >= k + 1, lambda k, p, q: (q - 1) // (k - 2),
            "k>=4, p>=k+2, q>=k+1, d=(q-1)//(k-2)>=2", "d=floor((q-1)/(k-2)), red iff (k-1,1)", 6,
        ),
    ]


class CertificateRejected(ValueError):
    def __init__(self, source: str, verdict: CliqueVerdict):
        super().__init__(f"certificate {source} rejected: {verdict}")
        self.source = source
        self.verdict = verdict


@dataclass
class Limits:
    k_max: int
    p_max: int
    q_max: int
    k_min: int = 2

    @property
    def side(self) -> int:
        return max(self.p_max, self.q_max)

    def cells(self) -> Iterable[tuple[int, int, int]]:
        for k in range(self.k_min, self.k_max + 1):
            for p in range(k, self.side + 1):
                for q in range(k, self.side + 1):
                    yield (k, p, q)

    def shows(self, k: int, p: int, q: int) -> bool:
        return self.k_min <= k <= self.k_max and k <= p <= self.p_max and k <= q <= self.q_max


def certificate_fact(coloring: EdgeColoring, p: int, q: int, source: str) -> BoundFact:
    """Verify a certificate and turn it into r_k(p, q) >= n + 1."""
    verdict = verify_certificate(coloring, p, q)
    if not verdict.valid:
        raise CertificateRejected(source, verdict)
    return BoundFact(coloring.k, p, q, coloring.n + 1, "cert",
                     f"verified {coloring.n}-vertex coloring ({source})")


def seed_facts(
    limits: Limits,
    certificates: Sequence[str | Path | tuple[EdgeColoring, int, int, str]] = (),
    assumed: Sequence[tuple[int, int, int, int]] = (),
) -> dict[tuple[int, int, int], BoundFact]:
    """Trivial identities, the r_k(k+1,k+1) >= k+1 base, verified certificates and explicit assumptions.

    ``assumed`` facts are taken on trust and marked as such in provenance.
    """
    facts: dict[tuple[int, int, int], BoundFact] = {}

    def offer(f: BoundFact) -> None:
        cur = facts.get(f.cell)
        if cur is None or f.value > cur.value:
            facts[f.cell] = f

    for k in range(limits.k_min, limits.k_max + 1):
        for x in range(k, limits.side + 1):
            offer(BoundFact(k, x, k, x, "trivial", f"r_{k}({x},{k}) = {x}"))
            offer(BoundFact(k, k, x, x, "trivial", f"r_{k}({k},{x}) = {x}"))
        if limits.side >= k + 1:
            offer(BoundFact(k, k + 1, k + 1, k + 1, "base", f"r_{k}({k + 1},{k + 1}) >= r_{k}({k + 1},{k}) = {k + 1}"))
    for cert in certificates:
        if isinstance(cert, tuple):
            coloring, p, q, source = cert
        else:
            coloring, p, q = EdgeColoring.from_text(Path(cert).read_text())
            source = str(cert)
        offer(certificate_fact(coloring, p, q, source))
    for k, p, q, value in assumed:
        offer(BoundFact(k, p, q, value, "assumed", "taken as given, not verified"))
    return facts


def _apply(rule: RecurrenceRule, k: int, p: int, q: int, prev: BoundFact) -> BoundFact:
    d = rule.factor(k, p, q)
    value = d * (prev.value - 1) + 1
    detail = f"{rule.guard_text} at k={k},p={p},q={q}; d={d}: {d}*({prev.value}-1)+1 = {value}"
    return BoundFact(k, p, q, value, rule.id, detail, d, (prev,), rule.rank)


@dataclass
class BoundTable:
    limits: Limits
    facts: dict[tuple[int, int, int], BoundFact]

    def __getitem__(self, cell: tuple[int, int, int]) -> BoundFact:
        return self.facts[cell]

    def value(self, k: int, p: int, q: int) -> int:
        return self.facts[(k, p, q)].value

    def shown(self) -> list[BoundFact]:
        return [f for c, f in sorted(self.facts.items()) if self.limits.shows(*c)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "p", "q", "value", "chain"])
        for f in self.shown():
            w.writerow([f.k, f.p, f.q, f.value, ">".join(f.chain())])
        return buf.getvalue()

    def to_text(self) -> str:
        """One aligned p-by-q grid per k."""
        blocks = []
        for k in range(self.limits.k_min, self.limits.k_max + 1):
            ps = list(range(k, self.limits.p_max + 1))
            qs = list(range(k, self.limits.q_max + 1))
            if not ps or not qs:
                continue
            cells = {(p, q): str(self.value(k, p, q)) for p in ps for q in qs}
            width = max(len(s) for s in cells.values()) + 1
            head = f"k={k} p\\q".ljust(9) + "".join(str(q).rjust(width) for q in qs)
            rows = [str(p).ljust(9) + "".join(cells[(p, q)].rjust(width) for q in qs) for p in ps]
            blocks.append("\n".join([head] + rows))
        return "\n\n".join(blocks) + "\n"


def compute_table(
    facts: Mapping[tuple[int, int, int], BoundFact],
    rules: Sequence[RecurrenceRule],
    limits: Limits,
) -> BoundTable:
    """Least fixpoint of the rules, SYM and PAD over the square grid p, q <= limits.side."""
    table: dict[tuple[int, int, int], BoundFact] = {}
    for cell, f in facts.items():
        k, p, q = cell
        if limits.k_min <= k <= limits.k_max and k <= p <= limits.side and k <= q <= limits.side:
            table[cell] = f

    def better(new: BoundFact, cur: BoundFact | None) -> bool:
        if cur is None or new.value > cur.value:
            return True
        return new.value == cur.value and new.rank < cur.rank

    cells = sorted(limits.cells(), key=lambda c: (c[0], c[1] + c[2], c[1]))
    changed = True
    while changed:
        changed = False
        for k, p, q in cells:
            cur = table.get((k, p, q))
            cands: list[BoundFact] = []
            below = table.get((k, p - 1, q))
            if below is not None:
                for rule in rules:
                    if rule.applies(k, p, q):
                        cands.append(_apply(rule, k, p, q, below))
                cands.append(BoundFact(k, p, q, below.value, "PAD", f"r_{k}({p},{q}) >= r_{k}({p - 1},{q})",
                                       None, (below,), PAD_RANK))
            left = table.get((k, p, q - 1))
            if left is not None:
                cands.append(BoundFact(k, p, q, left.value, "PAD", f"r_{k}({p},{q}) >= r_{k}({p},{q - 1})",
                                       None, (left,), PAD_RANK))
            mirror = table.get((k, q, p))
            if mirror is not None and p != q:
                cands.append(BoundFact(k, p, q, mirror.value, "SYM", f"r_{k}({p},{q}) = r_{k}({q},{p})",
                                       None, (mirror,), SYM_RANK))
            for cand in cands:
                if better(cand, cur):
                    cur = cand
                    table[(k, p, q)] = cand
                    changed = True
    return BoundTable(limits, table)


def derivation(fact: BoundFact) -> str:
    """Indented provenance tree, one node per line."""
    lines: list[str] = []

    def walk(f: BoundFact, prefix: str, tail: str) -> None:
        lines.append(f"{prefix}{f}  [{f.rule}: {f.detail}]")
        for i, child in enumerate(f.premises):
            last = i == len(f.premises) - 1
            walk(child, tail + ("`- " if last else "|- "), tail + ("   " if last else "|  "))

    walk(fact, "", "")
    return "\n".join(lines) + "\n"


def replay(fact: BoundFact, rules: Sequence[RecurrenceRule]) -> int:
    """Re-evaluate a provenance tree, re-checking every guard; returns the recomputed value."""
    by_id = {r.id: r for r in rules}
    if fact.is_seed:
        if fact.rule == "trivial" and fact.value != max(fact.p, fact.q):
            raise AssertionError(f"bad trivial fact {fact}")
        if fact.rule == "base" and (fact.p, fact.q, fact.value) != (fact.k + 1, fact.k + 1, fact.k + 1):
            raise AssertionError(f"bad base fact {fact}")
        return fact.value
    (prev,) = fact.premises
    prev_value = replay(prev, rules)
    k, p, q = fact.cell
    if fact.rule == "SYM":
        ok = prev.cell == (k, q, p)
        value = prev_value
    elif fact.rule == "PAD":
        ok = prev.cell in ((k, p - 1, q), (k, p, q - 1))
        value = prev_value
    else:
        rule = by_id[fact.rule]
        ok = prev.cell == (k, p - 1, q) and rule.applies(k, p, q) and rule.factor(k, p, q) == fact.factor
        value = fact.factor * (prev_value - 1) + 1
    if not ok:
        raise AssertionError(f"rule {fact.rule} does not apply to {fact}")
    if value != fact.value:
        raise AssertionError(f"{fact} replays to {value}")
    return value


@dataclass
class ExtensionOutcome:
    k: int
    kind: str
    statuses: list[tuple[tuple[int, int, int, int], Status]]
    rule: RecurrenceRule | None

    @property
    def installed(self) -> bool:
        return self.rule is not None

    def __str__(self) -> str:
        parts = [f"Pasting{params}: {status}" for params, status in self.statuses]
        verdict = f"installed {self.rule.id}" if self.rule else "no rule installed"
        return f"k={self.k} {self.kind}: " + "; ".join(parts) + f" -> {verdict}"


_EXTENSION_CNFS = {
    # each base case (p0, q0, d); q lower bound of the resulting guard
    "R3": (lambda k: [(k + 2, k + 2, k + 1), (k + 3, k + 2, k + 2)], lambda k: k + 2),
    "R4": (lambda k: [(k + 2, k + 1, k + 1)], lambda k: k + 1),
}


def try_pasting_rule(k: int, kind: str = "R3", budget: int | None = 1_000_000) -> ExtensionOutcome:
    """Solve the base-case pasting CNFs for edge size ``k``; build a rule only if all are SAT and verify."""
    bases, q_floor = _EXTENSION_CNFS[kind]
    statuses = []
    colorings = []
    for p0, q0, d in bases(k):
        instance, cnf = build_pasting_cnf(k, p0, q0, d)
        result = solve_complete(cnf, budget)
        statuses.append(((k, p0, q0, d), result.status))
        if not result.is_sat:
            return ExtensionOutcome(k, kind, statuses, None)
        chi = decode_coloring(instance, result.assignment)
        if not verify_pasting_coloring(chi, p0, q0, d).valid:
            raise AssertionError(f"decoded coloring fails verification for {(k, p0, q0, d)}")
        colorings.append(chi)
    qmin = q_floor(k)
    rule = RecurrenceRule(
        f"{kind}@k{k}",
        lambda kk, p, q, _k=k, _q=qmin: kk == _k and p >= _k + 2 and q >= _q,
        lambda kk, p, q: p - 1,
        f"k={k}, p>={k + 2}, q>={qmin}",
        f"solved pasting CNFs {[params for params, _ in statuses]}",
        50,
        tuple(colorings),
    )
    return ExtensionOutcome(k, kind, statuses, rule)


def extend_rules(k: int, budget: int | None = 1_000_000) -> ExtensionOutcome:
    """Try to add a d=p-1 rule for an edge size beyond the built-in range (k > 25)."""
    if k <= 25:
        raise ValueError("built-in rules already cover k <= 25; extend_rules is for k > 25")
    return try_pasting_rule(k, "R3", budget)


def load_config(path: str | Path) -> dict:
    """JSON config: optional keys k_min, k_max, p_max, q_max, certificates, assume."""
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict):
        raise ValueError("config must be a JSON object")
    return data
