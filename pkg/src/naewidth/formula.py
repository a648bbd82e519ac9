"""Positive NAE-3-SAT instances: DIMACS parsing, validation, evaluation, and a
brute-force satisfiability oracle for small variable counts.

A clause is *NAE-satisfied* when it contains at least one true and at least
one false variable.  In strict mode every variable must occur in exactly four
clauses (so 3*m == 4*n); lax mode admits hand-built toy formulas.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .errors import CapExceededError, ParseError, ValidationError

Assignment = tuple  # tuple[bool, ...], index i holds the value of variable i+1

BRUTE_FORCE_CAP = 24


@dataclass(frozen=True)
class NaeFormula:
    """All-positive 3-clauses over variables numbered 1..num_vars."""

    num_vars: int
    clauses: tuple

    def occurrence_counts(self):
        counts = [0] * (self.num_vars + 1)
        for clause in self.clauses:
            for v in clause:
                counts[v] += 1
        return counts[1:]


def validate_formula(f: NaeFormula, strict: bool = True) -> None:
    """Check the formula invariants; raise ValidationError on the first failure."""
    if f.num_vars < 1:
        raise ValidationError("formula must have at least one variable")
    for idx, clause in enumerate(f.clauses):
        if len(clause) != 3:
            raise ValidationError(f"clause {idx + 1} has {len(clause)} literals, expected 3")
        for v in clause:
            if not isinstance(v, int) or v < 1 or v > f.num_vars:
                raise ValidationError(f"clause {idx + 1}: variable {v} out of range 1..{f.num_vars}")
        if len(set(clause)) != 3:
            raise ValidationError(f"clause {idx + 1} repeats a variable: {clause}")
    if strict:
        for var, count in enumerate(f.occurrence_counts(), start=1):
            if count != 4:
                raise ValidationError(f"variable {var} occurs {count} times, expected 4")


def parse_nae_dimacs(text: str, strict: bool = True) -> NaeFormula:
    """Parse DIMACS CNF text into an all-positive NAE formula.

    Clauses are zero-terminated and may span lines.  Negative literals are
    rejected outright: the formula type has no negation.
    """
    tokens = []  # (token, line, col)
    header = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise ParseError("duplicate problem line", line=lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"bad problem line {line!r}", line=lineno)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise ParseError(f"non-integer counts in problem line {line!r}", line=lineno)
            if header[0] < 1 or header[1] < 0:
                raise ParseError("problem line declares empty formula", line=lineno)
            continue
        if header is None:
            raise ParseError("clause data before problem line", line=lineno)
        col = 1
        for tok in raw.split():
            col = raw.index(tok, col - 1) + 1
            tokens.append((tok, lineno, col))

    if header is None:
        raise ParseError("missing 'p cnf' problem line")
    num_vars, num_clauses = header

    clauses = []
    current = []
    for tok, lineno, col in tokens:
        try:
            lit = int(tok)
        except ValueError:
            raise ParseError(f"non-integer literal {tok!r}", line=lineno, col=col)
        if lit == 0:
            if len(current) != 3:
                raise ParseError(f"clause has {len(current)} literals, expected 3", line=lineno, col=col)
            clauses.append(tuple(current))
            current = []
            continue
        if lit < 0:
            raise ParseError(f"negative literal {lit}", line=lineno, col=col)
        if lit > num_vars:
            raise ParseError(f"literal {lit} exceeds declared variable count {num_vars}", line=lineno, col=col)
        current.append(lit)
    if current:
        raise ParseError("unterminated clause at end of input")
    if len(clauses) != num_clauses:
        raise ParseError(f"declared {num_clauses} clauses but found {len(clauses)}")

    f = NaeFormula(num_vars=num_vars, clauses=tuple(clauses))
    validate_formula(f, strict=strict)
    return f


def emit_nae_dimacs(f: NaeFormula) -> str:
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    lines.extend(" ".join(str(v) for v in clause) + " 0" for clause in f.clauses)
    return "\n".join(lines) + "\n"


def eval_nae(f: NaeFormula, assignment) -> bool:
    """True iff every clause has at least one true and at least one false variable."""
    if len(assignment) != f.num_vars:
        raise ValidationError(f"assignment length {len(assignment)} != num_vars {f.num_vars}")
    for clause in f.clauses:
        values = [assignment[v - 1] for v in clause]
        if all(values) or not any(values):
            return False
    return True


def complement(assignment):
    return tuple(not b for b in assignment)


def brute_force_nae(f: NaeFormula, cap: int = BRUTE_FORCE_CAP):
    """Return the first NAE-satisfying assignment, or None.

    Enumeration order is documented and deterministic: assignments are scanned
    lexicographically with False < True and variable 1 most significant.
    """
    if f.num_vars > cap:
        raise CapExceededError(f"num_vars {f.num_vars} exceeds brute-force cap {cap}")
    for bits in itertools.product((False, True), repeat=f.num_vars):
        if eval_nae(f, bits):
            return bits
    return None


def random_strict_formula(num_vars: int, rng: random.Random, max_tries: int = 10000) -> NaeFormula:
    """Sample a strict 4-occurrence instance by shuffling variable tokens into
    triples and rejecting draws with a repeated variable inside a clause."""
    if num_vars % 3 != 0:
        raise ValidationError("strict instances need 3 | num_vars (3m = 4n)")
    tokens = [v for v in range(1, num_vars + 1) for _ in range(4)]
    for _ in range(max_tries):
        rng.shuffle(tokens)
        clauses = [tuple(tokens[i:i + 3]) for i in range(0, len(tokens), 3)]
        if all(len(set(c)) == 3 for c in clauses):
            f = NaeFormula(num_vars=num_vars, clauses=tuple(clauses))
            validate_formula(f, strict=True)
            return f
    raise RuntimeError(f"no valid shuffle found in {max_tries} tries")
