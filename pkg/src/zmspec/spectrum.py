"""Closed-form spectra of the Gram matrices and their exact verification.

The prime-power table: lambda_1 = p^(2(e-1)(n-2)) * theta_{n-1,p}^2 with
multiplicity 1, lambda_2 = p^((2e-1)(n-2)) with multiplicity
theta_{n,p} - 1, and for s in {3, ..., e+1} (so only when e >= 2)
lambda_s = p^((2e+1-s)(n-2)) with multiplicity (p^(n-1)-1) *
theta_{n,p^(s-2)}.  For composite m every choice of one row per
prime-power factor contributes the product eigenvalue with the product
multiplicity.

Verification is by exact nullity: for symmetric integer B the kernel
dimension of B - lambda*I over the rationals equals the multiplicity.
Nullities are computed with fraction-free (Bareiss) elimination using
full pivoting on the magnitude-smallest nonzero entry, which keeps every
intermediate an exact integer minor.

The module also constructs every eigenvector family the theory
exhibits: the all-ones vector, the prime-case difference columns, the
fiber-difference vectors, fiber-constant lifts from the previous
prime-power level, and CRT-permuted Kronecker products.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .errors import DomainError
from .matrices import ExactMatrix, Permutation
from .modular import Modulus, as_modulus, is_prime
from .projective import KPartition, ProjectiveSpace, enumerate_space, k_partition, theta


@dataclass(frozen=True)
class SpectrumRow:
    eigenvalue: int
    multiplicity: int
    provenance: str


@dataclass(frozen=True)
class SpectrumTable:
    """Eigenvalue/multiplicity rows with their table-row provenance.

    Rows are kept unmerged (distinct provenance, possibly equal
    eigenvalues); ``merged()`` is the view verification uses.
    """

    n: int
    m: int
    rows: tuple[SpectrumRow, ...]

    def __post_init__(self) -> None:
        total = sum(r.multiplicity for r in self.rows)
        expected = theta(self.n, self.m)
        if total != expected:
            raise DomainError(
                f"multiplicities sum to {total}, expected theta = {expected}"
            )

    @property
    def total_multiplicity(self) -> int:
        return sum(r.multiplicity for r in self.rows)

    def merged(self) -> tuple[tuple[int, int], ...]:
        """(eigenvalue, multiplicity) pairs, equal eigenvalues combined,
        sorted strictly decreasing."""
        acc: dict[int, int] = {}
        for r in self.rows:
            acc[r.eigenvalue] = acc.get(r.eigenvalue, 0) + r.multiplicity
        return tuple(sorted(acc.items(), key=lambda kv: -kv[0]))


def spectrum_prime_power(n: int, p: int, e: int) -> SpectrumTable:
    """The closed-form eigenvalue table of B_{n,p^e}."""
    if n < 2:
        raise DomainError(f"dimension must be >= 2, got {n}")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if e < 1:
        raise DomainError(f"exponent must be >= 1, got {e}")
    rows = [
        SpectrumRow(
            p ** (2 * (e - 1) * (n - 2)) * theta(n - 1, p) ** 2, 1, f"{p}^{e}[s=1]"
        ),
        SpectrumRow(
            p ** ((2 * e - 1) * (n - 2)), theta(n, p) - 1, f"{p}^{e}[s=2]"
        ),
    ]
    for s in range(3, e + 2):
        rows.append(
            SpectrumRow(
                p ** ((2 * e + 1 - s) * (n - 2)),
                (p ** (n - 1) - 1) * theta(n, p ** (s - 2)),
                f"{p}^{e}[s={s}]",
            )
        )
    return SpectrumTable(n=n, m=p**e, rows=tuple(rows))


def spectrum_general(n: int, m: int | Modulus) -> SpectrumTable:
    """Spectrum of B_{n,m}: products of one row per prime-power factor."""
    mod = as_modulus(m)
    factor_tables = [spectrum_prime_power(n, p, e) for p, e in mod.factors]
    if len(factor_tables) == 1:
        return factor_tables[0]
    rows = []
    for combo in itertools.product(*(t.rows for t in factor_tables)):
        lam = 1
        mult = 1
        for r in combo:
            lam *= r.eigenvalue
            mult *= r.multiplicity
        rows.append(SpectrumRow(lam, mult, " x ".join(r.provenance for r in combo)))
    return SpectrumTable(n=n, m=mod.value, rows=tuple(rows))


# -------------------- exact rank / nullity --------------------


def _bareiss_rank(data: list[list[int]]) -> int:
    """Rank over the rationals by fraction-free elimination.

    Full pivoting on the magnitude-smallest nonzero entry; the chosen
    pivot column is swapped to the end and dropped, rows that become all
    zero are dropped, so work shrinks as the elimination proceeds.
    Destroys ``data``.
    """
    rows = [r for r in data if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    prev = 1
    rank = 0
    while rows and ncols:
        best_abs = 0
        best_i = best_j = -1
        for i, r in enumerate(rows):
            for j in range(ncols):
                v = r[j]
                if v:
                    a = -v if v < 0 else v
                    if best_i < 0 or a < best_abs:
                        best_abs, best_i, best_j = a, i, j
                        if a == 1:
                            break
            if best_abs == 1:
                break
        if best_i < 0:
            break
        rows[0], rows[best_i] = rows[best_i], rows[0]
        prow = rows[0]
        last = ncols - 1
        if best_j != last:
            for r in rows:
                r[best_j], r[last] = r[last], r[best_j]
        piv = prow[last]
        ncols = last
        nxt = []
        for r in rows[1:]:
            f = r[last]
            if f:
                nr = [(piv * r[j] - f * prow[j]) // prev for j in range(ncols)]
            else:
                nr = [piv * r[j] // prev for j in range(ncols)]
            if any(nr):
                nxt.append(nr)
        rows = nxt
        prev = piv
        rank += 1
    return rank


def exact_rank(m: ExactMatrix) -> int:
    """Rank of an integer matrix over the rationals (exact)."""
    return _bareiss_rank(m.to_lists())


def exact_nullity(m: ExactMatrix, lam: int) -> int:
    """Kernel dimension of (M - lam*I) over the rationals.

    For symmetric integer M this is the multiplicity of lam as an
    eigenvalue; 0 means lam is not an eigenvalue at all.
    """
    if not m.is_square:
        raise DomainError("nullity needs a square matrix")
    data = m.to_lists()
    for i in range(m.rows):
        data[i][i] -= lam
    return m.rows - _bareiss_rank(data)


# -------------------- verification --------------------


@dataclass(frozen=True)
class EigenvalueCheck:
    eigenvalue: int
    claimed: int
    computed: int

    @property
    def ok(self) -> bool:
        return self.claimed == self.computed


@dataclass(frozen=True)
class VerificationReport:
    """Per-eigenvalue nullity checks plus the three global identities."""

    n: int
    m: int
    theta: int
    entries: tuple[EigenvalueCheck, ...]
    dimension_ok: bool
    trace_ok: bool
    trace_sq_ok: bool

    @property
    def all_ok(self) -> bool:
        return (
            self.dimension_ok
            and self.trace_ok
            and self.trace_sq_ok
            and all(c.ok for c in self.entries)
        )

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "theta": self.theta,
            "entries": [
                {
                    "lambda": str(c.eigenvalue),
                    "claimed": c.claimed,
                    "computed": c.computed,
                    "ok": c.ok,
                }
                for c in self.entries
            ],
            "trace_ok": self.trace_ok,
            "trace_sq_ok": self.trace_sq_ok,
            "dimension_ok": self.dimension_ok,
            "all_ok": self.all_ok,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent)


def verify_spectrum(m: ExactMatrix, table: SpectrumTable) -> VerificationReport:
    """Check every merged (eigenvalue, multiplicity) claim by exact nullity,
    plus the dimension, trace and trace-of-square identities.  Mismatches
    are report content, not exceptions."""
    if not m.is_square:
        raise DomainError("verification needs a square matrix")
    if m.rows != table.total_multiplicity:
        raise DomainError(
            f"matrix order {m.rows} does not match the table's total "
            f"multiplicity {table.total_multiplicity}"
        )
    merged = table.merged()
    entries = tuple(
        EigenvalueCheck(lam, d, exact_nullity(m, lam)) for lam, d in merged
    )
    dim_ok = sum(d for _, d in merged) == m.rows
    trace_ok = sum(lam * d for lam, d in merged) == m.trace()
    trace_sq_ok = sum(lam * lam * d for lam, d in merged) == m.trace_of_square()
    return VerificationReport(
        n=table.n,
        m=table.m,
        theta=table.total_multiplicity,
        entries=entries,
        dimension_ok=dim_ok,
        trace_ok=trace_ok,
        trace_sq_ok=trace_sq_ok,
    )


# -------------------- eigenvector families --------------------


def eigvec_all_ones(space: ProjectiveSpace) -> list[int]:
    """The all-ones vector; eigenvector for the top eigenvalue (= row sum)."""
    return [1] * len(space)


def eigvec_R_d(space: ProjectiveSpace) -> ExactMatrix:
    """Prime case: the theta - 1 columns (e_i - e_last); each has
    eigenvalue p^(n-2).  Columns are independent (identity top block)."""
    if not (space.m.is_prime_power and space.m.prime_power()[1] == 1):
        raise DomainError(f"the difference columns need a prime modulus, got {space.m.value}")
    d = len(space) - 1
    data = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    data.append([-1] * d)
    return ExactMatrix(data)


def eigvec_differences(partition: KPartition) -> ExactMatrix:
    """Fiber-difference vectors: +1 at u in K_a, -1 at the K_l point with
    the same reduction, for a < l; eigenvalue p^(e(n-2)).  Coordinates
    follow the partition's (lex-ordered) space."""
    space = partition.space
    last = partition.classes[-1]
    cols: list[list[int]] = []
    for a in range(partition.l - 1):
        for u, v in zip(partition.classes[a], last):
            col = [0] * len(space)
            col[space.position(u)] = 1
            col[space.position(v)] = -1
            cols.append(col)
    data = [[col[i] for col in cols] for i in range(len(space))]
    return ExactMatrix(data)


def eigvec_lift(base_vec: list[int], partition: KPartition) -> list[int]:
    """Extend a vector over P_{n,p^(e-1)} to the fiber-constant vector over
    P_{n,p^e}: the value at x is the base value at the reduction of x.
    Maps an eigenvector with eigenvalue mu to one with p^(2n-4) * mu."""
    if len(base_vec) != len(partition.base_space):
        raise DomainError(
            f"base vector length {len(base_vec)} does not match the base space"
        )
    return [
        base_vec[partition.base_position[pt]] for pt in partition.space.points
    ]


def eigvec_tensor(vecs: list[list[int]], perm: Permutation) -> list[int]:
    """Kronecker product of per-factor eigenvectors, re-indexed by the CRT
    permutation into P_{n,m} order; eigenvalue is the product of the
    factors' eigenvalues."""
    if not vecs:
        raise DomainError("need at least one vector")
    kron = [1]
    for v in vecs:
        kron = [a * b for a in kron for b in v]
    if len(kron) != perm.size:
        raise DomainError(
            f"tensor length {len(kron)} does not match the permutation size {perm.size}"
        )
    out = [0] * perm.size
    for src, dst in enumerate(perm.forward):
        out[dst] = kron[src]
    return out


def eigvec_family_prime_power(
    n: int, p: int, e: int, guardrail: int | None = None
) -> tuple[ProjectiveSpace, list[tuple[int, list[int]]]]:
    """Assemble the complete eigenvector family of B_{n,p^e}.

    e = 1: all-ones plus the difference columns.  e >= 2: fiber-constant
    lifts of the level-(e-1) family plus the fiber-difference vectors.
    Returns the (lex-ordered) space and theta vectors tagged with their
    eigenvalues.
    """
    if e == 1:
        space = enumerate_space(n, p, "lex", guardrail=guardrail)
        family = [(theta(n - 1, p) ** 2, eigvec_all_ones(space))]
        rd = eigvec_R_d(space)
        for j in range(rd.cols):
            family.append((p ** (n - 2), [rd[i, j] for i in range(rd.rows)]))
        return space, family
    partition = k_partition(p, e, n, guardrail=guardrail)
    _, base_family = eigvec_family_prime_power(n, p, e - 1, guardrail=guardrail)
    family = [
        (p ** (2 * n - 4) * lam, eigvec_lift(vec, partition))
        for lam, vec in base_family
    ]
    diffs = eigvec_differences(partition)
    for j in range(diffs.cols):
        family.append((p ** (e * (n - 2)), [diffs[i, j] for i in range(diffs.rows)]))
    return partition.space, family
