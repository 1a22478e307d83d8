import json
import random
from fractions import Fraction

import pytest

from zmspec.errors import DomainError
from zmspec.matrices import (
    ExactMatrix,
    build_A,
    build_B_product,
    crt_permutation,
)
from zmspec.projective import enumerate_space, k_partition, theta
from zmspec.spectrum import (
    SpectrumRow,
    SpectrumTable,
    eigvec_R_d,
    eigvec_all_ones,
    eigvec_differences,
    eigvec_family_prime_power,
    eigvec_lift,
    eigvec_tensor,
    exact_nullity,
    exact_rank,
    spectrum_general,
    spectrum_prime_power,
    verify_spectrum,
)


def B_of(n, m):
    space = enumerate_space(n, m)
    return space, build_B_product(build_A(space))


def rank_oracle(data):
    """Independent rank computation: Gaussian elimination over Fraction."""
    rows = [[Fraction(x) for x in r] for r in data]
    rank = 0
    col = 0
    ncols = len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        for i in range(rank + 1, len(rows)):
            f = rows[i][col] / pr[col]
            if f:
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        rank += 1
        col += 1
    return rank


# -------------------- tables --------------------


def test_prime_power_table_examples():
    assert spectrum_prime_power(3, 2, 1).merged() == ((9, 1), (2, 6))
    assert spectrum_prime_power(3, 2, 2).merged() == ((36, 1), (8, 6), (4, 21))
    # at n = 2 all rows collapse to eigenvalue 1
    assert spectrum_prime_power(2, 2, 2).merged() == ((1, 6),)


def test_prime_case_has_two_rows_only():
    table = spectrum_prime_power(3, 5, 1)
    assert len(table.rows) == 2
    assert table.rows[0].multiplicity == 1
    assert table.rows[1].multiplicity == theta(3, 5) - 1


def test_multiplicity_sum_identity():
    for n, p, e in [(2, 2, 4), (3, 2, 3), (3, 3, 2), (4, 2, 2), (5, 2, 2), (3, 5, 2)]:
        table = spectrum_prime_power(n, p, e)
        assert table.total_multiplicity == theta(n, p**e)


def test_merged_strictly_decreasing_for_n_at_least_3():
    for n, p, e in [(3, 2, 3), (3, 3, 2), (4, 2, 2), (4, 3, 1)]:
        merged = spectrum_prime_power(n, p, e).merged()
        assert all(a[0] > b[0] for a, b in zip(merged, merged[1:]))


def test_general_table_examples():
    table = spectrum_general(3, 6)
    assert table.merged() == ((144, 1), (32, 6), (27, 12), (6, 72))
    assert table.total_multiplicity == 91 == theta(3, 6)

    assert spectrum_general(3, 4).merged() == spectrum_prime_power(3, 2, 2).merged()
    assert spectrum_general(2, 6).merged() == ((1, 12),)


def test_table_rejects_wrong_total():
    with pytest.raises(DomainError):
        SpectrumTable(n=3, m=2, rows=(SpectrumRow(9, 1, "x"),))


# -------------------- exact rank / nullity --------------------


def test_exact_nullity_examples():
    _, b32 = B_of(3, 2)
    assert exact_nullity(b32, 2) == 6
    assert exact_nullity(b32, 9) == 1
    assert exact_nullity(b32, 5) == 0
    assert exact_nullity(ExactMatrix.identity(5), 1) == 5


def test_exact_rank_small_cases():
    assert exact_rank(ExactMatrix([[1, 2], [2, 4]])) == 1
    assert exact_rank(ExactMatrix.zeros(3, 4)) == 0
    assert exact_rank(ExactMatrix.identity(4)) == 4
    assert exact_rank(ExactMatrix([[2, 0, 1], [0, 3, 1]])) == 2


def test_exact_rank_against_fraction_oracle():
    rng = random.Random(1729)
    for trial in range(40):
        r = rng.randrange(1, 7)
        c = rng.randrange(1, 7)
        data = [[rng.randrange(-5, 6) for _ in range(c)] for _ in range(r)]
        # plant dependent rows occasionally
        if r >= 2 and trial % 3 == 0:
            data[-1] = [2 * x for x in data[0]]
        assert exact_rank(ExactMatrix(data)) == rank_oracle(data)


# -------------------- verification --------------------


def test_verify_spectrum_passes():
    _, b34 = B_of(3, 4)
    report = verify_spectrum(b34, spectrum_prime_power(3, 2, 2))
    assert report.all_ok
    assert {c.eigenvalue: c.computed for c in report.entries} == {36: 1, 8: 6, 4: 21}

    _, b32 = B_of(3, 2)
    report32 = verify_spectrum(b32, spectrum_prime_power(3, 2, 1))
    assert report32.all_ok
    assert b32.trace() == 21 == 9 * 1 + 2 * 6


def test_verify_spectrum_negative_control():
    _, b32 = B_of(3, 2)
    bogus = SpectrumTable(
        n=3, m=2, rows=(SpectrumRow(9, 1, "s=1"), SpectrumRow(3, 6, "s=2"))
    )
    report = verify_spectrum(b32, bogus)
    assert not report.all_ok
    failed = {c.eigenvalue: c for c in report.entries}
    assert not failed[3].ok and failed[3].computed == 0
    assert not report.trace_ok


def test_report_json_schema():
    _, b = B_of(3, 2)
    report = verify_spectrum(b, spectrum_prime_power(3, 2, 1))
    obj = json.loads(report.to_json())
    assert set(obj) == {
        "n", "m", "theta", "entries", "trace_ok", "trace_sq_ok", "dimension_ok", "all_ok"
    }
    assert obj["entries"][0]["lambda"] == "9"
    assert obj["all_ok"] is True
    assert obj["theta"] == 7


def test_verify_rejects_mismatched_order():
    _, b = B_of(3, 2)
    with pytest.raises(DomainError):
        verify_spectrum(b, spectrum_prime_power(3, 2, 2))


# -------------------- eigenvector families --------------------


def test_all_ones_eigenvector():
    space, b = B_of(3, 2)
    ones = eigvec_all_ones(space)
    assert b.matvec(ones) == [9] * 7

    space4, b4 = B_of(3, 4)
    assert b4.matvec(eigvec_all_ones(space4)) == [36] * 28

    space22, b22 = B_of(2, 2)
    assert b22.matvec(eigvec_all_ones(space22)) == [1] * 3


def test_R_d_columns():
    space, b = B_of(3, 2)
    rd = eigvec_R_d(space)
    assert rd.cols == 6
    for j in range(6):
        col = [rd[i, j] for i in range(7)]
        assert b.matvec(col) == [2 * x for x in col]
    assert exact_rank(rd) == 6

    space23, b23 = B_of(2, 3)
    rd23 = eigvec_R_d(space23)
    for j in range(rd23.cols):
        col = [rd23[i, j] for i in range(rd23.rows)]
        assert b23.matvec(col) == col  # eigenvalue 3^0 = 1

    with pytest.raises(DomainError):
        eigvec_R_d(enumerate_space(3, 4))


def test_difference_vectors():
    part = k_partition(2, 2, 3)
    _, b = B_of(3, 4)
    diffs = eigvec_differences(part)
    assert diffs.cols == 21 == (2**2 - 1) * theta(3, 2)
    for j in range(diffs.cols):
        col = [diffs[i, j] for i in range(diffs.rows)]
        nonzero = [x for x in col if x]
        assert sorted(nonzero) == [-1, 1]
        assert b.matvec(col) == [4 * x for x in col]
    assert exact_rank(diffs) == 21


def test_lift_examples():
    part = k_partition(2, 2, 3)
    _, b4 = B_of(3, 4)
    base_space, b2 = B_of(3, 2)

    ones = eigvec_all_ones(base_space)
    assert eigvec_lift(ones, part) == [1] * 28  # lift of all-ones is all-ones

    rd = eigvec_R_d(base_space)
    lifted_cols = []
    for j in range(rd.cols):
        col = [rd[i, j] for i in range(rd.rows)]
        lifted = eigvec_lift(col, part)
        assert b4.matvec(lifted) == [8 * x for x in lifted]
        lifted_cols.append(lifted)
    stacked = ExactMatrix([[c[i] for c in lifted_cols] for i in range(28)])
    assert exact_rank(stacked) == rd.cols  # lifting preserves independence


def test_tensor_eigenvectors():
    perm = crt_permutation(3, 2, 3)
    _, b6 = B_of(3, 6)
    space2, _ = B_of(3, 2)
    space3, _ = B_of(3, 3)

    ones2 = eigvec_all_ones(space2)
    ones3 = eigvec_all_ones(space3)
    w = eigvec_tensor([ones2, ones3], perm)
    assert w == [1] * 91
    assert b6.matvec(w) == [144 * x for x in w]

    rd3 = eigvec_R_d(space3)
    col = [rd3[i, 0] for i in range(rd3.rows)]
    w2 = eigvec_tensor([ones2, col], perm)
    assert b6.matvec(w2) == [27 * x for x in w2]


def test_full_family_prime_power():
    space, family = eigvec_family_prime_power(3, 2, 2)
    b = build_B_product(build_A(space))
    assert len(family) == 28
    for lam, vec in family:
        assert b.matvec(vec) == [lam * x for x in vec]
    stacked = ExactMatrix([[vec[i] for _, vec in family] for i in range(28)])
    assert exact_rank(stacked) == 28
    # per-eigenvalue counts match the table
    counts = {}
    for lam, _ in family:
        counts[lam] = counts.get(lam, 0) + 1
    assert counts == {36: 1, 8: 6, 4: 21}
