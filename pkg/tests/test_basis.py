import numpy as np
import pytest

from mdspline import (
    SplineSpace,
    UnsupportedSpaceError,
    fast_recurrence_basis,
    fast_recurrence_blendings,
    basis_from_transitions,
    build_basis,
    extended_partitions,
    extract_blending,
    integral_recurrence_oracle,
    solve_all,
)
from mdspline.transitions import endpoint_orders

from classical import basis_derivative_matrix, basis_matrix, clamped_knots
from conftest import space_corpus


def test_running_basis_functions_match_fig2_counts(running_space):
    oracle = integral_recurrence_oracle(running_space)
    assert [len(level) for level in oracle.levels] == [1, 2, 4, 6, 7]


def test_mixed_space_level_counts(mixed_space):
    oracle = integral_recurrence_oracle(mixed_space)
    assert [len(level) for level in oracle.levels] == [1, 2, 3, 4, 5]


def test_bezier_interval_basis_is_bernstein():
    sp = SplineSpace((0, 1), [], [3], [])
    _, basis = build_basis(sp)
    xs = np.linspace(0, 1, 40)
    vals = basis.sample(xs)
    from math import comb

    for i in range(4):
        ref = comb(3, i) * xs**i * (1 - xs) ** (3 - i)
        assert np.abs(vals[:, i] - ref).max() <= 1e-14


def test_oracle_equivalence_reference_spaces(running_space, mixed_space):
    for sp in (running_space, mixed_space):
        _, basis = build_basis(sp)
        oracle = integral_recurrence_oracle(sp).final_basis()
        xs = np.linspace(*sp.domain, 500)
        assert np.abs(basis.sample(xs) - oracle.sample(xs)).max() <= 1e-10


def test_oracle_equivalence_on_corpus():
    for sp in space_corpus(50, seed=42):
        _, basis = build_basis(sp)
        oracle = integral_recurrence_oracle(sp).final_basis()
        xs = np.linspace(*sp.domain, 500)
        assert np.abs(basis.sample(xs) - oracle.sample(xs)).max() <= 1e-10


def test_partition_of_unity_and_positivity_on_corpus():
    for sp in space_corpus(50, seed=43):
        _, basis = build_basis(sp)
        xs = np.linspace(*sp.domain, 300)
        vals = basis.sample(xs)
        assert np.abs(vals.sum(axis=1) - 1).max() <= 1e-12
        assert vals.min() >= -1e-12


def test_support_containment_on_corpus():
    for sp in space_corpus(30, seed=44):
        parts = extended_partitions(sp)
        _, basis = build_basis(sp)
        xs = np.linspace(*sp.domain, 400)
        vals = basis.sample(xs)
        for i in range(sp.dimension):
            outside = (xs < parts.starts[i]) | (xs > parts.ends[i])
            if outside.any():
                assert np.abs(vals[outside, i]).max() <= 1e-12


def test_endpoint_vanishing_orders_on_corpus():
    # property iii: N_i vanishes exactly k_i^s+1 times at its start knot and
    # k_i^t+1 times at its end knot; counted on the Bernstein coefficient rows
    for sp in space_corpus(40, seed=45):
        parts = extended_partitions(sp)
        _, basis = build_basis(sp)
        for i in range(sp.dimension):
            k_s, k_t = endpoint_orders(sp, parts, i)
            first = basis.functions[i].pieces[0].coeffs
            last = basis.functions[i].pieces[-1].coeffs
            lead = 0
            while lead < len(first) and abs(first[lead]) < 1e-8:
                lead += 1
            trail = 0
            while trail < len(last) and abs(last[len(last) - 1 - trail]) < 1e-8:
                trail += 1
            assert lead == max(k_s + 1, 0), f"function {i} start order"
            assert trail == max(k_t + 1, 0), f"function {i} end order"


def test_basis_positive_inside_support(running_space):
    parts = extended_partitions(running_space)
    _, basis = build_basis(running_space)
    for i in range(running_space.dimension):
        lo, hi = parts.starts[i], parts.ends[i]
        xs = np.linspace(lo, hi, 60)[1:-1]
        vals = [basis.functions[i].value(x) for x in xs]
        assert min(vals) > 0


def test_eval_at_running_endpoints(running_space):
    _, basis = build_basis(running_space)
    ell, vals = basis.eval_at(0.0)
    assert ell == 1  # 0-based: functions 0..1 active on the degree-1 interval
    assert np.allclose(vals, [1.0, 0.0], atol=1e-14)
    ell, vals = basis.eval_at(7.0)
    assert ell == running_space.dimension - 1
    assert vals[-1] == pytest.approx(1.0, abs=1e-14)
    assert np.abs(vals[:-1]).max() <= 1e-14


def test_eval_at_sums_to_one_on_corpus():
    rng = np.random.default_rng(46)
    for sp in space_corpus(20, seed=46):
        _, basis = build_basis(sp)
        for x in rng.uniform(*sp.domain, size=10):
            _, vals = basis.eval_at(float(x))
            assert vals.sum() == pytest.approx(1.0, abs=1e-13)


def test_eval_at_outside_domain(running_space):
    _, basis = build_basis(running_space)
    with pytest.raises(ValueError):
        basis.eval_at(-0.1)


def test_derivative_rows_sum_to_zero(running_space):
    _, basis = build_basis(running_space)
    xs = np.linspace(0, 7, 200)
    dsum = basis.sample_derivative(xs, 1).sum(axis=1)
    assert np.abs(dsum).max() <= 1e-11


def test_conventional_basis_matches_cox_de_boor():
    cases = [
        ((0, 3), [1, 2], [2, 2, 2], [1, 1]),
        ((0, 4), [1, 2, 3], [3, 3, 3, 3], [2, 2, 2]),
        ((0, 6), [1, 2, 3, 4, 5], [5, 5, 5, 5, 5, 5], [4, 3, 4, 2, 4]),
        ((0, 2), [1], [4, 4], [1]),
    ]
    for domain, interior, degrees, ks in cases:
        sp = SplineSpace(domain, interior, degrees, ks)
        _, basis = build_basis(sp)
        d = degrees[0]
        parts = extended_partitions(sp)
        knots = np.concatenate([parts.starts, [domain[1]] * (d + 1)])
        xs = np.linspace(*domain, 300)
        ref = basis_matrix(knots, d, xs)
        assert ref.shape[1] == sp.dimension
        assert np.abs(basis.sample(xs) - ref).max() <= 1e-12


def test_conventional_cubic_derivative_matches_classical():
    sp = SplineSpace((0, 3), [1, 2], [3, 3, 3], [2, 2])
    _, basis = build_basis(sp)
    knots = clamped_knots((0, 3), [1, 2], 3)
    xs = np.linspace(0, 3, 100)[1:-1]
    ref = basis_derivative_matrix(knots, 3, xs)
    assert np.abs(basis.sample_derivative(xs, 1) - ref).max() <= 1e-11


def test_blending_extraction_closed_forms(mixed_space):
    # frozen rational closed forms for the two blending functions that start
    # at the left domain end, derived once in exact arithmetic and verified
    # piecewise-continuous at the interior break-points
    oracle = integral_recurrence_oracle(mixed_space)
    blend2 = extract_blending(oracle, 1, 4)
    blend3 = extract_blending(oracle, 2, 4)
    closed_forms = [
        (blend2, 0, 1, lambda x: (288 * x**2 - 475 * x) / (61 * (9 * x - 16))),
        (blend2, 1, 2, lambda x: (64 * x**3 - 297 * x**2 + 301 * x + 119)
         / (61 * (3 * x**2 - 15 * x + 19))),
        (blend2, 2, 3, lambda x: (16 * x + 13) / 61),
        (blend3, 0, 1, lambda x: 32 * x / 99),
        (blend3, 1, 2, lambda x: -16 * (-116 * x**3 + 285 * x**2 + 246 * x - 181)
         / (297 * (29 * x**2 - 97 * x + 29))),
        (blend3, 2, 3, lambda x: 16 * (45 * x**4 - 278 * x**3 + 177 * x**2 + 1182 * x - 1045)
         / (297 * (15 * x**3 - 119 * x**2 + 277 * x - 149))),
        (blend3, 3, 4, lambda x: (64 * x + 41) / 297),
    ]
    for phi, lo, hi, ref in closed_forms:
        xs = np.linspace(lo, hi, 22)[1:-1]  # 20 interior samples
        errs = [abs(phi(x) - ref(x)) for x in xs]
        assert not any(np.isnan(errs))
        assert max(errs) <= 1e-9


def test_fast_path_rejects_unqualified(mixed_space):
    with pytest.raises(UnsupportedSpaceError):
        fast_recurrence_blendings(mixed_space)  # C^2/C^3 joins between unequal degrees


def test_fast_path_matches_production_on_qualifying_spaces():
    cases = [
        ((0, 2), [1], [2, 3], [1]),
        ((0, 3), [1, 2], [1, 2, 1], [1, 1]),
        ((0, 3), [1, 2], [3, 3, 3], [2, 2]),
        ((0, 4), [1, 2, 3], [2, 4, 3, 1], [0, 1, 1]),
        ((0, 4), [1.5, 2.5, 3.2], [4, 2, 5, 3], [1, 1, 0]),
    ]
    for domain, interior, degrees, ks in cases:
        sp = SplineSpace(domain, interior, degrees, ks)
        fast = fast_recurrence_basis(sp)
        _, production = build_basis(sp)
        xs = np.linspace(*domain, 200)
        assert np.abs(fast.sample(xs) - production.sample(xs)).max() <= 1e-12


def test_fast_path_qualifying_corpus():
    kept = 0
    for sp in space_corpus(120, seed=47):
        d, k = sp.degrees, sp.continuities
        if any(d[i] != d[i + 1] and k[i] > 1 for i in range(len(k))):
            continue
        kept += 1
        fast = fast_recurrence_basis(sp)
        _, production = build_basis(sp)
        xs = np.linspace(*sp.domain, 200)
        assert np.abs(fast.sample(xs) - production.sample(xs)).max() <= 1e-12
    assert kept >= 10


def test_fast_path_blending_is_cox_de_boor_ratio_for_equal_degrees():
    sp = SplineSpace((0, 3), [1, 2], [3, 3, 3], [2, 2])
    parts = extended_partitions(sp)
    tables = fast_recurrence_blendings(sp, parts)
    knots = clamped_knots((0, 3), [1, 2], 3)
    m = sp.max_degree
    for n in range(1, m + 1):
        for i, table in tables[n].items():
            lo_knot = knots[i]
            hi_knot = knots[i + n]
            for j, piece in table.items():
                for x in np.linspace(piece.lo, piece.hi, 7):
                    ref = (x - lo_knot) / (hi_knot - lo_knot)
                    assert piece(x) == pytest.approx(ref, abs=1e-13)


def test_philin_used_on_mixed_degree_support():
    # d=(1,2,1): the middle functions span 2-3 intervals of unequal degrees
    sp = SplineSpace((0, 3), [1, 2], [1, 2, 1], [1, 1])
    parts = extended_partitions(sp)
    tables = fast_recurrence_blendings(sp, parts)
    m = sp.max_degree
    # find a final-level phi spanning unequal degrees and check the 1/(delta*d_j) slopes
    found = False
    for i, table in tables[m].items():
        j0 = min(table)
        j1 = max(table) + 1
        degs = sp.degrees[j0:j1]
        if len(table) >= 2 and np.unique(degs).size > 1:
            found = True
            delta = sum(
                (sp.all_breaks[j + 1] - sp.all_breaks[j]) / sp.degrees[j]
                for j in range(j0, j1)
            )
            acc = 0.0
            for j in range(j0, j1):
                piece = table[j]
                width = sp.all_breaks[j + 1] - sp.all_breaks[j]
                assert piece(piece.lo) == pytest.approx(acc / delta, abs=1e-13)
                acc += width / sp.degrees[j]
                assert piece(piece.hi) == pytest.approx(acc / delta, abs=1e-13)
    assert found


def test_oracle_supports_match_definition(running_space):
    parts = extended_partitions(running_space)
    oracle = integral_recurrence_oracle(running_space, parts)
    m = running_space.max_degree
    for n, level in enumerate(oracle.levels):
        for i, poly in level.items():
            e = i - m + n
            assert poly.first_interval == parts.start_break[i]
            assert poly.last_interval == parts.end_break[e] - 1
