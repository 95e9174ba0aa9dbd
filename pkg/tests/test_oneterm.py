"""
Tests for the inversion core: branch map, branch selection, kernels,
potentials, tables, and the defining integral equation.
"""

import json
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from phasepot.errors import BranchSelectionError, DomainError, SingularityError
from phasepot.oneterm import (
    EPSILON_DEGENERATE,
    BranchParams,
    PhaseShiftSpec,
    branch_parameter,
    input_kernel_g,
    kernel_K,
    potential_table,
    potential_value,
    residual_integral_equation,
    select_nonsingular,
)
from phasepot.verify import weighted_absolute_integral
from phasepot.wronskian import wronskian_orders

# binary64 arithmetic of L = l - (2/pi) delta + 2n
L_FIG_A = -0.49656342244671348   # l=0, delta=0.780, n=0
L_FIG_B = 0.045070341448627982   # l=1, delta=1.50,  n=0
L_TWO_ROOT = L_FIG_B + 4.0       # same spec on the n=2 branch

# mpmath root polish, 50 digits
ROOT_L0_L2 = 2.4431401944938765
ROOT1_L1_L4 = 3.5832219640741933
ROOT2_L1_L4 = 130.19353711420491

# mpmath, 50 digits: 6 sin(1) cos(2)
G_EXAMPLE = -2.1010529302440879


def test_branch_parameter_reproduces_figure_captions():
    b = branch_parameter(PhaseShiftSpec(l=0.0, delta=0.780), 0)
    assert b.L == pytest.approx(L_FIG_A, rel=1e-15)
    assert abs(b.L - (-0.497)) <= 5e-4
    assert b.coupling == pytest.approx(-b.L * (b.L + 1.0), rel=1e-15)
    assert not b.degenerate

    b = branch_parameter(PhaseShiftSpec(l=1.0, delta=1.50), 0)
    assert b.L == pytest.approx(L_FIG_B, rel=1e-15)
    assert abs(b.L - 0.045) <= 5e-4

    b = branch_parameter(PhaseShiftSpec(l=0.0, delta=0.0), 1)
    assert b.L == 2.0
    assert b.coupling == -6.0
    assert not b.degenerate


def test_branch_parameter_degenerate_flag():
    b = branch_parameter(PhaseShiftSpec(l=0.0, delta=0.0), 0)
    assert b.degenerate and b.L == 0.0 and b.coupling == 0.0
    # delta = pi lands on L = l up to rounding of (2/pi)*pi
    b = branch_parameter(PhaseShiftSpec(l=1.0, delta=math.pi), 1)
    assert b.degenerate


def test_branch_parameter_rejects_inadmissible_order():
    with pytest.raises(DomainError):
        branch_parameter(PhaseShiftSpec(l=0.0, delta=0.780), -3)


def test_spec_validation():
    with pytest.raises(DomainError):
        PhaseShiftSpec(l=-0.5, delta=0.1)
    with pytest.raises(DomainError):
        PhaseShiftSpec(l=0.0, delta=math.inf)


def test_select_nonsingular_golden_cases():
    cases = [
        (0.0, 0.780, 0, L_FIG_A),
        (1.0, 1.50, 0, L_FIG_B),
        (0.0, -0.3, 0, (2.0 / math.pi) * 0.3),
        (0.5, 0.4, 0, 0.5 - (2.0 / math.pi) * 0.4),
    ]
    for l, delta, n, L in cases:
        b = select_nonsingular(PhaseShiftSpec(l=l, delta=delta))
        assert b.n == n
        assert b.L == pytest.approx(L, rel=1e-15)
        assert 0.0 < abs(b.L - l) <= 1.0
        assert not b.degenerate


def test_select_nonsingular_reaches_nonzero_branch():
    # delta = 2.5 drives the n=0 candidate below -1/2; n=1 is the survivor
    b = select_nonsingular(PhaseShiftSpec(l=0.0, delta=2.5))
    assert b.n == 1
    assert b.L == pytest.approx(2.0 - 5.0 / math.pi, rel=1e-14)


def test_select_nonsingular_degenerate_surrogate():
    b = select_nonsingular(PhaseShiftSpec(l=0.0, delta=0.0))
    assert b.degenerate
    assert b.n == 0
    assert b.L == -EPSILON_DEGENERATE
    assert 0.0 < b.coupling < 2e-6

    b = select_nonsingular(PhaseShiftSpec(l=1.0, delta=-math.pi))
    assert b.degenerate
    assert b.n == -1
    assert b.L == 1.0 - EPSILON_DEGENERATE


def test_select_nonsingular_tie_breaks_to_smaller_n():
    # (2/pi)*(pi/2) is exactly 1.0 in binary64, so both neighbors of l sit
    # at separation 1; the smaller |n| must win.
    b = select_nonsingular(PhaseShiftSpec(l=2.0, delta=math.pi / 2))
    assert (b.n, b.L) == (0, 1.0)
    b = select_nonsingular(PhaseShiftSpec(l=1.0, delta=-math.pi / 2))
    assert (b.n, b.L) == (0, 2.0)


def test_select_nonsingular_reports_candidates_when_stuck():
    # l close to the -1/2 boundary with a shift that pushes the only
    # nearby branch out of the admissible order set
    with pytest.raises(BranchSelectionError) as err:
        select_nonsingular(PhaseShiftSpec(l=-0.4, delta=0.35 * math.pi))
    assert len(err.value.candidates) == 11


def test_input_kernel_symmetry_and_value():
    b = branch_parameter(PhaseShiftSpec(l=0.0, delta=0.0), 1)  # L = 2
    rng = np.random.default_rng(7)
    for x, y in rng.uniform(0.2, 20.0, size=(8, 2)):
        assert input_kernel_g(b, x, y) == input_kernel_g(b, y, x)
    assert input_kernel_g(b, 1.0, 2.0) == pytest.approx(G_EXAMPLE, rel=1e-12)

    degenerate = branch_parameter(PhaseShiftSpec(l=0.0, delta=0.0), 0)
    assert input_kernel_g(degenerate, 1.0, 2.0) == 0.0


def _branch_l0_L1():
    # delta = -pi/2 at l=0 gives exactly L = 1 (coupling -2)
    return branch_parameter(PhaseShiftSpec(l=0.0, delta=-math.pi / 2), 0)


def test_kernel_closed_form_value():
    b = _branch_l0_L1()
    assert b.L == 1.0 and b.coupling == -2.0
    # K(pi, pi) = -2 * v_0(pi) u_1(pi) / W(pi) = -2 * 1 * 1 * pi
    assert kernel_K(b, math.pi, math.pi) == pytest.approx(-2.0 * math.pi, rel=1e-12)


def test_kernel_domain_and_degenerate():
    b = _branch_l0_L1()
    with pytest.raises(DomainError):
        kernel_K(b, 1.0, 2.0)
    degenerate = branch_parameter(PhaseShiftSpec(l=0.0, delta=0.0), 0)
    assert kernel_K(degenerate, 2.0, 1.0) == 0.0


def test_kernel_refuses_wronskian_root():
    b = branch_parameter(PhaseShiftSpec(l=0.0, delta=0.0), 1)
    with pytest.raises(SingularityError) as err:
        kernel_K(b, ROOT_L0_L2, 1.0)
    assert err.value.nearest_root == pytest.approx(ROOT_L0_L2, abs=1e-6)
    assert err.value.x == pytest.approx(ROOT_L0_L2)
    # magnitude grows without bound on approach
    assert abs(kernel_K(b, ROOT_L0_L2 + 1e-5, 1.0)) > 1e3
    assert abs(kernel_K(b, ROOT_L0_L2 + 1e-5, 1.0)) > abs(
        kernel_K(b, ROOT_L0_L2 + 1e-2, 1.0)
    )


def test_wronskian_derivative_identity():
    # W'(x) = coupling * u_L(x) v_l(x) / x^2, checked against a five-point
    # stencil of the direct Wronskian evaluation
    from phasepot.specfun import riccati_u, riccati_v

    h = 1e-3
    for b in (
        select_nonsingular(PhaseShiftSpec(l=0.0, delta=0.780)),
        select_nonsingular(PhaseShiftSpec(l=1.0, delta=1.50)),
        branch_parameter(PhaseShiftSpec(l=0.0, delta=0.0), 1),
    ):
        l, L = b.spec.l, b.L
        for x in np.linspace(0.5, 30.0, 9):
            x = float(x)
            stencil = (
                -wronskian_orders(l, L, x + 2 * h)
                + 8 * wronskian_orders(l, L, x + h)
                - 8 * wronskian_orders(l, L, x - h)
                + wronskian_orders(l, L, x - 2 * h)
            ) / (12 * h)
            identity = b.coupling * riccati_u(L, x) * riccati_v(l, x) / x**2
            assert identity == pytest.approx(stencil, abs=1e-8)


def test_potential_matches_finite_difference_of_kernel_diagonal():
    b = select_nonsingular(PhaseShiftSpec(l=0.0, delta=0.780))
    h = 2e-3

    def diag(x):
        return kernel_K(b, x, x) / x

    for x in np.linspace(0.5, 30.0, 13):
        x = float(x)
        stencil = (-diag(x + 2 * h) + 8 * diag(x + h) - 8 * diag(x - h) + diag(x - 2 * h)) / (
            12 * h
        )
        q_fd = -2.0 / x * stencil
        assert potential_value(b, x) == pytest.approx(q_fd, rel=1e-6)


def test_potential_scalar_array_agreement():
    b = select_nonsingular(PhaseShiftSpec(l=1.0, delta=1.50))
    xs = np.linspace(0.3, 25.0, 40)
    arr = potential_value(b, xs)
    scalars = np.array([potential_value(b, float(x)) for x in xs])
    np.testing.assert_allclose(arr, scalars, rtol=0, atol=0)


def test_potential_degenerate_paths():
    exact = branch_parameter(PhaseShiftSpec(l=0.0, delta=0.0), 0)
    assert potential_value(exact, 1.0) == 0.0
    assert np.all(potential_value(exact, np.linspace(1, 5, 5)) == 0.0)

    surrogate = select_nonsingular(PhaseShiftSpec(l=0.0, delta=0.0))
    xs = np.linspace(0.1, 20.0, 800)
    assert np.max(np.abs(potential_value(surrogate, xs))) <= 1e-4


def test_potential_raises_at_wronskian_root():
    b = branch_parameter(PhaseShiftSpec(l=0.0, delta=0.0), 1)
    with pytest.raises(SingularityError):
        potential_value(b, ROOT_L0_L2)
    with pytest.raises(SingularityError) as err:
        potential_value(b, np.array([1.0, ROOT_L0_L2, 5.0]))
    assert err.value.nearest_root == pytest.approx(ROOT_L0_L2, abs=1e-6)


def test_potential_table_annotates_singular_window():
    spec = PhaseShiftSpec(l=0.0, delta=0.0)
    grid = np.sort(
        np.concatenate([np.linspace(0.5, 10.0, 50), [ROOT_L0_L2 - 5e-4, ROOT_L0_L2 + 5e-4]])
    )
    table = potential_table(spec, n=1, grid=grid)
    assert table.branch.L == 2.0
    assert len(table.singular_points) == 1
    assert table.singular_points[0] == pytest.approx(ROOT_L0_L2, abs=1e-9)
    assert len(table.exclusion_radii) == 1
    assert table.exclusion_radii[0] >= 1e-3

    # the two planted near-root samples are flagged, kept, and counted
    flagged = table.grid[table.excluded]
    assert flagged.size == 2
    assert table.q.size == table.grid.size
    assert np.all(np.isfinite(table.q[~table.excluded]))


def test_potential_table_windowed_root_count():
    spec = PhaseShiftSpec(l=1.0, delta=1.50)
    table = potential_table(spec, n=2, x_max=100.0, num_points=500)
    assert table.branch.L == pytest.approx(L_TWO_ROOT, rel=1e-15)
    assert len(table.singular_points) == 1  # second root sits at 130.19

    wide = potential_table(spec, n=2, grid=np.linspace(0.2, 200.0, 1000))
    assert len(wide.singular_points) == 2
    assert wide.singular_points[0] == pytest.approx(ROOT1_L1_L4, abs=1e-6)
    assert wide.singular_points[1] == pytest.approx(ROOT2_L1_L4, abs=1e-6)


def test_potential_table_degenerate_is_flat():
    table = potential_table(PhaseShiftSpec(l=0.0, delta=0.0), grid=np.linspace(0.1, 20.0, 400))
    assert table.branch.degenerate
    assert np.max(np.abs(table.q)) <= 1e-4
    assert table.singular_points == ()


def test_table_serialization_round():
    table = potential_table(PhaseShiftSpec(l=0.0, delta=0.780), x_max=10.0, num_points=25)
    text = table.to_csv_text()
    lines = text.strip().split("\n")
    assert lines[0] == "x,q,singular_flag"
    assert len(lines) == 26
    first = lines[1].split(",")
    assert float(first[0]) == pytest.approx(10.0 / 25)
    assert first[2] in ("0", "1")
    # byte-identical on repetition
    assert table.to_csv_text() == text

    doc = table.to_json_dict()
    json.dumps(doc)  # must be serializable as-is
    assert doc["schema_version"] == 1
    assert doc["grid_points"] == 25
    assert doc["branch"]["L"] == pytest.approx(L_FIG_A)
    assert doc["singular_points"] == []


def test_table_grid_validation():
    spec = PhaseShiftSpec(l=0.0, delta=0.780)
    with pytest.raises(DomainError):
        potential_table(spec, grid=np.array([2.0, 1.0]))
    with pytest.raises(DomainError):
        potential_table(spec, grid=np.array([-1.0, 1.0]))
    with pytest.raises(DomainError):
        potential_table(spec, grid=np.ones((2, 2)))


def test_residual_of_defining_equation():
    for b, x, y in (
        (select_nonsingular(PhaseShiftSpec(l=0.0, delta=0.780)), 3.0, 1.0),
        (select_nonsingular(PhaseShiftSpec(l=1.0, delta=1.50)), 5.0, 2.0),
    ):
        k = kernel_K(b, x, y)
        assert abs(residual_integral_equation(b, x, y)) <= 1e-6 * (1.0 + abs(k))
    # diagonal edge: the outer panel is empty there
    b = select_nonsingular(PhaseShiftSpec(l=0.0, delta=0.780))
    k = kernel_K(b, 2.0, 2.0)
    assert abs(residual_integral_equation(b, 2.0, 2.0)) <= 1e-6 * (1.0 + abs(k))


def test_residual_validation_and_degenerate():
    b = select_nonsingular(PhaseShiftSpec(l=0.0, delta=0.780))
    with pytest.raises(DomainError):
        residual_integral_equation(b, 1.0, 2.0)
    with pytest.raises(DomainError):
        residual_integral_equation(b, 2.0, 1.0, quad_nodes=3)
    degenerate = branch_parameter(PhaseShiftSpec(l=0.0, delta=0.0), 0)
    assert residual_integral_equation(degenerate, 2.0, 1.0) == 0.0


@given(
    l=st.floats(min_value=-0.45, max_value=6.0),
    delta=st.floats(min_value=-6.0, max_value=6.0),
    n=st.integers(min_value=-3, max_value=3),
)
def test_branch_tan_relation_property(l, delta, n):
    # tan(delta - l pi/2) = tan(-L pi/2) is equivalent to the argument
    # difference being an integer multiple of pi
    spec = PhaseShiftSpec(l=l, delta=delta)
    L = l - (2.0 / math.pi) * delta + 2.0 * n
    assume(L > -0.5)
    b = branch_parameter(spec, n)
    assert b.L == L
    assert abs(math.sin(delta - (l - b.L) * math.pi / 2.0)) <= 1e-9


@given(
    l=st.floats(min_value=-0.45, max_value=6.0),
    delta=st.floats(min_value=-6.2, max_value=6.2),
)
def test_nonsingular_branch_is_unique(l, delta):
    hits = []
    for n in range(-5, 6):
        L = l - (2.0 / math.pi) * delta + 2.0 * n
        if L > -0.5 and 0.0 < abs(L - l) <= 1.0:
            hits.append(n)
    assume(hits)  # the window can be empty near the order boundary
    assert len(hits) == 1
    picked = select_nonsingular(PhaseShiftSpec(l=l, delta=delta))
    if not picked.degenerate:
        assert picked.n == hits[0]


def test_weighted_integral_converges_for_nonsingular_branch():
    b = select_nonsingular(PhaseShiftSpec(l=0.0, delta=0.780))
    q = lambda x: potential_value(b, x)
    sums = [weighted_absolute_integral(q, num=num) for num in (40001, 80001, 160001)]
    assert abs(sums[1] - sums[0]) < 0.01 * abs(sums[0])
    assert abs(sums[2] - sums[1]) < 0.01 * abs(sums[1])


def test_weighted_integral_diverges_for_singular_branch():
    b = branch_parameter(PhaseShiftSpec(l=0.0, delta=0.0), 1)
    q = lambda x: potential_value(b, x)
    sums = [
        weighted_absolute_integral(q, num=160001, exclusions=((ROOT_L0_L2, r),))
        for r in (1e-1, 1e-2, 1e-3)
    ]
    assert sums[0] < sums[1] < sums[2]
    assert sums[2] > 10.0 * sums[0]
