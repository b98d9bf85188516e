"""Pick multiplier norms against closed forms.

Two-point data (0 -> 0, w -> s) in any dimension has minimal multiplier norm
|s| / |w|: the 2x2 Pick matrix is PSD exactly when t^2 |w|^2 >= |s|^2, and the
linear functional <z, w/|w|> attains it. Separator data (1 on {0}, 0 on {w})
gives 1 / |w| the same way. These are the anchors everything else is checked
against.
"""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pickmult import (
    BallPoint,
    ConfigError,
    DimensionMismatchError,
    PickProblem,
    SeparatorOverlapError,
    multiplier_norm,
    separator_bound,
    union_norm_check,
)

radii = st.floats(min_value=0.05, max_value=0.9)
angles = st.floats(min_value=0.0, max_value=2.0 * np.pi, exclude_max=True)


def test_single_node_norm_is_modulus():
    rep = multiplier_norm([BallPoint([0.3])], [0.5 - 0.2j])
    assert rep.norm == pytest.approx(abs(0.5 - 0.2j), abs=1e-12)


@pytest.mark.parametrize("r", [0.1, 0.25, 0.5, 0.75, 0.9])
def test_two_point_closed_form_disk(r):
    rep = multiplier_norm([BallPoint([0.0]), BallPoint([r])], [0.0, 0.3])
    assert rep.norm == pytest.approx(0.3 / r, abs=1e-10)
    assert rep.min_eig_at_norm >= -1e-10 * max(1.0, rep.norm**2)


def test_two_point_closed_form_ball():
    w = [0.3, 0.4j]  # |w| = 0.5
    rep = multiplier_norm([BallPoint([0.0, 0.0]), BallPoint(w)], [0.0, 0.25])
    assert rep.norm == pytest.approx(0.5, abs=1e-10)


@given(r=radii, phase=angles)
def test_two_point_rotation_invariance(r, phase):
    w = r * np.exp(1j * phase)
    rep = multiplier_norm([BallPoint([0.0]), BallPoint([w])], [0.0, 0.3])
    assert rep.norm == pytest.approx(0.3 / r, rel=1e-9)


@given(
    scale=st.floats(min_value=0.1, max_value=10.0),
    r=radii,
)
def test_norm_scales_linearly_in_data(scale, r):
    nodes = [BallPoint([0.0]), BallPoint([r]), BallPoint([-0.5 * r])]
    values = [0.1, -0.2, 0.05j]
    base = multiplier_norm(nodes, values).norm
    scaled = multiplier_norm(nodes, [scale * v for v in values]).norm
    assert scaled == pytest.approx(scale * base, rel=1e-9)


def test_constant_data_costs_its_modulus():
    nodes = [BallPoint([0.1]), BallPoint([0.5j]), BallPoint([-0.3])]
    rep = multiplier_norm(nodes, [0.7, 0.7, 0.7])
    assert rep.norm == pytest.approx(0.7, abs=1e-10)


def test_norm_monotone_under_node_insertion():
    nodes = [BallPoint([0.0]), BallPoint([0.4]), BallPoint([0.2 + 0.3j])]
    values = [0.1, 0.5, -0.2]
    t2 = multiplier_norm(nodes[:2], values[:2]).norm
    t3 = multiplier_norm(nodes, values).norm
    assert t3 >= t2 - 1e-12


def test_mismatched_lengths_rejected():
    with pytest.raises(ConfigError):
        PickProblem((BallPoint([0.1]),), (0.1, 0.2))


def test_mixed_dimensions_rejected():
    with pytest.raises(DimensionMismatchError):
        multiplier_norm([BallPoint([0.1]), BallPoint([0.1, 0.1])], [0.0, 0.0])


@pytest.mark.parametrize("r", [0.2, 0.5, 0.8])
def test_separator_closed_form(r):
    s = separator_bound([BallPoint([0.0])], [BallPoint([r])])
    assert s == pytest.approx(1.0 / r, abs=1e-10)


def test_separator_rejects_overlap():
    with pytest.raises(SeparatorOverlapError):
        separator_bound([BallPoint([0.2])], [BallPoint([0.2])])


def test_union_norm_check_two_groups():
    a = [BallPoint([0.0]), BallPoint([0.1])]
    b = [BallPoint([0.7]), BallPoint([0.8])]
    rep = union_norm_check(a, [0.3, 0.2], b, [0.1, -0.2])
    assert rep.holds
    assert rep.t_union <= rep.bound + 1e-8
    assert rep.slack == pytest.approx(rep.bound - rep.t_union)
    # union norm dominates each piece on its own
    assert rep.t_union >= rep.t_a - 1e-10
    assert rep.t_union >= rep.t_b - 1e-10


def test_whitening_jitter_zero_for_separated_nodes():
    nodes = [BallPoint([0.0]), BallPoint([0.5]), BallPoint([0.5j])]
    rep = multiplier_norm(nodes, [0.1, 0.2, 0.3])
    assert rep.whitening_jitter == 0.0
