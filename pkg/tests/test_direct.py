import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclewalk.direct import (
    DENSE_MAX_D,
    WalkUnitary,
    build_shift_memory,
    build_shift_memoryless,
    build_walk_operator,
    evolve,
    position_distribution,
    probability_history,
    running_time_average,
    shift_memory_four_terms,
    step,
)
from cyclewalk.errors import DimensionMismatch, ModeMismatch
from cyclewalk.state import general_state, localized_state, make_config, paper_initial_state

from conftest import coin_from_angles, random_unitary


def _is_permutation(m):
    return bool(
        np.all((m == 0) | (m == 1))
        and np.all(m.sum(axis=0) == 1)
        and np.all(m.sum(axis=1) == 1)
    )


def test_memoryless_shift_examples():
    s = build_shift_memoryless(make_config(3, False)).matrix
    # |c=0, v=0> -> |0, 2>, |c=1, v=0> -> |1, 1>
    assert s[0 * 3 + 2, 0] == 1
    assert s[1 * 3 + 1, 1 * 3 + 0] == 1
    assert _is_permutation(s.real)


def test_memory_shift_examples():
    s = build_shift_memory(make_config(4, True)).matrix
    assert s[(0 * 2 + 0) * 4 + 3, 0] == 1  # |0,0,0> -> |0,0,3>
    assert s[(1 * 2 + 1) * 4 + 1, (1 * 2 + 0) * 4 + 0] == 1  # |1,0,0> -> |1,1,1>


def test_shift_mode_mismatch():
    with pytest.raises(ModeMismatch):
        build_shift_memoryless(make_config(4, True))
    with pytest.raises(ModeMismatch):
        build_shift_memory(make_config(4, False))


@pytest.mark.parametrize("d", [3, 4, 5, 8, 13, 64])
def test_four_term_and_compact_shift_identical(d):
    compact = build_shift_memory(make_config(d, True)).matrix
    assert np.array_equal(compact, shift_memory_four_terms(d))
    assert _is_permutation(compact.real)


def test_walk_operator_unitary_hadamard_d4():
    w = build_walk_operator(make_config(4, True))
    assert w.unitarity_defect() <= 1e-12


def test_identity_coin_walk_is_permutation():
    w = build_walk_operator(make_config(7, True, np.eye(2)))
    assert _is_permutation(w.matrix.real) and np.all(w.matrix.imag == 0)


def _one_step_by_hand(d):
    """Expand the coin and the four shift transitions for the superposed-memory start.

    Start (|0,0,0> + |0,1,0>)/sqrt2; the Hadamard sends coin |0> to (|0> + |1>)/sqrt2,
    giving (|0,0,0> + |1,0,0> + |0,1,0> + |1,1,0>)/2. The shift then maps
    |0,0,0> -> |0,0,d-1>, |0,1,0> -> |0,1,1>, |1,0,0> -> |1,1,1>, |1,1,0> -> |1,0,d-1>.
    """
    out = np.zeros(4 * d, dtype=complex)
    for c, m, n in [(0, 0, d - 1), (0, 1, 1), (1, 1, 1), (1, 0, d - 1)]:
        out[(2 * c + m) * d + n] += 0.5
    return out


def test_one_step_from_paper_state_matches_hand_expansion():
    cfg = make_config(4, True)
    s1 = step(paper_initial_state(cfg), build_walk_operator(cfg))
    np.testing.assert_allclose(s1.amplitudes, _one_step_by_hand(4), rtol=0, atol=1e-15)
    np.testing.assert_allclose(s1.quad(1), [0, 0.5, 0, 0.5], atol=1e-15)
    np.testing.assert_allclose(s1.quad(3), [0.5, 0, 0.5, 0], atol=1e-15)
    p = position_distribution(s1).probs
    assert p[0] == 0 and p[2] == 0
    assert abs(p[1] + p[3] - 1) <= 1e-12


def test_step_dimension_mismatch():
    w = build_walk_operator(make_config(4, True))
    with pytest.raises(DimensionMismatch):
        step(paper_initial_state(make_config(5, True)), w)
    with pytest.raises(DimensionMismatch):
        step(localized_state(make_config(8, False), 0, 0, 0), w)


def test_evolve_zero_is_identity():
    cfg = make_config(5, True)
    s = paper_initial_state(cfg)
    assert evolve(s, build_walk_operator(cfg), 0) is s


@settings(max_examples=25, deadline=None)
@given(d=st.integers(3, 9), a=st.integers(0, 30), b=st.integers(0, 30), seed=st.integers(0, 2**32 - 1))
def test_evolve_group_property(d, a, b, seed):
    rng = np.random.default_rng(seed)
    cfg = make_config(d, True, random_unitary(rng))
    w = build_walk_operator(cfg)
    s = general_state(cfg, rng.standard_normal(4 * d) + 1j * rng.standard_normal(4 * d))
    lhs = evolve(s, w, a + b).amplitudes
    rhs = evolve(evolve(s, w, a), w, b).amplitudes
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(
    d=st.integers(3, 16),
    memory=st.booleans(),
    angles=st.tuples(*[st.floats(-np.pi, np.pi)] * 4),
    seed=st.integers(0, 2**32 - 1),
)
def test_step_preserves_norm(d, memory, angles, seed):
    rng = np.random.default_rng(seed)
    cfg = make_config(d, memory, coin_from_angles(*angles))
    s = general_state(cfg, rng.standard_normal(cfg.dim) + 1j * rng.standard_normal(cfg.dim))
    s1 = step(s, build_walk_operator(cfg))
    assert abs(s1.norm_sq - s.norm_sq) <= 1e-12


def test_norm_after_100_steps_d3():
    cfg = make_config(3, True)
    s = evolve(paper_initial_state(cfg), build_walk_operator(cfg), 100)
    assert abs(s.norm_sq - 1) <= 1e-10


@pytest.mark.parametrize("memory", [True, False])
@pytest.mark.parametrize("d", [5, 64, 65, 100])
def test_dense_and_permutation_paths_agree(d, memory, rng):
    cfg = make_config(d, memory, random_unitary(rng))
    w = build_walk_operator(cfg)
    v = rng.standard_normal(cfg.dim) + 1j * rng.standard_normal(cfg.dim)
    np.testing.assert_allclose(w.matrix @ v, w.apply_fast(v), rtol=0, atol=1e-12)
    assert w.use_dense == (d <= DENSE_MAX_D)


def test_bare_shift_fast_path():
    cfg = make_config(70, True)
    sh = build_shift_memory(cfg)
    v = np.arange(280, dtype=complex)
    np.testing.assert_array_equal(sh.apply_fast(v), sh.matrix @ v)


def test_position_distribution_of_initial_state():
    p = position_distribution(paper_initial_state(make_config(5, True))).probs
    np.testing.assert_allclose(p, [1, 0, 0, 0, 0], atol=1e-15)


@pytest.mark.parametrize("d", [4, 6, 10])
@pytest.mark.parametrize("memory", [True, False])
def test_bipartite_support_on_even_cycles(d, memory):
    cfg = make_config(d, memory)
    s0 = localized_state(cfg, 0, 0, 0)
    hist = probability_history(s0, build_walk_operator(cfg), 40)
    for t, p in enumerate(hist):
        wrong_parity = p[np.arange(d) % 2 != t % 2]
        assert np.all(wrong_parity <= 1e-28)


def test_running_average_t1_is_one_step():
    cfg = make_config(4, True)
    w = build_walk_operator(cfg)
    s0 = paper_initial_state(cfg)
    np.testing.assert_array_equal(
        running_time_average(s0, w, 1).probs, position_distribution(step(s0, w)).probs
    )


def test_running_average_step_zero_variant():
    cfg = make_config(5, True)
    w = build_walk_operator(cfg)
    s0 = paper_initial_state(cfg)
    hist = probability_history(s0, w, 10)
    np.testing.assert_allclose(running_time_average(s0, w, 10).probs, hist[1:].mean(0), atol=1e-15)
    np.testing.assert_allclose(
        running_time_average(s0, w, 10, include_step_zero=True).probs, hist[:-1].mean(0), atol=1e-15
    )


def test_running_average_is_distribution():
    cfg = make_config(7, False)
    w = build_walk_operator(cfg)
    avg = running_time_average(localized_state(cfg, 1, 0, 3), w, 500).probs
    assert np.all(avg >= 0) and abs(avg.sum() - 1) <= 1e-10


def test_running_average_rejects_bad_horizon():
    cfg = make_config(4, True)
    with pytest.raises(ValueError):
        running_time_average(paper_initial_state(cfg), build_walk_operator(cfg), 0)


def test_walk_unitary_is_immutable():
    w = build_walk_operator(make_config(4, True))
    assert isinstance(w, WalkUnitary)
    with pytest.raises(ValueError):
        w.matrix[0, 0] = 2
