import numpy as np
import pytest
from scipy.sparse import diags

from rydmis import (
    AtomArray,
    GapProfile,
    blockade_graph,
    build_basis,
    builtin_instance,
    count_isets,
    eigenpairs_lowest2,
    from_mhz,
    hamiltonian_terms,
    mis_projector_support,
    assemble,
    scan_gap,
    standard_schedule,
    track_mis_overlap,
)


def test_diagonal_matrix_eigenpairs():
    e0, e1, v0, v1 = eigenpairs_lowest2(diags([1.0, 3.0, 7.0]).tocsr())
    assert (e0, e1) == pytest.approx((1.0, 3.0))
    assert np.allclose(np.abs(v0), [1, 0, 0])
    assert np.allclose(np.abs(v1), [0, 1, 0])


def test_single_atom_eigenvalues(params):
    arr = AtomArray(name="one", positions=((0.0, 0.0),))
    g = blockade_graph(arr, params)
    h = hamiltonian_terms(g, build_basis(g, "full"))
    e0, e1, _, _ = eigenpairs_lowest2(assemble(h, from_mhz(1.0), 0.0))
    assert (e0, e1) == pytest.approx((-np.pi, np.pi))


def test_single_atom_gap_is_avoided_crossing(params):
    arr = AtomArray(name="one", positions=((0.0, 0.0),))
    g = blockade_graph(arr, params)
    h = hamiltonian_terms(g, build_basis(g, "full"))
    sched = standard_schedule(params)
    profile = scan_gap(h, sched, n_samples=64, store_vectors=False)
    expected = np.sqrt(params.omega0**2 + np.asarray(sched.delta(profile.times)) ** 2)
    assert np.allclose(profile.gaps, expected, rtol=1e-9)
    assert profile.g_min == pytest.approx(params.omega0, rel=1e-5)
    assert profile.delta_min == pytest.approx(0.0, abs=from_mhz(0.01))


def test_sample_count_precondition(params):
    arr = AtomArray(name="one", positions=((0.0, 0.0),))
    g = blockade_graph(arr, params)
    h = hamiltonian_terms(g, build_basis(g, "full"))
    with pytest.raises(ValueError, match="n_samples"):
        scan_gap(h, standard_schedule(params), n_samples=8)


def test_q1d10_final_ground_vector_is_mis(params, q1d10):
    _, g, h = q1d10
    matrix = assemble(h, params.omega0, params.delta_f)
    e0, e1, v0, _ = eigenpairs_lowest2(matrix)
    # dense full diagonalization as the oracle
    vals, vecs = np.linalg.eigh(matrix.toarray())
    assert e0 == pytest.approx(vals[0], abs=1e-9)
    assert e1 == pytest.approx(vals[1], abs=1e-9)
    assert abs(np.vdot(vecs[:, 0], v0)) == pytest.approx(1.0, abs=1e-9)
    mis_config = int(mis_projector_support(g)[0], 2)
    assert int(np.argmax(np.abs(v0))) == h.basis.position_of(mis_config)


def test_eigen_residuals(params):
    g = blockade_graph(builtin_instance("Q1D_7"), params)
    h = hamiltonian_terms(g, build_basis(g, "full"))
    sched = standard_schedule(params)
    for t in (0.8, 2.1, 3.3, 4.4):
        m = assemble(h, float(sched.omega(t)), float(sched.delta(t)))
        e0, e1, v0, v1 = eigenpairs_lowest2(m)
        norm = np.abs(m).sum(axis=1).max()  # inf-norm upper bound on ||H||
        assert np.linalg.norm(m @ v0 - e0 * v0) < 1e-8 * norm
        assert np.linalg.norm(m @ v1 - e1 * v1) < 1e-8 * norm
        assert abs(np.vdot(v0, v1)) < 1e-9


def test_phase_convention(params, q1d10_profile):
    for vec in (q1d10_profile.vecs0[17], q1d10_profile.vecs1[42]):
        assert vec[int(np.argmax(np.abs(vec)))] > 0


def test_iterative_path_large_diagonal():
    rng = np.random.default_rng(5)
    d = rng.permutation(np.arange(5000, dtype=float))
    e0, e1, v0, v1 = eigenpairs_lowest2(diags(d).tocsr())
    assert (e0, e1) == pytest.approx((0.0, 1.0), abs=1e-6)
    assert int(np.argmax(np.abs(v0))) == int(np.argmin(d))


def test_gap_minimum_location_q1d10(params, q1d10_profile):
    # published: (3.60 us, 2pi x 1.38 MHz, 2pi x 0.29 MHz)
    assert q1d10_profile.t_min == pytest.approx(3.60, abs=0.05)
    assert q1d10_profile.delta_min == pytest.approx(from_mhz(1.38), abs=from_mhz(0.02))
    assert q1d10_profile.g_min == pytest.approx(from_mhz(0.29), abs=from_mhz(0.01))
    t_lo, t_hi = params.ramp_time, params.total_time - params.ramp_time
    assert t_lo < q1d10_profile.t_min < t_hi
    assert np.all(q1d10_profile.gaps >= 0)
    assert q1d10_profile.g_min <= q1d10_profile.gaps.min() + 1e-12


def test_gap_minimum_stable_under_refinement(params, q1d10, q1d10_profile):
    _, _, h = q1d10
    half = scan_gap(h, standard_schedule(params), n_samples=100, store_vectors=False)
    assert abs(half.g_min - q1d10_profile.g_min) < 1e-4
    assert abs(half.t_min - q1d10_profile.t_min) < 5e-3


def test_chain_family_ordering(params):
    results = {}
    for name in ("Q1D_4", "Q1D_7"):
        g = blockade_graph(builtin_instance(name), params)
        h = hamiltonian_terms(g, build_basis(g, "full"))
        results[name] = scan_gap(h, standard_schedule(params), n_samples=64,
                                 store_vectors=False)
    assert results["Q1D_4"].g_min > results["Q1D_7"].g_min
    assert results["Q1D_4"].delta_min < results["Q1D_7"].delta_min


def test_track_overlap_requires_vectors(params, q1d10):
    _, g, h = q1d10
    profile = scan_gap(h, standard_schedule(params), n_samples=16,
                       store_vectors=False)
    with pytest.raises(ValueError, match="eigenvectors"):
        track_mis_overlap(profile, mis_projector_support(g))


def test_overlap_series_endpoints(params):
    arr = builtin_instance("Q1D_7")
    g = blockade_graph(arr, params, require_mis_encoding=True)
    h = hamiltonian_terms(g, build_basis(g, "full"))
    sched = standard_schedule(params)
    profile = scan_gap(h, sched, n_samples=120,
                       t_span=(params.ramp_time, params.total_time))
    mis_bits = mis_projector_support(g)
    o0, o1 = track_mis_overlap(profile, mis_bits)
    assert o0[0] < 0.01             # ground state is all-g at delta_i
    assert o0[-1] >= 1.0 - 1e-6     # and exactly the MIS at t = T
    assert np.all((o0 >= 0) & (o0 <= 1 + 1e-12))


def test_overlap_manifold_mode(params):
    # two far-apart blockaded pairs: four degenerate MIS configurations
    pos = ((0.0, 0.0), (5.0, 0.0), (200.0, 0.0), (205.0, 0.0))
    g = blockade_graph(AtomArray(name="pairs", positions=pos), params)
    h = hamiltonian_terms(g, build_basis(g, "full"))
    sched = standard_schedule(params)
    profile = scan_gap(h, sched, n_samples=32,
                       t_span=(params.ramp_time, params.total_time))
    mis_bits = mis_projector_support(g)
    assert len(mis_bits) == 4
    o0, _ = track_mis_overlap(profile, mis_bits, mode="superposition")
    # final ground vector is a degenerate-subspace member; uniform
    # superposition overlap is basis-choice dependent but bounded by 1
    assert np.all(o0 <= 1 + 1e-9)
    with pytest.raises(ValueError, match="outside the basis"):
        track_mis_overlap(profile, ["11111"])
