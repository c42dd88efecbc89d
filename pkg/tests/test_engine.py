import math
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from popgenlab import (
    ABSORBING_KINDS,
    AlleleFrequencies,
    EmptyPopulationError,
    ExperimentKind,
    ExtinctionError,
    GametePool,
    GenotypeCounts,
    MeanFitnessZeroError,
    NotNormalizedError,
    OddPoolError,
    SimulationParams,
    ValidationError,
    apply_migration,
    apply_selection,
    build_gamete_pool,
    deterministic_step,
    estimate_gene_counting,
    hw_counts_from_frequency,
    run_trajectory,
    run_trajectory_from_frequency,
    shuffle_pair_mating,
    substream,
    wright_fisher_step,
)


def exhaustive_pairing_distribution(nA: int, na: int) -> dict[tuple[int, int, int], Fraction]:
    """Independent oracle: enumerate every perfect matching of the labeled
    tokens and tally the (AA, Aa, aa) outcome of each."""
    tokens = ["A"] * nA + ["a"] * na

    def matchings(indices):
        if not indices:
            yield []
            return
        first, rest = indices[0], indices[1:]
        for j, other in enumerate(rest):
            remaining = rest[:j] + rest[j + 1 :]
            for sub in matchings(remaining):
                yield [(first, other)] + sub

    outcomes = Counter()
    total = 0
    for pairing in matchings(list(range(nA + na))):
        aa_dom = het = aa_rec = 0
        for i, j in pairing:
            pair = tokens[i] + tokens[j]
            if pair == "AA":
                aa_dom += 1
            elif pair == "aa":
                aa_rec += 1
            else:
                het += 1
        outcomes[(aa_dom, het, aa_rec)] += 1
        total += 1
    return {k: Fraction(v, total) for k, v in outcomes.items()}


pool_strategy = st.builds(
    GametePool,
    nA=st.integers(min_value=0, max_value=300),
    na=st.integers(min_value=0, max_value=300),
).filter(lambda p: p.total >= 2 and p.total % 2 == 0)


class TestGametePool:
    def test_hand_arithmetic(self):
        assert build_gamete_pool(GenotypeCounts(25, 50, 25)) == GametePool(100, 100)
        assert build_gamete_pool(GenotypeCounts(50, 0, 0)) == GametePool(100, 0)
        assert build_gamete_pool(GenotypeCounts(9, 42, 49)) == GametePool(60, 140)

    def test_empty_population(self):
        with pytest.raises(EmptyPopulationError):
            build_gamete_pool(GenotypeCounts(0, 0, 0))


class TestShufflePairMating:
    def test_monomorphic_pool_has_one_outcome(self):
        for k in range(10):
            out = shuffle_pair_mating(GametePool(100, 0), substream(k, 0))
            assert out == GenotypeCounts(50, 0, 0)

    def test_two_tokens(self):
        assert shuffle_pair_mating(GametePool(1, 1), substream(0, 0)) == GenotypeCounts(0, 1, 0)

    def test_odd_pool_rejected(self):
        with pytest.raises(OddPoolError):
            shuffle_pair_mating(GametePool(3, 2), substream(0, 0))

    def test_tiny_pool_rejected(self):
        with pytest.raises(EmptyPopulationError):
            shuffle_pair_mating(GametePool(0, 0), substream(0, 0))

    @given(pool_strategy, st.integers(min_value=0, max_value=2**32))
    def test_conservation(self, pool, seed):
        out = shuffle_pair_mating(pool, substream(seed, 1))
        assert 2 * out.AA + out.Aa == pool.nA
        assert 2 * out.aa + out.Aa == pool.na

    def test_small_pool_distribution_matches_enumeration(self):
        # (nA=2, na=2): P(Aa=2) = 2/3, P(AA=1, aa=1) = 1/3
        dist = exhaustive_pairing_distribution(2, 2)
        assert dist[(0, 2, 0)] == Fraction(2, 3)
        assert dist[(1, 0, 1)] == Fraction(1, 3)
        draws = Counter()
        reps = 30_000
        for r in range(reps):
            out = shuffle_pair_mating(GametePool(2, 2), substream(99, r))
            draws[(out.AA, out.Aa, out.aa)] += 1
        assert draws[(0, 2, 0)] / reps == pytest.approx(2 / 3, abs=0.01)
        assert draws[(1, 0, 1)] / reps == pytest.approx(1 / 3, abs=0.01)


class TestWrightFisherStep:
    def test_fixed_allele_is_absorbing(self):
        one = AlleleFrequencies(1.0, 0.0, normalized=True)
        for k in range(10):
            assert wright_fisher_step(one, 30, substream(k, 0)) == GenotypeCounts(30, 0, 0)

    def test_requires_normalized(self):
        with pytest.raises(NotNormalizedError):
            wright_fisher_step(AlleleFrequencies(0.5, 0.4), 10, substream(0, 0))

    def test_requires_individuals(self):
        with pytest.raises(EmptyPopulationError):
            wright_fisher_step(AlleleFrequencies(0.5, 0.5, normalized=True), 0, substream(0, 0))

    def test_sample_size_is_n(self):
        out = wright_fisher_step(AlleleFrequencies(0.3, 0.7, normalized=True), 50, substream(1, 0))
        assert out.n == 50

    def test_mean_counts_match_multinomial(self):
        # E(AA, Aa, aa) at p=0.3, n=50 is (4.5, 21, 24.5)
        freqs = AlleleFrequencies(0.3, 0.7, normalized=True)
        reps = 20_000
        sums = [0, 0, 0]
        for r in range(reps):
            out = wright_fisher_step(freqs, 50, substream(123, r))
            sums[0] += out.AA
            sums[1] += out.Aa
            sums[2] += out.aa
        assert sums[0] / reps == pytest.approx(4.5, rel=0.03)
        assert sums[1] / reps == pytest.approx(21.0, rel=0.03)
        assert sums[2] / reps == pytest.approx(24.5, rel=0.03)


class TestSelection:
    def test_neutral_identity_deterministic(self):
        c = GenotypeCounts(25, 50, 25)
        assert apply_selection(c, (1, 1, 1), mode="deterministic") == c

    def test_neutral_identity_stochastic(self):
        c = GenotypeCounts(25, 50, 25)
        assert apply_selection(c, (1, 1, 1), substream(0, 0), mode="stochastic") == c

    def test_lethal_recessive_hand_case(self):
        survivors = apply_selection(GenotypeCounts(25, 50, 25), (1, 1, 0), mode="deterministic")
        assert survivors == GenotypeCounts(25, 50, 0)
        q = estimate_gene_counting(survivors).q
        assert q == pytest.approx(1 / 3, abs=1e-15)

    def test_only_recessives_survive(self):
        survivors = apply_selection(GenotypeCounts(25, 50, 25), (0, 0, 1), mode="deterministic")
        assert survivors == GenotypeCounts(0, 0, 25)
        assert estimate_gene_counting(survivors).q == 1.0

    def test_round_half_to_even(self):
        survivors = apply_selection(GenotypeCounts(25, 0, 5), (0.5, 1, 0.5), mode="deterministic")
        assert survivors == (GenotypeCounts(12, 0, 2))  # 12.5 -> 12, 2.5 -> 2

    def test_extinction_raises(self):
        with pytest.raises(ExtinctionError):
            apply_selection(GenotypeCounts(1, 0, 0), (0.4, 1, 1), mode="deterministic")

    def test_fitness_range_checked(self):
        with pytest.raises(ValidationError):
            apply_selection(GenotypeCounts(1, 1, 1), (1, 1, 1.2), mode="deterministic")

    @given(
        st.integers(min_value=0, max_value=80),
        st.integers(min_value=0, max_value=80),
        st.integers(min_value=1, max_value=80),
        st.integers(min_value=0, max_value=2**32),
    )
    def test_stochastic_survivors_bounded(self, aa_dom, het, aa_rec, seed):
        c = GenotypeCounts(aa_dom, het, aa_rec)
        survivors = apply_selection(c, (0.9, 0.5, 1.0), substream(seed, 0))
        assert 0 <= survivors.AA <= c.AA
        assert 0 <= survivors.Aa <= c.Aa
        assert survivors.aa == c.aa  # waa = 1 spares every aa individual


class TestMigration:
    def test_no_migration_identity(self):
        f = AlleleFrequencies(0.37, 0.63, normalized=True)
        assert apply_migration(f, 0.0, 0.9).p == f.p

    def test_full_replacement(self):
        f = AlleleFrequencies(0.37, 0.63, normalized=True)
        assert apply_migration(f, 1.0, 0.9).p == pytest.approx(0.9, abs=1e-15)

    def test_hand_case(self):
        out = apply_migration(AlleleFrequencies(0.2, 0.8, normalized=True), 0.25, 0.8)
        assert out.p == pytest.approx(0.35, abs=1e-15)
        assert out.normalized

    def test_range_checked(self):
        f = AlleleFrequencies(0.5, 0.5, normalized=True)
        with pytest.raises(ValidationError):
            apply_migration(f, 1.5, 0.5)
        with pytest.raises(ValidationError):
            apply_migration(f, 0.5, -0.1)


class TestDeterministicStep:
    def test_ideal_is_identity(self):
        params = SimulationParams(kind=ExperimentKind.IDEAL_COUNTING, mode="deterministic")
        for p in (0.0, 0.123, 0.5, 1.0):
            f = AlleleFrequencies(p, 1.0 - p, normalized=True)
            assert deterministic_step(f, params) is f

    def test_neutral_selection_is_identity(self):
        params = SimulationParams(kind=ExperimentKind.SELECTION, fitness=(1, 1, 1), mode="deterministic")
        f = AlleleFrequencies(0.3, 0.7, normalized=True)
        assert deterministic_step(f, params).p == pytest.approx(0.3, abs=1e-15)

    def test_lethal_recessive_recurrence(self):
        params = SimulationParams(kind=ExperimentKind.SELECTION, fitness=(1, 1, 0), mode="deterministic")
        f = AlleleFrequencies(0.5, 0.5, normalized=True)
        q0 = 0.5
        for t in range(1, 21):
            f = deterministic_step(f, params)
            assert f.q == pytest.approx(q0 / (1 + t * q0), abs=1e-12)

    def test_mean_fitness_zero(self):
        params = SimulationParams(kind=ExperimentKind.SELECTION, fitness=(0, 0, 1), mode="deterministic")
        with pytest.raises(MeanFitnessZeroError):
            deterministic_step(AlleleFrequencies(1.0, 0.0, normalized=True), params)

    def test_drift_warns_and_returns_input(self):
        params = SimulationParams(kind=ExperimentKind.DRIFT, mode="deterministic")
        f = AlleleFrequencies(0.4, 0.6, normalized=True)
        with pytest.warns(UserWarning):
            assert deterministic_step(f, params).p == 0.4

    def test_matches_integer_exact_culling_composition(self):
        # The frequency recurrence equals cull -> gene counting when the
        # culled counts stay integer-exact.
        survivors = apply_selection(GenotypeCounts(25, 50, 25), (1, 1, 0), mode="deterministic")
        composed = estimate_gene_counting(survivors)
        params = SimulationParams(kind=ExperimentKind.SELECTION, fitness=(1, 1, 0), mode="deterministic")
        recurrence = deterministic_step(AlleleFrequencies(0.5, 0.5, normalized=True), params)
        assert recurrence.q == pytest.approx(composed.q, abs=1e-15)


class TestRunTrajectory:
    def test_identical_inputs_identical_output(self):
        params = SimulationParams(kind=ExperimentKind.DRIFT, n=30, generations=40, seed=777)
        parental = hw_counts_from_frequency(0.5, 30)
        assert run_trajectory(parental, params) == run_trajectory(parental, params)

    def test_ideal_conserves_p_hat_bitwise(self):
        params = SimulationParams(kind=ExperimentKind.IDEAL_SQRT, n=50, generations=20, seed=5)
        traj = run_trajectory(GenotypeCounts(18, 24, 8), params)
        p0 = traj.points[0].freqs.p
        assert len(traj.points) == 21
        assert all(pt.freqs.p == p0 for pt in traj.points)

    def test_generation_indices_contiguous(self):
        params = SimulationParams(kind=ExperimentKind.GENE_FLOW, n=40, generations=12, seed=9,
                                  migration_rate=0.2, migrant_freq=0.9)
        traj = run_trajectory(hw_counts_from_frequency(0.2, 40), params)
        assert [pt.t for pt in traj.points] == list(range(13))

    def test_drift_absorbing_start_is_constant(self):
        for p0, status in ((0.0, "lost"), (1.0, "fixed")):
            params = SimulationParams(kind=ExperimentKind.DRIFT, n=20, generations=50, seed=3)
            traj = run_trajectory_from_frequency(p0, params)
            assert traj.status == status
            assert traj.absorbed_at == 0
            assert all(pt.freqs.p == p0 for pt in traj.points)

    def test_drift_truncates_at_absorption(self):
        params = SimulationParams(kind=ExperimentKind.DRIFT, n=8, generations=5000, seed=11)
        traj = run_trajectory_from_frequency(0.5, params)
        assert traj.status in ("fixed", "lost")
        assert traj.absorbed_at == traj.points[-1].t
        assert traj.points[-1].freqs.p in (0.0, 1.0)
        assert len(traj.points) == traj.absorbed_at + 1

    def test_selection_can_go_extinct(self):
        params = SimulationParams(
            kind=ExperimentKind.SELECTION, n=10, generations=50, seed=2, fitness=(0, 0, 0)
        )
        traj = run_trajectory(GenotypeCounts(4, 3, 3), params)
        assert traj.status == "extinct"
        assert traj.absorbed_at == 1
        assert traj.points[-1].freqs is None
        assert traj.points[-1].counts.n == 0

    def test_migration_geometric_convergence(self):
        p0, pm, m, horizon = 0.2, 0.8, 0.25, 30
        params = SimulationParams(
            kind=ExperimentKind.GENE_FLOW,
            n=50,
            generations=horizon,
            seed=0,
            migration_rate=m,
            migrant_freq=pm,
            mode="deterministic",
        )
        traj = run_trajectory_from_frequency(p0, params)
        for pt in traj.points:
            assert abs(pt.freqs.p - pm) == pytest.approx(
                (1 - m) ** pt.t * abs(p0 - pm), abs=1e-12
            )

    def test_deterministic_selection_matches_closed_form(self):
        q0 = 0.5
        params = SimulationParams(
            kind=ExperimentKind.SELECTION,
            n=50,
            generations=20,
            seed=0,
            fitness=(1, 1, 0),
            mode="deterministic",
        )
        traj = run_trajectory_from_frequency(1 - q0, params)
        for pt in traj.points:
            assert pt.freqs.q == pytest.approx(q0 / (1 + pt.t * q0), abs=1e-9)

    def test_drift_martingale(self):
        # Mean final p over replicates stays at p0 (3 standard errors).
        p0, n, reps, gens = 0.3, 12, 3000, 30
        finals = []
        for r in range(reps):
            params = SimulationParams(kind=ExperimentKind.DRIFT, n=n, generations=gens, seed=60_000 + r)
            traj = run_trajectory_from_frequency(p0, params)
            finals.append(traj.points[-1].freqs.p)
        mean = sum(finals) / reps
        var = sum((x - mean) ** 2 for x in finals) / (reps - 1)
        se = math.sqrt(var / reps)
        assert abs(mean - p0) <= 3 * se

    def test_invalid_kind_membership(self):
        assert ExperimentKind.DRIFT in ABSORBING_KINDS
        assert ExperimentKind.GENE_FLOW not in ABSORBING_KINDS


class TestSimulationParams:
    def test_out_of_range_fields_collected(self):
        with pytest.raises(ValidationError) as err:
            SimulationParams(
                kind=ExperimentKind.SELECTION,
                n=0,
                fitness=(1, 1, -0.1),
                migration_rate=2.0,
                generations=0,
            )
        fields = err.value.fields
        assert {"n", "fitness.waa", "migration_rate", "generations"} <= set(fields)

    def test_kind_coerced_from_string(self):
        assert SimulationParams(kind="drift").kind is ExperimentKind.DRIFT

    def test_irrelevant_params_still_validated(self):
        with pytest.raises(ValidationError):
            SimulationParams(kind=ExperimentKind.IDEAL_COUNTING, migrant_freq=7.0)
