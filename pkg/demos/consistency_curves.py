"""Detection probability curves in the two sampling regimes.

The same two-signal scenario (eigenvalues 10 and 3, unit noise) behaves very
differently depending on how many snapshots are available per sensor. With
m = 4n both signals clear the detection threshold of 1.5 and the calibrated
estimator converges to k = 2. With m = n/4 the threshold rises to 3, the
weaker signal becomes asymptotically invisible, and the right answer to hope
for is k = 1; classical MDL collapses to 0 there because the sample
covariance is singular.
"""

from sigcount import (
    EstimatorId,
    ExperimentPlan,
    ScenarioSpec,
    detection_probability,
    effective_num_signals,
    run_experiment,
)

SEED = 99
TRIALS = 200


def run_regime(title, grid, target_k):
    plan = ExperimentPlan(
        scenario=ScenarioSpec((10.0, 3.0), 1.0, *grid[0]),
        grid=grid,
        trials=TRIALS,
        master_seed=SEED,
        estimators=(EstimatorId.NEW_RMT_AIC, EstimatorId.WK_AIC, EstimatorId.WK_MDL),
    )
    k_eff = effective_num_signals(plan.scenario_at(*grid[0]))
    print(f"{title}  (k_eff = {k_eff}, target k = {target_k}, {TRIALS} trials)")
    print(f"{'n':>5} {'m':>5} {'new':>7} {'aic':>7} {'mdl':>7}")
    summaries = run_experiment(plan)
    for n, m in grid:
        row = {s.estimator_id: s for s in summaries if (s.n, s.m) == (n, m)}
        print(f"{n:5d} {m:5d} "
              f"{detection_probability(row[EstimatorId.NEW_RMT_AIC], target_k):7.3f} "
              f"{detection_probability(row[EstimatorId.WK_AIC], target_k):7.3f} "
              f"{detection_probability(row[EstimatorId.WK_MDL], target_k):7.3f}")
    print()


def main():
    run_regime("plenty of snapshots, m = 4n",
               ((32, 128), (64, 256), (128, 512)), target_k=2)
    run_regime("snapshot starved, m = n/4",
               ((64, 16), (128, 32), (256, 64)), target_k=1)
    print("the calibrated estimator keeps converging in the starved regime;")
    print("the classical criteria cannot, since their geometric means hit the")
    print("zero eigenvalues of the singular sample covariance.")


if __name__ == "__main__":
    main()
