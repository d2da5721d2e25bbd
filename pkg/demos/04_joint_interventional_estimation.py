"""Estimating a two-variable interventional distribution from marginal data.

None of the constraint menus below ever observes the two query variables
being clamped together; the fitted model still recovers
P(Y=1 | do(X1, X2)) within a few percent, while the unconstrained baseline
can only answer 0.5.
"""

import numpy as np

from icmaxent.experiments import ExperimentConfig, joint_rows

MENUS = {
    1: "pair conditional + single-variable interventionals",
    2: "pair conditional only",
    3: "single-variable interventionals for all causes",
    4: "single-variable conditionals for all causes",
    5: "no constraints (uniform baseline)",
}


def main() -> None:
    rows = joint_rows(ExperimentConfig(structure="a", n_graphs=40, n_samples=1000, seed=0))
    for scenario, label in MENUS.items():
        res = np.array([r["residual"] for r in rows if r["scenario"] == scenario])
        print(
            f"scenario {scenario} ({label}):\n"
            f"   median |residual| = {np.median(np.abs(res)):.4f}, "
            f"IQR = {np.subtract(*np.percentile(res, [75, 25])):.4f}"
        )


if __name__ == "__main__":
    main()
