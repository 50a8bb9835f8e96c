"""Run every property check on one problem, then on a seeded batch.

Set SEMIHILBERT_THREADS to use several processes for the batch.
"""

import numpy as np

from semihilbert import ProblemInstance, fuzz, verify_all

rep = verify_all(ProblemInstance(np.eye(2), np.diag([1.0, -1.0]), np.eye(2)))
for check in rep.checks:
    print(f"{check.name:28} {check.status:8} {check.value}")
print("overall", rep.overall)

# a corrupted problem: T moves the null space of A
bad = ProblemInstance(np.diag([1.0, 0.0]), np.array([[0.0, 1.0], [0.0, 0.0]]), np.eye(2))
print("\ncorrupted:", verify_all(bad).checks[0])

summary, _ = fuzz(20, dim=4, seed=3)
print("\n20 random problems:", summary["violations"], "violations,", summary["failures"], "failures")
for name, tally in summary["checks"].items():
    print(f"  {name:28} {tally}")
