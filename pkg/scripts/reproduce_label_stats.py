"""Print the label-space entropy sweep for two-digit addition and multiplication
under every translate, scale and mod perturbation, one row per task."""
import argparse

from arithsym import Operator, Rule, TaskSpec
from arithsym.stats import label_space_stats

RULES = [
    ("add", Rule.none()), ("add", Rule.translate(1)), ("add", Rule.translate(15)), ("add", Rule.translate(115)),
    ("add", Rule.mod(100)), ("add", Rule.mod(50)), ("add", Rule.mod(10)),
    ("mul", Rule.none()), ("mul", Rule.scale(2)), ("mul", Rule.scale(4)), ("mul", Rule.scale(8)),
    ("mul", Rule.mod(100)), ("mul", Rule.mod(50)), ("mul", Rule.mod(10)),
]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2)
    args = ap.parse_args()
    print(f"{'task':<24} {'per-position H':<44} {'|L|':>6} {'H(L)':>8}")
    for op, rule in RULES:
        spec = TaskSpec(Operator(op), args.n, rule)
        s = label_space_stats(spec).rounded()
        pos = " ".join(f"{h:.4f}" for h in s.per_position_entropy)
        print(f"{op + ' ' + rule.token:<24} {pos:<44} {s.joint_cardinality:>6} {s.joint_entropy:>8.4f}")


if __name__ == "__main__":
    main()
