"""Subgroup quality per output position for n-digit multiplication.

For each output digit the best subgroup using at most --max-inputs operand
digits is reported.  Edge positions score high and middle positions low,
which is the U shape seen in per-position accuracy of trained models."""
import argparse

from arithsym import Operator, TaskSpec
from arithsym.subgroup import position_quality_profile


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--op", default="mul", choices=["add", "mul"])
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--max-inputs", type=int, default=2)
    args = ap.parse_args()
    spec = TaskSpec(Operator(args.op), args.n)
    for i, r in enumerate(position_quality_profile(spec, args.max_inputs), 1):
        bar = "#" * round(40 * r.quality)
        print(f"C{i}  Q={r.quality:.3f}  {str(r.subgroup):<22} {bar}")


if __name__ == "__main__":
    main()
