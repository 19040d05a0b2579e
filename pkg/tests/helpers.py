from arithsym import Operator, Rule, TaskSpec


def make_spec(op="add", n=2, kind="none", value=0, fmt="plain"):
    return TaskSpec(Operator(op), n, Rule(kind, value), fmt)


TABLE3_RULES = [
    ("add", "none", 0), ("add", "translate", 1), ("add", "translate", 15), ("add", "translate", 115),
    ("add", "mod", 100), ("add", "mod", 50), ("add", "mod", 10),
    ("mul", "none", 0), ("mul", "scale", 2), ("mul", "scale", 4), ("mul", "scale", 8),
    ("mul", "mod", 100), ("mul", "mod", 50), ("mul", "mod", 10),
]
