"""Access to the example files shipped inside the package."""
from importlib.resources import files

from grothcat.problem import load

DATA = files("grothcat") / "data"
EXAMPLES = ["ex41.json", "ex42.json", "ex43.json", "ex44_X.json", "ex44_Xprime.json"]
SHIPPED = sorted(p.name for p in DATA.iterdir() if p.name.endswith(".json"))


def data_path(name: str) -> str:
    return str(DATA / name)


def example(name: str):
    """(problem, functor, index category) for a shipped file with fibers."""
    p = load(data_path(name))
    c = p.index_category()
    return p, p.functor(), c
