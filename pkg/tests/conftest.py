import pathlib

import pytest

from trimodal.ingest import load_typed

DATA_DIR = pathlib.Path(__file__).resolve().parent.parent / "src" / "trimodal" / "data"
FIXTURE_DIR = pathlib.Path(__file__).resolve().parent / "fixtures"


def load_fixture(name: str):
    path = DATA_DIR / name
    fmt = "json-records" if name.endswith(".json") else "csv"
    return load_typed(path.read_bytes(), fmt)


@pytest.fixture(scope="session")
def gapminder():
    return load_fixture("gapminder.json")


@pytest.fixture(scope="session")
def stocks():
    return load_fixture("stocks.csv")


@pytest.fixture(scope="session")
def penguins():
    return load_fixture("penguins.json")


@pytest.fixture(scope="session")
def weather():
    return load_fixture("seattle-weather.csv")


@pytest.fixture(scope="session")
def barley():
    return load_fixture("barley.csv")


@pytest.fixture(scope="session")
def cars():
    return load_fixture("cars.json")


def rule_csv(rule: int) -> bytes:
    """Small synthetic dataset whose (key, value) signature matches one
    heuristic rule exactly."""
    lines = {
        1: ["year,series,amount"] +
           [f"{y},{s},{10 * i + j}.5"
            for i, s in enumerate("ab") for j, y in enumerate(range(1990, 1994))],
        2: ["year,region,amount"] +
           [f"{y},r{i},{5 * i + j}.25"
            for i in range(6) for j, y in enumerate(range(2000, 2003))],
        3: ["length,depth,species"] +
           [f"{30 + i}.{j},{10 + j}.{i},{'xy'[(i + j) % 2]}"
            for i in range(4) for j in range(3)] +
           ["30.0,10.0,x"],  # duplicate row: no column subset is a key
        4: ["date,open,close"] +
           [f"2001-0{m}-01,{m * 3}.0,{m * 4}.5" for m in range(1, 8)],
        5: ["year,site,plot,harvest"] +
           [f"{y},s{i},p{j},{i + j + k}.75"
            for k, y in enumerate(range(1931, 1933))
            for i in range(2) for j in range(3)],
        6: ["year,country,health,income"] +
           [f"{y},c{i},{50 + i + j}.5,{1000 * (i + 1) + j}"
            for i in range(3) for j, y in enumerate(range(1980, 1984))],
    }[rule]
    return ("\n".join(lines) + "\n").encode()


@pytest.fixture(scope="session")
def rule_datasets():
    return {r: load_typed(rule_csv(r), "csv") for r in range(1, 7)}
