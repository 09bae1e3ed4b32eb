#!/usr/bin/env python3
"""Regenerate the bundled example datasets under src/trimodal/data.

The datasets are deterministic synthetic stand-ins for the classic example
tables (stocks, gapminder, penguins, seattle-weather, cars, barley). They
are shaped to exercise the key-inference and default-heuristic paths:
gapminder is keyed by (year, country), stocks by (symbol, date),
seattle-weather by date, barley by (site, variety, year), and penguins and
cars have no key among their nominal columns.
"""

import csv
import json
import math
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "trimodal" / "data"


def write_csv(name, header, rows):
    with open(OUT / name, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)


def write_json(name, records):
    with open(OUT / name, "w") as f:
        json.dump(records, f, indent=1)
        f.write("\n")


def gen_stocks():
    rng = random.Random(7)
    symbols = {"AAPL": 25.0, "AMZN": 65.0, "GOOG": 230.0, "IBM": 110.0, "MSFT": 45.0}
    rows = []
    for sym, price in symbols.items():
        p = price
        for year in range(2000, 2006):
            for month in range(1, 13):
                p = max(1.0, p * (1.0 + rng.gauss(0.008, 0.06)))
                rows.append([sym, f"{year:04d}-{month:02d}-01", round(p, 2)])
    write_csv("stocks.csv", ["symbol", "date", "price"], rows)


def gen_gapminder():
    rng = random.Random(11)
    years = list(range(1955, 2010, 5))
    # (country, cluster, base life expectancy, life slope, base pop, fertility)
    countries = [
        ("Afghanistan", 0, 30.0, 0.85, 9000000, 7.6),
        ("Argentina", 3, 62.0, 0.45, 19000000, 3.1),
        ("Australia", 2, 69.0, 0.40, 9200000, 3.4),
        ("Brazil", 3, 52.0, 0.75, 62000000, 6.1),
        ("Canada", 1, 69.5, 0.38, 15700000, 3.8),
        ("China", 5, 48.0, 0.80, 609000000, 5.5),
        ("Egypt", 4, 42.0, 0.85, 24000000, 6.9),
        ("France", 2, 68.0, 0.40, 43600000, 2.7),
        ("India", 5, 38.0, 0.85, 409000000, 5.9),
        ("Japan", 5, 64.0, 0.55, 89800000, 2.1),
        ("Kenya", 0, 42.0, 0.55, 7000000, 7.8),
        ("Mexico", 3, 53.0, 0.70, 30000000, 6.8),
        ("Nigeria", 0, 36.0, 0.45, 41000000, 6.4),
        ("South Africa", 0, 45.0, 0.0, 15000000, 6.0),
        ("United States", 1, 69.0, 0.30, 166000000, 3.5),
    ]
    # South Africa rises, peaks in 1990, then declines (the mid-series peak
    # referenced throughout the walkthrough fixtures).
    south_africa_life = {
        1955: 44.98, 1960: 48.35, 1965: 51.24, 1970: 53.70, 1975: 55.92,
        1980: 58.16, 1985: 60.33, 1990: 61.89, 1995: 60.25, 2000: 53.37,
        2005: 50.52,
    }
    records = []
    for year in years:
        for name, cluster, life0, slope, pop0, fert0 in countries:
            t = (year - 1955) / 5
            if name == "South Africa":
                life = south_africa_life[year]
            else:
                life = min(84.0, life0 + slope * 5 * t / 5 * 5 + rng.gauss(0, 0.4))
            pop = int(pop0 * math.exp(0.019 * (year - 1955)) * (1 + rng.gauss(0, 0.01)))
            fert = max(1.2, fert0 - 0.055 * (year - 1955) + rng.gauss(0, 0.08))
            records.append({
                "year": year,
                "country": name,
                "cluster": cluster,
                "pop": pop,
                "life_expect": round(life, 2),
                "fertility": round(fert, 2),
            })
    write_json("gapminder.json", records)


def gen_penguins():
    rng = random.Random(3)
    species = [
        ("Adelie", 190.0, 3700.0, 38.8),
        ("Chinstrap", 196.0, 3730.0, 48.8),
        ("Gentoo", 217.0, 5070.0, 47.5),
    ]
    islands = ["Biscoe", "Dream", "Torgersen"]
    records = []
    for sp, flip, mass, beak in species:
        for i in range(22):
            records.append({
                "species": sp,
                "island": islands[i % 3],
                "beak_length": round(rng.gauss(beak, 2.8), 1),
                "flipper_length": round(rng.gauss(flip, 6.2), 1),
                "body_mass": round(rng.gauss(mass, 390.0), 0),
                "sex": "Male" if i % 2 else "Female",
            })
    write_json("penguins.json", records)


def gen_seattle_weather():
    rng = random.Random(5)
    conditions = ["drizzle", "rain", "sun", "snow", "fog"]
    rows = []
    for year in (2012, 2013):
        for day in range(0, 364, 7):
            month = min(12, day // 30 + 1)
            dom = day % 30 + 1
            season = math.cos((day - 190) / 365 * 2 * math.pi)
            temp_max = round(16 + 9 * season + rng.gauss(0, 2.2), 1)
            temp_min = round(temp_max - abs(rng.gauss(6, 1.8)), 1)
            wet = rng.random() < 0.5 - 0.3 * season
            precip = round(abs(rng.gauss(6, 4)), 1) if wet else 0.0
            weather = rng.choice(conditions[:2]) if wet else rng.choice(conditions[2:])
            wind = round(abs(rng.gauss(3.2, 1.2)), 1)
            rows.append([f"{year:04d}-{month:02d}-{dom:02d}", precip, temp_max, temp_min, wind, weather])
    write_csv("seattle-weather.csv", ["date", "precipitation", "temp_max", "temp_min", "wind", "weather"], rows)


def gen_cars():
    rng = random.Random(13)
    makes = {
        "USA": ["ford maverick", "chevrolet impala", "plymouth fury", "amc hornet", "dodge colt"],
        "Europe": ["volkswagen rabbit", "peugeot 504", "fiat 128", "audi 100", "saab 99"],
        "Japan": ["toyota corolla", "datsun 510", "honda civic", "mazda rx-4", "subaru dl"],
    }
    base = {"USA": (16.0, 150.0), "Europe": (26.0, 88.0), "Japan": (29.0, 85.0)}
    records = []
    for origin, names in makes.items():
        mpg0, hp0 = base[origin]
        for name in names:
            for model_year in (70, 74, 78, 82):
                mpg = round(max(9.0, rng.gauss(mpg0 + (model_year - 70) * 0.45, 3.2)), 1)
                hp = round(max(45.0, rng.gauss(hp0 - (model_year - 70) * 1.2, 18.0)), 0)
                records.append({
                    "name": name,
                    "miles_per_gallon": mpg,
                    "horsepower": hp,
                    "weight": int(rng.gauss(1100 + hp * 9, 160)),
                    "origin": origin,
                })
    write_json("cars.json", records)


def gen_barley():
    rng = random.Random(17)
    sites = ["University Farm", "Waseca", "Morris", "Crookston", "Grand Rapids", "Duluth"]
    varieties = ["Manchuria", "Glabron", "Svansota", "Velvet", "Trebi",
                 "No. 457", "No. 462", "Peatland", "No. 475", "Wisconsin No. 38"]
    site_level = {s: 25 + 7 * i for i, s in enumerate(sites)}
    rows = []
    for site in sites:
        for variety in varieties:
            for year in (1931, 1932):
                y = round(max(8.0, rng.gauss(site_level[site] - (year - 1931) * 4, 5.5)), 2)
                rows.append([y, site, variety, year])
    write_csv("barley.csv", ["yield", "site", "variety", "year"], rows)


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    gen_stocks()
    gen_gapminder()
    gen_penguins()
    gen_seattle_weather()
    gen_cars()
    gen_barley()
    for p in sorted(OUT.iterdir()):
        print(p.name, p.stat().st_size)
