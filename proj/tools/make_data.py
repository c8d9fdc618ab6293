#!/usr/bin/env python3
# Copyright 2026 The flexbound Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the synthetic datasets under data/.

All series are made up. They have the rough daily shape of a summer month
in a solar-heavy market and nothing more; do not read regional results
into them.
"""

import datetime as dt
import json
import pathlib

import numpy as np

ROOT = pathlib.Path(__file__).resolve().parent.parent / "data"
ALL_HOURS = list(range(24))


def write_series(path, start, values):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as f:
        f.write("timestamp,value\n")
        for i, v in enumerate(values):
            ts = start + dt.timedelta(hours=i)
            f.write(f"{ts:%Y-%m-%dT%H:%M:%SZ},{v:.6g}\n")


def write_json(path, doc):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2) + "\n")


def toys():
    start = dt.datetime(2023, 7, 1)
    write_series(ROOT / "toy" / "two_step.csv", start, [10, 30])
    write_series(ROOT / "toy" / "two_step_emissions.csv", start, [30, 10])
    write_series(ROOT / "toy" / "negative_price.csv", start, [10, -5, 20])
    write_series(ROOT / "toy" / "constant_day.csv", start, [50.0] * 24)
    hours = np.arange(24)
    day = 60 + 35 * np.sin((hours - 10) / 24 * 2 * np.pi)
    write_series(ROOT / "toy" / "day_price.csv", start, np.round(day, 2))


def july_caiso_like():
    rng = np.random.default_rng(20230701)
    # Local midnight July 1 in a UTC-8 region.
    start = dt.datetime(2023, 7, 1, 8)
    local_hour = np.arange(744) % 24
    solar = np.clip(np.sin((local_hour - 6) / 13 * np.pi), 0, None)
    evening = np.exp(-0.5 * ((local_hour - 19) / 1.8) ** 2)
    price = 60 - 45 * solar + 70 * evening + rng.normal(0, 6, 744)
    write_series(ROOT / "caiso_july" / "dam.csv", start, np.round(price, 2))
    mef = 430 - 120 * solar + 60 * evening + rng.normal(0, 15, 744)
    write_series(ROOT / "caiso_july" / "mef.csv", start,
                 np.round(np.clip(mef, 50, None), 1))


def charge(rate, hours=ALL_HOURS, weekdays=None, months=None):
    doc = {"rate": rate, "hours": hours}
    if weekdays is not None:
        doc["weekdays"] = weekdays
    if months is not None:
        doc["months"] = months
    return doc


def tariffs():
    off_peak = [h for h in ALL_HOURS if not 16 <= h <= 20]
    peak = list(range(16, 21))
    write_json(ROOT / "tariffs" / "flat.json", {
        "name": "flat-100", "fixed_charge": 0,
        "energy_charges": [charge(100)], "demand_charges": []})
    write_json(ROOT / "tariffs" / "tou.json", {
        "name": "tou-200-80-demand", "fixed_charge": 0,
        "energy_charges": [charge(200, peak), charge(80, off_peak)],
        "demand_charges": [charge(10000)]})
    # One-day billing period: the monthly demand rate is spread per day.
    write_json(ROOT / "tariffs" / "tou_day.json", {
        "name": "tou-200-80-demand-daily", "fixed_charge": 0,
        "energy_charges": [charge(200, peak), charge(80, off_peak)],
        "demand_charges": [charge(round(10000 / 31, 6))]})
    weekdays = [0, 1, 2, 3, 4]
    weekend = [5, 6]
    summer = [6, 7, 8, 9]
    winter = [1, 2, 3, 4, 5, 10, 11, 12]
    mid = [h for h in range(8, 16)] + [21, 22]
    night = [h for h in ALL_HOURS if h not in mid and h not in peak]
    write_json(ROOT / "tariffs" / "tou8_like_synthetic.json", {
        "name": "synthetic large-industrial TOU (TOU-8-like, not a real rate)",
        "fixed_charge": 1500,
        "energy_charges": [
            charge(165, peak, weekdays, summer),
            charge(105, mid, weekdays, summer),
            charge(70, night, weekdays, summer),
            charge(95, ALL_HOURS, weekend, summer),
            charge(120, peak, weekdays, winter),
            charge(85, mid + night, weekdays, winter),
            charge(80, ALL_HOURS, weekend, winter),
        ],
        "demand_charges": [
            charge(24000),
            charge(21000, peak, weekdays, summer),
        ]})


def configs():
    write_json(ROOT / "configs" / "sweep_dam.json", {
        "command": "sweep", "signal": "data/caiso_july/dam.csv",
        "signal_kind": "dam", "region": "CAISO", "profile_month": 7,
        "days": 1, "uptime_mode": "exact",
        "u_grid": [0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0],
        "pc_grid": [0.0, 0.25, 0.5, 0.75, 1.0], "out": "out/sweep_dam"})
    write_json(ROOT / "configs" / "abatement_july.json", {
        "command": "abatement", "signal": "data/caiso_july/dam.csv",
        "emissions": "data/caiso_july/mef.csv", "region": "CAISO",
        "uptime": 0.5, "pc": 0.5, "fractions": [0.5, 1.0],
        "out": "out/abatement_july"})


if __name__ == "__main__":
    toys()
    july_caiso_like()
    tariffs()
    configs()
