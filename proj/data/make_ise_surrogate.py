#!/usr/bin/env python3
"""Writes ise_surrogate.csv: a synthetic stand-in for the UCI Istanbul stock
exchange returns (536 business days, ISE response plus seven index returns).

Regressors share a global factor. The response loads on BOVESPA, EU and EM
only and has AR(2) dynamics plus an AR(1) error process:
    eps_t = 0.3 eps_{t-1} + e_t
    ISE_t = 0.25 BOVESPA_t + 0.45 EU_t + 0.5 EM_t + 0.25 ISE_{t-1} - 0.15 ISE_{t-2} + eps_t
"""
import datetime
import random
import sys

T = 536
BURN_IN = 200
SEED = 20090105
COLUMNS = ["SP", "DAX", "FTSE", "NIKKEI", "BOVESPA", "EU", "EM"]
LOADINGS = [0.9, 1.0, 0.95, 0.6, 1.1, 1.0, 1.05]
BETA = {"BOVESPA": 0.25, "EU": 0.45, "EM": 0.5}
PHI = [0.25, -0.15]
THETA = 0.3


def main(path):
    rng = random.Random(SEED)
    n = T + BURN_IN
    idio = [0.0] * len(COLUMNS)
    x_rows = []
    for _ in range(n):
        f = rng.gauss(0.0, 0.011)
        row = []
        for i, a in enumerate(LOADINGS):
            idio[i] = 0.1 * idio[i] + rng.gauss(0.0, 0.008)
            row.append(a * f + idio[i])
        x_rows.append(row)
    y = [0.0, 0.0]
    eps = 0.0
    for t in range(n):
        eps = THETA * eps + rng.gauss(0.0, 0.012)
        xb = sum(BETA.get(c, 0.0) * x_rows[t][i] for i, c in enumerate(COLUMNS))
        y.append(xb + PHI[0] * y[-1] + PHI[1] * y[-2] + eps)
    y = y[2:]

    day = datetime.date(2009, 1, 5)
    with open(path, "w", newline="\n") as out:
        out.write("date,ISE," + ",".join(COLUMNS) + "\n")
        for t in range(BURN_IN, n):
            while day.weekday() >= 5:
                day += datetime.timedelta(days=1)
            cells = [day.isoformat(), "%.9f" % y[t]] + ["%.9f" % v for v in x_rows[t]]
            out.write(",".join(cells) + "\n")
            day += datetime.timedelta(days=1)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "ise_surrogate.csv")
