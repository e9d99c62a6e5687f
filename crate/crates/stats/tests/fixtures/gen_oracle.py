"""Regenerates oracle.json with 50-digit mpmath arithmetic.

Fits use the raw normal equations X'X b = X'y; tail probabilities use the
regularized incomplete beta function directly.

    python3 gen_oracle.py > oracle.json
"""

import json
import random

import mpmath as mp

mp.mp.dps = 50


def t_p(t, dof):
    t, dof = mp.mpf(t), mp.mpf(dof)
    return mp.betainc(dof / 2, mp.mpf(1) / 2, 0, dof / (dof + t * t), regularized=True)


def f_p(f, d1, d2):
    f, d1, d2 = mp.mpf(f), mp.mpf(d1), mp.mpf(d2)
    return mp.betainc(d2 / 2, d1 / 2, 0, d2 / (d2 + d1 * f), regularized=True)


def fit(xs, ys, degree):
    n, p = len(xs), degree + 1
    X = mp.matrix([[mp.mpf(x) ** k for k in range(p)] for x in xs])
    Y = mp.matrix([mp.mpf(y) for y in ys])
    xtx = X.T * X
    inv = mp.inverse(xtx)
    beta = inv * (X.T * Y)
    fitted = X * beta
    res = [Y[i] - fitted[i] for i in range(n)]
    sse = mp.fsum(e * e for e in res)
    my = mp.fsum(Y) / n
    sst = mp.fsum((y - my) ** 2 for y in Y)
    dof = n - p
    s2 = sse / dof
    se = [mp.sqrt(inv[k, k] * s2) for k in range(p)]
    tstat = [beta[k] / se[k] for k in range(p)]
    r2 = 1 - sse / sst
    fstat = ((sst - sse) / degree) / s2
    hat = X * inv * X.T
    lev = [hat[i, i] for i in range(n)]
    s = mp.sqrt(s2)
    z = [res[i] / (s * mp.sqrt(1 - lev[i])) for i in range(n)]
    return {
        "degree": degree,
        "coefficients": [float(b) for b in beta],
        "std_errors": [float(v) for v in se],
        "t_statistics": [float(v) for v in tstat],
        "coeff_p": [float(t_p(v, dof)) for v in tstat],
        "f_statistic": float(fstat),
        "model_p": float(f_p(fstat, degree, dof)),
        "r2": float(r2),
        "adj_r2": float(1 - (1 - r2) * (n - 1) / dof),
        "outliers": sum(1 for v in z if abs(v) > 2),
    }


def pearson(xs, ys):
    xs = [mp.mpf(v) for v in xs]
    ys = [mp.mpf(v) for v in ys]
    n = len(xs)
    mx, my = mp.fsum(xs) / n, mp.fsum(ys) / n
    sxy = mp.fsum((a - mx) * (b - my) for a, b in zip(xs, ys))
    sxx = mp.fsum((a - mx) ** 2 for a in xs)
    syy = mp.fsum((b - my) ** 2 for b in ys)
    return float(sxy / mp.sqrt(sxx * syy))


def datasets():
    rng = random.Random(20240611)
    # Small hand-entered set: interference count against throughput.
    yield "fixed10", [3, 7, 8, 12, 15, 18, 22, 25, 31, 40], [
        212.5, 190.25, 201.0, 170.75, 160.5, 158.0, 131.25, 140.0, 101.5, 88.0,
    ]
    for k in range(19):
        n = 11 + (39 * k) // 18
        shape = k % 4
        if shape == 0:
            xs = [rng.uniform(0, 300) for _ in range(n)]
            ys = [900 - 1.7 * x + rng.gauss(0, 40) for x in xs]
        elif shape == 1:
            xs = [rng.uniform(5, 60) for _ in range(n)]
            ys = [50 + 0.4 * x - 0.006 * x * x + rng.gauss(0, 0.8) for x in xs]
        elif shape == 2:
            xs = [float(rng.randint(20, 400)) for _ in range(n)]
            ys = [rng.uniform(100, 200) for _ in range(n)]
        else:
            xs = [rng.uniform(-3, 3) for _ in range(n)]
            ys = [2 * x * x - x + rng.gauss(0, 1.5) for x in xs]
        yield f"synthetic{k:02}", [round(v, 6) for v in xs], [round(v, 6) for v in ys]


def main():
    out = {"datasets": [], "t_grid": [], "f_grid": []}
    for name, xs, ys in datasets():
        out["datasets"].append({
            "name": name,
            "x": [float(v) for v in xs],
            "y": [float(v) for v in ys],
            "pearson_cc": pearson(xs, ys),
            "fits": [fit(xs, ys, d) for d in (1, 2)],
        })
    for dof in (1, 2, 3, 5, 8, 13, 30, 97, 500):
        for t in (0.0, 0.05, 0.5, 1.0, 1.96, 2.5, 3.3, 5.0, 12.0, 40.0):
            out["t_grid"].append([t, dof, float(t_p(t, dof))])
    for d1 in (1, 2, 3):
        for d2 in (2, 7, 20, 97, 400):
            for f in (0.01, 0.3, 1.0, 2.2, 4.0, 9.5, 30.0, 250.0):
                out["f_grid"].append([f, d1, d2, float(f_p(f, d1, d2))])
    print(json.dumps(out, indent=1))


if __name__ == "__main__":
    main()
