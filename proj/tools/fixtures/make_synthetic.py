"""Writes the three-match synthetic dataset (matches and odds).

Odds are generated from known scoring rates with the independent-Poisson
model, so calibration recovers the rates exactly. Match 2 carries a
bookmaker margin of 5% spread multiplicatively over every market, capped per
market so that no price drops to 1.01 or below.
"""
import math
import sys

MATCHES = [
    # id, league, season, date, home, away, events, lambda_home, lambda_away, margin
    ("syn-001", "EPL", 2021, "2021-08-14", "Northbury", "Eastfield", "12:H:goal;45+2:A:goal;78:H:goal", 1.6, 1.1, 1.0),
    ("syn-002", "EPL", 2021, "2021-08-21", "Eastfield", "Westmoor", "", 0.9, 1.3, 1.05),
    ("syn-003", "EPL", 2022, "2022-09-03", "Westmoor", "Northbury", "30:A:red;55:H:goal;90+4:H:goal", 2.2, 0.7, 1.0),
]
THRESHOLDS = [0.5, 1.5, 2.5, 3.5, 4.5, 5.5]


def pmf(mu, n):
    return math.exp(-mu) * mu**n / math.factorial(n)


def outcome(lh, la, cap=40):
    h = d = a = 0.0
    for i in range(cap):
        for j in range(cap):
            p = pmf(lh, i) * pmf(la, j)
            if i > j:
                h += p
            elif i == j:
                d += p
            else:
                a += p
    s = h + d + a
    return h / s, d / s, a / s


def over(mu, th):
    return 1.0 - sum(pmf(mu, k) for k in range(int(math.floor(th)) + 1))


def priced(probs, margin):
    m = max(1.0, min(margin, 1.0 / (1.01 * max(probs))))
    return [1.0 / (p * m) for p in probs]


def main(prefix):
    with open(prefix + "_matches.csv", "w") as m:
        m.write("match_id,league,season,date,home,away,events\n")
        for r in MATCHES:
            m.write(",".join(str(x) for x in r[:7]) + "\n")
    with open(prefix + "_odds.csv", "w") as o:
        o.write("match_id,odds_h,odds_d,odds_a,threshold,over,under\n")
        for r in MATCHES:
            lh, la, margin = r[7], r[8], r[9]
            h, d, a = priced(outcome(lh, la), margin)
            for th in THRESHOLDS:
                ov, un = priced([over(lh + la, th), 1.0 - over(lh + la, th)], margin)
                o.write(f"{r[0]},{h:.17g},{d:.17g},{a:.17g},{th},{ov:.17g},{un:.17g}\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "synthetic")
