"""Writes the synthetic EPL-shaped minute-weight fixture.

Goal intensity rises linearly from 0.8 to 1.25 (relative units) over the
match; minute 45 carries 2.5x and minute 90 4x its regular intensity to
account for folded stoppage time. Normalized to sum to one.
"""
import sys

base = [0.8 + 0.45 * (t - 1) / 89.0 for t in range(1, 91)]
base[44] *= 2.5
base[89] *= 4.0
total = sum(base)
out = sys.stdout if len(sys.argv) < 2 else open(sys.argv[1], "w")
out.write("league,minute,weight\n")
for t, w in enumerate(base, start=1):
    out.write(f"EPL,{t},{w / total:.17g}\n")
