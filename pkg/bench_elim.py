"""Throwaway benchmark: sl2 enveloping truncation at degree 5."""
import itertools
import sys
import time
from fractions import Fraction

sys.path.insert(0, "src")
from dpforge.linalg import _echelonize

n = 3  # sl2
k = Fraction(2)
lam = Fraction(1)
G = 2 * n  # M_0..M_2 = 0..2, H_0..H_2 = 3..5
N = int(sys.argv[1]) if len(sys.argv) > 1 else 5

H, E, F = 0, 1, 2
prod = {}
brk = {}


def setp(t, i, j, entries):
    t[(i, j)] = {kk: Fraction(v) for kk, v in entries.items() if v}


setp(prod, H, E, {E: k}); setp(prod, H, F, {F: -k})
setp(prod, E, H, {E: -k}); setp(prod, E, F, {H: k / 2})
setp(prod, F, H, {F: k}); setp(prod, F, E, {H: -k / 2})
setp(brk, H, E, {E: 2}); setp(brk, H, F, {F: -2}); setp(brk, E, F, {H: 1})
setp(brk, E, H, {E: -2}); setp(brk, F, H, {F: 2}); setp(brk, F, E, {H: -1})

# relations as dicts word-tuple -> Fraction
rels = []
for i in range(n):
    for j in range(n):
        c = prod.get((i, j), {})
        b = brk.get((i, j), {})
        r1 = {(i, j): Fraction(1)}
        for kk, v in c.items():
            r1[(kk,)] = r1.get((kk,), Fraction(0)) - v
        rels.append({w: v for w, v in r1.items() if v})
        r2 = {(3 + i, 3 + j): Fraction(1), (3 + j, 3 + i): Fraction(-1)}
        if i == j:
            r2 = {}
        for kk, v in b.items():
            r2[(3 + kk,)] = r2.get((3 + kk,), Fraction(0)) - v
        r2 = {w: v for w, v in r2.items() if v}
        if r2:
            rels.append(r2)
        r3 = {(3 + i, j): Fraction(1), (j, 3 + i): Fraction(-1)}
        for kk, v in b.items():
            r3[(kk,)] = r3.get((kk,), Fraction(0)) - v
        rels.append({w: v for w, v in r3.items() if v})
        r4 = {}
        for w in [(i, 3 + j), (j, 3 + i)]:
            r4[w] = r4.get(w, Fraction(0)) + 1
        for kk, v in c.items():
            r4[(3 + kk,)] = r4.get((3 + kk,), Fraction(0)) - v
        r4 = {w: v for w, v in r4.items() if v}
        if r4:
            rels.append(r4)

print(f"{len(rels)} relations")

t0 = time.time()
words = [()]
by_deg = {0: [()]}
for d in range(1, N + 1):
    by_deg[d] = [w for w in itertools.product(range(G), repeat=d)]
    words.extend(by_deg[d])
index = {w: i for i, w in enumerate(words)}
print(f"{len(words)} words, enum {time.time()-t0:.2f}s")

t0 = time.time()
rows = []
for r in rels:
    dr = max(len(w) for w in r)
    for dl in range(0, N - dr + 1):
        for wl in by_deg[dl]:
            for dr2 in range(0, N - dr - dl + 1):
                for wr in by_deg[dr2]:
                    rows.append({index[wl + w + wr]: c for w, c in r.items()})
print(f"{len(rows)} padded rows, gen {time.time()-t0:.2f}s")

t0 = time.time()
pivrows, _ = _echelonize(rows, descending=True)
t1 = time.time()
print(f"echelon in {t1-t0:.2f}s, rank {len(pivrows)}, normal {len(words)-len(pivrows)}")
tail = sum(len(r) for r in pivrows.values())
print(f"total stored entries {tail}")
