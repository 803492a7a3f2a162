"""Generate newform coefficient fixtures from Manin symbols.

usage: python3 tools/gen_fixtures.py OUTDIR [BOUND]

Each label N.k.c.x is resolved by computing every rational newform in the
space, sorting them by (a_1, a_2, a_3, ...) and taking the x-th one.  The
character letter is mapped to a Kronecker symbol by the table below.
"""
import datetime
import json
import math
import os
import sys

import numpy as np

sys.path.insert(0, os.path.dirname(__file__))
from msym import PRIME, Space, kernel, kron, matmul, signed  # noqa: E402

# character orbit letter -> discriminant of the quadratic character, per level
CHARS = {("a", None): 1, ("d", 36): -4, ("d", 20): -20}

LABELS = [
    "8.4.a.a", "12.4.a.a", "36.4.a.a", "6.4.a.a", "18.4.a.a", "24.4.a.a",
    "72.4.a.b", "24.2.a.a", "72.2.a.a", "50.4.a.b", "50.4.a.d", "200.2.a.b",
    "200.2.a.d", "8.6.a.a", "4.6.a.a", "6.6.a.a", "10.4.a.a", "40.2.a.a",
    "36.3.d.b", "20.3.d.a",
]


def primes_upto(n):
    s = [True] * (n + 1)
    s[0] = s[1] = False
    for i in range(2, int(n ** 0.5) + 1):
        if s[i]:
            s[i * i::i] = [False] * len(s[i * i::i])
    return [i for i, b in enumerate(s) if b]


def rational_newforms(N, k, disc, nprimes=8):
    S = Space(N, k, disc)
    good = [p for p in primes_upto(200) if N % p][:nprimes]
    systems = [(np.eye(S.dim, dtype=np.int64), [])]
    for p in good:
        T = S.hecke_matrix(p)
        bound = int(2 * p ** ((k - 1) / 2))
        nxt = []
        for B, evs in systems:
            for lam in range(-bound, bound + 1):
                A = matmul(B, T - lam * np.eye(S.dim, dtype=np.int64))
                C = kernel(A.T)
                if len(C):
                    nxt.append((matmul(C, B), evs + [lam]))
        systems = nxt
    return S, [B[0] for B, _ in systems if B.shape[0] == 1]


def coefficients(S, psi, bound):
    N, k = S.N, S.k
    j = next(t for t in range(S.dim) if psi[t] % PRIME)
    col = S.free[j]
    inv = pow(int(psi[j]), PRIME - 2, PRIME)
    ap = {}
    for p in primes_upto(bound):
        v = S.hecke_on(col, p)
        ap[p] = signed(int(matmul(psi[None, :], v[:, None])[0, 0]) * inv)
        lim = 2 * p ** ((k - 1) / 2) if N % p else p ** ((k - 1) / 2)
        if abs(ap[p]) > lim + 1e-9:
            raise RuntimeError(f"a_{p} = {ap[p]} violates the Ramanujan bound")
    eps = lambda p: 0 if N % p == 0 else kron(S.disc, p) if S.disc != 1 else 1
    an = [0] * (bound + 1)
    an[1] = 1
    for n in range(2, bound + 1):
        m, p = n, None
        for q in primes_upto(int(math.isqrt(n)) + 1) + [n]:
            if n % q == 0:
                p = q
                break
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if m > 1:
            an[n] = an[m] * an[n // m]
            continue
        if e == 1:
            an[n] = ap[p]
        else:
            an[n] = ap[p] * an[n // p] - eps(p) * p ** (k - 1) * an[n // (p * p)]
    return an[1:]


def resolve(label, bound, cache):
    N, k, c, x = label.split(".")
    N, k = int(N), int(k)
    disc = CHARS.get((c, None), None) if c == "a" else CHARS[(c, N)]
    key = (N, k, disc)
    if key not in cache:
        S, forms = rational_newforms(N, k, disc)
        cache[key] = sorted(coefficients(S, psi, bound) for psi in forms)
    forms = cache[key]
    idx = ord(x) - ord("a")
    if idx >= len(forms):
        raise RuntimeError(f"{label}: only {len(forms)} rational newforms found")
    return forms[idx], len(forms)


def main():
    out = sys.argv[1]
    bound = int(sys.argv[2]) if len(sys.argv) > 2 else 400
    os.makedirs(out, exist_ok=True)
    cache = {}
    stamp = datetime.datetime.now(datetime.timezone.utc).replace(microsecond=0).isoformat()
    for label in LABELS:
        an, count = resolve(label, bound, cache)
        N, k = label.split(".")[:2]
        rec = {
            "label": label,
            "weight": int(k),
            "level": int(N),
            "an": an,
            "source": f"computed offline from Manin symbols (tools/gen_fixtures.py); "
                      f"{count} rational newforms in the space, ordered by q-expansion",
            "fetched_at": stamp,
        }
        with open(os.path.join(out, label + ".json"), "w") as fh:
            json.dump(rec, fh)
        print(label, an[:12], count)


if __name__ == "__main__":
    main()
