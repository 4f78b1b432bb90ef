"""Independent reference computations shared by the test modules."""
from fractions import Fraction
from itertools import combinations
from math import gcd


def det(m):
    # exact determinant by fraction Gaussian elimination
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    sign = 1
    for i in range(n):
        piv = next((k for k in range(i, n) if a[k][i]), None)
        if piv is None:
            return 0
        if piv != i:
            a[i], a[piv] = a[piv], a[i]
            sign = -sign
        for k in range(i + 1, n):
            f = a[k][i] / a[i][i]
            for j in range(i, n):
                a[k][j] -= f * a[i][j]
    out = Fraction(sign)
    for i in range(n):
        out *= a[i][i]
    return int(out)


def determinantal_factors(m):
    # d_k = gcd of all k x k minors; invariant factors are d_k / d_(k-1)
    rows, cols = len(m), len(m[0])
    out = []
    prev = 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = gcd(g, det([[m[i][j] for j in cs] for i in rs]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def primary_parts(torsion):
    # multiset of prime powers in a finite abelian group given by cyclic orders
    out = []
    for n in torsion:
        p = 2
        while n > 1:
            if n % p == 0:
                q = 1
                while n % p == 0:
                    n //= p
                    q *= p
                out.append(q)
            p += 1
    return sorted(out)
