"""Fraction-free (Bareiss) row echelon over Z and Z[i], pure Python.

Both entry points take the matrix as lists of rows of Python ints, work on a
private copy, and return ``(rank, pivot_rows, pivot_cols)`` where the pivot
rows are indices into the original matrix.  The pivot rule is "leftmost
column with a nonzero entry, first such row".  Every division is exact.
"""


def echelon_int(rows):
    M = [list(r) for r in rows]
    nr = len(M)
    nc = len(M[0]) if nr else 0
    perm = list(range(nr))
    piv_rows = []
    piv_cols = []
    prev = 1
    r = 0
    for c in range(nc):
        if r == nr:
            break
        k = r
        while k < nr and M[k][c] == 0:
            k += 1
        if k == nr:
            continue
        if k != r:
            M[k], M[r] = M[r], M[k]
            perm[k], perm[r] = perm[r], perm[k]
        rowr = M[r]
        p = rowr[c]
        for i in range(r + 1, nr):
            rowi = M[i]
            a = rowi[c]
            if a:
                for j in range(c + 1, nc):
                    rowi[j] = (p * rowi[j] - a * rowr[j]) // prev
            elif p != prev:
                for j in range(c + 1, nc):
                    rowi[j] = (p * rowi[j]) // prev
            rowi[c] = 0
        prev = p
        piv_rows.append(perm[r])
        piv_cols.append(c)
        r += 1
    return r, piv_rows, piv_cols


def echelon_gauss(re_rows, im_rows):
    R = [list(r) for r in re_rows]
    I = [list(r) for r in im_rows]
    nr = len(R)
    nc = len(R[0]) if nr else 0
    perm = list(range(nr))
    piv_rows = []
    piv_cols = []
    qr, qi = 1, 0
    r = 0
    for c in range(nc):
        if r == nr:
            break
        k = r
        while k < nr and R[k][c] == 0 and I[k][c] == 0:
            k += 1
        if k == nr:
            continue
        if k != r:
            R[k], R[r] = R[r], R[k]
            I[k], I[r] = I[r], I[k]
            perm[k], perm[r] = perm[r], perm[k]
        Rr, Ir = R[r], I[r]
        pr, pi = Rr[c], Ir[c]
        qn = qr * qr + qi * qi
        for i in range(r + 1, nr):
            Ri, Ii = R[i], I[i]
            ar, ai = Ri[c], Ii[c]
            for j in range(c + 1, nc):
                xr, xi = Ri[j], Ii[j]
                yr, yi = Rr[j], Ir[j]
                nre = pr * xr - pi * xi - (ar * yr - ai * yi)
                nim = pr * xi + pi * xr - (ar * yi + ai * yr)
                Ri[j] = (nre * qr + nim * qi) // qn
                Ii[j] = (nim * qr - nre * qi) // qn
            Ri[c] = 0
            Ii[c] = 0
        qr, qi = pr, pi
        piv_rows.append(perm[r])
        piv_cols.append(c)
        r += 1
    return r, piv_rows, piv_cols
