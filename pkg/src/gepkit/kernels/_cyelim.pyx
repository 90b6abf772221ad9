# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``_pyelim``: same algorithm, same pivot rule, same output.

Matrices whose entries stay small run on machine integers (int64 storage,
128-bit intermediates, every result range-checked).  The first entry that
would leave the safe range sends the whole computation back to the
arbitrary-precision path, so the answer never depends on which path ran.
"""

from libc.stdint cimport int64_t
from libc.stdlib cimport free, malloc

cdef extern from *:
    ctypedef long long i128 "__int128"

# |entries| below these bounds keep every intermediate inside 127 bits
cdef int64_t INT_LIMIT = (<int64_t>1) << 62
cdef int64_t GAUSS_LIMIT = (<int64_t>1) << 40


cdef bint _load(list rows, int64_t* buf, Py_ssize_t nr, Py_ssize_t nc, int64_t limit):
    cdef Py_ssize_t i, j
    cdef list row
    cdef object v
    for i in range(nr):
        row = <list>rows[i]
        for j in range(nc):
            v = row[j]
            if not (-limit < v < limit):
                return False
            buf[i * nc + j] = v
    return True


cdef inline void _swap_rows(int64_t* M, Py_ssize_t a, Py_ssize_t b, Py_ssize_t nc):
    cdef Py_ssize_t j
    cdef int64_t t
    for j in range(nc):
        t = M[a * nc + j]
        M[a * nc + j] = M[b * nc + j]
        M[b * nc + j] = t


cdef object _int_fast(list rows, Py_ssize_t nr, Py_ssize_t nc):
    cdef int64_t* M = <int64_t*>malloc(nr * nc * sizeof(int64_t))
    if M == NULL:
        raise MemoryError()
    cdef list perm = list(range(nr))
    cdef list piv_rows = []
    cdef list piv_cols = []
    cdef Py_ssize_t r = 0, c, k, i, j
    cdef int64_t p, a, prev = 1
    cdef i128 num, q
    try:
        if not _load(rows, M, nr, nc, INT_LIMIT):
            return None
        for c in range(nc):
            if r == nr:
                break
            k = r
            while k < nr and M[k * nc + c] == 0:
                k += 1
            if k == nr:
                continue
            if k != r:
                _swap_rows(M, k, r, nc)
                perm[k], perm[r] = perm[r], perm[k]
            p = M[r * nc + c]
            for i in range(r + 1, nr):
                a = M[i * nc + c]
                if a != 0 or p != prev:
                    for j in range(c + 1, nc):
                        num = <i128>p * M[i * nc + j] - <i128>a * M[r * nc + j]
                        q = num / prev
                        if q <= -INT_LIMIT or q >= INT_LIMIT:
                            return None
                        M[i * nc + j] = <int64_t>q
                M[i * nc + c] = 0
            prev = p
            piv_rows.append(perm[r])
            piv_cols.append(c)
            r += 1
        return r, piv_rows, piv_cols
    finally:
        free(M)


cdef object _gauss_fast(list R0, list I0, Py_ssize_t nr, Py_ssize_t nc):
    cdef int64_t* R = <int64_t*>malloc(nr * nc * sizeof(int64_t))
    cdef int64_t* I = <int64_t*>malloc(nr * nc * sizeof(int64_t))
    if R == NULL or I == NULL:
        free(R)
        free(I)
        raise MemoryError()
    cdef list perm = list(range(nr))
    cdef list piv_rows = []
    cdef list piv_cols = []
    cdef Py_ssize_t r = 0, c, k, i, j
    cdef int64_t pr, pi, ar, ai, qr = 1, qi = 0
    cdef i128 nre, nim, qn, outr, outi
    try:
        if not (_load(R0, R, nr, nc, GAUSS_LIMIT) and _load(I0, I, nr, nc, GAUSS_LIMIT)):
            return None
        for c in range(nc):
            if r == nr:
                break
            k = r
            while k < nr and R[k * nc + c] == 0 and I[k * nc + c] == 0:
                k += 1
            if k == nr:
                continue
            if k != r:
                _swap_rows(R, k, r, nc)
                _swap_rows(I, k, r, nc)
                perm[k], perm[r] = perm[r], perm[k]
            pr = R[r * nc + c]
            pi = I[r * nc + c]
            qn = <i128>qr * qr + <i128>qi * qi
            for i in range(r + 1, nr):
                ar = R[i * nc + c]
                ai = I[i * nc + c]
                for j in range(c + 1, nc):
                    nre = (<i128>pr * R[i * nc + j] - <i128>pi * I[i * nc + j]
                           - (<i128>ar * R[r * nc + j] - <i128>ai * I[r * nc + j]))
                    nim = (<i128>pr * I[i * nc + j] + <i128>pi * R[i * nc + j]
                           - (<i128>ar * I[r * nc + j] + <i128>ai * R[r * nc + j]))
                    outr = (nre * qr + nim * qi) / qn
                    outi = (nim * qr - nre * qi) / qn
                    if (outr <= -GAUSS_LIMIT or outr >= GAUSS_LIMIT
                            or outi <= -GAUSS_LIMIT or outi >= GAUSS_LIMIT):
                        return None
                    R[i * nc + j] = <int64_t>outr
                    I[i * nc + j] = <int64_t>outi
                R[i * nc + c] = 0
                I[i * nc + c] = 0
            qr = pr
            qi = pi
            piv_rows.append(perm[r])
            piv_cols.append(c)
            r += 1
        return r, piv_rows, piv_cols
    finally:
        free(R)
        free(I)


def echelon_int(rows):
    cdef list M0 = [list(row) for row in rows]
    cdef Py_ssize_t nr = len(M0)
    cdef Py_ssize_t nc = len(M0[0]) if nr else 0
    if nr and nc:
        out = _int_fast(M0, nr, nc)
        if out is not None:
            return out
    return _echelon_int_object(M0)


def echelon_gauss(re_rows, im_rows):
    cdef list R0 = [list(x) for x in re_rows]
    cdef list I0 = [list(x) for x in im_rows]
    cdef Py_ssize_t nr = len(R0)
    cdef Py_ssize_t nc = len(R0[0]) if nr else 0
    if nr and nc:
        out = _gauss_fast(R0, I0, nr, nc)
        if out is not None:
            return out
    return _echelon_gauss_object(R0, I0)


def _echelon_int_object(rows):
    cdef list M = [list(row) for row in rows]
    cdef Py_ssize_t nr = len(M)
    cdef Py_ssize_t nc = len(M[0]) if nr else 0
    cdef list perm = list(range(nr))
    cdef list piv_rows = []
    cdef list piv_cols = []
    cdef Py_ssize_t r = 0, c, k, i, j
    cdef list rowr, rowi
    cdef object p, a, prev = 1
    for c in range(nc):
        if r == nr:
            break
        k = r
        while k < nr and (<list>M[k])[c] == 0:
            k += 1
        if k == nr:
            continue
        if k != r:
            M[k], M[r] = M[r], M[k]
            perm[k], perm[r] = perm[r], perm[k]
        rowr = <list>M[r]
        p = rowr[c]
        for i in range(r + 1, nr):
            rowi = <list>M[i]
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


def _echelon_gauss_object(re_rows, im_rows):
    cdef list R = [list(x) for x in re_rows]
    cdef list I = [list(x) for x in im_rows]
    cdef Py_ssize_t nr = len(R)
    cdef Py_ssize_t nc = len(R[0]) if nr else 0
    cdef list perm = list(range(nr))
    cdef list piv_rows = []
    cdef list piv_cols = []
    cdef Py_ssize_t r = 0, c, k, i, j
    cdef list Rr, Ir, Ri, Ii
    cdef object pr, pi, qr = 1, qi = 0, qn, ar, ai, xr, xi, yr, yi, nre, nim
    for c in range(nc):
        if r == nr:
            break
        k = r
        while k < nr and (<list>R[k])[c] == 0 and (<list>I[k])[c] == 0:
            k += 1
        if k == nr:
            continue
        if k != r:
            R[k], R[r] = R[r], R[k]
            I[k], I[r] = I[r], I[k]
            perm[k], perm[r] = perm[r], perm[k]
        Rr = <list>R[r]
        Ir = <list>I[r]
        pr = Rr[c]
        pi = Ir[c]
        qn = qr * qr + qi * qi
        for i in range(r + 1, nr):
            Ri = <list>R[i]
            Ii = <list>I[i]
            ar = Ri[c]
            ai = Ii[c]
            for j in range(c + 1, nc):
                xr = Ri[j]
                xi = Ii[j]
                yr = Rr[j]
                yi = Ir[j]
                nre = pr * xr - pi * xi - (ar * yr - ai * yi)
                nim = pr * xi + pi * xr - (ar * yi + ai * yr)
                Ri[j] = (nre * qr + nim * qi) // qn
                Ii[j] = (nim * qr - nre * qi) // qn
            Ri[c] = 0
            Ii[c] = 0
        qr = pr
        qi = pi
        piv_rows.append(perm[r])
        piv_cols.append(c)
        r += 1
    return r, piv_rows, piv_cols
