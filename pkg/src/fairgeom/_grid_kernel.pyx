# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled exhaustive search over mechanisms P_{Y|X}.

Candidates are the Cartesian product of one column grid per input symbol,
visited in lexicographic order (column 0 is the most significant digit).
A later candidate replaces the incumbent only if it beats it by more than
``tie_tol``, so ties up to rounding go to the lowest index.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport log, INFINITY

cnp.import_array()


cdef inline double _xlogratio(double num, double den) noexcept nogil:
    if num <= 0.0:
        return 0.0
    return num * log(num / den)


def search_grid(const double[:, ::1] column_grid, const double[:, :, ::1] stx, double r,
                double chi2_bound, double slack, double zero_py, double tie_tol):
    cdef Py_ssize_t g = column_grid.shape[0]
    cdef Py_ssize_t ny = column_grid.shape[1]
    cdef Py_ssize_t ns = stx.shape[0]
    cdef Py_ssize_t nt = stx.shape[1]
    cdef Py_ssize_t nx = stx.shape[2]
    cdef Py_ssize_t s, t, x, y, k
    cdef long long idx, total = 1
    for x in range(nx):
        total *= g

    cdef double[:, ::1] p_st = np.zeros((ns, nt))
    cdef double[::1] p_s = np.zeros(ns)
    cdef double[::1] p_t = np.zeros(nt)
    cdef double[::1] p_x = np.zeros(nx)
    for s in range(ns):
        for t in range(nt):
            for x in range(nx):
                p_st[s, t] += stx[s, t, x]
                p_s[s] += stx[s, t, x]
                p_t[t] += stx[s, t, x]
                p_x[x] += stx[s, t, x]

    cdef Py_ssize_t[::1] digits = np.zeros(nx, dtype=np.intp)
    cdef double[:, :, ::1] p_sty = np.zeros((ns, nt, ny))
    cdef double[:, ::1] p_ty = np.zeros((nt, ny))
    cdef double[:, ::1] p_sy = np.zeros((ns, ny))
    cdef double[::1] p_y = np.zeros(ny)

    cdef long long best_index = -1, feasible = 0
    cdef double best_u = -INFINITY, best_ixy = 0.0, best_chi = 0.0, best_cmi = 0.0
    cdef double max_cmi = 0.0
    cdef double u, ixy, chi, chi_y, cmi, m, v, d

    with nogil:
        for idx in range(total):
            for s in range(ns):
                for t in range(nt):
                    for y in range(ny):
                        v = 0.0
                        for x in range(nx):
                            v = v + stx[s, t, x] * column_grid[digits[x], y]
                        p_sty[s, t, y] = v
            for y in range(ny):
                p_y[y] = 0.0
                for t in range(nt):
                    p_ty[t, y] = 0.0
                for s in range(ns):
                    p_sy[s, y] = 0.0
            for s in range(ns):
                for t in range(nt):
                    for y in range(ny):
                        v = p_sty[s, t, y]
                        p_ty[t, y] += v
                        p_sy[s, y] += v
                        p_y[y] += v

            u = 0.0
            for t in range(nt):
                for y in range(ny):
                    u = u + _xlogratio(p_ty[t, y], p_t[t] * p_y[y])
            ixy = 0.0
            for x in range(nx):
                for y in range(ny):
                    m = column_grid[digits[x], y]
                    if m > 0.0:
                        ixy = ixy + p_x[x] * m * log(m / p_y[y])
            chi = 0.0
            for y in range(ny):
                if p_y[y] >= zero_py:
                    chi_y = 0.0
                    for s in range(ns):
                        d = p_sy[s, y] / p_y[y] - p_s[s]
                        chi_y = chi_y + d * d / p_s[s]
                    if chi_y > chi:
                        chi = chi_y
            cmi = 0.0
            for s in range(ns):
                for t in range(nt):
                    for y in range(ny):
                        v = p_sty[s, t, y]
                        if v > 0.0:
                            cmi = cmi + v * log(v * p_t[t] / (p_st[s, t] * p_ty[t, y]))
            if cmi > max_cmi:
                max_cmi = cmi

            if ixy <= r + slack and chi <= chi2_bound + slack:
                feasible += 1
                if u > best_u + tie_tol:
                    best_u = u
                    best_index = idx
                    best_ixy = ixy
                    best_chi = chi
                    best_cmi = cmi

            # advance the mixed-radix counter, least significant digit last
            k = nx - 1
            while k >= 0:
                digits[k] += 1
                if digits[k] < g:
                    break
                digits[k] = 0
                k -= 1

    return (int(best_index), float(best_u), float(best_ixy), float(best_chi), float(best_cmi),
            int(feasible), int(total), float(max_cmi))
