"""Pure numpy implementation of the exhaustive mechanism search.

Same contract as the compiled ``_grid_kernel.search_grid``; candidates are
processed in index-ordered chunks and the incumbent is replaced only by a
candidate that beats it by more than ``tie_tol``.
"""
from __future__ import annotations

import numpy as np

CHUNK = 1 << 15


def _xlogratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    out = np.zeros_like(num)
    mask = num > 0
    out[mask] = num[mask] * np.log(num[mask] / den[mask])
    return out


def search_grid(column_grid, stx, r, chi2_bound, slack, zero_py, tie_tol):
    column_grid = np.ascontiguousarray(column_grid, dtype=float)
    stx = np.ascontiguousarray(stx, dtype=float)
    g, ny = column_grid.shape
    ns, nt, nx = stx.shape
    total = g**nx
    p_st = stx.sum(axis=2)
    p_s = p_st.sum(axis=1)
    p_t = p_st.sum(axis=0)
    p_x = stx.sum(axis=(0, 1))

    best_index, best_u = -1, -np.inf
    best_ixy = best_chi = best_cmi = 0.0
    feasible = 0
    max_cmi = 0.0
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(start + CHUNK, total))
        digits = np.stack(np.unravel_index(idx, (g,) * nx), axis=1)
        mech = column_grid[digits]  # (c, x, y)
        p_sty = np.einsum("stx,cxy->csty", stx, mech)
        p_ty = p_sty.sum(axis=1)
        p_sy = p_sty.sum(axis=2)
        p_y = p_ty.sum(axis=1)

        u = _xlogratio(p_ty, p_t[None, :, None] * p_y[:, None, :]).sum(axis=(1, 2))
        ixy = _xlogratio(mech, np.broadcast_to(p_y[:, None, :], mech.shape))
        ixy = (ixy * p_x[None, :, None]).sum(axis=(1, 2))
        live = p_y >= zero_py
        safe_py = np.where(live, p_y, 1.0)
        dev = p_sy / safe_py[:, None, :] - p_s[None, :, None]
        chi = np.where(live, (dev**2 / p_s[None, :, None]).sum(axis=1), 0.0).max(axis=1)
        mask = p_sty > 0
        den = p_st[None, :, :, None] * p_ty[:, None, :, :]
        ratio = np.ones_like(p_sty)
        ratio[mask] = (p_sty * p_t[None, None, :, None])[mask] / den[mask]
        cmi = (p_sty * np.log(ratio)).sum(axis=(1, 2, 3))
        max_cmi = max(max_cmi, float(cmi.max()))

        ok = (ixy <= r + slack) & (chi <= chi2_bound + slack)
        feasible += int(ok.sum())
        if ok.any():
            cand = np.where(ok, u, -np.inf)
            # a replacement can only happen at a strict running-max record
            prev = np.maximum.accumulate(np.concatenate(([best_u], cand[:-1])))
            for j in np.flatnonzero(cand > prev):
                if cand[j] > best_u + tie_tol:
                    best_u = float(cand[j])
                    best_index = int(idx[j])
                    best_ixy, best_chi, best_cmi = float(ixy[j]), float(chi[j]), float(cmi[j])
    return best_index, best_u, best_ixy, best_chi, best_cmi, feasible, total, max_cmi
