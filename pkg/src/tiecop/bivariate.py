"""Bivariate normal and Student t lower-orthant probabilities.

Both routines follow A. Genz's Fortran/MATLAB codes: ``bvn_cdf`` is the
Drezner-Wesolowsky single quadrature with Genz's high-correlation
reformulation, ``bvt_cdf`` the Dunnett-Sobel finite series for integer
degrees of freedom.  All arguments broadcast.
"""
from __future__ import annotations

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import ndtr

__all__ = ["bvn_cdf", "bvt_cdf"]

_GL_X, _GL_W = leggauss(20)
_TWO_PI = 2.0 * np.pi


def _bvnu(h, k, r):
    """P(X > h, Y > k) for a standard bivariate normal with correlation r."""
    h, k, r = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (h, k, r)))
    out = np.empty(h.shape)
    lo = np.abs(r) < 0.925

    if lo.any():
        hh, kk, rr = h[lo], k[lo], r[lo]
        hk = (hh * kk)[..., None]
        hs = ((hh * hh + kk * kk) / 2)[..., None]
        asr = np.arcsin(rr)
        sn = np.sin(asr[..., None] * (_GL_X + 1) / 2)
        s = np.sum(_GL_W * np.exp((sn * hk - hs) / (1 - sn * sn)), axis=-1)
        out[lo] = s * asr / (2 * _TWO_PI) + ndtr(-hh) * ndtr(-kk)

    hi = ~lo
    if hi.any():
        hh, kk, rr = h[hi], k[hi], r[hi]
        neg = rr < 0
        kk = np.where(neg, -kk, kk)
        hk = hh * kk
        bvn = np.zeros(hh.shape)
        inner = np.abs(rr) < 1
        if inner.any():
            hi_h, hi_k, hi_hk, hi_r = hh[inner], kk[inner], hk[inner], rr[inner]
            as_ = (1 - hi_r) * (1 + hi_r)
            a = np.sqrt(as_)
            bs = (hi_h - hi_k) ** 2
            c = (4 - hi_hk) / 8
            d = (12 - hi_hk) / 16
            val = a * np.exp(-(bs / as_ + hi_hk) / 2) * (
                1 - c * (bs - as_) * (1 - d * bs / 5) / 3 + c * d * as_ * as_ / 5
            )
            b = np.sqrt(bs)
            with np.errstate(over="ignore", invalid="ignore"):
                tail = np.exp(-hi_hk / 2) * np.sqrt(_TWO_PI) * ndtr(-b / a) * b * (
                    1 - c * bs * (1 - d * bs / 5) / 3
                )
            val = val - np.where(hi_hk > -160, tail, 0.0)
            a2 = (a / 2)[..., None]
            xs = (a2 * (_GL_X + 1)) ** 2
            rs = np.sqrt(1 - xs)
            bs_ = bs[..., None]
            hk_ = hi_hk[..., None]
            c_ = c[..., None]
            d_ = d[..., None]
            with np.errstate(over="ignore", under="ignore"):
                terms = np.exp(-bs_ / (2 * xs) - hk_ / (1 + rs)) / rs - np.exp(
                    -(bs_ / xs + hk_) / 2
                ) * (1 + c_ * xs * (1 + d_ * xs))
            val = val + a2[..., 0] * np.sum(_GL_W * terms, axis=-1)
            bvn[inner] = -val / _TWO_PI
        pos_part = bvn + ndtr(-np.maximum(hh, kk))
        lower = np.where(hh < 0, ndtr(kk) - ndtr(hh), ndtr(-hh) - ndtr(-kk))
        neg_part = np.where(hh >= kk, -bvn, lower - bvn)
        out[hi] = np.where(neg, neg_part, pos_part)

    return np.clip(out, 0.0, 1.0)


def bvn_cdf(x, y, rho):
    """P(X <= x, Y <= y) for a standard bivariate normal with correlation rho."""
    return _bvnu(-np.asarray(x, dtype=float), -np.asarray(y, dtype=float), rho)


def bvt_cdf(x, y, rho, df: int):
    """P(X <= x, Y <= y) for a standard bivariate t with integer ``df``."""
    nu = int(df)
    if nu != df or nu < 1:
        raise ValueError("bvt_cdf requires a positive integer df")
    dh, dk, r = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (x, y, rho)))
    snu = np.sqrt(nu)
    ors = 1 - r * r
    hrk = dh - r * dk
    krh = dk - r * dh
    with np.errstate(invalid="ignore", divide="ignore"):
        denom_hk = hrk * hrk + ors * (nu + dk * dk)
        denom_kh = krh * krh + ors * (nu + dh * dh)
        xnhk = np.where(denom_hk > 0, hrk * hrk / denom_hk, 0.0)
        xnkh = np.where(denom_kh > 0, krh * krh / denom_kh, 0.0)
    hs = np.where(hrk >= 0, 1.0, -1.0)
    ks = np.where(krh >= 0, 1.0, -1.0)

    if nu % 2 == 0:
        bvt = np.arctan2(np.sqrt(ors), -r) / _TWO_PI
        gmph = dh / np.sqrt(16 * (nu + dh * dh))
        gmpk = dk / np.sqrt(16 * (nu + dk * dk))
        btnckh = 2 * np.arctan2(np.sqrt(xnkh), np.sqrt(1 - xnkh)) / np.pi
        btpdkh = 2 * np.sqrt(xnkh * (1 - xnkh)) / np.pi
        btnchk = 2 * np.arctan2(np.sqrt(xnhk), np.sqrt(1 - xnhk)) / np.pi
        btpdhk = 2 * np.sqrt(xnhk * (1 - xnhk)) / np.pi
        for j in range(1, nu // 2 + 1):
            bvt = bvt + gmph * (1 + ks * btnckh)
            bvt = bvt + gmpk * (1 + hs * btnchk)
            btnckh = btnckh + btpdkh
            btpdkh = 2 * j * btpdkh * (1 - xnkh) / (2 * j + 1)
            btnchk = btnchk + btpdhk
            btpdhk = 2 * j * btpdhk * (1 - xnhk) / (2 * j + 1)
            gmph = gmph * (2 * j - 1) / (2 * j * (1 + dh * dh / nu))
            gmpk = gmpk * (2 * j - 1) / (2 * j * (1 + dk * dk / nu))
    else:
        qhrk = np.sqrt(dh * dh + dk * dk - 2 * r * dh * dk + nu * ors)
        hkrn = dh * dk + r * nu
        hkn = dh * dk - nu
        hpk = dh + dk
        bvt = np.arctan2(-snu * (hkn * qhrk + hpk * hkrn), hkn * hkrn - nu * hpk * qhrk) / _TWO_PI
        bvt = np.where(bvt < -1e-15, bvt + 1, bvt)
        gmph = dh / (_TWO_PI * snu * (1 + dh * dh / nu))
        gmpk = dk / (_TWO_PI * snu * (1 + dk * dk / nu))
        btnckh = np.sqrt(xnkh)
        btpdkh = btnckh
        btnchk = np.sqrt(xnhk)
        btpdhk = btnchk
        for j in range(1, (nu - 1) // 2 + 1):
            bvt = bvt + gmph * (1 + ks * btnckh)
            bvt = bvt + gmpk * (1 + hs * btnchk)
            btpdkh = (2 * j - 1) * btpdkh * (1 - xnkh) / (2 * j)
            btnckh = btnckh + btpdkh
            btpdhk = (2 * j - 1) * btpdhk * (1 - xnhk) / (2 * j)
            btnchk = btnchk + btpdhk
            gmph = 2 * j * gmph / ((2 * j + 1) * (1 + dh * dh / nu))
            gmpk = 2 * j * gmpk / ((2 * j + 1) * (1 + dk * dk / nu))
    return np.clip(bvt, 0.0, 1.0)
