"""Pure-Python sparse kernels over packed monomial keys.

A term dictionary maps a packed monomial key (see :mod:`qcc.poly`) to a
nonzero coefficient.  Every exponent occupies a ``FIELD_BITS`` wide field,
stored with a bias so that negative exponents stay non-negative.  Adding two
keys and subtracting the key of the unit monomial multiplies the monomials.

The compiled module ``qcc._ckernels`` implements exactly the same functions.
"""
from __future__ import annotations

FIELD_BITS = 24
MASK = (1 << FIELD_BITS) - 1
BIAS = 1 << (FIELD_BITS - 1)


class NotDivisible(ArithmeticError):
    """Raised when an exact division leaves a nonzero remainder."""


def mul(a: dict, b: dict, zero: int) -> dict:
    if len(a) < len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    for kb, cb in b.items():
        d = kb - zero
        for ka, ca in a.items():
            k = ka + d
            out[k] = get(k, 0) + ca * cb
    return {k: c for k, c in out.items() if c}


def add_into(acc: dict, p: dict, scale=1) -> None:
    get = acc.get
    if scale == 1:
        for k, c in p.items():
            acc[k] = get(k, 0) + c
    elif scale == -1:
        for k, c in p.items():
            acc[k] = get(k, 0) - c
    else:
        for k, c in p.items():
            acc[k] = get(k, 0) + scale * c


def prune(p: dict) -> dict:
    return {k: c for k, c in p.items() if c}


def shift(p: dict, delta: int, scale=1) -> dict:
    if scale == 1:
        return {k + delta: c for k, c in p.items()}
    return {k + delta: scale * c for k, c in p.items()}


def relabel(p: dict, src: list, dst: list) -> dict:
    """Move the field at shift ``src[j]`` to shift ``dst[j]`` in every key.

    ``src`` and ``dst`` must list the same set of shifts.
    """
    clear = 0
    for s in src:
        clear |= MASK << s
    clear = ~clear
    pairs = list(zip(src, dst))
    out = {}
    for k, c in p.items():
        nk = k & clear
        for s, d in pairs:
            nk |= ((k >> s) & MASK) << d
        out[nk] = c
    return out


def div_linear(p: dict, xshift: int, mdelta: int, mcoeff) -> dict:
    """Divide by ``x - mcoeff*m`` where ``x`` sits at ``xshift``.

    ``mdelta`` is the key offset of the monomial ``m``, which must not involve
    ``x``.  Works for Laurent polynomials in ``x``.
    """
    if not p:
        return {}
    xunit = 1 << xshift
    buckets: dict = {}
    for k, c in p.items():
        e = (k >> xshift) & MASK
        b = buckets.get(e)
        if b is None:
            buckets[e] = {k: c}
        else:
            b[k] = c
    lo = min(buckets)
    hi = max(buckets)
    q: dict = {}
    carry: dict = {}
    for e in range(hi, lo, -1):
        cur = buckets.get(e)
        if cur is None:
            cur = carry
        elif carry:
            get = cur.get
            for k, c in carry.items():
                cur[k] = get(k, 0) + c
        carry = {}
        cget = carry.get
        for k, c in cur.items():
            if not c:
                continue
            qk = k - xunit
            q[qk] = c
            nk = qk + mdelta
            carry[nk] = cget(nk, 0) + mcoeff * c
    cur = buckets.get(lo, {})
    get = cur.get
    for k, c in carry.items():
        cur[k] = get(k, 0) + c
    for c in cur.values():
        if c:
            raise NotDivisible("remainder is nonzero")
    return q
