# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the sparse kernels in :mod:`qcc._pykernels`.

Keys stay Python integers (they are wider than 64 bits for most rings), so
the gain comes from typed loop bookkeeping and direct dict C-API calls.
"""
from cpython.dict cimport PyDict_GetItem, PyDict_SetItem
from cpython.ref cimport PyObject

from qcc._pykernels import NotDivisible, FIELD_BITS, MASK, BIAS

cdef object _MASK = MASK


def mul(dict a, dict b, object zero):
    cdef dict out = {}
    cdef object kb, cb, ka, ca, k, d
    cdef PyObject* old
    if len(a) < len(b):
        a, b = b, a
    for kb, cb in b.items():
        d = kb - zero
        for ka, ca in a.items():
            k = ka + d
            old = PyDict_GetItem(out, k)
            if old is NULL:
                PyDict_SetItem(out, k, ca * cb)
            else:
                PyDict_SetItem(out, k, <object>old + ca * cb)
    return {k: c for k, c in out.items() if c}


def add_into(dict acc, dict p, object scale=1):
    cdef object k, c
    cdef PyObject* old
    if scale != 1:
        for k, c in p.items():
            c = scale * c
            old = PyDict_GetItem(acc, k)
            if old is NULL:
                PyDict_SetItem(acc, k, c)
            else:
                PyDict_SetItem(acc, k, <object>old + c)
        return
    for k, c in p.items():
        old = PyDict_GetItem(acc, k)
        if old is NULL:
            PyDict_SetItem(acc, k, c)
        else:
            PyDict_SetItem(acc, k, <object>old + c)


def prune(dict p):
    return {k: c for k, c in p.items() if c}


def shift(dict p, object delta, object scale=1):
    cdef object k, c
    cdef dict out = {}
    if scale == 1:
        for k, c in p.items():
            PyDict_SetItem(out, k + delta, c)
    else:
        for k, c in p.items():
            PyDict_SetItem(out, k + delta, scale * c)
    return out


def relabel(dict p, list src, list dst):
    cdef Py_ssize_t n = len(src)
    cdef Py_ssize_t j
    cdef object clear = 0
    cdef object k, c, nk
    cdef dict out = {}
    cdef list s_list = [int(s) for s in src]
    cdef list d_list = [int(s) for s in dst]
    for j in range(n):
        clear |= _MASK << s_list[j]
    clear = ~clear
    for k, c in p.items():
        nk = k & clear
        for j in range(n):
            nk |= ((k >> s_list[j]) & _MASK) << d_list[j]
        PyDict_SetItem(out, nk, c)
    return out


def div_linear(dict p, object xshift, object mdelta, object mcoeff):
    cdef dict buckets = {}
    cdef dict q = {}
    cdef dict carry = {}
    cdef dict cur
    cdef object k, c, qk, nk, xunit
    cdef PyObject* old
    cdef Py_ssize_t e, lo, hi
    if not p:
        return {}
    xunit = (<object>1) << xshift
    for k, c in p.items():
        e = (k >> xshift) & _MASK
        old = PyDict_GetItem(buckets, e)
        if old is NULL:
            buckets[e] = {k: c}
        else:
            PyDict_SetItem(<dict>old, k, c)
    lo = min(buckets)
    hi = max(buckets)
    for e in range(hi, lo, -1):
        old = PyDict_GetItem(buckets, e)
        if old is NULL:
            cur = carry
        else:
            cur = <dict>old
            for k, c in carry.items():
                old = PyDict_GetItem(cur, k)
                if old is NULL:
                    PyDict_SetItem(cur, k, c)
                else:
                    PyDict_SetItem(cur, k, <object>old + c)
        carry = {}
        for k, c in cur.items():
            if not c:
                continue
            qk = k - xunit
            PyDict_SetItem(q, qk, c)
            nk = qk + mdelta
            old = PyDict_GetItem(carry, nk)
            if old is NULL:
                PyDict_SetItem(carry, nk, mcoeff * c)
            else:
                PyDict_SetItem(carry, nk, <object>old + mcoeff * c)
    cur = buckets.get(lo, {})
    for k, c in carry.items():
        old = PyDict_GetItem(cur, k)
        if old is NULL:
            PyDict_SetItem(cur, k, c)
        else:
            PyDict_SetItem(cur, k, <object>old + c)
    for c in cur.values():
        if c:
            raise NotDivisible("remainder is nonzero")
    return q
