# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled gather+pack loop for one k-dim refinement round.

Fills out[T] = [colors[T], code(T, x=0), ..., code(T, x=n-1)] where
code(T, x) packs the previous colors of T with position j substituted by x,
ordered j = k-1 down to 0, in base `base` big-endian.  The caller sorts the
code block of each row afterwards.
"""


def wl_round_rows(long long[::1] colors, int n, int k,
                  long long base, long long[:, ::1] out):
    cdef Py_ssize_t nk = colors.shape[0]
    cdef long long strides[16]
    cdef long long offs[16]
    cdef Py_ssize_t T
    cdef int j, x
    cdef long long code, d, s
    if k < 2 or k > 16:
        raise ValueError("k out of range for compiled kernel")
    s = 1
    for j in range(k - 1, -1, -1):
        strides[j] = s
        s *= n
    with nogil:
        for T in range(nk):
            out[T, 0] = colors[T]
            for j in range(k):
                d = (T // strides[j]) % n
                offs[j] = T - d * strides[j]
            for x in range(n):
                code = colors[offs[k - 1] + x]
                for j in range(k - 2, -1, -1):
                    code = code * base + colors[offs[j] + x * strides[j]]
                out[T, 1 + x] = code
