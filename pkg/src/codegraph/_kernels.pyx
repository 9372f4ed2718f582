# cython: language_level=3
"""Compiled kernels: Java tokenizer and sparse score accumulation.

Output must match ``codegraph._pykernels`` exactly.
"""

from cpython.array cimport array, clone

cdef extern from "Python.h":
    bint Py_UNICODE_ISALNUM(Py_UCS4 ch)
    bint Py_UNICODE_ISDECIMAL(Py_UCS4 ch)

cdef enum:
    IDENT = 0
    NUMBER = 1
    LITERAL = 2
    OP = 3

cdef array _double_template = array("d")


cdef inline bint _is_ws(Py_UCS4 c):
    return c == u' ' or c == u'\t' or c == u'\f' or c == u'\r' or c == u'\n' or c == 0xFEFF


cdef inline bint _is_word(Py_UCS4 c):
    return c == u'_' or Py_UNICODE_ISALNUM(c)


cdef inline bint _is_ident_start(Py_UCS4 c):
    return c == u'$' or (_is_word(c) and not Py_UNICODE_ISDECIMAL(c))


cdef inline bint _is_ident_part(Py_UCS4 c):
    return c == u'$' or _is_word(c)


def lex_java(str source):
    cdef Py_ssize_t n = len(source)
    cdef Py_ssize_t i = 0, j
    cdef Py_UCS4 c, d
    cdef int kind
    cdef list tokens = []

    while i < n:
        c = source[i]
        if _is_ws(c):
            i += 1
            while i < n and _is_ws(source[i]):
                i += 1
            continue

        d = source[i + 1] if i + 1 < n else 0

        if c == u'/' and d == u'/':
            i += 2
            while i < n and source[i] != u'\n':
                i += 1
            continue

        if c == u'/' and d == u'*':
            j = i + 2
            while j < n:
                if source[j] == u'*' and j + 1 < n and source[j + 1] == u'/':
                    j += 2
                    break
                j += 1
            i = j
            continue

        j = i
        if c == u'"' and d == u'"' and i + 2 < n and source[i + 2] == u'"':
            kind = LITERAL
            j = i + 3
            while j < n:
                c = source[j]
                if c == u'\\':
                    j += 2
                elif c == u'"' and j + 2 < n and source[j + 1] == u'"' and source[j + 2] == u'"':
                    j += 3
                    break
                else:
                    j += 1
            if j > n:
                j = n
        elif c == u'"' or c == u'\'':
            kind = LITERAL
            j = i + 1
            while j < n:
                d = source[j]
                if d == c:
                    j += 1
                    break
                if d == u'\n':
                    break
                if d == u'\\':
                    if j + 1 < n and source[j + 1] != u'\n':
                        j += 2
                        continue
                    break
                j += 1
        elif _is_ident_start(c):
            kind = IDENT
            j = i + 1
            while j < n and _is_ident_part(source[j]):
                j += 1
        elif Py_UNICODE_ISDECIMAL(c) or (c == u'.' and Py_UNICODE_ISDECIMAL(d)):
            kind = NUMBER
            j = i + 1
            while j < n:
                d = source[j]
                if (d == u'e' or d == u'E' or d == u'p' or d == u'P') and j + 1 < n and (
                    source[j + 1] == u'+' or source[j + 1] == u'-'
                ):
                    j += 2
                elif d == u'.' or _is_ident_part(d):
                    j += 1
                else:
                    break
        elif c == u'.' and d == u'.' and i + 2 < n and source[i + 2] == u'.':
            kind = OP
            j = i + 3
        else:
            kind = OP
            j = i + 1

        tokens.append((kind, source[i:j], i))
        i = j
    return tokens


def accumulate_scores(list postings, Py_ssize_t n_chunks):
    cdef array scores = clone(_double_template, n_chunks, True)
    cdef double[::1] out = scores
    cdef const int[::1] ids
    cdef const double[::1] weights
    cdef double qw
    cdef Py_ssize_t j
    for entry in postings:
        qw = entry[0]
        ids = entry[1]
        weights = entry[2]
        for j in range(ids.shape[0]):
            out[ids[j]] += qw * weights[j]
    return scores
