# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled augmenting-path kernel; behavioural twin of ``spast._augment_py``.

Keep the two implementations step-for-step identical: the test suite asserts
that both backends produce the same matchings on the same buffers.
"""

from array import array

cimport cython

cdef enum:
    KIND_S = 0
    KIND_P = 1
    KIND_L = 2
    FROM_S = 0
    FROM_L = 1


def augment_students(
    students,
    adj_indptr_o, adj_indices_o,
    lec_indptr_o, lec_indices_o,
    assign_o, proj_load_o, proj_cap_o, owner_o,
    lec_load_o, lec_cap_o,
    pslot_start_o, pslot_o, sslot_o,
    allowed_o, locked_o,
):
    """Match free students from ``students``; returns the number matched."""
    cdef int[:] adj_indptr = adj_indptr_o
    cdef int[:] adj_indices = adj_indices_o
    cdef int[:] lec_indptr = lec_indptr_o
    cdef int[:] lec_indices = lec_indices_o
    cdef int[:] assign = assign_o
    cdef int[:] proj_load = proj_load_o
    cdef int[:] proj_cap = proj_cap_o
    cdef int[:] owner = owner_o
    cdef int[:] lec_load = lec_load_o
    cdef int[:] lec_cap = lec_cap_o
    cdef int[:] pslot_start = pslot_start_o
    cdef int[:] pslot = pslot_o
    cdef int[:] sslot = sslot_o
    cdef unsigned char[:] allowed = allowed_o
    cdef unsigned char[:] locked = locked_o

    cdef int n_students = assign.shape[0]
    cdef int n_projects = proj_load.shape[0]
    cdef int n_lecturers = lec_load.shape[0]
    cdef int max_frames = n_students + n_projects + n_lecturers + 1

    svis_o = array("i", bytes(4 * n_students))
    pvis_o = array("i", bytes(4 * n_projects))
    lvis_o = array("i", bytes(4 * n_lecturers))
    par_s_o = array("i", bytes(4 * n_students))
    par_p_o = array("i", bytes(4 * n_projects))
    par_p_kind_o = array("i", bytes(4 * n_projects))
    par_l_o = array("i", bytes(4 * n_lecturers))
    st_kind_o = array("i", bytes(4 * max_frames))
    st_node_o = array("i", bytes(4 * max_frames))
    st_pos_o = array("i", bytes(4 * max_frames))
    detach_s_o = array("i", bytes(4 * max_frames))
    detach_p_o = array("i", bytes(4 * max_frames))
    attach_s_o = array("i", bytes(4 * max_frames))
    attach_p_o = array("i", bytes(4 * max_frames))

    cdef int[:] svis = svis_o
    cdef int[:] pvis = pvis_o
    cdef int[:] lvis = lvis_o
    cdef int[:] par_s = par_s_o
    cdef int[:] par_p = par_p_o
    cdef int[:] par_p_kind = par_p_kind_o
    cdef int[:] par_l = par_l_o
    cdef int[:] st_kind = st_kind_o
    cdef int[:] st_node = st_node_o
    cdef int[:] st_pos = st_pos_o
    cdef int[:] detach_s = detach_s_o
    cdef int[:] detach_p = detach_p_o
    cdef int[:] attach_s = attach_s_o
    cdef int[:] attach_p = attach_p_o

    students_arr = array("i", students)
    cdef int[:] stud = students_arr
    cdef Py_ssize_t n_stud = stud.shape[0]

    cdef int stamp = 0
    cdef int matched = 0
    cdef int s0, top, found_lec, kind, node, pos, end, p, k, s2, p2
    cdef int base, load, n_det, n_att, s, i, pushed, last
    cdef Py_ssize_t si

    for si in range(n_stud):
        s0 = stud[si]
        if assign[s0] != -1:
            continue
        stamp += 1
        svis[s0] = stamp
        top = 0
        st_kind[0] = KIND_S
        st_node[0] = s0
        st_pos[0] = adj_indptr[s0]
        found_lec = -1

        while top >= 0:
            kind = st_kind[top]
            node = st_node[top]
            pos = st_pos[top]

            if kind == KIND_S:
                end = adj_indptr[node + 1]
                pushed = 0
                while pos < end:
                    p = adj_indices[pos]
                    pos += 1
                    if p == assign[node] or allowed[p] == 0 or pvis[p] == stamp:
                        continue
                    pvis[p] = stamp
                    par_p[p] = node
                    par_p_kind[p] = FROM_S
                    st_pos[top] = pos
                    top += 1
                    st_kind[top] = KIND_P
                    st_node[top] = p
                    st_pos[top] = -1
                    pushed = 1
                    break
                if pushed == 0:
                    top -= 1

            elif kind == KIND_P:
                if pos == -1:
                    st_pos[top] = 0
                    k = owner[node]
                    if proj_load[node] < proj_cap[node] and lvis[k] != stamp:
                        lvis[k] = stamp
                        par_l[k] = node
                        if lec_load[k] < lec_cap[k]:
                            found_lec = k
                            break
                        top += 1
                        st_kind[top] = KIND_L
                        st_node[top] = k
                        st_pos[top] = lec_indptr[k]
                    continue
                base = pslot_start[node]
                load = proj_load[node]
                pushed = 0
                while pos < load:
                    s2 = pslot[base + pos]
                    pos += 1
                    if svis[s2] == stamp:
                        continue
                    svis[s2] = stamp
                    par_s[s2] = node
                    st_pos[top] = pos
                    top += 1
                    st_kind[top] = KIND_S
                    st_node[top] = s2
                    st_pos[top] = adj_indptr[s2]
                    pushed = 1
                    break
                if pushed == 0:
                    top -= 1

            else:
                end = lec_indptr[node + 1]
                pushed = 0
                while pos < end:
                    p2 = lec_indices[pos]
                    pos += 1
                    if locked[p2] != 0 or proj_load[p2] == 0 or pvis[p2] == stamp:
                        continue
                    pvis[p2] = stamp
                    par_p[p2] = node
                    par_p_kind[p2] = FROM_L
                    st_pos[top] = pos
                    top += 1
                    st_kind[top] = KIND_P
                    st_node[top] = p2
                    st_pos[top] = -1
                    pushed = 1
                    break
                if pushed == 0:
                    top -= 1

        if found_lec < 0:
            continue

        n_det = 0
        n_att = 0
        kind = KIND_L
        node = found_lec
        while True:
            if kind == KIND_L:
                node = par_l[node]
                kind = KIND_P
            elif kind == KIND_P:
                if par_p_kind[node] == FROM_S:
                    s = par_p[node]
                    attach_s[n_att] = s
                    attach_p[n_att] = node
                    n_att += 1
                    if s == s0:
                        break
                    kind = KIND_S
                    node = s
                else:
                    kind = KIND_L
                    node = par_p[node]
            else:
                p = par_s[node]
                detach_s[n_det] = node
                detach_p[n_det] = p
                n_det += 1
                kind = KIND_P
                node = p

        for i in range(n_det):
            s = detach_s[i]
            p = detach_p[i]
            load = proj_load[p] - 1
            proj_load[p] = load
            lec_load[owner[p]] -= 1
            pos = sslot[s]
            last = pslot[pslot_start[p] + load]
            pslot[pslot_start[p] + pos] = last
            sslot[last] = pos
            assign[s] = -1
        for i in range(n_att):
            s = attach_s[i]
            p = attach_p[i]
            assign[s] = p
            load = proj_load[p]
            pslot[pslot_start[p] + load] = s
            sslot[s] = load
            proj_load[p] = load + 1
            lec_load[owner[p]] += 1
        matched += 1

    return matched
