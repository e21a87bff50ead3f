"""Pure-Python augmenting-path kernel for quota-constrained bipartite matching.

Students have unit capacity; projects have integer quotas; projects may be
grouped under lecturers that carry their own quotas.  The search runs over the
residual network (student -> project -> lecturer -> sink) so an augmenting
path can displace students between projects of one lecturer or move them to a
different lecturer.  ``spast._augment`` is the compiled twin of this module;
both operate on the same ``array('i')`` buffers and must stay step-for-step
identical so that backends produce the same matchings.
"""

from __future__ import annotations

from array import array

_KIND_S = 0
_KIND_P = 1
_KIND_L = 2
_FROM_S = 0
_FROM_L = 1


def augment_students(
    students,
    adj_indptr, adj_indices,
    lec_indptr, lec_indices,
    assign, proj_load, proj_cap, owner,
    lec_load, lec_cap,
    pslot_start, pslot, sslot,
    allowed, locked,
):
    """Try to match each currently free student in ``students``.

    Mutates assign/proj_load/lec_load/pslot/sslot in place and returns the
    number of students newly matched.
    """
    n_students = len(assign)
    n_projects = len(proj_load)
    n_lecturers = len(lec_load)

    svis = array("i", bytes(4 * n_students))
    pvis = array("i", bytes(4 * n_projects))
    lvis = array("i", bytes(4 * n_lecturers))
    par_s = array("i", bytes(4 * n_students))
    par_p = array("i", bytes(4 * n_projects))
    par_p_kind = array("i", bytes(4 * n_projects))
    par_l = array("i", bytes(4 * n_lecturers))

    max_frames = n_students + n_projects + n_lecturers + 1
    st_kind = array("i", bytes(4 * max_frames))
    st_node = array("i", bytes(4 * max_frames))
    st_pos = array("i", bytes(4 * max_frames))

    detach_s = array("i", bytes(4 * max_frames))
    detach_p = array("i", bytes(4 * max_frames))
    attach_s = array("i", bytes(4 * max_frames))
    attach_p = array("i", bytes(4 * max_frames))

    stamp = 0
    matched = 0
    for s0 in students:
        if assign[s0] != -1:
            continue
        stamp += 1
        svis[s0] = stamp
        top = 0
        st_kind[0] = _KIND_S
        st_node[0] = s0
        st_pos[0] = adj_indptr[s0]
        found_lec = -1

        while top >= 0:
            kind = st_kind[top]
            node = st_node[top]
            pos = st_pos[top]

            if kind == _KIND_S:
                end = adj_indptr[node + 1]
                pushed = False
                while pos < end:
                    p = adj_indices[pos]
                    pos += 1
                    if p == assign[node] or not allowed[p] or pvis[p] == stamp:
                        continue
                    pvis[p] = stamp
                    par_p[p] = node
                    par_p_kind[p] = _FROM_S
                    st_pos[top] = pos
                    top += 1
                    st_kind[top] = _KIND_P
                    st_node[top] = p
                    st_pos[top] = -1
                    pushed = True
                    break
                if not pushed:
                    top -= 1

            elif kind == _KIND_P:
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
                        st_kind[top] = _KIND_L
                        st_node[top] = k
                        st_pos[top] = lec_indptr[k]
                    continue
                base = pslot_start[node]
                load = proj_load[node]
                pushed = False
                while pos < load:
                    s2 = pslot[base + pos]
                    pos += 1
                    if svis[s2] == stamp:
                        continue
                    svis[s2] = stamp
                    par_s[s2] = node
                    st_pos[top] = pos
                    top += 1
                    st_kind[top] = _KIND_S
                    st_node[top] = s2
                    st_pos[top] = adj_indptr[s2]
                    pushed = True
                    break
                if not pushed:
                    top -= 1

            else:  # _KIND_L
                end = lec_indptr[node + 1]
                pushed = False
                while pos < end:
                    p2 = lec_indices[pos]
                    pos += 1
                    if locked[p2] or proj_load[p2] == 0 or pvis[p2] == stamp:
                        continue
                    pvis[p2] = stamp
                    par_p[p2] = node
                    par_p_kind[p2] = _FROM_L
                    st_pos[top] = pos
                    top += 1
                    st_kind[top] = _KIND_P
                    st_node[top] = p2
                    st_pos[top] = -1
                    pushed = True
                    break
                if not pushed:
                    top -= 1

        if found_lec < 0:
            continue

        # Unwind parent pointers from the accepting lecturer back to s0,
        # collecting the reassignments along the alternating path.
        n_det = 0
        n_att = 0
        kind = _KIND_L
        node = found_lec
        while True:
            if kind == _KIND_L:
                node = par_l[node]
                kind = _KIND_P
            elif kind == _KIND_P:
                if par_p_kind[node] == _FROM_S:
                    s = par_p[node]
                    attach_s[n_att] = s
                    attach_p[n_att] = node
                    n_att += 1
                    if s == s0:
                        break
                    kind = _KIND_S
                    node = s
                else:
                    kind = _KIND_L
                    node = par_p[node]
            else:  # _KIND_S: reached via a displacement edge
                p = par_s[node]
                detach_s[n_det] = node
                detach_p[n_det] = p
                n_det += 1
                kind = _KIND_P
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
