"""Array-based PPM coder compiled with numba.

Bit-for-bit twin of the dict-based reference coder in ``ppm_codec``: same
slot order (first-seen symbol order inside a node), same update order,
same range coder, same mutation hash. The reference is the readable
definition; this module exists so whole corpora can be processed.

Layout
  nodes:    head/tail index into the entry pool, -1 when empty
  entries:  (symbol, count, next) singly linked per node, insertion order
  children: open-addressed table keyed by ``parent * 256 + label``
Mode 0 is classic (labels are past bytes), mode 1 is compressed contexts
(labels are context bits).
"""

import numpy as np
from numba import njit

TOP = 1 << 24
MASK32 = 0xFFFFFFFF
COUNT_LIMIT = 1 << 16
FNV_PRIME = 0x100000001B3
FNV_OFFSET = 0xCBF29CE484222325

OK = 0
ERR_TRUNCATED = 1
ERR_INTERVAL = 2
ERR_EXHAUSTED_ALPHABET = 3
ERR_TRAILING = 4
ERR_NOT_IN_TABLE = 5


@njit(cache=True)
def _mix(h, v):
    return (h ^ np.uint64(v)) * np.uint64(FNV_PRIME)


@njit(cache=True)
def _grow_i64(a, fill):
    b = np.full(a.shape[0] * 2, fill, dtype=np.int64)
    b[: a.shape[0]] = a
    return b


@njit(cache=True)
def _slot(key, mask):
    x = key * 0x9E3779B1
    x ^= x >> 15
    return x & mask


@njit(cache=True)
def _lookup(hkeys, hvals, key):
    mask = hkeys.shape[0] - 1
    i = _slot(key, mask)
    while True:
        k = hkeys[i]
        if k == key:
            return hvals[i]
        if k == -1:
            return -1
        i = (i + 1) & mask


@njit(cache=True)
def _insert(hkeys, hvals, key, val):
    mask = hkeys.shape[0] - 1
    i = _slot(key, mask)
    while hkeys[i] != -1:
        i = (i + 1) & mask
    hkeys[i] = key
    hvals[i] = val


@njit(cache=True)
def _rehash(hkeys, hvals):
    nk = np.full(hkeys.shape[0] * 2, -1, dtype=np.int64)
    nv = np.full(hkeys.shape[0] * 2, -1, dtype=np.int64)
    for i in range(hkeys.shape[0]):
        if hkeys[i] != -1:
            _insert(nk, nv, hkeys[i], hvals[i])
    return nk, nv


@njit(cache=True)
def _shift_low(rc, out, opos):
    # rc = [low, range, cache, cache_size, skip_first]
    low = rc[0]
    if low < 0xFF000000 or low > MASK32:
        carry = low >> 32
        temp = rc[2]
        while True:
            if rc[4] == 1:
                rc[4] = 0
            else:
                if opos >= out.shape[0]:
                    nb = np.zeros(out.shape[0] * 2, dtype=np.uint8)
                    nb[: out.shape[0]] = out
                    out = nb
                out[opos] = (temp + carry) & 0xFF
                opos += 1
            temp = 0xFF
            rc[3] -= 1
            if rc[3] == 0:
                break
        rc[2] = (low >> 24) & 0xFF
    rc[3] += 1
    rc[0] = (low << 8) & MASK32
    return out, opos


@njit(cache=True)
def _rc_encode(rc, out, opos, cum, freq, total):
    if freq == total:
        return out, opos
    r = rc[1] // total
    rc[0] += r * cum
    rc[1] = r * freq
    while rc[1] < TOP:
        rc[1] <<= 8
        out, opos = _shift_low(rc, out, opos)
    return out, opos


@njit(cache=True)
def _next_byte(dc, payload):
    # dc = [range, code, pos, r, error]
    p = dc[2]
    if p >= payload.shape[0]:
        dc[4] = ERR_TRUNCATED
        return 0
    dc[2] = p + 1
    return np.int64(payload[p])


@njit(cache=True)
def _rc_target(dc, total):
    r = dc[0] // total
    dc[3] = r
    v = dc[1] // r
    if v >= total:
        dc[4] = ERR_INTERVAL
        return 0
    return v


@njit(cache=True)
def _rc_consume(dc, payload, cum, freq):
    r = dc[3]
    dc[1] -= r * cum
    dc[0] = r * freq
    while dc[0] < TOP:
        dc[1] = ((dc[1] << 8) | _next_byte(dc, payload)) & MASK32
        dc[0] <<= 8


@njit(cache=True)
def _rescale_shift(head, ent_sym, ent_cnt, ent_next, stamp, gen):
    """Smallest s such that sum(ceil(f / 2**s)) < 2**24 over the node's slots."""
    s = 0
    while True:
        add = (1 << s) - 1
        total = 0
        d = 0
        e = head
        while e != -1:
            if stamp[ent_sym[e]] != gen:
                total += (2 * ent_cnt[e] - 1 + add) >> s
                d += 1
            e = ent_next[e]
        total += (d + add) >> s
        if total < TOP:
            return s
        s += 1


@njit(cache=True)
def _advance_ccm(ctx, ctxlen, sym, codebits, codelen, k):
    """ctx <- first k bits of (code(sym) || ctx). Returns the new length."""
    L = codelen[sym]
    if L >= k:
        for j in range(k):
            ctx[j] = codebits[sym, j]
        return k
    take = min(ctxlen, k - L)
    for j in range(take - 1, -1, -1):
        ctx[L + j] = ctx[j]
    for j in range(L):
        ctx[j] = codebits[sym, j]
    return L + take


@njit(cache=True)
def encode_core(data, mode, k, pitch, codebits, codelen, trace):
    n = data.shape[0]
    cap = 1024
    node_head = np.full(cap, -1, dtype=np.int64)
    node_tail = np.full(cap, -1, dtype=np.int64)
    ent_sym = np.full(cap, -1, dtype=np.int64)
    ent_cnt = np.zeros(cap, dtype=np.int64)
    ent_next = np.full(cap, -1, dtype=np.int64)
    hkeys = np.full(4 * cap, -1, dtype=np.int64)
    hvals = np.full(4 * cap, -1, dtype=np.int64)
    n_nodes = 1
    n_ent = 0

    rc = np.zeros(5, dtype=np.int64)
    rc[1] = MASK32
    rc[3] = 1
    rc[4] = 1
    out = np.zeros(max(64, n // 2), dtype=np.uint8)
    opos = 0

    stamp = np.zeros(256, dtype=np.int64)
    path_nodes = np.full(k + 1, -1, dtype=np.int64)
    labels = np.zeros(k + 1, dtype=np.int64)
    vis_depth = np.zeros(k + 2, dtype=np.int64)
    ctx = np.zeros(k + 1, dtype=np.uint8)
    ctxlen = 0

    h = np.uint64(FNV_OFFSET)
    hash_trace = np.zeros(n if trace else 0, dtype=np.uint64)
    ctx_trace = np.zeros((n if (trace and mode == 1) else 0, k), dtype=np.uint8)
    ctx_len_trace = np.zeros(n if (trace and mode == 1) else 0, dtype=np.int64)
    escapes = 0

    for i in range(n):
        sym = np.int64(data[i])
        gen = i + 1
        nexcl = 0

        # context labels, most recent first
        if mode == 0:
            depth = min(k, i)
            for d in range(1, depth + 1):
                labels[d] = data[i - d]
        else:
            depth = ctxlen
            for d in range(1, depth + 1):
                labels[d] = ctx[d - 1]
            if trace:
                ctx_len_trace[i] = ctxlen
                for j in range(ctxlen):
                    ctx_trace[i, j] = ctx[j]

        node = 0
        path_nodes[0] = 0
        for d in range(1, depth + 1):
            if node != -1:
                node = _lookup(hkeys, hvals, node * 256 + labels[d])
            path_nodes[d] = node

        # escape cascade
        nvis = 0
        coded_entry = -1
        d = depth
        while True:
            vis_depth[nvis] = d
            nvis += 1
            node = path_nodes[d]
            if node != -1 and node_head[node] != -1:
                s = _rescale_shift(node_head[node], ent_sym, ent_cnt, ent_next, stamp, gen)
                add = (1 << s) - 1
                total = 0
                cnt_d = 0
                cum = 0
                freq = 0
                e = node_head[node]
                while e != -1:
                    es = ent_sym[e]
                    if stamp[es] != gen:
                        f = (2 * ent_cnt[e] - 1 + add) >> s
                        if es == sym:
                            cum = total
                            freq = f
                            coded_entry = e
                        total += f
                        cnt_d += 1
                    e = ent_next[e]
                if cnt_d > 0:
                    esc = (cnt_d + add) >> s
                    if coded_entry != -1:
                        out, opos = _rc_encode(rc, out, opos, cum, freq, total + esc)
                        break
                    out, opos = _rc_encode(rc, out, opos, total, esc, total + esc)
                    escapes += 1
                    e = node_head[node]
                    while e != -1:
                        es = ent_sym[e]
                        if stamp[es] != gen:
                            stamp[es] = gen
                            nexcl += 1
                        e = ent_next[e]
            if d == 0:
                # order -1: uniform over the bytes not excluded
                cands = 256 - nexcl
                below = 0
                for b in range(sym):
                    if stamp[b] != gen:
                        below += 1
                out, opos = _rc_encode(rc, out, opos, below, 1, cands)
                break
            if mode == 0:
                d -= 1
            else:
                d = max(0, d - pitch)

        # model update: create the full path, then bump visited depths
        if n_nodes + depth + 1 > node_head.shape[0]:
            node_head = _grow_i64(node_head, -1)
            node_tail = _grow_i64(node_tail, -1)
        if 2 * (n_nodes + depth + 1) > hkeys.shape[0]:
            hkeys, hvals = _rehash(hkeys, hvals)
        if n_ent + nvis > ent_sym.shape[0]:
            ent_sym = _grow_i64(ent_sym, -1)
            ent_cnt = _grow_i64(ent_cnt, 0)
            ent_next = _grow_i64(ent_next, -1)
        node = 0
        for dd in range(1, depth + 1):
            child = path_nodes[dd]
            if child == -1:
                child = n_nodes
                n_nodes += 1
                _insert(hkeys, hvals, node * 256 + labels[dd], child)
                path_nodes[dd] = child
                h = _mix(_mix(_mix(h, 1), node), labels[dd])
            node = child
        for v in range(nvis):
            node = path_nodes[vis_depth[v]]
            if v == nvis - 1 and coded_entry != -1:
                e = coded_entry
            else:
                e = n_ent
                n_ent += 1
                ent_sym[e] = sym
                ent_cnt[e] = 0
                ent_next[e] = -1
                if node_tail[node] == -1:
                    node_head[node] = e
                else:
                    ent_next[node_tail[node]] = e
                node_tail[node] = e
            ent_cnt[e] += 1
            h = _mix(_mix(_mix(h, 2), node), sym)
            if ent_cnt[e] >= COUNT_LIMIT:
                x = node_head[node]
                while x != -1:
                    ent_cnt[x] = (ent_cnt[x] + 1) >> 1
                    x = ent_next[x]
                h = _mix(_mix(h, 3), node)
        if trace:
            hash_trace[i] = h

        if mode == 1:
            ctxlen = _advance_ccm(ctx, ctxlen, sym, codebits, codelen, k)

    for _ in range(5):
        out, opos = _shift_low(rc, out, opos)

    return (out[:opos].copy(), escapes, n_nodes, h, hash_trace, ctx_trace, ctx_len_trace,
            node_head[:n_nodes].copy(), ent_sym[:n_ent].copy(), ent_cnt[:n_ent].copy(),
            ent_next[:n_ent].copy(), hkeys, hvals)


@njit(cache=True)
def decode_core(payload, n, mode, k, pitch, codebits, codelen, trace):
    cap = 1024
    node_head = np.full(cap, -1, dtype=np.int64)
    node_tail = np.full(cap, -1, dtype=np.int64)
    ent_sym = np.full(cap, -1, dtype=np.int64)
    ent_cnt = np.zeros(cap, dtype=np.int64)
    ent_next = np.full(cap, -1, dtype=np.int64)
    hkeys = np.full(4 * cap, -1, dtype=np.int64)
    hvals = np.full(4 * cap, -1, dtype=np.int64)
    n_nodes = 1
    n_ent = 0

    data = np.zeros(n, dtype=np.uint8)
    dc = np.zeros(5, dtype=np.int64)
    dc[0] = MASK32
    for _ in range(4):
        dc[1] = (dc[1] << 8) | _next_byte(dc, payload)
    if dc[4] != OK:
        return data, dc[4], np.uint64(0), np.zeros(0, dtype=np.uint64)

    stamp = np.zeros(256, dtype=np.int64)
    path_nodes = np.full(k + 1, -1, dtype=np.int64)
    labels = np.zeros(k + 1, dtype=np.int64)
    vis_depth = np.zeros(k + 2, dtype=np.int64)
    ctx = np.zeros(k + 1, dtype=np.uint8)
    ctxlen = 0
    h = np.uint64(FNV_OFFSET)
    hash_trace = np.zeros(n if trace else 0, dtype=np.uint64)

    for i in range(n):
        gen = i + 1
        nexcl = 0
        if mode == 0:
            depth = min(k, i)
            for d in range(1, depth + 1):
                labels[d] = data[i - d]
        else:
            depth = ctxlen
            for d in range(1, depth + 1):
                labels[d] = ctx[d - 1]

        node = 0
        path_nodes[0] = 0
        for d in range(1, depth + 1):
            if node != -1:
                node = _lookup(hkeys, hvals, node * 256 + labels[d])
            path_nodes[d] = node

        nvis = 0
        coded_entry = -1
        sym = -1
        d = depth
        while True:
            vis_depth[nvis] = d
            nvis += 1
            node = path_nodes[d]
            if node != -1 and node_head[node] != -1:
                s = _rescale_shift(node_head[node], ent_sym, ent_cnt, ent_next, stamp, gen)
                add = (1 << s) - 1
                total = 0
                cnt_d = 0
                e = node_head[node]
                while e != -1:
                    if stamp[ent_sym[e]] != gen:
                        total += (2 * ent_cnt[e] - 1 + add) >> s
                        cnt_d += 1
                    e = ent_next[e]
                if cnt_d > 0:
                    esc = (cnt_d + add) >> s
                    v = _rc_target(dc, total + esc)
                    if dc[4] != OK:
                        return data, dc[4], h, hash_trace
                    if v < total:
                        cum = 0
                        f = 0
                        e = node_head[node]
                        while e != -1:
                            if stamp[ent_sym[e]] != gen:
                                f = (2 * ent_cnt[e] - 1 + add) >> s
                                if v < cum + f:
                                    break
                                cum += f
                            e = ent_next[e]
                        _rc_consume(dc, payload, cum, f)
                        coded_entry = e
                        sym = ent_sym[e]
                        break
                    _rc_consume(dc, payload, total, esc)
                    e = node_head[node]
                    while e != -1:
                        es = ent_sym[e]
                        if stamp[es] != gen:
                            stamp[es] = gen
                            nexcl += 1
                        e = ent_next[e]
            if d == 0:
                cands = 256 - nexcl
                if cands == 0:
                    return data, ERR_EXHAUSTED_ALPHABET, h, hash_trace
                v = 0
                if cands > 1:
                    v = _rc_target(dc, cands)
                    if dc[4] != OK:
                        return data, dc[4], h, hash_trace
                    _rc_consume(dc, payload, v, 1)
                seen = 0
                for b in range(256):
                    if stamp[b] != gen:
                        if seen == v:
                            sym = b
                            break
                        seen += 1
                break
            if mode == 0:
                d -= 1
            else:
                d = max(0, d - pitch)
        if dc[4] != OK:
            return data, dc[4], h, hash_trace
        data[i] = sym

        if n_nodes + depth + 1 > node_head.shape[0]:
            node_head = _grow_i64(node_head, -1)
            node_tail = _grow_i64(node_tail, -1)
        if 2 * (n_nodes + depth + 1) > hkeys.shape[0]:
            hkeys, hvals = _rehash(hkeys, hvals)
        if n_ent + nvis > ent_sym.shape[0]:
            ent_sym = _grow_i64(ent_sym, -1)
            ent_cnt = _grow_i64(ent_cnt, 0)
            ent_next = _grow_i64(ent_next, -1)
        node = 0
        for dd in range(1, depth + 1):
            child = path_nodes[dd]
            if child == -1:
                child = n_nodes
                n_nodes += 1
                _insert(hkeys, hvals, node * 256 + labels[dd], child)
                path_nodes[dd] = child
                h = _mix(_mix(_mix(h, 1), node), labels[dd])
            node = child
        for v in range(nvis):
            node = path_nodes[vis_depth[v]]
            if v == nvis - 1 and coded_entry != -1:
                e = coded_entry
            else:
                e = n_ent
                n_ent += 1
                ent_sym[e] = sym
                ent_cnt[e] = 0
                ent_next[e] = -1
                if node_tail[node] == -1:
                    node_head[node] = e
                else:
                    ent_next[node_tail[node]] = e
                node_tail[node] = e
            ent_cnt[e] += 1
            h = _mix(_mix(_mix(h, 2), node), sym)
            if ent_cnt[e] >= COUNT_LIMIT:
                x = node_head[node]
                while x != -1:
                    ent_cnt[x] = (ent_cnt[x] + 1) >> 1
                    x = ent_next[x]
                h = _mix(_mix(h, 3), node)
        if trace:
            hash_trace[i] = h

        if mode == 1:
            if codelen[sym] == 0:
                return data, ERR_NOT_IN_TABLE, h, hash_trace
            ctxlen = _advance_ccm(ctx, ctxlen, sym, codebits, codelen, k)

    if dc[2] != payload.shape[0]:
        return data, ERR_TRAILING, h, hash_trace
    return data, OK, h, hash_trace


def code_tables(code_length, code_bits, k):
    """Per-symbol first-k-bits matrix and lengths for the jitted coder."""
    width = max(1, k)
    bits = np.zeros((256, width), dtype=np.uint8)
    lens = np.zeros(256, dtype=np.int64)
    for s in range(256):
        n = code_length[s]
        lens[s] = n
        for j in range(min(n, width)):
            bits[s, j] = (code_bits[s] >> (n - 1 - j)) & 1
    return bits, lens
