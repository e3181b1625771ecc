"""Binary LDPC codes over GF(2): PEG construction, alist I/O, encoding, NMSA decoding.

Bit words are numpy uint8 arrays with entries in {0, 1}.  LLR vectors are
float64 arrays under the convention L = log P(c=1)/P(c=0), i.e. positive
values favor bit 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ParityCheckMatrix",
    "GeneratorRealization",
    "DecodeOutcome",
    "AlistFormatError",
    "peg_construct",
    "to_alist",
    "from_alist",
    "save_alist",
    "load_alist",
    "build_generator",
    "encode",
    "syndrome",
    "nmsa_decode",
    "has_girth_at_least_6",
    "as_bits",
]


def as_bits(bits, length=None):
    """Validate and convert a bit sequence to a uint8 array of 0/1 entries."""
    arr = np.asarray(bits)
    if arr.ndim != 1:
        raise ValueError(f"bit word must be one-dimensional, got shape {arr.shape}")
    if length is not None and arr.shape[0] != length:
        raise ValueError(f"bit word has length {arr.shape[0]}, expected {length}")
    if arr.size and not np.all((arr == 0) | (arr == 1)):
        raise ValueError("bit word entries must be 0 or 1")
    return arr.astype(np.uint8)


class _DecoderLayout:
    """Padded check-view / variable-view index maps shared by decoder calls.

    Edges are enumerated row-major (ascending row, ascending column within a
    row).  ``c_flat``/``v_flat`` scatter edge-ordered values into padded
    (n_rows, max_row_deg) and (n_cols, max_col_deg) views.
    """

    def __init__(self, h: "ParityCheckMatrix"):
        rows = list(h.row_cols)
        self.row_deg = np.array([r.size for r in rows], dtype=np.int64)
        self.col_deg = np.array([c.size for c in h.col_rows], dtype=np.int64)
        self.n_edges = int(self.row_deg.sum())
        self.dc_max = int(self.row_deg.max()) if rows else 0
        self.dv_max = int(self.col_deg.max()) if h.n_cols else 0
        self.e_row = np.repeat(np.arange(h.n_rows, dtype=np.int64), self.row_deg)
        self.e_col = (
            np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
        ).astype(np.int64)
        slot_in_row = (
            np.concatenate([np.arange(r.size, dtype=np.int64) for r in rows])
            if rows
            else np.zeros(0, dtype=np.int64)
        )
        self.c_flat = self.e_row * self.dc_max + slot_in_row
        # stable sort groups edges by column; row-major enumeration keeps rows
        # ascending within each group
        order = np.argsort(self.e_col, kind="stable")
        per_col = [np.arange(d, dtype=np.int64) for d in self.col_deg if d > 0]
        slot_sorted = np.concatenate(per_col) if per_col else np.zeros(0, dtype=np.int64)
        slot_in_col = np.empty(self.n_edges, dtype=np.int64)
        slot_in_col[order] = slot_sorted
        self.v_flat = self.e_col * self.dv_max + slot_in_col


@dataclass(frozen=True, eq=False)
class ParityCheckMatrix:
    """Sparse binary parity-check matrix stored as its Tanner-graph adjacency.

    ``col_rows[j]`` lists the check (row) indices of column j, ascending;
    ``row_cols[i]`` lists the variable (column) indices of row i, ascending.
    Both views describe the same edge set; instances are immutable and safe
    to share across workers.
    """

    n_rows: int
    n_cols: int
    col_rows: tuple
    row_cols: tuple
    _layout_cache: list = field(default_factory=list, repr=False)

    @classmethod
    def from_col_rows(cls, n_rows, n_cols, col_rows):
        if len(col_rows) != n_cols:
            raise ValueError(f"expected {n_cols} columns, got {len(col_rows)}")
        cols = []
        for j, rows in enumerate(col_rows):
            arr = np.unique(np.asarray(rows, dtype=np.int64))
            if arr.size != len(rows):
                raise ValueError(f"column {j} lists a repeated row (parallel edge)")
            if arr.size and (arr[0] < 0 or arr[-1] >= n_rows):
                raise ValueError(f"column {j} has a row index out of range")
            cols.append(arr)
        rows_of = [[] for _ in range(n_rows)]
        for j, arr in enumerate(cols):
            for r in arr:
                rows_of[int(r)].append(j)
        row_cols = tuple(np.asarray(c, dtype=np.int64) for c in rows_of)
        return cls(n_rows, n_cols, tuple(cols), row_cols)

    @property
    def n_edges(self):
        return int(sum(c.size for c in self.col_rows))

    def column_weights(self):
        return np.array([c.size for c in self.col_rows], dtype=np.int64)

    def row_weights(self):
        return np.array([r.size for r in self.row_cols], dtype=np.int64)

    def layout(self) -> _DecoderLayout:
        if not self._layout_cache:
            self._layout_cache.append(_DecoderLayout(self))
        return self._layout_cache[0]

    def to_dense(self):
        dense = np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
        for j, rows in enumerate(self.col_rows):
            dense[rows, j] = 1
        return dense

    def __eq__(self, other):
        if not isinstance(other, ParityCheckMatrix):
            return NotImplemented
        return (
            self.n_rows == other.n_rows
            and self.n_cols == other.n_cols
            and all(np.array_equal(a, b) for a, b in zip(self.col_rows, other.col_rows))
        )


@dataclass(frozen=True)
class DecodeOutcome:
    """Result of one iterative decode."""

    decoded: np.ndarray
    converged: bool
    iterations_used: int


@dataclass(frozen=True)
class GeneratorRealization:
    """Systematic encoder realization derived from a parity-check matrix.

    ``perm`` maps systematic coordinates to original columns: positions
    ``perm[:rank]`` of a codeword hold parity bits, ``perm[rank:]`` hold the
    message.  ``p`` is the k x rank dense systematic part: parity = m . p.
    """

    h: ParityCheckMatrix
    perm: np.ndarray
    p: np.ndarray
    rank: int

    @property
    def k(self):
        return self.h.n_cols - self.rank

    @property
    def rate(self):
        return self.k / self.h.n_cols

    def extract_message(self, codeword):
        c = as_bits(codeword, self.h.n_cols)
        return c[self.perm[self.rank:]]


# ---------------------------------------------------------------------------
# Progressive edge growth
# ---------------------------------------------------------------------------

def peg_construct(n, d_v, d_c, seed):
    """Grow a (d_v, d_c)-regular Tanner graph with n variable nodes.

    Variable nodes are processed in ascending order.  Each new edge runs a
    BFS over the current graph and connects to a check at maximal distance
    (unreached checks count as infinitely far), preferring checks still
    below the target degree d_c, breaking ties by lowest current degree and
    then by a seeded uniform draw.  Deterministic for fixed arguments.
    """
    if d_v < 2:
        raise ValueError(f"d_v must be >= 2, got {d_v}")
    if d_v >= n:
        raise ValueError(f"d_v must be < n, got d_v={d_v}, n={n}")
    if n < d_c:
        raise ValueError(f"n must be >= d_c, got n={n}, d_c={d_c}")
    if (d_v * n) % d_c != 0:
        raise ValueError(f"d_v*n = {d_v * n} is not divisible by d_c = {d_c}")
    m = d_v * n // d_c
    rng = np.random.default_rng(seed)

    var_adj = np.full((n, d_v), -1, dtype=np.int64)
    var_deg = np.zeros(n, dtype=np.int64)
    check_adj = np.full((m, d_c), -1, dtype=np.int64)
    check_deg = np.zeros(m, dtype=np.int64)

    dist = np.empty(m, dtype=np.int64)
    var_mark = np.empty(n, dtype=np.int64)
    far = np.int64(1 << 60)

    def bfs_check_dist(v):
        """Distance from v to every check under the current graph; -1 = unreached."""
        dist.fill(-1)
        var_mark.fill(-1)
        var_mark[v] = 0
        frontier = var_adj[v, : var_deg[v]]
        dist[frontier] = 0
        depth = 0
        while frontier.size:
            vs = check_adj[frontier].ravel()
            vs = vs[vs >= 0]
            vs = vs[var_mark[vs] < 0]
            if vs.size == 0:
                break
            var_mark[vs] = depth + 1
            vs = np.flatnonzero(var_mark == depth + 1)
            cs = var_adj[vs].ravel()
            cs = cs[cs >= 0]
            cs = cs[dist[cs] < 0]
            depth += 1
            dist[cs] = depth
            frontier = np.flatnonzero(dist == depth)
        return dist

    def attach(v, c):
        var_adj[v, var_deg[v]] = c
        var_deg[v] += 1
        check_adj[c, check_deg[c]] = v
        check_deg[c] += 1

    def detach_from_check(c, u):
        slots = check_adj[c, : check_deg[c]]
        idx = int(np.flatnonzero(slots == u)[0])
        check_adj[c, idx] = check_adj[c, check_deg[c] - 1]
        check_adj[c, check_deg[c] - 1] = -1
        check_deg[c] -= 1

    def column_in_4cycle(x):
        checks = var_adj[x, : var_deg[x]]
        for a in range(checks.size):
            for b in range(a + 1, checks.size):
                va = check_adj[checks[a], : check_deg[checks[a]]]
                vb = check_adj[checks[b], : check_deg[checks[b]]]
                common = np.intersect1d(va, vb)
                if np.any(common != x):
                    return True
        return False

    def try_swap_place(v, d):
        """End-game repair: route v to a girth-safe full check c2 by moving one
        of c2's variables onto an under-capacity check.  Keeps the graph
        regular without forcing a short cycle on v."""
        safe_full = np.flatnonzero((check_deg >= d_c) & ((d < 0) | (d >= 2)))
        eff = np.where(d[safe_full] < 0, far, d[safe_full])
        safe_full = safe_full[np.argsort(-eff, kind="stable")]
        targets = np.flatnonzero(check_deg < d_c)
        for c2 in safe_full:
            c2 = int(c2)
            for u in sorted(int(x) for x in check_adj[c2, : check_deg[c2]]):
                if u == v:
                    continue
                for c_t in targets:
                    c_t = int(c_t)
                    if c_t in var_adj[u, : var_deg[u]]:
                        continue
                    # tentatively move u from c2 to c_t, then give v the slot
                    detach_from_check(c2, u)
                    var_adj[u, int(np.flatnonzero(var_adj[u, : var_deg[u]] == c2)[0])] = c_t
                    check_adj[c_t, check_deg[c_t]] = u
                    check_deg[c_t] += 1
                    attach(v, c2)
                    if not column_in_4cycle(u) and not column_in_4cycle(v):
                        return True
                    # revert in reverse order
                    var_deg[v] -= 1
                    var_adj[v, var_deg[v]] = -1
                    detach_from_check(c2, v)
                    detach_from_check(c_t, u)
                    var_adj[u, int(np.flatnonzero(var_adj[u, : var_deg[u]] == c_t)[0])] = c2
                    check_adj[c2, check_deg[c2]] = u
                    check_deg[c2] += 1
        return False

    for v in range(n):
        for _ in range(d_v):
            d = bfs_check_dist(v)
            non_neighbor = d != 0
            cand = np.flatnonzero(non_neighbor & (check_deg < d_c))
            relaxed = cand.size == 0
            if relaxed:
                cand = np.flatnonzero(non_neighbor)
            if cand.size == 0:
                raise RuntimeError("no check available without a parallel edge")
            eff = np.where(d[cand] < 0, far, d[cand])
            best = eff.max()
            if (relaxed or best <= 1) and try_swap_place(v, d):
                continue
            cand = cand[eff == best]
            cand = cand[check_deg[cand] == check_deg[cand].min()]
            c = int(cand[rng.integers(cand.size)])
            if check_deg[c] >= check_adj.shape[1]:
                check_adj_grown = np.full((m, check_adj.shape[1] + 1), -1, dtype=np.int64)
                check_adj_grown[:, :-1] = check_adj
                check_adj = check_adj_grown
            attach(v, c)

    col_rows = [np.sort(var_adj[v, : var_deg[v]]) for v in range(n)]
    return ParityCheckMatrix.from_col_rows(m, n, col_rows)


def has_girth_at_least_6(h: ParityCheckMatrix) -> bool:
    """Exhaustive 4-cycle scan: no two columns may share two rows."""
    seen = set()
    for cols in h.row_cols:
        c = cols.tolist()
        for i in range(len(c)):
            for j in range(i + 1, len(c)):
                pair = (c[i], c[j])
                if pair in seen:
                    return False
                seen.add(pair)
    return True


# ---------------------------------------------------------------------------
# alist serialization (MacKay layout)
# ---------------------------------------------------------------------------

class AlistFormatError(ValueError):
    """Raised on malformed alist input; message carries the 1-based line number."""


def to_alist(h: ParityCheckMatrix) -> str:
    """Serialize to alist text: ascending 1-based indices, no padding zeros."""
    lines = [f"{h.n_cols} {h.n_rows}"]
    cw = h.column_weights()
    rw = h.row_weights()
    lines.append(f"{int(cw.max())} {int(rw.max())}")
    lines.append(" ".join(str(int(w)) for w in cw))
    lines.append(" ".join(str(int(w)) for w in rw))
    for rows in h.col_rows:
        lines.append(" ".join(str(int(r) + 1) for r in rows))
    for cols in h.row_cols:
        lines.append(" ".join(str(int(c) + 1) for c in cols))
    return "\n".join(lines) + "\n"


def _alist_ints(line, lineno):
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise AlistFormatError(f"line {lineno}: non-integer token") from None


def from_alist(stream) -> ParityCheckMatrix:
    """Parse alist text (accepts padding zeros in fixed-width variants)."""
    if isinstance(stream, bytes):
        stream = stream.decode("ascii")
    raw = stream.splitlines()
    while raw and not raw[-1].strip():
        raw.pop()
    if len(raw) < 4:
        raise AlistFormatError("line 1: truncated alist header")
    header = _alist_ints(raw[0], 1)
    if len(header) != 2:
        raise AlistFormatError("line 1: expected 'N M'")
    n_cols, n_rows = header
    if n_cols <= 0 or n_rows <= 0:
        raise AlistFormatError("line 1: dimensions must be positive")
    if len(_alist_ints(raw[1], 2)) != 2:
        raise AlistFormatError("line 2: expected 'max_col_weight max_row_weight'")
    col_w = _alist_ints(raw[2], 3)
    if len(col_w) != n_cols:
        raise AlistFormatError(f"line 3: expected {n_cols} column weights, got {len(col_w)}")
    row_w = _alist_ints(raw[3], 4)
    if len(row_w) != n_rows:
        raise AlistFormatError(f"line 4: expected {n_rows} row weights, got {len(row_w)}")
    if len(raw) < 4 + n_cols + n_rows:
        raise AlistFormatError(f"line {len(raw)}: unexpected end of alist stream")

    col_rows = []
    for j in range(n_cols):
        lineno = 5 + j
        idx = [t for t in _alist_ints(raw[4 + j], lineno) if t != 0]
        if len(idx) != col_w[j]:
            raise AlistFormatError(
                f"line {lineno}: column {j + 1} lists {len(idx)} entries, weight says {col_w[j]}"
            )
        if any(t < 1 or t > n_rows for t in idx):
            raise AlistFormatError(f"line {lineno}: index out of range")
        if len(set(idx)) != len(idx):
            raise AlistFormatError(f"line {lineno}: repeated index")
        col_rows.append([t - 1 for t in idx])

    edges_from_cols = {(r, j) for j, rows in enumerate(col_rows) for r in rows}
    edges_from_rows = set()
    for i in range(n_rows):
        lineno = 5 + n_cols + i
        idx = [t for t in _alist_ints(raw[4 + n_cols + i], lineno) if t != 0]
        if len(idx) != row_w[i]:
            raise AlistFormatError(
                f"line {lineno}: row {i + 1} lists {len(idx)} entries, weight says {row_w[i]}"
            )
        if any(t < 1 or t > n_cols for t in idx):
            raise AlistFormatError(f"line {lineno}: index out of range")
        if len(set(idx)) != len(idx):
            raise AlistFormatError(f"line {lineno}: repeated index")
        for t in idx:
            edges_from_rows.add((i, t - 1))
    if edges_from_cols != edges_from_rows:
        raise AlistFormatError(
            f"line {5 + n_cols}: inconsistent adjacency between column and row sections"
        )
    return ParityCheckMatrix.from_col_rows(n_rows, n_cols, col_rows)


def save_alist(h: ParityCheckMatrix, path) -> None:
    with open(path, "w", encoding="ascii", newline="") as f:
        f.write(to_alist(h))


def load_alist(path) -> ParityCheckMatrix:
    with open(path, "r", encoding="ascii") as f:
        return from_alist(f.read())


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------

def build_generator(h: ParityCheckMatrix) -> GeneratorRealization:
    """Systematic realization via full GF(2) Gaussian elimination with column pivoting.

    Rank deficiency is not an error: it enlarges the message dimension
    k = n - rank(H).
    """
    a = h.to_dense()
    m, n = a.shape
    perm = np.arange(n, dtype=np.int64)
    rank = 0
    for t in range(min(m, n)):
        pivot = None
        for j in range(t, n):
            hits = np.flatnonzero(a[t:, j])
            if hits.size:
                pivot = (t + int(hits[0]), j)
                break
        if pivot is None:
            break
        pr, pc = pivot
        if pr != t:
            a[[t, pr]] = a[[pr, t]]
        if pc != t:
            a[:, [t, pc]] = a[:, [pc, t]]
            perm[[t, pc]] = perm[[pc, t]]
        elim = np.flatnonzero(a[:, t])
        elim = elim[elim != t]
        if elim.size:
            a[elim] ^= a[t]
        rank = t + 1
    p = np.ascontiguousarray(a[:rank, rank:].T)
    return GeneratorRealization(h=h, perm=perm, p=p, rank=rank)


def encode(g: GeneratorRealization, message) -> np.ndarray:
    """Map a k-bit message to an n-bit codeword satisfying H c = 0."""
    m_bits = as_bits(message, g.k)
    sel = np.flatnonzero(m_bits)
    if sel.size:
        parity = np.bitwise_xor.reduce(g.p[sel], axis=0)
    else:
        parity = np.zeros(g.rank, dtype=np.uint8)
    c = np.empty(g.h.n_cols, dtype=np.uint8)
    c[g.perm[: g.rank]] = parity
    c[g.perm[g.rank:]] = m_bits
    return c


def syndrome(h: ParityCheckMatrix, codeword) -> np.ndarray:
    """GF(2) product H c as a length-M bit vector."""
    c = as_bits(codeword, h.n_cols)
    lay = h.layout()
    if lay.n_edges == 0:
        return np.zeros(h.n_rows, dtype=np.uint8)
    acc = np.zeros((h.n_rows, lay.dc_max), dtype=np.uint8)
    acc.flat[lay.c_flat] = c[lay.e_col]
    return (acc.sum(axis=1) % 2).astype(np.uint8)


# ---------------------------------------------------------------------------
# Normalized min-sum decoding
# ---------------------------------------------------------------------------

def nmsa_decode(h: ParityCheckMatrix, llr_in, max_iter, scale) -> DecodeOutcome:
    """Flooding-schedule normalized min-sum decode of channel LLRs.

    Check messages are scale * (extrinsic sign product) * (extrinsic minimum
    magnitude).  A hard decision (bit 1 iff total LLR > 0; exact ties decode
    to 0) is taken every iteration and the decode stops early once the
    syndrome is all-zero with every total LLR nonzero; an exactly-zero total
    leaves the bit undetermined, so such words are not declared converged.
    """
    llr = np.asarray(llr_in, dtype=np.float64)
    if llr.shape != (h.n_cols,):
        raise ValueError(f"llr shape {llr.shape} does not match code length {h.n_cols}")
    if not np.all(np.isfinite(llr)):
        raise ValueError("channel LLRs must be finite")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    if not 0.0 < scale <= 1.0:
        raise ValueError("scale must lie in (0, 1]")

    lay = h.layout()
    if lay.n_edges == 0:
        raise ValueError("parity-check matrix has no edges")
    if np.any(lay.row_deg == 1):
        raise ValueError("rows of degree 1 are not supported by the decoder")

    m, dc = h.n_rows, lay.dc_max
    n, dv = h.n_cols, lay.dv_max
    # internal sign convention is log P(0)/P(1); flip at entry and exit so the
    # classic product-of-signs update realizes the XOR constraint exactly
    ch = -llr
    v2c = ch[lay.e_col]

    rows = np.arange(m)
    q = np.empty((m, dc))
    r_pad = np.empty((n, dv))
    bits_pad = np.empty((m, dc), dtype=np.uint8)

    decoded = np.zeros(n, dtype=np.uint8)
    for it in range(1, max_iter + 1):
        q.fill(np.inf)
        q.flat[lay.c_flat] = v2c
        sgn = np.sign(q)
        nz = np.where(sgn == 0.0, 1.0, sgn)
        row_prod = nz.prod(axis=1)
        zeros = (sgn == 0.0).sum(axis=1)
        ext_sign = np.where(
            zeros[:, None] == 0,
            row_prod[:, None] * sgn,
            np.where((zeros[:, None] == 1) & (sgn == 0.0), row_prod[:, None], 0.0),
        )
        mag = np.abs(q)
        part = np.partition(mag, 1, axis=1)
        min1, min2 = part[:, 0], part[:, 1]
        mins = np.broadcast_to(min1[:, None], (m, dc)).copy()
        mins[rows, mag.argmin(axis=1)] = min2
        c2v = (ext_sign * (scale * mins)).flat[lay.c_flat]

        r_pad.fill(0.0)
        r_pad.flat[lay.v_flat] = c2v
        total = ch + r_pad.sum(axis=1)
        v2c = total[lay.e_col] - c2v

        decoded = (total < 0.0).astype(np.uint8)
        bits_pad.fill(0)
        bits_pad.flat[lay.c_flat] = decoded[lay.e_col]
        if not (bits_pad.sum(axis=1) % 2).any() and not (total == 0.0).any():
            return DecodeOutcome(decoded=decoded, converged=True, iterations_used=it)
    return DecodeOutcome(decoded=decoded, converged=False, iterations_used=max_iter)
