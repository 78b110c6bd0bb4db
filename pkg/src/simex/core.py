"""Finite-alphabet probability primitives and simulation-protocol evaluators.

Provides pmfs and channels over labeled finite alphabets, worst-case total
variation distance, the positive-part gap (the minimal TVD to a pmf capped
by a given non-negative envelope), evaluators that turn shared-randomness
protocols and joint non-signaling maps into the channels they induce, the
non-signaling marginal checker, and explicit tensor powers for brute-force
oracles.

All math runs over dense arrays in index order; labels exist for I/O only.
Objects are immutable after construction and every operation is pure.
"""

import json

import numpy as np

NORM_TOL = 1e-12       # simplex-membership tolerance for constructors
JSON_ROW_TOL = 1e-9    # row-sum tolerance for channel files
TENSOR_CAP = 10_000_000


class AlphabetMismatchError(ValueError):
    """Operands live on different alphabets."""


class InvalidDistributionError(ValueError):
    """Vector or table is not a (conditional) probability distribution."""


class InfeasibleError(ValueError):
    """No feasible point exists for the requested construction."""


class SizeCapError(RuntimeError):
    """Requested object exceeds a configured size cap."""


def _labels(labels, size):
    if labels is None:
        return tuple(str(i) for i in range(size))
    labels = tuple(str(s) for s in labels)
    if len(labels) != size:
        raise AlphabetMismatchError(f"{len(labels)} labels for {size} symbols")
    return labels


def _normalize(vec, strict, what):
    """Shared constructor policy: reject negatives, normalize or reject off-simplex."""
    v = np.array(vec, dtype=float)
    if v.min(initial=0.0) < -NORM_TOL:
        raise InvalidDistributionError(f"{what} has negative entries")
    v = np.clip(v, 0.0, None)
    total = v.sum()
    if total <= 0.0:
        raise InvalidDistributionError(f"{what} has zero total mass")
    if abs(total - 1.0) > NORM_TOL:
        if strict:
            raise InvalidDistributionError(f"{what} sums to {total!r}, not 1")
        v = v / total
    return v


class Pmf:
    """Probability vector over a labeled finite alphabet."""

    def __init__(self, probs, labels=None, strict=False):
        p = np.atleast_1d(np.asarray(probs, dtype=float))
        if p.ndim != 1 or p.size == 0:
            raise InvalidDistributionError("pmf must be a non-empty vector")
        p = _normalize(p, strict, "pmf")
        p.flags.writeable = False
        self.probs = p
        self.labels = _labels(labels, p.size)

    @property
    def size(self):
        return self.probs.size

    def support(self):
        return np.flatnonzero(self.probs > 0.0)

    def __repr__(self):
        return f"Pmf({self.probs.tolist()!r})"


class Channel:
    """Row-stochastic matrix W(y|x) over labeled input/output alphabets."""

    def __init__(self, rows, input_labels=None, output_labels=None, strict=False):
        mat = np.atleast_2d(np.asarray(rows, dtype=float))
        if mat.ndim != 2 or mat.size == 0:
            raise InvalidDistributionError("channel must be a non-empty matrix")
        mat = np.vstack([_normalize(r, strict, f"channel row {i}") for i, r in enumerate(mat)])
        mat.flags.writeable = False
        self.rows = mat
        self.input_labels = _labels(input_labels, mat.shape[0])
        self.output_labels = _labels(output_labels, mat.shape[1])
        positive = mat[mat > 0.0]
        self.w_min = float(positive.min())

    @property
    def nx(self):
        return self.rows.shape[0]

    @property
    def ny(self):
        return self.rows.shape[1]

    def row(self, x):
        return Pmf(self.rows[x], labels=self.output_labels)

    def key(self):
        """Hashable fingerprint, used to memoize per-channel solver results."""
        return (self.input_labels, self.output_labels, self.rows.tobytes())

    def __repr__(self):
        return f"Channel({self.nx}x{self.ny})"


class NSMap:
    """Joint encoder-decoder table N(i, y | x, j) with message alphabet [M].

    Axes are (i, y, x, j). Normalization must hold over (i, y) for every
    conditioning pair (x, j); the non-signaling marginal constraints are a
    separate property checked by :func:`check_non_signaling`.
    """

    def __init__(self, entries, strict=False):
        t = np.asarray(entries, dtype=float)
        if t.ndim != 4 or t.shape[0] != t.shape[3]:
            raise InvalidDistributionError("NSMap table must have shape (M, |Y|, |X|, M)")
        if t.min(initial=0.0) < -NORM_TOL:
            raise InvalidDistributionError("NSMap has negative entries")
        t = np.clip(t, 0.0, None)
        totals = t.sum(axis=(0, 1))
        if np.any(totals <= 0.0):
            raise InvalidDistributionError("NSMap has a zero-mass conditioning pair")
        off = np.abs(totals - 1.0).max()
        if off > NORM_TOL:
            if strict:
                raise InvalidDistributionError(f"NSMap columns off simplex by {off!r}")
            t = t / totals[None, None, :, :]
        t = t.copy()
        t.flags.writeable = False
        self.entries = t
        self.message_size = t.shape[0]

    @property
    def nx(self):
        return self.entries.shape[2]

    @property
    def ny(self):
        return self.entries.shape[1]


class SRProtocol:
    """Shared-randomness protocol: encoder E(i|x,s), decoder D(y|j,s), law of S."""

    def __init__(self, encoder, decoder, shared_law, strict=False):
        E = np.asarray(encoder, dtype=float)
        D = np.asarray(decoder, dtype=float)
        if E.ndim != 3 or D.ndim != 3:
            raise InvalidDistributionError("encoder must be (M,|X|,|S|), decoder (|Y|,M,|S|)")
        if E.shape[0] != D.shape[1] or E.shape[2] != D.shape[2]:
            raise AlphabetMismatchError("encoder/decoder shapes disagree on M or |S|")
        law = shared_law if isinstance(shared_law, Pmf) else Pmf(shared_law)
        if law.size != E.shape[2]:
            raise AlphabetMismatchError("shared law size does not match |S|")
        for name, tab, axis in (("encoder", E, 0), ("decoder", D, 0)):
            sums = tab.sum(axis=axis)
            if tab.min(initial=0.0) < -NORM_TOL or np.abs(sums - 1.0).max() > NORM_TOL:
                if strict or tab.min(initial=0.0) < -NORM_TOL:
                    raise InvalidDistributionError(f"{name} columns are not pmfs")
                tab = np.clip(tab, 0.0, None)
                tab = tab / tab.sum(axis=axis, keepdims=True)
            tab = tab.copy()
            tab.flags.writeable = False
            if name == "encoder":
                E = tab
            else:
                D = tab
        self.encoder = E
        self.decoder = D
        self.shared_law = law
        self.message_size = E.shape[0]


def _check_same_alphabet(p, q):
    if p.labels != q.labels:
        raise AlphabetMismatchError("pmfs live on different alphabets")


def tvd(p, q):
    """Total variation distance (half the L1 distance) between two pmfs."""
    _check_same_alphabet(p, q)
    return float(min(1.0, 0.5 * np.abs(p.probs - q.probs).sum()))


def channel_tvd(W, V):
    """Worst-case-over-inputs TVD between two channels on matching alphabets."""
    if W.input_labels != V.input_labels or W.output_labels != V.output_labels:
        raise AlphabetMismatchError("channels live on different alphabets")
    return float(min(1.0, 0.5 * np.abs(W.rows - V.rows).sum(axis=1).max()))


def positive_part_gap(p, f):
    """Minimal TVD between ``p`` and any pmf capped entrywise by ``f``.

    Returns ``(value, optimizer)`` where value = sum_a (p(a) - f(a))_+ and the
    optimizer attains it: it equals f where f <= p and spreads the clipped
    mass proportionally to the slack f - p elsewhere.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != p.probs.shape:
        raise AlphabetMismatchError("envelope has wrong length")
    if f.min(initial=0.0) < -NORM_TOL:
        raise InvalidDistributionError("envelope must be non-negative")
    if f.sum() < 1.0 - NORM_TOL:
        raise InfeasibleError("no pmf fits under an envelope of total mass < 1")
    gap = float(np.clip(p.probs - f, 0.0, None).sum())
    if gap <= 0.0:
        return 0.0, p
    excess = float(np.clip(f - p.probs, 0.0, None).sum())
    out = np.where(f <= p.probs, f, p.probs + (f - p.probs) * (gap / excess))
    return gap, Pmf(out, labels=p.labels)


def induced_channel_sr(proto):
    """Channel realized by a shared-randomness protocol over a noiseless link."""
    mat = np.einsum("s,yjs,jxs->xy", proto.shared_law.probs, proto.decoder, proto.encoder)
    return Channel(mat)


def induced_channel_ns(nsmap):
    """Channel realized by a joint map when the link forwards i to j faithfully."""
    mat = np.einsum("iyxi->xy", nsmap.entries)
    return Channel(mat)


def check_non_signaling(nsmap, tol=1e-9):
    """True iff the map's marginals hide j from the encoder side and x from the decoder side."""
    t = nsmap.entries
    enc_marg = t.sum(axis=1)                  # (i, x, j): must not depend on j
    dec_marg = t.sum(axis=0)                  # (y, x, j): must not depend on x
    enc_spread = np.abs(enc_marg - enc_marg[:, :, :1]).max()
    dec_spread = np.abs(dec_marg - dec_marg[:, :1, :]).max()
    return bool(enc_spread <= tol and dec_spread <= tol)


def sr_as_nsmap(proto):
    """Embed a shared-randomness protocol as the joint map it induces."""
    t = np.einsum("s,ixs,yjs->iyxj", proto.shared_law.probs, proto.encoder, proto.decoder)
    return NSMap(t)


def _tensor_labels(labels, n):
    single = all(len(s) == 1 for s in labels)
    sep = "" if single else ","
    out = [""]
    for _ in range(n):
        out = [a + (sep if a else "") + s for a in out for s in labels]
    return tuple(out)


def tensor_power(W, n, max_entries=TENSOR_CAP):
    """Explicit n-fold memoryless extension of a channel (brute-force oracle use)."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    entries = (W.nx ** n) * (W.ny ** n)
    if entries > max_entries:
        raise SizeCapError(f"tensor power needs {entries} entries, cap is {max_entries}")
    mat = W.rows
    for _ in range(n - 1):
        mat = np.kron(mat, W.rows)
    return Channel(
        mat,
        input_labels=_tensor_labels(W.input_labels, n),
        output_labels=_tensor_labels(W.output_labels, n),
    )


def channel_from_json(doc):
    """Build a Channel from the {"input", "output", "matrix"} wire schema."""
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    for key in ("input", "output", "matrix"):
        if key not in doc:
            raise InvalidDistributionError(f"channel JSON is missing key {key!r}")
    matrix = np.asarray(doc["matrix"], dtype=float)
    if matrix.ndim != 2 or matrix.shape != (len(doc["input"]), len(doc["output"])):
        raise InvalidDistributionError("channel JSON matrix shape does not match alphabets")
    for i, row in enumerate(matrix):
        if row.min(initial=0.0) < 0.0:
            raise InvalidDistributionError(f"channel JSON row {i} has negative entries")
        if abs(row.sum() - 1.0) > JSON_ROW_TOL:
            raise InvalidDistributionError(f"channel JSON row {i} sums to {float(row.sum())!r}")
    matrix = matrix / matrix.sum(axis=1, keepdims=True)
    return Channel(matrix, input_labels=doc["input"], output_labels=doc["output"])


def channel_to_json(W):
    """Serialize a Channel to the wire schema (row-major floats)."""
    return {
        "input": list(W.input_labels),
        "output": list(W.output_labels),
        "matrix": [[float(v) for v in row] for row in W.rows],
    }


def load_channel(path):
    with open(path, "r", encoding="utf-8") as fh:
        return channel_from_json(json.load(fh))


def save_channel(W, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(channel_to_json(W), fh, indent=1)
        fh.write("\n")
