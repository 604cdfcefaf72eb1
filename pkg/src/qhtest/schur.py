"""Permutation-symmetric (Schur-Weyl) backend for qubit tensor powers.

By Schur-Weyl duality the ``n``-qubit space splits into spin sectors
``j = n/2, n/2 - 1, ...``. A tensor power ``M^{(x)n}`` acts on every copy
of sector ``j`` through the same ``(2j+1)``-dimensional block

    B_j = det(M)^(n/2 - j) * Sym^(2j)(M),

where ``Sym^k`` is the symmetric power written in the normalized Dicke
basis ``|j, m>`` for ``m = j, j-1, ..., -j``. There are ``mult_j`` copies.
Tracking these ``O(n)`` blocks instead of the ``2^n``-dimensional operator
brings trace norms and optimal tests down to polynomial cost.

Blocks are stored normalized (largest entry has modulus one) together with
a logarithmic scale factor, so ``n`` in the hundreds neither overflows nor
underflows. Multiplicities are exact Python integers.

Spin labels are stored as ``k = 2j`` so that they are always integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln, logsumexp, xlogy

from ._jacobi import jacobi_eigh
from ._neyman_pearson import Evaluation, solve_dual
from ._validation import (
    ValidationError,
    check_density,
    check_positive_int,
    check_probability,
    check_square,
)
from .linalg import sqrtm_psd

__all__ = [
    "SchurBlocks",
    "BlockTest",
    "multiplicity",
    "spin_labels",
    "symmetric_power",
    "schur_blocks",
    "tensor_power_blocks",
    "schur_basis",
    "block_helstrom",
    "block_fidelity",
    "block_beta",
    "block_log_beta",
]

# Blocks whose total weight is below this are dropped from trace-norm and
# pencil computations; their contribution is bounded by the same amount.
_NEGLIGIBLE = 1e-18
_LOG_NEGLIGIBLE = math.log(_NEGLIGIBLE)


def spin_labels(n: int) -> list[int]:
    """Twice-spin labels ``k = 2j`` present in ``n`` qubits, largest first."""
    n = check_positive_int(n)
    return list(range(n, -1, -2))


def multiplicity(n: int, k: int) -> int:
    """Number of copies of the spin ``j = k/2`` sector in ``n`` qubits.

    Equals ``(2j+1)/(n/2+j+1) * C(n, n/2-j)``, computed exactly as
    ``C(n, (n-k)/2) - C(n, (n-k)/2 - 1)``.
    """
    if k < 0 or k > n or (n - k) % 2:
        raise ValidationError(f"no spin sector 2j={k} in {n} qubits")
    r = (n - k) // 2
    return math.comb(n, r) - (math.comb(n, r - 1) if r > 0 else 0)


def _log_binom(n, r):
    return gammaln(n + 1) - gammaln(r + 1) - gammaln(n - r + 1)


def symmetric_power(m, k: int):
    """Symmetric power ``Sym^k(m)`` of a 2x2 matrix in the normalized Dicke basis.

    Column ``a`` is the image of the Dicke state with ``a`` excitations,
    read off from the coefficients of ``(m00 + m10 y)^(k-a) (m01 + m11 y)^a``.
    For an entrywise nonnegative ``m`` every coefficient is a sum of
    nonnegative terms, so each entry is accurate to a few ulps relative to
    itself, however small it is.

    Returns:
        Tuple ``(block, log_scale)`` with ``Sym^k(m) = exp(log_scale) * block``
        and ``max|block| = 1`` (``log_scale = -inf`` for a zero result).
    """
    m = np.asarray(m)
    nonneg = np.isrealobj(m) and bool(np.all(m >= 0))
    if not nonneg:
        m = m.astype(complex)
    d = k + 1
    lbin = _log_binom(k, np.arange(d))
    cols = []
    col_scale = np.full(d, -np.inf)
    for a in range(d):
        r1 = np.arange(k - a + 1)
        l1 = _log_binom(k - a, r1) + xlogy(k - a - r1, m[0, 0]) + xlogy(r1, m[1, 0])
        r2 = np.arange(a + 1)
        l2 = _log_binom(a, r2) + xlogy(a - r2, m[0, 1]) + xlogy(r2, m[1, 1])
        s1 = np.max(np.real(l1))
        s2 = np.max(np.real(l2))
        if not (np.isfinite(s1) and np.isfinite(s2)):
            cols.append(np.zeros(d, dtype=m.dtype))
            continue
        cols.append(np.convolve(np.exp(l1 - s1), np.exp(l2 - s2)))
        col_scale[a] = s1 + s2 + 0.5 * lbin[a]
    finite = np.isfinite(col_scale)
    if not np.any(finite):
        return np.zeros((d, d), dtype=m.dtype), -math.inf
    top = float(col_scale[finite].max())
    out = np.stack(cols, axis=1)
    with np.errstate(under="ignore"):
        factor = np.where(finite, np.exp(col_scale - top), 0.0)
        out = out * factor[None, :] * np.exp(-0.5 * lbin)[:, None]
    peak = float(np.abs(out).max())
    if peak == 0.0:
        return out, -math.inf
    return out / peak, top + math.log(peak)


@dataclass(frozen=True, eq=False)
class SchurBlocks:
    """Block decomposition of a qubit tensor power ``M^{(x)n}``.

    Attributes:
        n: number of copies.
        labels: twice-spin labels ``k = 2j``, from ``n`` down to 0 or 1.
        blocks: normalized ``(k+1) x (k+1)`` blocks in the basis ``m = j..-j``.
        log_scales: the block for label ``k`` is ``exp(log_scale) * block``.
        multiplicities: exact number of copies of each block.
        generator: the single-copy operator ``M``.
    """

    n: int
    labels: tuple[int, ...]
    blocks: tuple[np.ndarray, ...]
    log_scales: tuple[float, ...]
    multiplicities: tuple[int, ...]
    generator: np.ndarray

    @property
    def spins(self) -> tuple[float, ...]:
        return tuple(k / 2 for k in self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def block(self, index: int) -> np.ndarray:
        """Unnormalized block ``B_j``; may underflow to zero for large ``n``."""
        with np.errstate(under="ignore"):
            return math.exp(self.log_scales[index]) * self.blocks[index] if np.isfinite(self.log_scales[index]) else np.zeros_like(self.blocks[index])

    def log_weights(self) -> np.ndarray:
        """``ln(mult_j) + log_scale_j`` for each block."""
        return np.array([math.log(w) + s for w, s in zip(self.multiplicities, self.log_scales)])

    def trace(self) -> float:
        """``sum_j mult_j Tr[B_j]``; equals one for a state."""
        total = 0.0
        for lw, b in zip(self.log_weights(), self.blocks):
            if np.isfinite(lw):
                total += math.exp(lw) * np.trace(b).real
        return total

    def dimension(self) -> int:
        """``sum_j mult_j (2j+1)``, which equals ``2**n``."""
        return sum(w * (k + 1) for w, k in zip(self.multiplicities, self.labels))


def _scaled_power(m, n, k):
    """``det(m)^((n-k)/2) Sym^k(m)`` as ``(block, log_scale)``."""
    block, scale = symmetric_power(m, k)
    e = (n - k) // 2
    if e:
        det = complex(np.linalg.det(m))
        if det == 0:
            return np.zeros_like(block), -math.inf
        scale += e * math.log(abs(det))
        phase = (det / abs(det)) ** e
        if abs(phase - 1) > 0:
            block = block * phase
    return block, scale


def _cg_isometry(k: int, k_new: int) -> np.ndarray:
    """Clebsch-Gordan isometry coupling spin ``k/2`` with one qubit to spin ``k_new/2``.

    Rows are indexed by ``2*i + q`` (Dicke index ``i`` of the old spin,
    qubit state ``q``: 0 = up, 1 = down), matching ``np.kron(old, qubit)``.
    Columns run over ``M = j', j'-1, ..., -j'``. Condon-Shortley phases.
    """
    j = k / 2
    jn = k_new / 2
    c = np.zeros((2 * (k + 1), k_new + 1))
    norm = 2 * j + 1
    for col in range(k_new + 1):
        big_m = jn - col
        for q, m in ((0, big_m - 0.5), (1, big_m + 0.5)):
            if abs(m) > j + 1e-9:
                continue
            i = int(round(j - m))
            if k_new == k + 1:
                coef = math.sqrt((j + big_m + 0.5) / norm) if q == 0 else math.sqrt((j - big_m + 0.5) / norm)
            else:
                coef = -math.sqrt((j - big_m + 0.5) / norm) if q == 0 else math.sqrt((j + big_m + 0.5) / norm)
            c[2 * i + q, col] = coef
    return c


def _recursive_blocks(m, n):
    peak = float(np.abs(m).max())
    if peak == 0:
        raise ValidationError("generator must be nonzero")
    level = {1: (m / peak, math.log(peak))}
    mults = {1: 1}
    for size in range(2, n + 1):
        new, new_mults = {}, {}
        for k in range(size, -1, -2):
            parent = k - 1 if (k - 1) in level else k + 1
            block, scale = level[parent]
            c = _cg_isometry(parent, k)
            nb = c.T @ np.kron(block, m) @ c
            top = float(np.abs(nb).max())
            if top == 0 or not np.isfinite(scale):
                new[k] = (np.zeros_like(nb), -math.inf)
            else:
                new[k] = (nb / top, scale + math.log(top))
            new_mults[k] = mults.get(k - 1, 0) + mults.get(k + 1, 0)
        level, mults = new, new_mults
    labels = sorted(level, reverse=True)
    return labels, [level[k] for k in labels], [mults[k] for k in labels]


def tensor_power_blocks(m, n: int, method: str = "closed") -> SchurBlocks:
    """Schur blocks of ``m^{(x)n}`` for an arbitrary 2x2 matrix ``m``.

    Args:
        m: single-copy operator (need not be Hermitian).
        n: number of copies.
        method: ``"closed"`` uses the symmetric-power formula for each block;
            ``"recursive"`` couples one qubit at a time with Clebsch-Gordan
            isometries, accumulating multiplicities along the way.
    """
    m = check_square(m, "generator")
    if m.shape != (2, 2):
        raise ValidationError("the Schur backend handles qubits only (dim = 2)")
    n = check_positive_int(n)
    if method == "closed":
        labels = spin_labels(n)
        pairs = [_scaled_power(m, n, k) for k in labels]
        mults = [multiplicity(n, k) for k in labels]
    elif method == "recursive":
        labels, pairs, mults = _recursive_blocks(m, n)
    else:
        raise ValidationError(f"unknown method {method!r}")
    return SchurBlocks(
        n=n,
        labels=tuple(labels),
        blocks=tuple(b for b, _ in pairs),
        log_scales=tuple(float(s) for _, s in pairs),
        multiplicities=tuple(mults),
        generator=m,
    )


def schur_blocks(rho, n: int, method: str = "closed") -> SchurBlocks:
    """Schur blocks of the tensor power of a qubit state.

    Example:
        >>> import numpy as np
        >>> sb = schur_blocks(np.eye(2) / 2, 3)
        >>> sb.spins, sb.multiplicities
        ((1.5, 0.5), (1, 2))
    """
    rho = check_density(rho, "rho")
    return tensor_power_blocks(rho, n, method)


@lru_cache(maxsize=16)
def _schur_basis_cached(n):
    level = {1: [np.eye(2)]}
    for _ in range(2, n + 1):
        new: dict[int, list] = {}
        for k in sorted(level, reverse=True):
            for v in level[k]:
                lifted = np.kron(v, np.eye(2))
                for k_new in (k + 1, k - 1):
                    if k_new >= 0:
                        new.setdefault(k_new, []).append(lifted @ _cg_isometry(k, k_new))
        level = new
    cols, layout, start = [], [], 0
    for k in sorted(level, reverse=True):
        for copy, v in enumerate(level[k]):
            cols.append(v)
            layout.append((k, copy, slice(start, start + k + 1)))
            start += k + 1
    q = np.hstack(cols)
    q.setflags(write=False)
    return q, tuple(layout)


def schur_basis(n: int):
    """Dense Schur basis of ``n`` qubits built by the Clebsch-Gordan recursion.

    Qubits are coupled left to right. Use this only for small ``n``.

    Returns:
        Tuple ``(Q, layout)``. ``Q`` is the real orthogonal ``2^n x 2^n``
        matrix whose columns are the coupled states. ``layout`` lists
        ``(k, copy, columns)`` for each sector copy, so that
        ``Q.T @ M^{(x)n} @ Q`` is block diagonal with block ``B_{k/2}`` at
        every copy of sector ``k``.
    """
    n = check_positive_int(n)
    return _schur_basis_cached(n)


def _check_pair(a: SchurBlocks, b: SchurBlocks):
    if a.n != b.n or a.labels != b.labels:
        raise ValidationError("block decompositions have different shapes")


@dataclass(frozen=True, eq=False)
class BlockTest:
    """A permutation-invariant binary test given block by block.

    ``operators[i]`` acts on every copy of sector ``labels[i]``, written in
    the Dicke basis of ``frame^{(x)n}``, where ``frame`` is a single-qubit
    unitary (the identity for tests in the computational basis).
    """

    n: int
    labels: tuple[int, ...]
    operators: tuple[np.ndarray, ...]
    frame: np.ndarray


def block_helstrom(p: float, a: SchurBlocks, b: SchurBlocks, *, return_test: bool = False):
    """Optimal symmetric error ``(1 - sum_j mult_j ||p A_j - q B_j||_1) / 2``.

    Args:
        p: prior of the first hypothesis (``q = 1 - p``).
        a, b: block decompositions with matching shapes.
        return_test: also return the optimal :class:`BlockTest`.
    """
    p = check_probability(p, "p")
    q = 1.0 - p
    _check_pair(a, b)
    total = 0.0
    operators = []
    for i, k in enumerate(a.labels):
        la, lb = a.log_scales[i], b.log_scales[i]
        top = max(la, lb)
        lw = math.log(a.multiplicities[i]) + top
        if not np.isfinite(top) or lw + math.log(k + 1) < _LOG_NEGLIGIBLE:
            operators.append(np.zeros((k + 1, k + 1)))
            continue
        with np.errstate(under="ignore"):
            x = p * math.exp(la - top) * a.blocks[i] - q * math.exp(lb - top) * b.blocks[i]
        x = (x + x.conj().T) / 2
        if return_test:
            w, v = np.linalg.eigh(x)
            vp = v[:, w > 0]
            operators.append(vp @ vp.conj().T)
        else:
            w = np.linalg.eigvalsh(x)
        total += math.exp(lw) * float(np.abs(w).sum())
    pe = min(min(p, q), max(0.0, 0.5 * (1.0 - total)))
    if return_test:
        return pe, BlockTest(a.n, a.labels, tuple(operators), np.eye(2))
    return pe


def block_fidelity(a: SchurBlocks, b: SchurBlocks, *, log: bool = False) -> float:
    """Fidelity ``F(rho^{(x)n}, sigma^{(x)n})`` from the block decomposition.

    Uses the blocks of ``(sqrt(rho) sqrt(sigma))^{(x)n}``. The square roots of
    the tensor powers decompose blockwise into those products, and each
    block's trace norm is dominated by its largest singular values, so the
    result keeps full relative accuracy even when ``F`` is tiny.

    Args:
        log: return ``ln F`` instead of ``F``.
    """
    _check_pair(a, b)
    prod = tensor_power_blocks(sqrtm_psd(a.generator) @ sqrtm_psd(b.generator), a.n)
    terms = []
    for lw, blk in zip(prod.log_weights(), prod.blocks):
        if np.isfinite(lw):
            s = np.linalg.svd(blk, compute_uv=False).sum()
            if s > 0:
                terms.append(lw + math.log(s))
    log_f = 2.0 * float(np.logaddexp.reduce(terms)) if terms else -math.inf
    log_f = min(0.0, log_f)
    return log_f if log else math.exp(log_f)


# ----------------------------------------------------------------- beta


def _real_frame(rho, sigma):
    """Unitary ``u`` with ``u^+ sigma u`` diagonal and ``u^+ rho u`` real, entrywise >= 0."""
    s, v = np.linalg.eigh(sigma)
    r = v.conj().T @ rho @ v
    off = r[0, 1]
    d = np.diag([1.0, np.conj(off) / abs(off) if abs(off) > 0 else 1.0])
    u = v @ d
    r = u.conj().T @ rho @ u
    r_real = np.array([[max(r[0, 0].real, 0.0), abs(r[0, 1])], [abs(r[0, 1]), max(r[1, 1].real, 0.0)]])
    return u, r_real, np.clip(s, 0.0, None)


class _FramePencil:
    """Blocks of ``rho^{(x)n}`` and ``sigma^{(x)n}`` in a common real frame.

    In the eigenbasis of ``sigma`` (rephased so that ``rho`` is entrywise
    nonnegative) every ``sigma`` block is diagonal and every ``rho`` block
    is a symmetric power with nonnegative entries. Both are therefore known
    to high relative accuracy, and the Jacobi solver keeps that accuracy
    when it forms ``P_+(mu A_j - B_j)``.
    """

    def __init__(self, rho, sigma, n):
        self.n = n
        self.frame, r, s = _real_frame(rho, sigma)
        log_det_r = math.log(r[0, 0] * r[1, 1] - r[0, 1] ** 2) if np.linalg.det(r) > 0 else -math.inf
        log_det_s = math.log(s[0] * s[1]) if s[0] * s[1] > 0 else -math.inf
        self.labels = spin_labels(n)
        self.entries = []
        for k in self.labels:
            e = (n - k) // 2
            lm = math.log(multiplicity(n, k))
            a_blk, la = symmetric_power(r, k)
            la = la + (e * log_det_r if e else 0.0) + lm
            i = np.arange(k + 1)
            lbd = xlogy(k - i, s[0]) + xlogy(i, s[1])
            top = float(np.max(lbd))
            with np.errstate(under="ignore"):
                b_diag = np.exp(lbd - top) if np.isfinite(top) else np.zeros(k + 1)
            lb = top + (e * log_det_s if e else 0.0) + lm
            if not np.isfinite(la) or la + math.log(np.trace(a_blk)) < _LOG_NEGLIGIBLE:
                continue  # no rho weight: this block never enters the test
            self.entries.append((k, a_blk, la, b_diag, lb, lbd - top))
        # Range of log multipliers that covers every jump of the pencil.
        r_eig = np.linalg.eigvalsh(r)
        r_pos = r_eig[r_eig > 1e-300]
        s_pos = s[s > 1e-300]
        g_max = math.log(r_pos.max()) - math.log(s_pos.min())
        g_min = math.log(r_pos.min()) - math.log(s_pos.max())
        self.lo = -n * g_max - 2.0
        self.hi = -n * g_min + 2.0

    def evaluate(self, log_mu, solver):
        accepted = 0.0
        log_terms = []
        projectors = []
        for k, a_blk, la, b_diag, lb, log_b_diag in self.entries:
            if not np.isfinite(lb):
                # sigma has no weight here: the whole support of A_j is free.
                w, v = np.linalg.eigh(a_blk)
                p = v[:, w > 1e-12 * w.max()]
                accepted += math.exp(la) * float(np.einsum("ij,ij->", p, a_blk @ p))
                projectors.append(p)
                continue
            c = log_mu + la - lb
            with np.errstate(under="ignore"):
                if c >= 0:
                    x = a_blk - math.exp(-c) * np.diag(b_diag)
                else:
                    x = math.exp(c) * a_blk - np.diag(b_diag)
            if solver == "jacobi":
                w, v = jacobi_eigh(x)
                p = v[:, w > 0]
            else:
                w, v = np.linalg.eigh(x)
                p = v[:, w > 1e-14 * max(1.0, np.abs(w).max())]
            projectors.append(p)
            if p.shape[1] == 0:
                continue
            accepted += math.exp(la) * float(np.einsum("ij,ij->", p, a_blk @ p))
            # in logs: the accepted directions may sit where b_diag underflows
            mass = np.sum(p * p, axis=1)
            keep = (mass > 0) & np.isfinite(log_b_diag)
            if np.any(keep):
                log_terms.append(lb + float(logsumexp(log_b_diag[keep] + np.log(mass[keep]))))
        log_b = float(np.logaddexp.reduce(log_terms)) if log_terms else -math.inf
        return Evaluation(accepted, log_b, projectors)


def _block_beta(a: SchurBlocks, b: SchurBlocks, eps: float):
    _check_pair(a, b)
    eps = check_probability(eps, "eps", open_high=True)
    rho = check_density(a.generator, "rho")
    sigma = check_density(b.generator, "sigma")
    return _pencil_beta(rho, sigma, a.n, eps)


def _pencil_beta(rho, sigma, n: int, eps: float):
    """``(log beta, BlockTest)`` for validated qubit states; the blocks are built internally."""
    pencil = _FramePencil(rho, sigma, n)
    labels = [e[0] for e in pencil.entries]

    def test_from(weights_and_projs):
        ops = {k: np.zeros((k + 1, k + 1)) for k in pencil.labels}
        for weight, projs in weights_and_projs:
            for k, p in zip(labels, projs):
                ops[k] = ops[k] + weight * (p @ p.T)
        return BlockTest(n, tuple(pencil.labels), tuple(ops[k] for k in pencil.labels), pencil.frame)

    if eps == 0.0:
        # Accept the whole support of rho^{(x)n}: huge multiplier limit.
        ev = pencil.evaluate(pencil.hi + 50.0, "jacobi")
        return ev.log_type_ii, test_from([(1.0, ev.payload)])

    target = 1.0 - eps
    coarse = solve_dual(lambda l: pencil.evaluate(l, "lapack"), target, pencil.lo, pencil.hi, xtol=1e-3)
    guess = 0.5 * (coarse.log_mu_low + coarse.log_mu_high) if np.isfinite(coarse.log_mu_low) else coarse.log_mu_high
    sol = solve_dual(lambda l: pencil.evaluate(l, "jacobi"), target, pencil.lo, pencil.hi, guess=guess)
    parts = [(sol.weight, sol.high.payload)]
    if sol.low is not None:
        parts.append((1.0 - sol.weight, sol.low.payload))
    return sol.log_beta, test_from(parts)


def block_log_beta(a: SchurBlocks, b: SchurBlocks, eps: float) -> float:
    """Natural log of :func:`block_beta` (finite even when ``beta`` underflows)."""
    return _block_beta(a, b, eps)[0]


def block_beta(a: SchurBlocks, b: SchurBlocks, eps: float, *, return_test: bool = False):
    """Optimal type-II error ``beta_eps(rho^{(x)n} || sigma^{(x)n})`` from blocks.

    The test is permutation invariant, so it is block diagonal. Each
    sector's positive part is computed in a common real frame with a
    relative-accuracy Jacobi solver, and the multiplier is shared across
    sectors. That multiplier is located with the dual root-finder in
    :mod:`qhtest._neyman_pearson`.

    Args:
        a, b: blocks of ``rho`` and ``sigma`` from :func:`schur_blocks`.
        eps: type-I budget in ``[0, 1)``.
        return_test: also return the optimal :class:`BlockTest`.
    """
    log_beta, test = _block_beta(a, b, eps)
    beta = math.exp(log_beta) if log_beta > -745 else 0.0
    return (beta, test) if return_test else beta
