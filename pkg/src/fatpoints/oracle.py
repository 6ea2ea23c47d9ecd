"""Ground-truth dimensions of concrete fat-point systems at random points
over a large prime field.

A trial samples distinct points in the affine chart (last coordinate 1),
builds the conditions matrix whose rows are the partial-derivative
functionals of order < m_i at point i acting on the degree-d monomial
coefficients, and reports C(d+n,n) - rank.  Random points can only be more
special than generic ones, so the minimum over trials is the right
estimator; with a word-sized prime a wrong answer needs every trial to hit a
vanishing minor.  Each trial owns an RNG stream derived from (seed, trial
index), so trials are independent and reports deterministic.

Rank is exact Gaussian elimination over F_p.  Two kernels: a plain int64
one for any word-sized prime, and a panel/BLAS float64 one used when
64*p*p < 2^53 so that products accumulate exactly (worth ~20x on the larger
interpolation matrices).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import binomial

DEFAULT_PRIME = (1 << 31) - 1
# largest prime class eligible for the float64 kernel: 64 * p^2 < 2^53
FAST_PRIME = 8380417
_FLOAT_KERNEL_LIMIT = 1 << 23
_PANEL = 64
_SAMPLING_ATTEMPTS = 64


class OracleError(Exception):
    pass


@dataclass(frozen=True)
class OracleConfig:
    prime: int = DEFAULT_PRIME
    trials: int = 3
    seed: int = 20260810

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise OracleError("need at least one trial")
        if self.prime < 3 or not _is_probable_prime(self.prime):
            raise OracleError(f"{self.prime} is not prime")


@dataclass(frozen=True)
class OracleReport:
    n: int
    degree: int
    mults: tuple[int, ...]
    dims: tuple[int, ...]
    dimension: int
    prime: int
    trials: int
    seed: int

    def to_dict(self) -> dict:
        runs: list[list[int]] = []
        for m in sorted(self.mults, reverse=True):
            if runs and runs[-1][1] == m:
                runs[-1][2] += 1
            else:
                runs.append([0, m, 1])
        return {
            "system": {"N": self.n, "degree": [0, self.degree], "mults": runs},
            "p": self.prime,
            "trials": self.trials,
            "seed": self.seed,
            "dims": list(self.dims),
            "dimension": self.dimension,
        }


def _is_probable_prime(n: int) -> bool:
    # deterministic Miller-Rabin for n < 3.3e24
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# exact rank over F_p


def matrix_rank_mod(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    if p < _FLOAT_KERNEL_LIMIT:
        return _rank_float_panels(a, p)
    return _rank_int64(a, p)


def _rank_int64(a: np.ndarray, p: int) -> int:
    m = np.mod(a, p).astype(np.int64)
    rows, cols = m.shape
    rank = 0
    for j in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(m[rank:, j])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        inv = pow(int(m[rank, j]), -1, p)
        m[rank, j:] = m[rank, j:] * inv % p
        below = m[rank + 1 :, j]
        nzb = np.nonzero(below)[0]
        if nzb.size:
            idx = rank + 1 + nzb
            m[idx, j:] = (m[idx, j:] - below[nzb, None] * m[rank, j:]) % p
        rank += 1
    return rank


def _rank_float_panels(a: np.ndarray, p: int) -> int:
    """Blocked elimination: int64 panel factorization, float64 BLAS trailing
    updates.

    Entries stay in [0, p) with p < 2^23 and multipliers below p, so a panel
    dot product is at most 64*p^2 < 2^53 and exact in float64.  Multipliers
    live in the zeroed panel entries (classic LU layout); each panel costs
    one matmul on the trailing block plus a forward solve for its own pivot
    rows.
    """
    m = np.mod(a, p).astype(np.float64)
    rows, cols = m.shape
    rank = 0
    col = 0
    while rank < rows and col < cols:
        hi = min(col + _PANEL, cols)
        width = hi - col
        r0 = rank
        nloc = rows - r0
        block = m[r0:, col:hi].astype(np.int64)
        piv_cols: list[int] = []
        invs: list[int] = []
        nw = 0
        for j in range(width):
            nz = np.nonzero(block[nw:, j])[0]
            if nz.size == 0:
                continue
            piv = nw + int(nz[0])
            if piv != nw:
                block[[nw, piv]] = block[[piv, nw]]
                m[[r0 + nw, r0 + piv]] = m[[r0 + piv, r0 + nw]]
            inv = pow(int(block[nw, j]), -1, p)
            block[nw, j:] = block[nw, j:] * inv % p
            below = block[nw + 1 :, j]
            nzb = np.nonzero(below)[0]
            if nzb.size:
                idx = nw + 1 + nzb
                f = below[nzb].copy()
                block[idx, j + 1 :] = (block[idx, j + 1 :] - f[:, None] * block[nw, j + 1 :]) % p
                block[idx, j] = f  # multiplier storage
            piv_cols.append(j)
            invs.append(inv)
            nw += 1
            if nw == nloc:
                break
        rank = r0 + nw
        if nw and hi < cols:
            lower = block[:, piv_cols].astype(np.float64)
            # pivot rows: subtract earlier panel pivots, then scale
            for t in range(nw):
                if t:
                    fvec = lower[t, :t]
                    if fvec.any():
                        m[r0 + t, hi:] = (m[r0 + t, hi:] - fvec @ m[r0 : r0 + t, hi:]) % p
                m[r0 + t, hi:] = m[r0 + t, hi:] * float(invs[t]) % p
            if nw < nloc:
                m[rank:, hi:] = (m[rank:, hi:] - lower[nw:] @ m[r0:rank, hi:]) % p
        col = hi
    return rank


# ---------------------------------------------------------------------------
# conditions matrix


def _monomial_exponents(n: int, d: int) -> np.ndarray:
    """Affine exponent vectors e with |e| <= d (the omitted homogenizing
    variable absorbs d - |e|), in lexicographic order."""
    out: list[tuple[int, ...]] = []
    e = [0] * n

    def rec(pos: int, budget: int) -> None:
        if pos == n:
            out.append(tuple(e))
            return
        for v in range(budget + 1):
            e[pos] = v
            rec(pos + 1, budget - v)
        e[pos] = 0

    rec(0, d)
    return np.array(out, dtype=np.int64).reshape(len(out), n)


def _falling_factorials(d: int, max_order: int, p: int) -> np.ndarray:
    """ff[b, t] = t*(t-1)*...*(t-b+1) mod p; ff[b, t] = 0 for t < b."""
    ff = np.zeros((max_order + 1, d + 1), dtype=np.int64)
    ff[0, :] = 1
    t = np.arange(d + 1, dtype=np.int64)
    for b in range(1, max_order + 1):
        ff[b] = ff[b - 1] * ((t - (b - 1)) % p) % p
        ff[b, :b] = 0
    return ff


def _point_rows(
    exps: np.ndarray, point: np.ndarray, mult: int, d: int, p: int
) -> np.ndarray:
    """All order-< mult derivative rows of one point."""
    n = point.shape[0]
    pows = np.ones((n, d + 1), dtype=np.int64)
    for t in range(1, d + 1):
        pows[:, t] = pows[:, t - 1] * point % p
    ff = _falling_factorials(d, min(mult - 1, d), p)
    betas = _monomial_exponents(n, mult - 1)
    rows = np.zeros((betas.shape[0], exps.shape[0]), dtype=np.int64)
    for r, beta in enumerate(betas):
        if int(beta.sum()) > d:
            continue  # derivative order exceeds the degree: identically zero row
        row = np.ones(exps.shape[0], dtype=np.int64)
        for j in range(n):
            bj = int(beta[j])
            ej = exps[:, j]
            if bj:
                row = row * ff[bj][ej] % p  # 0 whenever the exponent is below the order
            row = row * pows[j][np.maximum(ej - bj, 0)] % p
        rows[r] = row
    return rows


def _sample_points(rng: np.random.Generator, n: int, count: int, p: int) -> np.ndarray:
    points: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    for _ in range(_SAMPLING_ATTEMPTS * max(count, 1)):
        if len(points) == count:
            break
        pt = tuple(int(x) for x in rng.integers(0, p, size=n))
        if pt in seen:
            continue
        seen.add(pt)
        points.append(pt)
    if len(points) < count:
        raise OracleError("degenerate sampling: could not draw distinct points")
    return np.array(points, dtype=np.int64).reshape(count, n)


def linear_system_dim(
    n: int, d: int, mults: Sequence[int], config: OracleConfig | None = None
) -> OracleReport:
    """Monte Carlo dimension of the degree-d forms with the given
    multiplicities at random points; min over trials."""
    config = config or OracleConfig()
    if n < 2:
        raise ValueError(f"ambient dimension must be >= 2, got {n}")
    if d < 0:
        raise ValueError(f"degree must be >= 0, got {d}")
    if any(m < 0 for m in mults):
        raise ValueError("multiplicities must be nonnegative")
    if config.prime <= d:
        raise OracleError(
            f"prime {config.prime} must exceed the degree {d} for derivative "
            "conditions to capture multiplicity"
        )
    active = [int(m) for m in mults if m > 0]
    cols = binomial(d + n, n)
    exps = _monomial_exponents(n, d)
    dims: list[int] = []
    for trial in range(config.trials):
        rng = np.random.default_rng([config.seed % (1 << 64), trial])
        if not active:
            dims.append(cols)
            continue
        points = _sample_points(rng, n, len(active), config.prime)
        blocks = [
            _point_rows(exps, points[i], active[i], d, config.prime)
            for i in range(len(active))
        ]
        matrix = np.vstack(blocks)
        rank = matrix_rank_mod(matrix, config.prime)
        dims.append(cols - rank)
    return OracleReport(
        n=n,
        degree=d,
        mults=tuple(int(m) for m in mults),
        dims=tuple(dims),
        dimension=min(dims),
        prime=config.prime,
        trials=config.trials,
        seed=config.seed,
    )


def alpha_symbolic_power(
    n: int, s: int, m: int, config: OracleConfig | None = None
) -> int:
    """Least degree d with a nonzero form of multiplicity m at s random points.

    Searches upward from d = m.  When the virtual dimension
    C(d+n,n) - s*C(m+n-1,n) is positive the system is nonzero without any
    rank computation (dimension >= columns - rows); only candidate degrees
    below that point need the matrix.  Each candidate is probed with a single
    trial first: a zero dimension there already equals the min over all
    trials, so only positive probes need confirmation with the full trial
    count.  The result is identical to scanning with the full count
    throughout.
    """
    if s < 1 or m < 1:
        raise ValueError("need s >= 1 and m >= 1")
    config = config or OracleConfig()
    probe = (
        config
        if config.trials == 1
        else OracleConfig(prime=config.prime, trials=1, seed=config.seed)
    )
    conditions = s * binomial(m + n - 1, n)
    d = m
    while True:
        if binomial(d + n, n) - conditions > 0:
            return d
        if linear_system_dim(n, d, [m] * s, probe).dimension > 0:
            if probe is config or linear_system_dim(n, d, [m] * s, config).dimension > 0:
                return d
        d += 1


def waldschmidt_upper_estimate(
    n: int, s: int, m_max: int, config: OracleConfig | None = None
) -> Fraction:
    """min over 1 <= m <= m_max of alpha(m-th power)/m: an upper bound on the
    limit since the sequence converges to its infimum."""
    if m_max < 1:
        raise ValueError("need m_max >= 1")
    return min(
        Fraction(alpha_symbolic_power(n, s, m, config), m) for m in range(1, m_max + 1)
    )
