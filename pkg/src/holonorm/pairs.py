"""Supremum engines over node pairs and grid-aligned space-time shifts.

Every seminorm here is a maximum of quotients ``|difference| / separation^e``
over an admissible set.  When the set has at most ``PAIR_LIMIT`` members it is
enumerated exhaustively; larger sets are covered by every nearest-neighbour
pair plus ``SAMPLE_TARGET`` seeded draws stratified by separation scale in
powers of two (rough quotients peak at small separations, smooth ones at box
scale, so both ends need coverage).

Shift enumeration ranges over the canonical half-space: positive time offset,
or zero time offset with the first nonzero spatial component positive.
Reversing a shift reproduces the same quotient from a translated base node, so
nothing is lost.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

PAIR_LIMIT = 10_000_000
SAMPLE_TARGET = 1_000_000
DEFAULT_SEED = 1729
_CHUNK = 262_144
_MAX_BATCHES = 64


def worker_count() -> int:
    raw = os.environ.get("HOLONORM_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass
class SupOutcome:
    value: float
    witness: dict | None
    examined: int
    mode: str  # "exhaustive" | "sampled"
    seed: int | None
    sample_count: int = 0


def difference_coeffs(k: int) -> tuple[float, ...]:
    return tuple(float((-1) ** (i + 1) * math.comb(k, i)) for i in range(1, k + 1))


def plength_steps(d: tuple[int, ...], j: int, h_x: tuple[float, ...], h_t: float) -> float:
    return math.sqrt(sum((di * hi) ** 2 for di, hi in zip(d, h_x))) + math.sqrt(abs(j * h_t))


def euclid_steps(d: tuple[int, ...], h_x: tuple[float, ...]) -> float:
    return math.sqrt(sum((di * hi) ** 2 for di, hi in zip(d, h_x)))


# -- admissible-set sizes ------------------------------------------------------


def spatial_pair_count(n_spatial: tuple[int, ...], n_time: int) -> int:
    m = math.prod(n_spatial)
    return n_time * (m * (m - 1) // 2)


def time_pair_count(n_spatial: tuple[int, ...], n_time: int, k: int = 1) -> int:
    jmax = (n_time - 1) // k
    return math.prod(n_spatial) * sum(n_time - k * j for j in range(1, jmax + 1))


def kdiff_pair_count(steps: tuple[int, ...], t_steps: int, k: int, allow_time: bool) -> int:
    """Canonical (node, shift) count for k-th differences."""

    def axis_sum(s: int) -> int:
        m = s // k
        return (s + 1) + 2 * sum(s + 1 - k * d for d in range(1, m + 1))

    prod_a = math.prod(axis_sum(s) for s in steps)
    if allow_time and t_steps:
        m = t_steps // k
        b_full = (t_steps + 1) + 2 * sum(t_steps + 1 - k * j for j in range(1, m + 1))
    else:
        b_full = t_steps + 1
    nodes = math.prod(s + 1 for s in steps) * (t_steps + 1)
    return (prod_a * b_full - nodes) // 2


# -- canonical offset enumeration ----------------------------------------------


def _first_nonzero_positive(d: tuple[int, ...]) -> bool:
    for v in d:
        if v:
            return v > 0
    return False


def canonical_spatial_offsets(limits: tuple[int, ...]):
    """All spatial offsets with the first nonzero component positive."""
    for d in itertools.product(*(range(-m, m + 1) for m in limits)):
        if _first_nonzero_positive(d):
            yield d


def all_spatial_offsets(limits: tuple[int, ...]):
    yield from itertools.product(*(range(-m, m + 1) for m in limits))


def _base_slices(offset: tuple[int, ...], dims: tuple[int, ...], k: int):
    """Base-region bounds such that all translates i = 0..k stay inside."""
    lows, highs = [], []
    for d, n in zip(offset, dims):
        if d >= 0:
            lows.append(0)
            highs.append(n - k * d)
        else:
            lows.append(-k * d)
            highs.append(n)
    if any(hi <= lo for lo, hi in zip(lows, highs)):
        return None
    return lows, highs


def _translate_view(arr: np.ndarray, lows, highs, offset, i: int):
    sl = tuple(slice(lo + i * d, hi + i * d) for lo, hi, d in zip(lows, highs, offset))
    return arr[sl]


def _kdiff_slab(arr: np.ndarray, lows, highs, offset, k: int, coeffs) -> np.ndarray:
    u0 = _translate_view(arr, lows, highs, offset, 0)
    s = coeffs[0] * _translate_view(arr, lows, highs, offset, 1)
    for i in range(2, k + 1):
        s += coeffs[i - 1] * _translate_view(arr, lows, highs, offset, i)
    return np.abs(u0 - s)


# -- exhaustive engines ---------------------------------------------------------


def _slab_update(best, arr: np.ndarray, denom: float, make_witness):
    m = float(arr.max())
    q = m / denom
    if q > best[0]:
        at = np.unravel_index(int(arr.argmax()), arr.shape)
        best[0] = q
        best[1] = make_witness(at)
    return arr.size


def _offset_witness(kind: str, base, d, j, k, h_x, h_t) -> dict:
    if kind == "kdiff" or k > 1:
        return {
            "base": list(base),
            "steps": list(d),
            "time_step": int(j),
            "order": int(k),
            "plength": plength_steps(d, j, h_x, h_t),
        }
    sep = euclid_steps(d, h_x) if kind == "space" else j * h_t
    return {
        "a": [b + o for b, o in zip(base, tuple(d) + (j,))],
        "b": list(base),
        "separation": sep,
    }


def pair_quotient_sup_exhaustive(
    w: np.ndarray,
    h_x: tuple[float, ...],
    h_t: float,
    exponent: float,
    axes: str,
    k: int = 1,
) -> SupOutcome:
    """Max of the k-th difference quotient over same-time ("space") or
    same-place ("time") displacements."""
    n_sp = w.shape[:-1]
    coeffs = difference_coeffs(k)
    best: list = [-math.inf, None]
    examined = 0
    if axes == "space":
        for d in canonical_spatial_offsets(tuple((n - 1) // k for n in n_sp)):
            if not any(d):
                continue
            off = d + (0,)
            ls = _base_slices(off, w.shape, k)
            if ls is None:
                continue
            lows, highs = ls
            arr = _kdiff_slab(w, lows, highs, off, k, coeffs)
            denom = euclid_steps(d, h_x) ** exponent

            def witness(at, d=d, lows=lows):
                base = tuple(int(a + lo) for a, lo in zip(at, lows))
                return _offset_witness("space", base, d, 0, k, h_x, h_t)

            examined += _slab_update(best, arr, denom, witness)
    else:
        n_t = w.shape[-1]
        zero = (0,) * len(n_sp)
        for j in range(1, (n_t - 1) // k + 1):
            off = zero + (j,)
            lows, highs = [0] * len(n_sp) + [0], list(n_sp) + [n_t - k * j]
            arr = _kdiff_slab(w, lows, highs, off, k, coeffs)
            denom = (j * h_t) ** exponent

            def witness(at, j=j):
                base = tuple(int(v) for v in at)
                return _offset_witness("time", base, zero, j, k, h_x, h_t)

            examined += _slab_update(best, arr, denom, witness)
    if best[1] is None:
        raise ValueError(
            f"no admissible displacement of order {k} along {axes} on grid "
            f"{tuple(n - 1 for n in w.shape)}"
        )
    return SupOutcome(best[0], best[1], examined, "exhaustive", None)


def kdiff_quotient_sup_exhaustive(
    values: np.ndarray,
    h_x: tuple[float, ...],
    h_t: float,
    exponent: float,
    k: int,
    allow_time: bool,
) -> SupOutcome:
    n_sp = values.shape[:-1]
    n_t = values.shape[-1]
    coeffs = difference_coeffs(k)
    limits = tuple((n - 1) // k for n in n_sp)
    jmax = (n_t - 1) // k if allow_time else 0
    best: list = [-math.inf, None]
    examined = 0
    for j in range(jmax + 1):
        spatial = canonical_spatial_offsets(limits) if j == 0 else all_spatial_offsets(limits)
        for d in spatial:
            if j == 0 and not any(d):
                continue
            ls = _base_slices(d + (j,), values.shape, k)
            if ls is None:
                continue
            lows, highs = ls
            arr = _kdiff_slab(values, lows, highs, d + (j,), k, coeffs)
            denom = plength_steps(d, j, h_x, h_t) ** exponent

            def witness(at, d=d, j=j, lows=lows):
                base = tuple(int(a + lo) for a, lo in zip(at, lows))
                return _offset_witness("kdiff", base, d, j, k, h_x, h_t)

            examined += _slab_update(best, arr, denom, witness)
    if best[1] is None:
        raise ValueError(
            f"no admissible shift for order-{k} differences: some axis needs "
            f"at least {k} steps (grid has {tuple(n - 1 for n in values.shape)})"
        )
    return SupOutcome(best[0], best[1], examined, "exhaustive", None)


# -- sampled engine ---------------------------------------------------------------


def _row_quotients(values, bases, steps, k, denoms) -> np.ndarray:
    coeffs = difference_coeffs(k)
    dims = values.ndim
    u0 = values[tuple(bases[:, a] for a in range(dims))]
    s = coeffs[0] * values[tuple(bases[:, a] + steps[:, a] for a in range(dims))]
    for i in range(2, k + 1):
        s += coeffs[i - 1] * values[tuple(bases[:, a] + i * steps[:, a] for a in range(dims))]
    return np.abs(u0 - s) / denoms


def _rows_update(best, values, bases, steps, k, denoms, make_witness) -> int:
    """Fold row quotients into the running best.  Rows are processed in fixed
    chunks (threaded when HOLONORM_THREADS > 1); chunk boundaries do not
    depend on the worker count, so neither does the result."""
    n = len(denoms)
    if n == 0:
        return 0
    chunks = [(lo, min(lo + _CHUNK, n)) for lo in range(0, n, _CHUNK)]

    def eval_chunk(bounds):
        lo, hi = bounds
        q = _row_quotients(values, bases[lo:hi], steps[lo:hi], k, denoms[lo:hi])
        at = int(q.argmax())
        return float(q[at]), lo + at

    if worker_count() > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=worker_count()) as pool:
            results = list(pool.map(eval_chunk, chunks))
    else:
        results = [eval_chunk(c) for c in chunks]
    for value, row in results:
        if value > best[0]:
            best[0] = value
            best[1] = make_witness(row)
    return n


def _unit_directions(rng: np.random.Generator, count: int, n_dim: int) -> np.ndarray:
    d = rng.normal(size=(count, n_dim))
    norms = np.sqrt(np.sum(d * d, axis=1))
    bad = norms == 0.0
    if np.any(bad):
        d[bad, 0] = 1.0
        norms[bad] = 1.0
    return d / norms[:, None]


def _draw_bases(rng, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    r = rng.random(lo.shape)
    return lo + np.floor(r * (hi - lo + 1)).astype(np.int64)


def _bucket_count(ratio: float) -> int:
    return max(1, math.ceil(math.log2(ratio))) if ratio > 1.0 else 1


def _sampled_sup(
    values: np.ndarray,
    h_x: tuple[float, ...],
    h_t: float,
    exponent: float,
    k: int,
    kind: str,  # "space" | "time" | "kdiff"
    allow_time: bool,
    seed: int,
) -> SupOutcome:
    n_sp = values.shape[:-1]
    n_t = values.shape[-1]
    n_dim = len(n_sp)
    steps_sp = tuple(n - 1 for n in n_sp)
    t_steps = n_t - 1
    best: list = [-math.inf, None]
    examined = 0
    h_arr = np.asarray(h_x)

    def row_denoms(steps_rows: np.ndarray) -> np.ndarray:
        sp = steps_rows[:, :n_dim].astype(float) * h_arr
        sep = np.sqrt(np.sum(sp * sp, axis=1))
        if kind == "kdiff":
            sep = sep + np.sqrt(np.abs(steps_rows[:, -1].astype(float) * h_t))
        elif kind == "time":
            sep = np.abs(steps_rows[:, -1].astype(float) * h_t)
        return sep ** exponent

    # Every nearest-neighbour displacement, swept exhaustively.
    nn: list[tuple[tuple[int, ...], int]] = []
    if kind != "time":
        for a in range(n_dim):
            if k <= steps_sp[a]:
                nn.append((tuple(1 if i == a else 0 for i in range(n_dim)), 0))
    if kind != "space" and allow_time and k <= t_steps:
        nn.append(((0,) * n_dim, 1))
    coeffs = difference_coeffs(k)
    for d, j in nn:
        off = d + (j,)
        ls = _base_slices(off, values.shape, k)
        if ls is None:
            continue
        lows, highs = ls
        arr = _kdiff_slab(values, lows, highs, off, k, coeffs)
        if kind == "kdiff":
            denom = plength_steps(d, j, h_x, h_t) ** exponent
        elif kind == "time":
            denom = (j * h_t) ** exponent
        else:
            denom = euclid_steps(d, h_x) ** exponent

        def witness(at, d=d, j=j, lows=lows):
            base = tuple(int(a + lo) for a, lo in zip(at, lows))
            return _offset_witness(kind, base, d, j, k, h_x, h_t)

        examined += _slab_update(best, arr, denom, witness)

    # Stratified seeded draws.
    rng = np.random.default_rng(seed)
    if kind == "time":
        n_buckets = _bucket_count(float(max(1, t_steps // k)))
    else:
        lmin = min(h_x)
        lmax = euclid_steps(steps_sp, h_x)
        if kind == "kdiff" and allow_time and t_steps:
            lmin = min(lmin, math.sqrt(h_t))
            lmax = lmax + math.sqrt(t_steps * h_t)
        n_buckets = _bucket_count(lmax / lmin)

    def make_witness_factory(bases, steps_rows):
        def make(row: int) -> dict:
            base = tuple(int(v) for v in bases[row])
            d = tuple(int(v) for v in steps_rows[row][:n_dim])
            j = int(steps_rows[row][-1])
            return _offset_witness(kind, base, d, j, k, h_x, h_t)

        return make

    drawn = 0
    batches = 0
    while drawn < SAMPLE_TARGET and batches < _MAX_BATCHES:
        batches += 1
        want = SAMPLE_TARGET - drawn
        size = min(int(want * 1.3) + 1024, 2 * SAMPLE_TARGET)

        buckets = rng.integers(0, n_buckets, size)
        rho = rng.uniform(1.0, 2.0, size)
        scale = rho * np.exp2(buckets.astype(float))
        steps_rows = np.zeros((size, n_dim + 1), dtype=np.int64)
        if kind == "time":
            j = np.rint(scale).astype(np.int64)
            np.clip(j, 1, max(1, t_steps // k), out=j)
            steps_rows[:, -1] = j
        else:
            lam = lmin * scale
            dirs = _unit_directions(rng, size, n_dim)
            if kind == "kdiff" and allow_time and t_steps:
                phi = rng.uniform(0.0, 1.0, size)
                s_len = phi * lam
                t_len = (1.0 - phi) * lam
                steps_rows[:, -1] = np.rint((t_len * t_len) / h_t).astype(np.int64)
            else:
                s_len = lam
            steps_rows[:, :n_dim] = np.rint((s_len[:, None] * dirs) / h_arr).astype(np.int64)

        dims_arr = np.asarray(values.shape, dtype=np.int64)
        lo = np.where(steps_rows >= 0, 0, -k * steps_rows)
        hi = np.where(steps_rows >= 0, dims_arr - 1 - k * steps_rows, dims_arr - 1)
        bases = _draw_bases(rng, lo, hi)

        valid = np.any(steps_rows != 0, axis=1) & np.all(hi >= lo, axis=1)
        if not np.any(valid):
            continue
        bases, steps_rows = bases[valid], steps_rows[valid]
        if len(bases) > want:
            bases, steps_rows = bases[:want], steps_rows[:want]
        denoms = row_denoms(steps_rows)
        n_done = _rows_update(
            best, values, bases, steps_rows, k, denoms, make_witness_factory(bases, steps_rows)
        )
        drawn += n_done
        examined += n_done

    return SupOutcome(best[0], best[1], examined, "sampled", seed, sample_count=drawn)


# -- public drivers ---------------------------------------------------------------


def pair_quotient_sup(
    w: np.ndarray,
    h_x: tuple[float, ...],
    h_t: float,
    exponent: float,
    axes: str,
    seed: int = DEFAULT_SEED,
) -> SupOutcome:
    """First-difference quotient supremum over space or time pairs."""
    n_sp, n_t = w.shape[:-1], w.shape[-1]
    if axes == "space":
        count = spatial_pair_count(n_sp, n_t)
    else:
        count = time_pair_count(n_sp, n_t)
        if count == 0:
            raise ValueError("time-pair seminorm needs at least two time levels")
    if count <= PAIR_LIMIT:
        return pair_quotient_sup_exhaustive(w, h_x, h_t, exponent, axes)
    return _sampled_sup(w, h_x, h_t, exponent, 1, axes, n_t > 1, seed)


def kdiff_quotient_sup(
    values: np.ndarray,
    h_x: tuple[float, ...],
    h_t: float,
    exponent: float,
    k: int,
    allow_time: bool,
    seed: int = DEFAULT_SEED,
) -> SupOutcome:
    """Joint space-time k-th difference quotient supremum."""
    n_sp = tuple(n - 1 for n in values.shape[:-1])
    t_steps = values.shape[-1] - 1
    count = kdiff_pair_count(n_sp, t_steps, k, allow_time)
    if count == 0:
        raise ValueError(
            f"no admissible shift for order-{k} differences: some axis needs "
            f"at least {k} steps (grid has {n_sp} x {t_steps})"
        )
    if count <= PAIR_LIMIT:
        return kdiff_quotient_sup_exhaustive(values, h_x, h_t, exponent, k, allow_time)
    return _sampled_sup(values, h_x, h_t, exponent, k, "kdiff", allow_time, seed)


def kdiff_time_quotient_sup(
    values: np.ndarray,
    h_x: tuple[float, ...],
    h_t: float,
    exponent: float,
    k: int,
    seed: int = DEFAULT_SEED,
) -> SupOutcome:
    """Pure-time k-th difference quotient supremum (split-form time part)."""
    n_sp, n_t = values.shape[:-1], values.shape[-1]
    count = time_pair_count(n_sp, n_t, k)
    if count == 0:
        raise ValueError(
            f"no admissible pure-time shift of order {k}: need at least {k} time steps"
        )
    if count <= PAIR_LIMIT:
        return pair_quotient_sup_exhaustive(values, h_x, h_t, exponent, "time", k)
    return _sampled_sup(values, h_x, h_t, exponent, k, "time", True, seed)
