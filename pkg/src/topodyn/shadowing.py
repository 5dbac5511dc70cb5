"""Pseudo-orbits and the tracers that correct them into true orbits.

A pseudo-orbit is a sequence that a map almost follows: each f(x_k) lands
near x_{k+1}, with the gaps (defects) bounded. Bi-infinite objects are
represented honestly as a finite window plus an extension tag: "orbit-tail"
(the endpoints continue as true orbits, zero defect outside the window) or
"periodic" (the window repeats). Every "for all i" claim is discharged
exactly for these two extensions.

Tracers return the corrected orbit alongside the starting point: for linear
saddles the correction solves e_{k+1} = A e_k - d_k through the bounded
series (stable part summed from the past, unstable from the future), for
shifts the tracing word is read off the pseudo-orbit's diagonal, and for
finite systems an exhaustive search serves as the oracle the other tracers
are checked against. Results store the traced orbit point-by-point; tests
verify gaps per index and one-step map consistency, never by iterating a
hyperbolic map across the whole window (which would amplify float error by
the expansion rate to the window length).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .entourage import GaugeBall, MetricBall
from .report import Report
from .systems import (
    FiniteSystem,
    HarmonicPoints,
    LinearSaddle,
    ShiftOfFiniteType,
    StripFamily,
    TorusAutomorphism,
    rotate_cycle as _rotate_cycle,
    symbolic_point,
)

ORBIT_TAIL = "orbit-tail"
PERIODIC = "periodic"


# ---------------------------------------------------------------------------
# pseudo-orbits


@dataclass(frozen=True)
class PseudoOrbit:
    """A window x_m ... x_M plus the rule extending it to all of Z."""

    window: tuple
    extension: str
    defect_bound: float
    start_index: int = 0
    period: object = None

    def __post_init__(self):
        if self.extension not in (ORBIT_TAIL, PERIODIC):
            raise ValueError(f"Unknown extension tag {self.extension!r}.")
        if len(self.window) < 1:
            raise ValueError("Empty pseudo-orbit window.")
        if self.extension == PERIODIC:
            p = self.period if self.period is not None else len(self.window)
            if p < 1 or len(self.window) % p:
                raise ValueError("Period must divide the window length.")
            for k in range(len(self.window) - p):
                if self.window[k] != self.window[k + p]:
                    raise ValueError(
                        f"Window is not {p}-periodic at position {k}."
                    )
            object.__setattr__(self, "period", p)

    @property
    def end_index(self):
        return self.start_index + len(self.window) - 1

    def point_at(self, i):
        j = i - self.start_index
        if self.extension == PERIODIC:
            return self.window[j % self.period]
        if 0 <= j < len(self.window):
            return self.window[j]
        raise IndexError(f"Index {i} is outside the orbit-tail window.")


def compute_defects(system, pseudo):
    """Per-step gaps d(f(x_k), x_{k+1}), including the wrap for periodic."""
    window = pseudo.window
    gaps = []
    for a, b in zip(window, window[1:]):
        gaps.append(system.metric(system.forward(a), b))
    if pseudo.extension == PERIODIC:
        gaps.append(system.metric(system.forward(window[-1]), pseudo.point_at(
            pseudo.start_index + len(window))))
    return gaps


def verify_defect_bound(system, pseudo):
    gaps = compute_defects(system, pseudo)
    return max(gaps) <= pseudo.defect_bound + 1e-15 if gaps else True


# ---------------------------------------------------------------------------
# pseudo-orbit generators


def _unit_disk_draw(rng):
    r = math.sqrt(rng.random())
    t = 2.0 * math.pi * rng.random()
    return (r * math.cos(t), r * math.sin(t))


def _perturb(system, z, noise, rng):
    """One noise application of magnitude <= noise, staying inside the space."""
    if noise == 0:
        return z
    if isinstance(z, tuple) and isinstance(system, StripFamily):
        n, y = z
        return system.clamp(n, y + noise * (2.0 * rng.random() - 1.0))
    if isinstance(system, TorusAutomorphism):
        v = _unit_disk_draw(rng)
        return ((z[0] + noise * v[0]) % 1.0, (z[1] + noise * v[1]) % 1.0)
    if isinstance(system, ShiftOfFiniteType):
        if noise >= 1.0:
            return system.random_point(rng, 3)
        depth = max(1, math.ceil(-math.log2(noise)))
        if rng.random() < 0.5:
            return z
        word = z.window(-(depth - 1), depth - 1)
        return system.window_point(word, -(depth - 1))
    if isinstance(system, FiniteSystem):
        if noise >= 1.0 and rng.random() < 0.5:
            return rng.choice(system.points)
        return z
    if isinstance(system, HarmonicPoints):
        n = system.index_of(z)
        options = [z]
        if system.gap_after(n) <= noise:
            options.append(system.point(n + 1))
        if n > 1 and system.gap_after(n - 1) <= noise:
            options.append(system.point(n - 1))
        return rng.choice(options)
    if isinstance(z, tuple) and len(z) == 2:
        v = _unit_disk_draw(rng)
        return (z[0] + noise * v[0], z[1] + noise * v[1])
    return z + noise * (2.0 * rng.random() - 1.0)


def perturbed_pseudo_orbit(system, x0, length, noise, seed, extension=ORBIT_TAIL):
    """Window x_0 ... x_{length}: each step applies f, then a noise draw of
    magnitude <= noise. Deterministic for a fixed seed.

    With extension="periodic" the final point is forced back to x_0 and the
    window tagged with period = length; the seam defect is whatever that
    closure costs, measured and folded into defect_bound exactly.
    """
    if noise < 0:
        raise ValueError("Noise bound must be nonnegative.")
    if length < 1:
        raise ValueError("Window length must be at least 1.")
    rng = random.Random(seed)
    window = [x0]
    for _ in range(length):
        window.append(_perturb(system, system.forward(window[-1]), noise, rng))
    if extension == PERIODIC:
        window = window[:length]
        pseudo = PseudoOrbit(window=tuple(window), extension=PERIODIC,
                             defect_bound=0.0, start_index=0, period=length)
        bound = max(compute_defects(system, pseudo))
        return PseudoOrbit(window=tuple(window), extension=PERIODIC,
                           defect_bound=bound, start_index=0, period=length)
    pseudo = PseudoOrbit(window=tuple(window), extension=ORBIT_TAIL,
                         defect_bound=0.0)
    gaps = compute_defects(system, pseudo)
    return PseudoOrbit(window=tuple(window), extension=ORBIT_TAIL,
                       defect_bound=max(gaps) if gaps else 0.0)


def exact_orbit(system, x0, length, extension=ORBIT_TAIL, start_index=0):
    window = [x0]
    for _ in range(length):
        window.append(system.forward(window[-1]))
    if extension == PERIODIC:
        # the seam defect is zero only if x0 really is length-periodic
        window = window[:length]
        pseudo = PseudoOrbit(window=tuple(window), extension=PERIODIC,
                             defect_bound=0.0, start_index=start_index,
                             period=length)
        return PseudoOrbit(window=tuple(window), extension=PERIODIC,
                           defect_bound=max(compute_defects(system, pseudo)),
                           start_index=start_index, period=length)
    return PseudoOrbit(window=tuple(window), extension=extension,
                       defect_bound=0.0, start_index=start_index)


def harmonic_stall_walk(system, start_n, stall, walk):
    """The stall-then-walk pseudo-orbit: sit at x_N, then step x_{N+1},
    x_{N+2}, ... Its defect is the largest gap crossed, 1/(N+1)."""
    window = [system.point(start_n)] * max(stall, 1)
    for k in range(1, walk + 1):
        window.append(system.point(start_n + k))
    return PseudoOrbit(window=tuple(window), extension=ORBIT_TAIL,
                       defect_bound=system.gap_after(start_n))


def strip_climb_pseudo_orbit(system, steps, rise):
    """On unit strips: translate right while raising y by `rise` per step,
    walking the invariant second coordinate from 0 toward steps*rise."""
    window = [(0, 0.0)]
    for k in range(1, steps + 1):
        window.append((k, min(1.0, k * rise)))
    return PseudoOrbit(window=tuple(window), extension=ORBIT_TAIL,
                       defect_bound=rise)


# ---------------------------------------------------------------------------
# tracing results


@dataclass
class TracingResult:
    """A tracing point with its verified per-index record.

    point is y at the window's first index; traced_orbit[k] is y_k for every
    window index, satisfying y_{k+1} = f(y_k) up to float rounding; gaps[k]
    is the measured distance from y_k to x_k, and error_bound their sup.
    guaranteed_bound is the a-priori bound the construction promises, when
    one exists.
    """

    point: object
    error_bound: float
    indices_checked: tuple
    unique: str = "undetermined"
    traced_orbit: tuple = ()
    gaps: tuple = ()
    guaranteed_bound: float = None
    periodic: bool = False
    period: object = None


def _wrap_half(v):
    return (v + 0.5) % 1.0 - 0.5


def _defect_vectors(system, pseudo, cover):
    """d_k = x_{k+1} - A x_k, lifted to the plane for torus systems."""
    window = list(pseudo.window)
    if pseudo.extension == PERIODIC:
        window.append(pseudo.point_at(pseudo.start_index + len(window)))
    out = []
    for a, b in zip(window, window[1:]):
        fa = cover.forward(a)
        d = (b[0] - fa[0], b[1] - fa[1])
        if isinstance(system, TorusAutomorphism):
            d = (_wrap_half(d[0]), _wrap_half(d[1]))
        out.append(d)
    return out


def trace_linear_hyperbolic(system, pseudo, exact=False):
    """Correct a pseudo-orbit of a linear saddle into a true orbit.

    Writing y_k = x_k + e_k, the defect relation forces
    e_{k+1} = A e_k - d_k. The bounded solution splits along the
    eigendirections: the stable coefficient is the series over past defects
    (summed forward from the window start, where orbit-tail extensions have
    zero defect), the unstable coefficient the series over future defects
    (summed backward from the window end). Periodic windows instead use the
    closed periodic-series form, yielding a periodic tracing point.

    Torus systems are lifted to the cover for the series and projected back
    at the end. With exact=True (periodic windows) everything runs in
    rational arithmetic via the (I - A^p) solve, exercising the same
    construction through an independent route.
    """
    if isinstance(system, TorusAutomorphism):
        cover = system.cover
    elif isinstance(system, LinearSaddle):
        cover = system
    else:
        raise TypeError("trace_linear_hyperbolic needs a linear saddle system.")
    if not pseudo.window:
        raise ValueError("Empty pseudo-orbit window.")

    if exact:
        if pseudo.extension != PERIODIC:
            raise ValueError("Exact tracing is defined for periodic windows.")
        return _trace_linear_exact(system, cover, pseudo)

    defects = _defect_vectors(system, pseudo, cover)
    split = [cover.split(d) for d in defects]
    du = [c[0] for c in split]
    ds = [c[1] for c in split]
    lam_u, lam_s = cover.lam_u, cover.lam_s
    n = len(pseudo.window)

    if pseudo.extension == PERIODIC:
        p = pseudo.period
        wu = 1.0 / (1.0 - lam_u ** (-p))
        ws = 1.0 / (1.0 - lam_s ** p)
        es, eu = [], []
        for k in range(n):
            acc = 0.0
            for i in range(1, p + 1):
                acc += (lam_s ** (i - 1)) * ds[(k - i) % p]
            es.append(-ws * acc)
            acc = 0.0
            for i in range(p):
                acc += (lam_u ** (-(i + 1))) * du[(k + i) % p]
            eu.append(wu * acc)
    else:
        es = [0.0] * n
        for k in range(n - 1):
            es[k + 1] = lam_s * es[k] - ds[k]
        eu = [0.0] * n
        for k in range(n - 2, -1, -1):
            eu[k] = (eu[k + 1] + du[k]) / lam_u

    traced, gaps = [], []
    for k in range(n):
        e = cover.combine(eu[k], es[k])
        y = (pseudo.window[k][0] + e[0], pseudo.window[k][1] + e[1])
        if isinstance(system, TorusAutomorphism):
            y = (y[0] % 1.0, y[1] % 1.0)
        traced.append(y)
        gaps.append(system.metric(y, pseudo.window[k]))

    return TracingResult(
        point=traced[0],
        error_bound=max(gaps),
        indices_checked=(pseudo.start_index, pseudo.end_index),
        traced_orbit=tuple(traced),
        gaps=tuple(gaps),
        guaranteed_bound=cover.tracing_coefficient() * pseudo.defect_bound,
        periodic=pseudo.extension == PERIODIC,
        period=pseudo.period,
    )


def _frac_pair(p):
    return (Fraction(p[0]), Fraction(p[1]))


def _wrap_half_frac(v):
    return (v + Fraction(1, 2)) % 1 - Fraction(1, 2)


def _trace_linear_exact(system, cover, pseudo):
    p = pseudo.period
    a = tuple(tuple(Fraction(v) for v in row) for row in cover.matrix)

    def mat_vec(m, v):
        return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])

    def mat_mul(m, q):
        return (
            (m[0][0] * q[0][0] + m[0][1] * q[1][0], m[0][0] * q[0][1] + m[0][1] * q[1][1]),
            (m[1][0] * q[0][0] + m[1][1] * q[1][0], m[1][0] * q[0][1] + m[1][1] * q[1][1]),
        )

    window = [_frac_pair(x) for x in pseudo.window]
    defects = []
    for k in range(p):
        fa = mat_vec(a, window[k])
        nxt = window[(k + 1) % p]
        d = (nxt[0] - fa[0], nxt[1] - fa[1])
        if isinstance(system, TorusAutomorphism):
            d = (_wrap_half_frac(d[0]), _wrap_half_frac(d[1]))
        defects.append(d)

    a_pow = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
    rhs = (Fraction(0), Fraction(0))
    # (I - A^p) e_0 = -(A^{p-1} d_0 + ... + A^0 d_{p-1})
    for k in range(p - 1, -1, -1):
        term = mat_vec(a_pow, defects[k])
        rhs = (rhs[0] - term[0], rhs[1] - term[1])
        a_pow = mat_mul(a, a_pow)
    m = ((1 - a_pow[0][0], -a_pow[0][1]), (-a_pow[1][0], 1 - a_pow[1][1]))
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if det == 0:
        raise ValueError("I - A^p is singular; the matrix is not a saddle.")
    e = ((m[1][1] * rhs[0] - m[0][1] * rhs[1]) / det,
         (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det)

    traced, gaps = [], []
    for k in range(p):
        y = (window[k][0] + e[0], window[k][1] + e[1])
        if isinstance(system, TorusAutomorphism):
            y = (y[0] % 1, y[1] % 1)
        traced.append(y)
        gaps.append(system.metric((float(y[0]), float(y[1])),
                                  (float(window[k][0]), float(window[k][1]))))
        fe = mat_vec(a, e)
        e = (fe[0] - defects[k][0], fe[1] - defects[k][1])

    return TracingResult(
        point=traced[0],
        error_bound=max(gaps),
        indices_checked=(pseudo.start_index, pseudo.end_index),
        traced_orbit=tuple(traced),
        gaps=tuple(gaps),
        guaranteed_bound=cover.tracing_coefficient() * pseudo.defect_bound,
        periodic=True,
        period=p,
    )


def trace_sft(system, pseudo):
    """Trace a shift pseudo-orbit by reading its diagonal symbols.

    With defect below 1/2, consecutive sequences agree at the origin after
    one shift, so y_j = (x^(j))_0 is an admissible word; the point spelling
    it (with the first window point's left tail and the last one's right
    tail) traces the window within twice the defect. Periodic windows yield
    the periodic word.
    """
    if not isinstance(system, ShiftOfFiniteType):
        raise TypeError("trace_sft needs a shift of finite type.")
    if pseudo.defect_bound >= 0.5:
        raise ValueError("Tracing by diagonal symbols needs defect below 1/2.")
    m = pseudo.start_index
    window = pseudo.window

    if pseudo.extension == PERIODIC:
        block = tuple(x.symbol_at(0) for x in window[:pseudo.period])
        try:
            y = system.periodic_point(block)
        except ValueError as err:
            raise ValueError(
                f"Diagonal word is inadmissible ({err}); the defect bound "
                "must have been violated."
            ) from None
        y = y.shifted(-m)  # align block position 0 with window index m
    else:
        big_m = m + len(window) - 1
        first = window[0].shifted(-m)
        last = window[-1].shifted(-big_m)
        lo = min(first.span_start, m)
        hi = max(last.span_end, big_m)
        word = []
        for i in range(lo, hi + 1):
            if i <= m:
                word.append(first.symbol_at(i))
            elif i >= big_m:
                word.append(last.symbol_at(i))
            else:
                word.append(window[i - m].symbol_at(0))
        left = _rotate_cycle(first.left, lo - first.span_start)
        right = _rotate_cycle(last.right, hi - last.span_end)
        try:
            y = system.validate_point(
                symbolic_point(left, tuple(word), right, lo))
        except ValueError as err:
            raise ValueError(
                f"Diagonal word is inadmissible ({err}); the defect bound "
                "must have been violated."
            ) from None

    traced, gaps = [], []
    z = y.shifted(m)
    for k in range(len(window)):
        traced.append(z)
        gaps.append(system.metric(z, window[k]))
        z = z.shifted(1)

    return TracingResult(
        point=traced[0],
        error_bound=max(gaps),
        indices_checked=(m, pseudo.end_index),
        traced_orbit=tuple(traced),
        gaps=tuple(gaps),
        guaranteed_bound=2.0 * pseudo.defect_bound,
        periodic=pseudo.extension == PERIODIC,
        period=pseudo.period,
    )


def trace_finite_bruteforce(system, pseudo, E):
    """Every point of a finite system, tested exhaustively as a tracer.

    The pseudo-orbit must be periodic; candidates are checked over
    lcm(window period, orbit period), which covers every integer index, so
    the returned tuple is exactly the set of E-tracing points.
    """
    if not isinstance(system, FiniteSystem):
        raise TypeError("Brute-force tracing needs a finite system.")
    if pseudo.extension != PERIODIC:
        raise ValueError("Brute-force tracing is defined for periodic windows.")
    p = pseudo.period
    tracers = []
    for z in system.points:
        q = system.orbit_period(z)
        span = math.lcm(p, q)
        w = z
        ok = True
        for i in range(span):
            if not E.accepts(w, pseudo.point_at(pseudo.start_index + i)):
                ok = False
                break
            w = system.forward(w)
        if ok:
            tracers.append(z)
    return tuple(tracers)


def trace_strips(system, pseudo):
    """A true shrinking-strip orbit tracing the pseudo-orbit.

    The base coordinate must advance by one per step; a defect below 1
    forces that, since distinct fibers are at least 1 apart. Fiber errors
    double while n < 0 and halve once n >= 0, so the tracer is anchored on
    the pseudo-orbit at the first index with n >= 0 (or the window's end if
    it never crosses): backward from the anchor errors shrink as
    (|e| + defect)/2, forward as |e|/2 + defect, giving sup gap < 2 * defect
    with no clamping. The traced window is a genuine orbit.
    """
    if not isinstance(system, StripFamily) or system.variant != "shrinking":
        raise TypeError("This tracer needs the shrinking strip family; the "
                        "unit strips have an invariant fiber coordinate and "
                        "no contraction to anchor on.")
    if pseudo.extension == PERIODIC:
        raise ValueError("Strip pseudo-orbits advance fibers and cannot close.")
    if pseudo.defect_bound >= 1.0:
        raise ValueError("A defect below 1 is needed to pin the fiber walk.")
    window = pseudo.window
    for a, b in zip(window, window[1:]):
        if b[0] != a[0] + 1:
            raise ValueError("Base coordinates must advance by one per step; "
                             "the defect bound must have been violated.")
    anchor = next((k for k, z in enumerate(window) if z[0] >= 0),
                  len(window) - 1)
    traced = [None] * len(window)
    traced[anchor] = window[anchor]
    for k in range(anchor + 1, len(window)):
        traced[k] = system.forward(traced[k - 1])
    for k in range(anchor - 1, -1, -1):
        traced[k] = system.backward(traced[k + 1])
    gaps = [system.metric(y, x) for y, x in zip(traced, window)]
    m = pseudo.start_index
    return TracingResult(
        point=traced[0],
        error_bound=max(gaps),
        indices_checked=(m, pseudo.end_index),
        traced_orbit=tuple(traced),
        gaps=tuple(gaps),
        guaranteed_bound=2.0 * pseudo.defect_bound,
    )


# ---------------------------------------------------------------------------
# uniqueness


@dataclass
class UniqueTracingResult:
    verdict: str  # "yes" | "no" | "undetermined"
    witness: object = None
    separations: tuple = ()


def _entourage_radius(E):
    if isinstance(E, MetricBall):
        return E.delta
    if isinstance(E, GaugeBall) and E.sup_bound is not None:
        return E.sup_bound
    raise TypeError("Uniqueness checking needs an entourage with a known radius.")


def _default_candidates(system, pseudo, E):
    r = _entourage_radius(E)
    if isinstance(system, FiniteSystem):
        return trace_finite_bruteforce(system, pseudo, E)
    if isinstance(system, ShiftOfFiniteType):
        y = trace_sft(system, pseudo).point
        depth = max(1, math.ceil(-math.log2(r)))
        other = system.window_point(y.window(-(depth + 1), depth + 1), -(depth + 1))
        return (y, other) if other != y else (y,)
    result = trace_linear_hyperbolic(system, pseudo)
    y = result.point
    cover = system.cover if isinstance(system, TorusAutomorphism) else system
    offsets = [cover.v_u, cover.v_s]
    out = [y]
    for v in offsets:
        cand = (y[0] + 0.5 * r * v[0], y[1] + 0.5 * r * v[1])
        if isinstance(system, TorusAutomorphism):
            cand = (cand[0] % 1.0, cand[1] % 1.0)
        out.append(cand)
    return tuple(out)


def unique_tracing_check(system, pseudo, E, horizon, candidates=None):
    """Decide whether two distinct tracing candidates can coexist.

    Soundness of each verdict:
      yes: every distinct candidate pair moved apart by at least twice E's
           radius at some |n| <= horizon. E's composition with itself sits
           inside the double-radius ball, so such a pair can never both
           trace one pseudo-orbit; only one candidate orbit survives.
      no:  some distinct pair returned to an exactly repeated joint state
           while staying within E of a common window point throughout, so it
           remains E-close forever: a proven pair of distinct tracers.
      undetermined: the horizon ran out before either proof appeared.
    """
    r = _entourage_radius(E)
    if candidates is None:
        candidates = _default_candidates(system, pseudo, E)
    candidates = list(dict.fromkeys(candidates))
    if len(candidates) < 2:
        return UniqueTracingResult(verdict="yes", separations=())

    separations = []
    verdict = "yes"
    witness = None
    for i in range(len(candidates)):
        for j in range(i + 1, len(candidates)):
            a, b = candidates[i], candidates[j]
            outcome, steps = _pair_outcome(system, a, b, E, r, horizon)
            separations.append(((a, b), outcome, steps))
            if outcome == "trapped":
                return UniqueTracingResult(verdict="no", witness=(a, b),
                                           separations=tuple(separations))
            if outcome == "undetermined":
                verdict = "undetermined"
                witness = (a, b)
    return UniqueTracingResult(verdict=verdict, witness=witness,
                               separations=tuple(separations))


def _pair_outcome(system, a, b, E, radius, horizon):
    """Evolve a pair both ways until one of three resolutions.

    separated: distance reached twice the radius, which is outside E's
    self-composition no matter what E looks like inside its ball.
    trapped: both directions hit an exactly repeated joint state while every
    visited state stayed inside E itself; the joint orbit is then periodic
    and remains inside E (hence inside E's composition) for every integer.
    Anything else within the horizon stays undetermined.
    """

    def scan(step):
        x, y = a, b
        states = {(x, y)}
        inside = E.accepts(x, y) and E.accepts(y, x)
        for n in range(1, horizon + 1):
            x, y = step(x), step(y)
            if system.metric(x, y) >= 2.0 * radius:
                return "separated", n, inside
            inside = inside and E.accepts(x, y) and E.accepts(y, x)
            if (x, y) in states:
                return "cycle", n, inside
            states.add((x, y))
        return "exhausted", horizon, inside

    fwd, n_fwd, in_fwd = scan(system.forward)
    if fwd == "separated":
        return "separated", n_fwd
    bwd, n_bwd, in_bwd = scan(system.backward)
    if bwd == "separated":
        return "separated", -n_bwd
    if fwd == "cycle" and bwd == "cycle" and in_fwd and in_bwd:
        return "trapped", 0
    return "undetermined", None


# ---------------------------------------------------------------------------
# file format and reports


def pseudo_orbit_to_text(system, pseudo, seed):
    """Header `system=... delta=... extension=... seed=...`, then one point
    per line in the system's point syntax."""
    lines = [
        f"system={system.name} delta={pseudo.defect_bound!r} "
        f"extension={pseudo.extension} seed={seed}"
    ]
    lines.extend(system.point_to_text(x) for x in pseudo.window)
    return "\n".join(lines) + "\n"


def pseudo_orbit_from_text(text, system):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("Empty pseudo-orbit file.")
    header = {}
    for part in lines[0].split():
        key, _, value = part.partition("=")
        header[key] = value
    if "system" not in header or "seed" not in header:
        raise ValueError("Pseudo-orbit header needs system= and seed= fields.")
    if header["system"] != system.name:
        raise ValueError(
            f"File is for system {header['system']!r}, not {system.name!r}."
        )
    window = tuple(system.point_from_text(ln) for ln in lines[1:])
    extension = header.get("extension", ORBIT_TAIL)
    pseudo = PseudoOrbit(
        window=window,
        extension=extension,
        defect_bound=float(header.get("delta", "0") or 0.0),
        period=len(window) if extension == PERIODIC else None,
    )
    return pseudo, header


def tracing_report(system, result):
    """Structured document for a tracing run, gaps in a CSV block."""
    rep = Report(
        system=system.name,
        point=system.point_to_text(result.point),
        error_bound=result.error_bound,
        guaranteed_bound=(
            "none" if result.guaranteed_bound is None else result.guaranteed_bound
        ),
        indices_checked=f"{result.indices_checked[0]}..{result.indices_checked[1]}",
        unique=result.unique,
        periodic=str(result.periodic).lower(),
    )
    lo = result.indices_checked[0]
    rows = [(lo + k, repr(g)) for k, g in enumerate(result.gaps)]
    rep.add_table("gaps", ("index", "gap"), rows)
    return rep
